#pragma once

// Test-only reference computations, written independently of the library's
// code paths (brute-force enumeration, direct sums).

#include "vsa/types.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <set>
#include <vector>

namespace oracle {

inline vsa::CMatrixd random_complex(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  vsa::CMatrixd a(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) a(i, j) = {g(rng), g(rng)};
  return a;
}

inline vsa::CMatrixd random_hermitian(Eigen::Index n, std::uint64_t seed) {
  const vsa::CMatrixd b = random_complex(n, n, seed);
  return (b + b.adjoint()) / 2.0;
}

/// Every pairwise difference of a position list.
inline std::set<int> difference_set(const std::vector<int>& pos) {
  std::set<int> d;
  for (int a : pos)
    for (int b : pos) d.insert(a - b);
  return d;
}

/// Largest n such that every lag in [-n, n] is present.
inline int contiguous_extent(const std::set<int>& d) {
  int n = 0;
  while (d.count(n + 1) && d.count(-(n + 1))) ++n;
  return n;
}

/// Exact lag value of a sum of unit-modulus sources: sum_k p_k e^{j pi l psi_k}.
inline std::complex<double> lag_value(int lag, const std::vector<double>& psi, const std::vector<double>& power) {
  std::complex<double> s = 0.0;
  for (std::size_t k = 0; k < psi.size(); ++k) s += power[k] * std::polar(1.0, std::numbers::pi * lag * psi[k]);
  return s;
}

}  // namespace oracle
