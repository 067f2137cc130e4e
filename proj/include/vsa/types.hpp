#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace vsa {

template <typename Real>
using Complex = std::complex<Real>;

template <typename Real>
using CMatrix = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Real>
using CVector = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, 1>;

template <typename Real>
using RVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

using CMatrixd = CMatrix<double>;
using CVectord = CVector<double>;
using RVectord = RVector<double>;

// Error hierarchy. Every library failure is a vsa::Error so callers (the
// Monte Carlo harness in particular) can catch one type.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ContractError : Error {
  using Error::Error;
};

struct GeometryError : Error {
  using Error::Error;
};

struct LagError : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

enum class Stage { smoothing, subspace, detection, conditioning, pairing, recovery };

inline const char* to_string(Stage s) {
  switch (s) {
    case Stage::smoothing: return "smoothing";
    case Stage::subspace: return "subspace";
    case Stage::detection: return "detection";
    case Stage::conditioning: return "conditioning";
    case Stage::pairing: return "pairing";
    case Stage::recovery: return "recovery";
  }
  return "unknown";
}

// Estimation failure tagged with the pipeline stage that raised it.
struct EstimationError : Error {
  EstimationError(Stage stage, const std::string& what)
      : Error(std::string(to_string(stage)) + ": " + what), stage_(stage) {}
  Stage stage() const noexcept { return stage_; }

 private:
  Stage stage_;
};

enum class Portion { U, V };

}  // namespace vsa
