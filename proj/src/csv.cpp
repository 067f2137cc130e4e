#include "vsa/csv.hpp"

#include "vsa/types.hpp"

#include <cmath>
#include <cstdio>

namespace vsa::csv {

std::string number(double value) {
  if (std::isnan(value)) return {};
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0.0) value = 0.0;  // drop the sign of negative zero
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", value);
  return buf;
}

Writer::Writer(const std::filesystem::path& path, const std::vector<std::string>& header)
    : out_(path, std::ios::binary | std::ios::trunc), columns_(header.size()) {
  if (!out_) throw Error("cannot write " + path.string());
  row(header);
}

void Writer::row(const std::vector<std::string>& fields) {
  if (fields.size() != columns_) throw ContractError("csv: row width does not match the header");
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out_ << ',';
    out_ << fields[i];
  }
  out_ << '\n';
  if (!out_) throw Error("csv: write failed");
}

}  // namespace vsa::csv
