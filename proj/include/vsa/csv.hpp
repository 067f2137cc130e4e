#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace vsa::csv {

/// Decimal with 10 significant digits; NaN renders as an empty field.
std::string number(double value);

/// Comma-separated rows with LF line endings.
class Writer {
 public:
  Writer(const std::filesystem::path& path, const std::vector<std::string>& header);

  void row(const std::vector<std::string>& fields);

 private:
  std::ofstream out_;
  std::size_t columns_;
};

}  // namespace vsa::csv
