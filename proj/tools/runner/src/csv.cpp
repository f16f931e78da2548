#include "essh/runner/csv.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace essh::runner {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), res.ptr);
}

CsvBuilder::CsvBuilder(const std::vector<std::string>& header) { row(header); }

void CsvBuilder::append(std::string_view field, bool first) {
  if (!first) text_ += ',';
  text_ += field;
}

CsvBuilder& CsvBuilder::row(const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) append(fields[i], i == 0);
  text_ += '\n';
  return *this;
}

CsvBuilder& CsvBuilder::row(const std::vector<double>& values) {
  for (std::size_t i = 0; i < values.size(); ++i) append(format_double(values[i]), i == 0);
  text_ += '\n';
  return *this;
}

}  // namespace essh::runner
