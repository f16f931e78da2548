#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace essh::runner {

/// Shortest decimal text that parses back to exactly `x`. Non-finite values
/// print as nan, inf and -inf.
std::string format_double(double x);

/// Row-at-a-time CSV text builder. Fields are written verbatim; callers only
/// pass numbers and identifiers.
class CsvBuilder {
 public:
  explicit CsvBuilder(const std::vector<std::string>& header);
  CsvBuilder() = default;

  CsvBuilder& row(const std::vector<std::string>& fields);
  CsvBuilder& row(const std::vector<double>& values);

  const std::string& text() const noexcept { return text_; }

 private:
  void append(std::string_view field, bool first);
  std::string text_;
};

}  // namespace essh::runner
