#pragma once

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

/// CSV (RFC 4180, full-precision scientific notation) and file helpers.
namespace growup::io {

using Cell = std::variant<double, long, std::string>;

class Csv {
 public:
  explicit Csv(std::vector<std::string> header);
  void row(const std::vector<Cell>& cells);
  const std::string& str() const { return text_; }
  std::size_t rows() const { return rows_; }

 private:
  std::size_t width_;
  std::size_t rows_ = 0;
  std::string text_;
};

/// %.17e, with nan/inf spelled "nan", "inf", "-inf".
std::string format_double(double x);
/// Quotes a field when it contains a comma, quote, CR or LF.
std::string quote_field(const std::string& s);

void write_file(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

}  // namespace growup::io
