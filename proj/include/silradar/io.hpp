#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace silradar::io {

/// Lower-case hex SHA-256 of a byte string.
std::string sha256_hex(std::string_view bytes);

/// "%.6g"; the precision every CSV output uses.
std::string format_g6(double v);

/// Accumulates CSV text: header first, `\n` line endings, no quoting
/// (every field is numeric).
class CsvWriter {
 public:
  explicit CsvWriter(std::string_view header);
  void row(std::initializer_list<double> values);
  const std::string& text() const noexcept { return text_; }

 private:
  std::string text_;
};

/// Writes `bytes` to `path` (binary) and returns its SHA-256.
std::string write_file(const std::filesystem::path& path, std::string_view bytes);

}  // namespace silradar::io
