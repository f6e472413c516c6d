#pragma once

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace roadsim::csv {

/// Line-oriented reader for the unquoted comma-separated files used by the
/// pipeline. Tracks 1-based line numbers for error reporting.
class Reader {
 public:
  explicit Reader(const std::filesystem::path& path);

  const std::string& file() const { return file_; }
  std::size_t line() const { return line_; }
  const std::vector<std::string>& header() const { return header_; }

  /// Checks that the header begins with `expected`; throws MalformedRow.
  void expect_header_prefix(const std::vector<std::string_view>& expected) const;

  /// Next non-empty row; false at end of file.
  bool next(std::vector<std::string>& fields);

  [[noreturn]] void fail(const std::string& why) const;

  double to_double(const std::string& s, std::string_view column) const;
  std::int64_t to_int(const std::string& s, std::string_view column) const;
  std::optional<double> to_optional_double(const std::string& s, std::string_view column) const;
  std::optional<std::int64_t> to_optional_int(const std::string& s, std::string_view column) const;

 private:
  std::ifstream in_;
  std::string file_;
  std::size_t line_ = 0;
  std::vector<std::string> header_;
};

std::vector<std::string> split(std::string_view line, char sep = ',');

/// Shortest representation that round-trips.
std::string format_double(double v);

/// Joins fields with commas and a trailing newline.
template <typename... Ts>
std::string row(const Ts&... fields);

namespace detail {
inline std::string field(const std::string& s) { return s; }
inline std::string field(std::string_view s) { return std::string(s); }
inline std::string field(const char* s) { return s; }
inline std::string field(double v) { return format_double(v); }
template <typename T>
  requires std::is_integral_v<T>
std::string field(T v) { return std::to_string(v); }
}  // namespace detail

template <typename... Ts>
std::string row(const Ts&... fields) {
  std::string out;
  ((out += detail::field(fields), out += ','), ...);
  if (!out.empty()) out.back() = '\n';
  return out;
}

/// Writes `contents` to `path`, creating parent directories.
void write_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace roadsim::csv
