#include "roadsim/csv.hpp"

#include <array>
#include <cmath>

#include "roadsim/error.hpp"

namespace roadsim::csv {

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.emplace_back(line.substr(start));
      return out;
    }
    out.emplace_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

Reader::Reader(const std::filesystem::path& path) : in_(path), file_(path.string()) {
  if (!in_) throw Error("cannot open " + file_);
  std::string line;
  while (std::getline(in_, line)) {
    ++line_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    header_ = split(line);
    return;
  }
  fail("missing header");
}

void Reader::expect_header_prefix(const std::vector<std::string_view>& expected) const {
  bool ok = header_.size() >= expected.size();
  for (std::size_t i = 0; ok && i < expected.size(); ++i) ok = header_[i] == expected[i];
  if (!ok) {
    std::string want;
    for (auto e : expected) (want += e) += ',';
    want.pop_back();
    throw MalformedRow(file_, 1, "header must start with `" + want + "`");
  }
}

bool Reader::next(std::vector<std::string>& fields) {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    fields = split(line);
    return true;
  }
  return false;
}

void Reader::fail(const std::string& why) const { throw MalformedRow(file_, line_, why); }

double Reader::to_double(const std::string& s, std::string_view column) const {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, v);
  if (res.ec != std::errc{} || res.ptr != end || !std::isfinite(v))
    fail("bad number `" + s + "` in column " + std::string(column));
  return v;
}

std::int64_t Reader::to_int(const std::string& s, std::string_view column) const {
  std::int64_t v = 0;
  const auto* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, v);
  if (res.ec != std::errc{} || res.ptr != end)
    fail("bad integer `" + s + "` in column " + std::string(column));
  return v;
}

std::optional<double> Reader::to_optional_double(const std::string& s,
                                                 std::string_view column) const {
  if (s.empty()) return std::nullopt;
  return to_double(s, column);
}

std::optional<std::int64_t> Reader::to_optional_int(const std::string& s,
                                                    std::string_view column) const {
  if (s.empty()) return std::nullopt;
  return to_int(s, column);
}

std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << contents;
  if (!out) throw Error("failed writing " + path.string());
}

}  // namespace roadsim::csv
