#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace roadsim {

/// Base of every error raised by the library. Callers that only care about
/// "something in the pipeline failed" catch this.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MalformedRow : public Error {
 public:
  MalformedRow(const std::string& file, std::size_t line, const std::string& why)
      : Error(file + ":" + std::to_string(line) + ": " + why), file_(file), line_(line) {}
  const std::string& file() const noexcept { return file_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string file_;
  std::size_t line_;
};

class DanglingEdge : public Error {
 public:
  DanglingEdge(std::int64_t from, std::int64_t to)
      : Error("edge " + std::to_string(from) + "->" + std::to_string(to) +
              " references a missing node"),
        from_(from), to_(to) {}
  std::int64_t from() const noexcept { return from_; }
  std::int64_t to() const noexcept { return to_; }

 private:
  std::int64_t from_, to_;
};

class InvalidGraph : public Error {
 public:
  using Error::Error;
};

class EmptyGraph : public Error {
 public:
  EmptyGraph() : Error("graph has no nodes") {}
};

class UnknownRoadType : public Error {
 public:
  using Error::Error;
};

class NonPositiveInput : public Error {
 public:
  using Error::Error;
};

class NegativeVolume : public Error {
 public:
  explicit NegativeVolume(double v) : Error("negative volume " + std::to_string(v)) {}
};

class UnreachableDestination : public Error {
 public:
  UnreachableDestination(std::int64_t origin, std::int64_t dest)
      : Error("node " + std::to_string(dest) + " unreachable from node " +
              std::to_string(origin)),
        origin_(origin), dest_(dest) {}
  std::int64_t origin() const noexcept { return origin_; }
  std::int64_t dest() const noexcept { return dest_; }

 private:
  std::int64_t origin_, dest_;
};

class UnknownZone : public Error {
 public:
  explicit UnknownZone(std::int64_t id)
      : Error("unknown zone " + std::to_string(id)), id_(id) {}
  std::int64_t id() const noexcept { return id_; }

 private:
  std::int64_t id_;
};

class AtlasOverflow : public Error {
 public:
  using Error::Error;
};

/// Run configuration is invalid (bad key, missing input, missing seed).
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace roadsim
