#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dlcss {

// Invalid argument: bad coordinate, route too short, index out of range.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Malformed input file. `location` is a 1-based row number for CSV input
// and a 0-based feature index for GeoJSON input.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t location)
      : std::runtime_error(what), location_(location) {}

  std::size_t location() const noexcept { return location_; }

 private:
  std::size_t location_;
};

// Source and destination are not connected (or snap to the same node).
class NoRouteError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// File could not be opened, read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dlcss
