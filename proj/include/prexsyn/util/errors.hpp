#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace prexsyn {

// Errors in user-supplied text (SMILES, patterns, queries, config files).
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " (at position " + std::to_string(position) +
                           ")"),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class ValenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid molecule/pattern/program structure.
class InvariantError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Domain-level failures such as infeasible queries (CLI exit code 3).
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// File I/O and format failures (CLI exit code 4).
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace prexsyn
