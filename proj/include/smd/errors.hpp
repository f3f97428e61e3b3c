#ifndef SMD_ERRORS_HPP
#define SMD_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace smd {

// Invalid arguments, infeasible points, violated preconditions.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Requested operation is not defined for the given proxy or loss.
class UnsupportedError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Malformed command line or missing prerequisite (e.g. no trajectory log).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// An iterative solver failed to reach its tolerance.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input; line is 1-based, 0 when not tied to a line.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error(line == 0 ? what : what + " (line " + std::to_string(line) + ")"),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// A finite sample source ran out before the requested number of iterations.
class DataExhausted : public std::runtime_error {
 public:
  DataExhausted(const std::string& what, long iteration)
      : std::runtime_error(what), iteration_(iteration) {}
  long iteration() const noexcept { return iteration_; }

 private:
  long iteration_;
};

class FileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace smd

#endif  // SMD_ERRORS_HPP
