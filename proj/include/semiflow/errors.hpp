#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace semiflow {

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Shape, length, boundary, or norm-tag disagreement between grid quantities.
struct GeometryError : Error {
  using Error::Error;
};

// A computed value left the set of finite doubles.
struct NonFiniteError : Error {
  using Error::Error;
};

// An operation was called outside its stated preconditions.
struct PreconditionError : Error {
  using Error::Error;
};

// An iterative solver failed to reach its tolerance.
struct SolverError : Error {
  SolverError(const std::string& what, double residual_in = 0.0, int iterations_in = 0)
      : Error(what), residual(residual_in), iterations(iterations_in) {}
  double residual;
  int iterations;
};

// Scenario files: unknown keys, missing sections, illegal slot variables.
struct ConfigError : Error {
  using Error::Error;
};

// Expression evaluation outside a function's domain (ln of a nonpositive value, ...).
struct EvalError : Error {
  using Error::Error;
};

struct ParseError : Error {
  ParseError(std::size_t offset_in, std::vector<std::string> expected_in)
      : Error(format(offset_in, expected_in)),
        offset(offset_in),
        expected(std::move(expected_in)) {}

  std::size_t offset;
  std::vector<std::string> expected;

 private:
  static std::string format(std::size_t offset, const std::vector<std::string>& expected) {
    std::string msg = "syntax error at byte " + std::to_string(offset);
    if (!expected.empty()) {
      msg += ": expected ";
      for (std::size_t i = 0; i < expected.size(); ++i) {
        if (i > 0) msg += (i + 1 == expected.size()) ? " or " : ", ";
        msg += expected[i];
      }
    }
    return msg;
  }
};

}  // namespace semiflow
