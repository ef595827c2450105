#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace logcave {

enum class ErrorKind
{
  too_few_points,
  non_finite,
  ties,
  length_mismatch,
  out_of_range,
  non_positive_weight,
  degenerate_variance,
  step_failure,
  infeasible_point,
  file_not_found,
  parse_error,
  empty_input,
  bad_grid,
  bad_count,
  bad_artifact,
};

const char* to_string(ErrorKind kind);

//! Single exception type for the library; `kind()` tells callers what went
//! wrong, `line()` is set for parse errors (1-based, 0 otherwise).
class Error : public std::runtime_error
{
public:
  Error(ErrorKind kind, const std::string& what, std::size_t line = 0)
    : std::runtime_error(what)
    , kind_(kind)
    , line_(line)
  {}

  ErrorKind kind() const noexcept { return kind_; }
  std::size_t line() const noexcept { return line_; }

private:
  ErrorKind kind_;
  std::size_t line_;
};

} // namespace logcave
