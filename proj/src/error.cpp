#include "logcave/error.hpp"

namespace logcave {

const char*
to_string(ErrorKind kind)
{
  switch (kind) {
    case ErrorKind::too_few_points:
      return "TooFewPoints";
    case ErrorKind::non_finite:
      return "NonFinite";
    case ErrorKind::ties:
      return "Ties";
    case ErrorKind::length_mismatch:
      return "LengthMismatch";
    case ErrorKind::out_of_range:
      return "OutOfRange";
    case ErrorKind::non_positive_weight:
      return "NonPositiveWeight";
    case ErrorKind::degenerate_variance:
      return "DegenerateVariance";
    case ErrorKind::step_failure:
      return "StepFailure";
    case ErrorKind::infeasible_point:
      return "InfeasiblePoint";
    case ErrorKind::file_not_found:
      return "FileNotFound";
    case ErrorKind::parse_error:
      return "ParseError";
    case ErrorKind::empty_input:
      return "EmptyInput";
    case ErrorKind::bad_grid:
      return "BadGrid";
    case ErrorKind::bad_count:
      return "BadCount";
    case ErrorKind::bad_artifact:
      return "BadArtifact";
  }
  return "Unknown";
}

} // namespace logcave
