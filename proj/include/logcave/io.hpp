#pragma once

#include "logcave/fit.hpp"
#include "logcave/simulation.hpp"
#include "logcave/solver.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace logcave {

inline constexpr std::string_view tool_version = "logcave 1.0.0";

//! Reads one number per line, or one column of a comma-separated file.
//!
//! A first non-blank line that does not parse as numbers is taken as a CSV
//! header when it contains a comma or a column was requested; otherwise it
//! is a parse error. `column` is a header name or a 1-based index; without
//! it the first field is used. Blank lines are skipped.
std::vector<double> ingest(const std::filesystem::path& path,
                           const std::optional<std::string>& column = std::nullopt);
std::vector<double> ingest(std::istream& in,
                           const std::optional<std::string>& column = std::nullopt);

//! Shortest text that parses back to the same double; "inf", "-inf", "nan"
//! for the non-finite values.
std::string format_double(double x);

//! FNV-1a over the bit patterns of the values, as 16 hex digits.
std::string digest_of(std::span<const double> values);

//! Serialized LogConcaveFit plus the diagnostics of the run that produced it.
struct FitArtifact
{
  std::vector<double> knots;
  std::vector<double> theta;
  std::vector<double> slopes;
  double log_likelihood = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  double kkt_residual = 0.0;
  std::string tool_version;
  std::string input_digest;
};

FitArtifact make_artifact(const FitResult& result, std::span<const double> raw_input);
LogConcaveFit fit_from_artifact(const FitArtifact& artifact);

//! JSON text, one array element per line.
std::string artifact_to_text(const FitArtifact& artifact);
//! Throws Error(bad_artifact) on malformed or inconsistent content.
FitArtifact artifact_from_text(std::string_view text);
void write_artifact(const FitArtifact& artifact, const std::filesystem::path& path);
FitArtifact read_artifact(const std::filesystem::path& path);

//! "min:max:count" (count evenly spaced points, ends included) or a comma
//! list of values. Throws Error(bad_grid).
std::vector<double> parse_grid(std::string_view text);

void write_eval_csv(std::ostream& out, const LogConcaveFit& fit, std::span<const double> grid);
void write_simulation_csv(std::ostream& out, const SimulationTable& table);
void write_values(std::ostream& out, std::span<const double> values);

} // namespace logcave
