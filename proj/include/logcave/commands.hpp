#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace logcave {

//! Process exit codes of the command-line tool.
enum ExitCode : int
{
  exit_success = 0,
  exit_usage = 1,
  exit_not_converged = 2,
};

inline constexpr std::uint64_t default_seed = 20070613;

//! Seed precedence: explicit flag, then LOGCAVE_SEED, then default_seed.
//! Throws Error(parse_error) if the environment value is not an integer.
std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag);

struct FitCommand
{
  std::filesystem::path input;
  std::optional<std::string> column;
  //! Empty writes to the output stream.
  std::filesystem::path output;
  double tolerance = 1e-8;
  std::size_t max_iterations = 1000;
  bool jitter_ties = false;
};

struct EvalCommand
{
  std::filesystem::path artifact;
  std::string grid;
  std::filesystem::path output;
};

struct SampleCommand
{
  std::filesystem::path artifact;
  //! Kept as text so negative or malformed counts surface as BadCount.
  std::string count;
  std::uint64_t seed = default_seed;
  std::filesystem::path output;
};

struct SimulateCommand
{
  std::string densities = "normal,double-exponential,gamma,beta,weibull";
  std::string sizes = "50,100,200,500,1000";
  std::string replications = "100";
  std::uint64_t seed = default_seed;
  unsigned threads = 0;
  std::filesystem::path output;
};

//! Each command throws logcave::Error for bad input and returns an ExitCode
//! otherwise. `out` receives the result when no output path is set.
int run_fit(const FitCommand& cmd, std::ostream& out);
int run_eval(const EvalCommand& cmd, std::ostream& out);
int run_sample(const SampleCommand& cmd, std::ostream& out);
int run_simulate(const SimulateCommand& cmd, std::ostream& out);

} // namespace logcave
