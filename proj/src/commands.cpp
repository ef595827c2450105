#include "logcave/commands.hpp"

#include "logcave/error.hpp"
#include "logcave/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string_view>

namespace logcave {

namespace {

std::optional<std::uint64_t>
parse_unsigned(std::string_view text)
{
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t'))
    text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t'))
    text.remove_suffix(1);
  std::uint64_t value = 0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || end != text.data() + text.size())
    return std::nullopt;
  return value;
}

std::vector<std::string_view>
split_list(std::string_view text)
{
  std::vector<std::string_view> items;
  std::size_t pos = 0;
  while (true) {
    auto comma = text.find(',', pos);
    items.push_back(text.substr(pos, comma == std::string_view::npos ? comma : comma - pos));
    if (comma == std::string_view::npos)
      break;
    pos = comma + 1;
  }
  return items;
}

// Writes the whole text to the file, or to `out` for an empty path.
void
emit(const std::filesystem::path& path, const std::string& text, std::ostream& out)
{
  if (path.empty()) {
    out << text;
    out.flush();
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file)
    throw Error(ErrorKind::file_not_found, "cannot write " + path.string());
  file << text;
}

} // namespace

std::uint64_t
resolve_seed(const std::optional<std::uint64_t>& flag)
{
  if (flag)
    return *flag;
  if (const char* env = std::getenv("LOGCAVE_SEED")) {
    auto value = parse_unsigned(env);
    if (!value)
      throw Error(ErrorKind::parse_error,
                  std::string("LOGCAVE_SEED is not a nonnegative integer: '") + env + "'");
    return *value;
  }
  return default_seed;
}

int
run_fit(const FitCommand& cmd, std::ostream& out)
{
  if (!(cmd.tolerance > 0.0))
    throw Error(ErrorKind::out_of_range, "tolerance must be positive");
  if (cmd.max_iterations == 0)
    throw Error(ErrorKind::bad_count, "max-iter must be positive");
  std::vector<double> raw = ingest(cmd.input, cmd.column);
  SortedSample sample = SortedSample::from_raw(
    raw, cmd.jitter_ties ? TieHandling::jitter : TieHandling::reject);

  IcmConfig config;
  config.phi_tolerance = cmd.tolerance;
  config.max_iterations = cmd.max_iterations;
  config.newton_steps = std::min(config.newton_steps, cmd.max_iterations);
  FitResult result = fit(sample, config);

  FitArtifact artifact = make_artifact(result, raw);
  emit(cmd.output, artifact_to_text(artifact), out);
  return artifact.converged ? exit_success : exit_not_converged;
}

int
run_eval(const EvalCommand& cmd, std::ostream& out)
{
  std::vector<double> grid = parse_grid(cmd.grid);
  LogConcaveFit fit = fit_from_artifact(read_artifact(cmd.artifact));
  std::ostringstream text;
  write_eval_csv(text, fit, grid);
  emit(cmd.output, text.str(), out);
  return exit_success;
}

int
run_sample(const SampleCommand& cmd, std::ostream& out)
{
  auto count = parse_unsigned(cmd.count);
  if (!count)
    throw Error(ErrorKind::bad_count,
                "sample count must be a nonnegative integer: '" + cmd.count + "'");
  LogConcaveFit fit = fit_from_artifact(read_artifact(cmd.artifact));
  Rng rng(cmd.seed);
  std::ostringstream text;
  write_values(text, fit.sample_from(rng, *count));
  emit(cmd.output, text.str(), out);
  return exit_success;
}

int
run_simulate(const SimulateCommand& cmd, std::ostream& out)
{
  SimulationSpec spec;
  for (auto name : split_list(cmd.densities))
    spec.densities.push_back(parse_density(name));
  for (auto item : split_list(cmd.sizes)) {
    auto n = parse_unsigned(item);
    if (!n || *n < 2)
      throw Error(ErrorKind::bad_count,
                  "sample sizes must be integers >= 2: '" + std::string(item) + "'");
    spec.sizes.push_back(static_cast<std::size_t>(*n));
  }
  auto m = parse_unsigned(cmd.replications);
  if (!m || *m < 1)
    throw Error(ErrorKind::bad_count,
                "replications must be a positive integer: '" + cmd.replications + "'");
  spec.replications = static_cast<std::size_t>(*m);
  spec.master_seed = cmd.seed;
  spec.threads = cmd.threads;

  check_reference_densities();
  SimulationTable table = run_monte_carlo(spec);
  std::ostringstream text;
  write_simulation_csv(text, table);
  emit(cmd.output, text.str(), out);
  return exit_success;
}

} // namespace logcave
