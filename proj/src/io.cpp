#include "logcave/io.hpp"

#include "logcave/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace logcave {

namespace {

std::string_view
trim(std::string_view s)
{
  constexpr std::string_view space = " \t\r\n";
  auto first = s.find_first_not_of(space);
  if (first == std::string_view::npos)
    return {};
  auto last = s.find_last_not_of(space);
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view>
split_fields(std::string_view line)
{
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (true) {
    auto comma = line.find(',', pos);
    fields.push_back(trim(line.substr(pos, comma == std::string_view::npos ? comma : comma - pos)));
    if (comma == std::string_view::npos)
      break;
    pos = comma + 1;
  }
  return fields;
}

std::optional<double>
parse_number(std::string_view token)
{
  if (!token.empty() && token.front() == '+')
    token.remove_prefix(1);
  if (token.empty())
    return std::nullopt;
  double value = 0.0;
  auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || end != token.data() + token.size())
    return std::nullopt;
  return value;
}

std::optional<std::size_t>
parse_index(std::string_view token)
{
  std::size_t value = 0;
  auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || end != token.data() + token.size() || value == 0)
    return std::nullopt;
  return value;
}

bool
all_numeric(const std::vector<std::string_view>& fields)
{
  return std::all_of(fields.begin(), fields.end(),
                     [](std::string_view f) { return parse_number(f).has_value(); });
}

} // namespace

std::vector<double>
ingest(std::istream& in, const std::optional<std::string>& column)
{
  std::vector<double> values;
  std::optional<std::size_t> field;
  bool first = true;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view text = trim(line);
    if (text.empty())
      continue;
    auto fields = split_fields(text);

    if (first) {
      first = false;
      bool header = !all_numeric(fields) &&
                    (fields.size() > 1 || column.has_value());
      if (column) {
        if (header) {
          auto it = std::find(fields.begin(), fields.end(), std::string_view(*column));
          if (it != fields.end())
            field = static_cast<std::size_t>(it - fields.begin());
        }
        if (!field) {
          auto index = parse_index(*column);
          if (!index)
            throw Error(ErrorKind::parse_error,
                        "no column named '" + *column + "'", line_no);
          field = *index - 1;
        }
      } else {
        field = 0;
      }
      if (header)
        continue;
    }

    if (*field >= fields.size())
      throw Error(ErrorKind::parse_error,
                  "line " + std::to_string(line_no) + " has no column " +
                    std::to_string(*field + 1),
                  line_no);
    auto value = parse_number(fields[*field]);
    if (!value)
      throw Error(ErrorKind::parse_error,
                  "line " + std::to_string(line_no) + ": not a number: '" +
                    std::string(fields[*field]) + "'",
                  line_no);
    values.push_back(*value);
  }
  if (values.empty())
    throw Error(ErrorKind::empty_input, "input contains no values");
  return values;
}

std::vector<double>
ingest(const std::filesystem::path& path, const std::optional<std::string>& column)
{
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorKind::file_not_found, "cannot open " + path.string());
  return ingest(in, column);
}

std::string
format_double(double x)
{
  if (std::isnan(x))
    return "nan";
  if (std::isinf(x))
    return x > 0 ? "inf" : "-inf";
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  (void)ec;
  return std::string(buf, end);
}

std::string
digest_of(std::span<const double> values)
{
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (double v : values) {
    auto bits = std::bit_cast<std::uint64_t>(v);
    for (int byte = 0; byte < 8; ++byte) {
      h ^= (bits >> (8 * byte)) & 0xffu;
      h *= 0x100000001b3ull;
    }
  }
  char buf[17];
  auto [end, ec] = std::to_chars(buf, buf + 16, h, 16);
  (void)ec;
  std::string hex(buf, end);
  return std::string(16 - hex.size(), '0') + hex;
}

FitArtifact
make_artifact(const FitResult& result, std::span<const double> raw_input)
{
  FitArtifact a;
  const auto& knots = result.fit.sample().knots();
  a.knots.assign(knots.begin(), knots.end());
  auto theta = result.fit.theta();
  a.theta.assign(theta.begin(), theta.end());
  a.slopes = result.fit.omega().slopes;
  a.log_likelihood = result.fit.log_likelihood();
  a.iterations = result.report.iterations;
  a.converged = result.report.converged;
  a.kkt_residual = result.report.kkt_residual;
  a.tool_version = std::string(tool_version);
  a.input_digest = digest_of(raw_input);
  return a;
}

LogConcaveFit
fit_from_artifact(const FitArtifact& artifact)
{
  return LogConcaveFit(SortedSample::from_sorted(artifact.knots), ThetaVector{ artifact.theta });
}

std::string
artifact_to_text(const FitArtifact& a)
{
  nlohmann::ordered_json j;
  j["tool_version"] = a.tool_version;
  j["input_digest"] = a.input_digest;
  j["n"] = a.knots.size();
  j["converged"] = a.converged;
  j["iterations"] = a.iterations;
  j["kkt_residual"] = a.kkt_residual;
  j["log_likelihood"] = a.log_likelihood;
  j["knots"] = a.knots;
  j["theta"] = a.theta;
  j["slopes"] = a.slopes;
  return j.dump(2) + "\n";
}

FitArtifact
artifact_from_text(std::string_view text)
{
  FitArtifact a;
  try {
    auto j = nlohmann::json::parse(text);
    a.tool_version = j.at("tool_version").get<std::string>();
    a.input_digest = j.at("input_digest").get<std::string>();
    a.converged = j.at("converged").get<bool>();
    a.iterations = j.at("iterations").get<std::size_t>();
    a.kkt_residual = j.at("kkt_residual").get<double>();
    a.log_likelihood = j.at("log_likelihood").get<double>();
    a.knots = j.at("knots").get<std::vector<double>>();
    a.theta = j.at("theta").get<std::vector<double>>();
    a.slopes = j.at("slopes").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::bad_artifact, std::string("malformed fit artifact: ") + e.what());
  }
  if (a.knots.size() < 2 || a.theta.size() != a.knots.size() ||
      a.slopes.size() + 1 != a.knots.size())
    throw Error(ErrorKind::bad_artifact, "fit artifact arrays have inconsistent lengths");
  for (double t : a.theta) {
    if (!std::isfinite(t))
      throw Error(ErrorKind::bad_artifact, "fit artifact has a non-finite theta");
  }
  try {
    (void)SortedSample::from_sorted(a.knots);
  } catch (const Error& e) {
    throw Error(ErrorKind::bad_artifact, std::string("fit artifact knots: ") + e.what());
  }
  return a;
}

void
write_artifact(const FitArtifact& artifact, const std::filesystem::path& path)
{
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw Error(ErrorKind::file_not_found, "cannot write " + path.string());
  out << artifact_to_text(artifact);
}

FitArtifact
read_artifact(const std::filesystem::path& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(ErrorKind::file_not_found, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return artifact_from_text(buf.str());
}

std::vector<double>
parse_grid(std::string_view text)
{
  text = trim(text);
  if (text.empty())
    throw Error(ErrorKind::bad_grid, "empty grid");
  std::vector<double> grid;

  if (text.find(':') != std::string_view::npos) {
    std::vector<std::string_view> parts;
    std::size_t pos = 0;
    while (true) {
      auto colon = text.find(':', pos);
      parts.push_back(trim(text.substr(pos, colon == std::string_view::npos ? colon : colon - pos)));
      if (colon == std::string_view::npos)
        break;
      pos = colon + 1;
    }
    if (parts.size() != 3)
      throw Error(ErrorKind::bad_grid, "grid must be min:max:count");
    auto lo = parse_number(parts[0]);
    auto hi = parse_number(parts[1]);
    std::size_t count = 0;
    auto [end, ec] = std::from_chars(parts[2].data(), parts[2].data() + parts[2].size(), count);
    if (!lo || !hi || !std::isfinite(*lo) || !std::isfinite(*hi))
      throw Error(ErrorKind::bad_grid, "grid bounds must be finite numbers");
    if (ec != std::errc{} || end != parts[2].data() + parts[2].size() || count < 1)
      throw Error(ErrorKind::bad_grid, "grid count must be a positive integer");
    if (*lo > *hi)
      throw Error(ErrorKind::bad_grid, "grid min exceeds max");
    grid.reserve(count);
    if (count == 1) {
      grid.push_back(*lo);
    } else {
      double step = (*hi - *lo) / static_cast<double>(count - 1);
      for (std::size_t i = 0; i + 1 < count; ++i)
        grid.push_back(*lo + static_cast<double>(i) * step);
      grid.push_back(*hi);
    }
    return grid;
  }

  for (auto field : split_fields(text)) {
    auto v = parse_number(field);
    if (!v || !std::isfinite(*v))
      throw Error(ErrorKind::bad_grid, "grid value is not a finite number: '" + std::string(field) + "'");
    grid.push_back(*v);
  }
  return grid;
}

void
write_eval_csv(std::ostream& out, const LogConcaveFit& fit, std::span<const double> grid)
{
  out << "x,pdf,log_pdf,cdf\n";
  for (double x : grid) {
    out << format_double(x) << ',' << format_double(fit.density_at(x)) << ','
        << format_double(fit.log_density_at(x)) << ',' << format_double(fit.cdf_at(x)) << '\n';
  }
}

void
write_simulation_csv(std::ostream& out, const SimulationTable& table)
{
  out << "density,n,M,mean_hellinger,sd_hellinger,failures\n";
  for (const auto& row : table.rows) {
    out << row.density.name() << ',' << row.n << ',' << row.replications << ','
        << format_double(row.mean_hellinger) << ',' << format_double(row.sd_hellinger) << ','
        << row.failures << '\n';
  }
}

void
write_values(std::ostream& out, std::span<const double> values)
{
  for (double v : values)
    out << format_double(v) << '\n';
}

} // namespace logcave
