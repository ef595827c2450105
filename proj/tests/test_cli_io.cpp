#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "logcave/commands.hpp"
#include "logcave/error.hpp"
#include "logcave/io.hpp"
#include "logcave/solver.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <string>

using namespace logcave;
namespace fs = std::filesystem;

namespace {

struct TempDir
{
  fs::path path;
  TempDir()
  {
    path = fs::temp_directory_path() /
           ("logcave_cli_io_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  fs::path file(const std::string& name, const std::string& content) const
  {
    fs::path p = path / name;
    std::ofstream(p, std::ios::binary) << content;
    return p;
  }
};

std::string
slurp(const fs::path& p)
{
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

ErrorKind
kind_of(auto&& f)
{
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no logcave::Error thrown");
  return ErrorKind::bad_artifact;
}

std::size_t
line_of(auto&& f)
{
  try {
    f();
  } catch (const Error& e) {
    return e.line();
  }
  return 0;
}

int
cli(const std::string& args)
{
  int status = std::system((std::string("\"") + LOGCAVE_CLI + "\" " + args).c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::vector<std::vector<std::string>>
csv_rows(const std::string& text)
{
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> fields;
    std::istringstream l(line);
    std::string f;
    while (std::getline(l, f, ','))
      fields.push_back(f);
    rows.push_back(fields);
  }
  return rows;
}

std::string
normal_sample_text(std::size_t n, unsigned seed)
{
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> z;
  std::string s;
  for (std::size_t i = 0; i < n; ++i)
    s += format_double(z(gen)) + "\n";
  return s;
}

} // namespace

TEST_CASE("ingest one number per line")
{
  std::istringstream in("1\n2\n3\n");
  CHECK(ingest(in) == std::vector<double>{ 1, 2, 3 });
  std::istringstream blanks("\n 4\n\n-5.5e1\n  \n");
  CHECK(ingest(blanks) == std::vector<double>{ 4, -55 });
}

TEST_CASE("ingest a CSV column")
{
  std::string text = "v,r\n55.8,14.5\n42.9,20.8\n";
  std::istringstream by_name(text);
  CHECK(ingest(by_name, "v") == std::vector<double>{ 55.8, 42.9 });
  std::istringstream by_index(text);
  CHECK(ingest(by_index, "2") == std::vector<double>{ 14.5, 20.8 });
  std::istringstream first(text);
  CHECK(ingest(first) == std::vector<double>{ 55.8, 42.9 });
  std::istringstream missing(text);
  CHECK(kind_of([&] { ingest(missing, "w"); }) == ErrorKind::parse_error);
}

TEST_CASE("ingest errors")
{
  std::istringstream bad("1\nabc\n3\n");
  CHECK(line_of([&] { ingest(bad); }) == 2);
  std::istringstream bad2("1\nabc\n3\n");
  CHECK(kind_of([&] { ingest(bad2); }) == ErrorKind::parse_error);
  std::istringstream empty("\n\n");
  CHECK(kind_of([&] { ingest(empty); }) == ErrorKind::empty_input);
  CHECK(kind_of([] { ingest(fs::path("/nonexistent/logcave/input.txt")); }) ==
        ErrorKind::file_not_found);
  std::istringstream csv_bad("v,r\n1,2\n3,x\n");
  CHECK(line_of([&] { ingest(csv_bad, "r"); }) == 3);
}

TEST_CASE("shortest float formatting round-trips")
{
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_double(std::nan("")) == "nan");
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 2000; ++i) {
    double x = u(gen) * std::pow(10.0, static_cast<int>(i % 40) - 20);
    CHECK(std::stod(format_double(x)) == x);
  }
}

TEST_CASE("input digest tracks values")
{
  std::vector<double> a{ 1.0, 2.0 }, b{ 1.0, 2.0000000000000004 };
  CHECK(digest_of(a) == digest_of(a));
  CHECK(digest_of(a) != digest_of(b));
  CHECK(digest_of(a).size() == 16);
}

TEST_CASE("artifact round trip is exact at the knots")
{
  std::istringstream in(normal_sample_text(120, 3));
  std::vector<double> raw = ingest(in);
  FitResult r = fit(SortedSample::from_raw(raw));
  FitArtifact art = make_artifact(r, raw);
  std::string text = artifact_to_text(art);
  FitArtifact back = artifact_from_text(text);
  CHECK(artifact_to_text(back) == text);
  CHECK(back.knots == art.knots);
  CHECK(back.theta == art.theta);
  CHECK(back.slopes == art.slopes);
  CHECK(back.converged == r.report.converged);
  CHECK(back.iterations == r.report.iterations);
  CHECK(back.tool_version == tool_version);
  CHECK(back.input_digest == digest_of(raw));

  LogConcaveFit g = fit_from_artifact(back);
  for (double x : r.fit.sample().knots()) {
    CHECK(g.density_at(x) == r.fit.density_at(x));
    CHECK(g.log_density_at(x) == r.fit.log_density_at(x));
    CHECK(g.cdf_at(x) == r.fit.cdf_at(x));
  }
}

TEST_CASE("malformed artifacts are rejected")
{
  CHECK(kind_of([] { artifact_from_text("not json"); }) == ErrorKind::bad_artifact);
  CHECK(kind_of([] { artifact_from_text("{}"); }) == ErrorKind::bad_artifact);
  FitResult r = fit(SortedSample::from_sorted({ 0.0, 1.0 }));
  std::vector<double> raw{ 0.0, 1.0 };
  FitArtifact art = make_artifact(r, raw);
  art.theta.push_back(0.0);
  CHECK(kind_of([&] { artifact_from_text(artifact_to_text(art)); }) == ErrorKind::bad_artifact);
}

TEST_CASE("grid parsing")
{
  CHECK(parse_grid("0:1:3") == std::vector<double>{ 0.0, 0.5, 1.0 });
  CHECK(parse_grid("2:2:1") == std::vector<double>{ 2.0 });
  CHECK(parse_grid("-1,0.5,3") == std::vector<double>{ -1.0, 0.5, 3.0 });
  auto g = parse_grid("-3:3:121");
  CHECK(g.size() == 121);
  CHECK(g.front() == -3.0);
  CHECK(g.back() == 3.0);
  for (const char* bad : { "0:1:0", "1:0:3", "a:b:c", "", "0:1", "1,,2", "0:1:-2" })
    CHECK(kind_of([&] { parse_grid(bad); }) == ErrorKind::bad_grid);
}

TEST_CASE("eval on the uniform fit")
{
  TempDir dir;
  fs::path data = dir.file("two.txt", "0\n1\n");
  fs::path art = dir.path / "fit.json";
  CHECK(run_fit(FitCommand{ .input = data, .output = art }, std::cout) == exit_success);
  FitArtifact a = read_artifact(art);
  CHECK(a.theta == std::vector<double>{ 0.0, 0.0 });

  std::ostringstream out;
  run_eval(EvalCommand{ .artifact = art, .grid = "0:1:3" }, out);
  auto rows = csv_rows(out.str());
  REQUIRE(rows.size() == 4);
  CHECK(rows[0] == std::vector<std::string>{ "x", "pdf", "log_pdf", "cdf" });
  CHECK(rows[1] == std::vector<std::string>{ "0", "1", "0", "0" });
  CHECK(rows[2] == std::vector<std::string>{ "0.5", "1", "0", "0.5" });
  CHECK(rows[3] == std::vector<std::string>{ "1", "1", "0", "1" });

  std::ostringstream outside;
  run_eval(EvalCommand{ .artifact = art, .grid = "-1,2" }, outside);
  rows = csv_rows(outside.str());
  REQUIRE(rows.size() == 3);
  CHECK(rows[1] == std::vector<std::string>{ "-1", "0", "-inf", "0" });
  CHECK(rows[2] == std::vector<std::string>{ "2", "0", "-inf", "1" });
}

TEST_CASE("eval cdf column is nondecreasing")
{
  TempDir dir;
  fs::path data = dir.file("g.txt", normal_sample_text(200, 8));
  fs::path art = dir.path / "fit.json";
  run_fit(FitCommand{ .input = data, .output = art }, std::cout);
  std::ostringstream out;
  run_eval(EvalCommand{ .artifact = art, .grid = "-5:5:2001" }, out);
  auto rows = csv_rows(out.str());
  REQUIRE(rows.size() == 2002);
  double prev = -1.0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    double c = std::stod(rows[i][3]);
    CHECK(c >= prev);
    CHECK(c >= 0.0);
    CHECK(c <= 1.0);
    prev = c;
  }
}

TEST_CASE("sample command")
{
  TempDir dir;
  fs::path data = dir.file("g.txt", normal_sample_text(100, 9));
  fs::path art = dir.path / "fit.json";
  run_fit(FitCommand{ .input = data, .output = art }, std::cout);
  FitArtifact a = read_artifact(art);

  std::ostringstream none;
  run_sample(SampleCommand{ .artifact = art, .count = "0" }, none);
  CHECK(none.str().empty());

  std::ostringstream first, second, other;
  run_sample(SampleCommand{ .artifact = art, .count = "500", .seed = 4 }, first);
  run_sample(SampleCommand{ .artifact = art, .count = "500", .seed = 4 }, second);
  run_sample(SampleCommand{ .artifact = art, .count = "500", .seed = 5 }, other);
  CHECK(first.str() == second.str());
  CHECK(first.str() != other.str());
  std::istringstream in(first.str());
  auto xs = ingest(in);
  CHECK(xs.size() == 500);
  for (double x : xs) {
    CHECK(x >= a.knots.front());
    CHECK(x <= a.knots.back());
  }

  for (const char* bad : { "-1", "x", "1.5", "" }) {
    std::ostringstream sink;
    CHECK(kind_of([&] { run_sample(SampleCommand{ .artifact = art, .count = bad }, sink); }) ==
          ErrorKind::bad_count);
  }
}

TEST_CASE("simulate command rows and determinism")
{
  SimulateCommand cmd{ .densities = "normal,gamma", .sizes = "100,50", .replications = "2",
                       .seed = 7 };
  std::ostringstream a, b;
  run_simulate(cmd, a);
  run_simulate(cmd, b);
  CHECK(a.str() == b.str());
  auto rows = csv_rows(a.str());
  REQUIRE(rows.size() == 5);
  CHECK(rows[0] == std::vector<std::string>{ "density", "n", "M", "mean_hellinger",
                                             "sd_hellinger", "failures" });
  CHECK(rows[1][0] == "normal");
  CHECK(rows[1][1] == "50");
  CHECK(rows[2][0] == "normal");
  CHECK(rows[2][1] == "100");
  CHECK(rows[3][0] == "gamma");
  CHECK(rows[3][1] == "50");
  CHECK(rows[4][0] == "gamma");
  CHECK(rows[4][1] == "100");
  for (std::size_t i = 1; i < rows.size(); ++i)
    CHECK(rows[i][2] == "2");

  std::ostringstream sink;
  CHECK(kind_of([&] { run_simulate(SimulateCommand{ .densities = "cauchy" }, sink); }) ==
        ErrorKind::parse_error);
  CHECK(kind_of([&] { run_simulate(SimulateCommand{ .sizes = "1" }, sink); }) ==
        ErrorKind::bad_count);
  CHECK(kind_of([&] { run_simulate(SimulateCommand{ .replications = "0" }, sink); }) ==
        ErrorKind::bad_count);
}

TEST_CASE("seed resolution")
{
  ::unsetenv("LOGCAVE_SEED");
  CHECK(resolve_seed(std::nullopt) == default_seed);
  CHECK(resolve_seed(42) == 42);
  ::setenv("LOGCAVE_SEED", "123", 1);
  CHECK(resolve_seed(std::nullopt) == 123);
  CHECK(resolve_seed(42) == 42);
  ::setenv("LOGCAVE_SEED", "abc", 1);
  CHECK(kind_of([] { resolve_seed(std::nullopt); }) == ErrorKind::parse_error);
  ::unsetenv("LOGCAVE_SEED");
}

TEST_CASE("command-line exit codes and determinism")
{
  TempDir dir;
  std::string d = dir.path.string();
  dir.file("g.txt", normal_sample_text(300, 1));
  dir.file("ties.txt", "1\n2\n2\n3\n");
  dir.file("bad.txt", "1\nabc\n");

  CHECK(cli("fit --input " + d + "/g.txt --output " + d + "/a.json") == 0);
  CHECK(cli("fit --input " + d + "/g.txt --output " + d + "/b.json") == 0);
  CHECK(slurp(dir.path / "a.json") == slurp(dir.path / "b.json"));
  CHECK(read_artifact(dir.path / "a.json").converged);

  // a one-step budget leaves the fit short of the optimum; the artifact is still written
  CHECK(cli("fit --input " + d + "/g.txt --max-iter 1 --output " + d + "/c.json") ==
        exit_not_converged);
  CHECK_FALSE(read_artifact(dir.path / "c.json").converged);

  CHECK(cli("fit --input " + d + "/ties.txt --output " + d + "/t.json 2> " + d + "/t.err") ==
        exit_usage);
  CHECK(slurp(dir.path / "t.err").find("2") != std::string::npos);
  CHECK(cli("fit --input " + d + "/ties.txt --jitter-ties --output " + d + "/t.json") == 0);
  CHECK(cli("fit --input " + d + "/bad.txt --output " + d + "/x.json 2> " + d + "/x.err") ==
        exit_usage);
  CHECK(slurp(dir.path / "x.err").find("line 2") != std::string::npos);
  CHECK(cli("fit --input " + d + "/missing.txt 2> /dev/null") == exit_usage);
  CHECK(cli("frobnicate 2> /dev/null") == exit_usage);
  CHECK(cli("eval --input " + d + "/a.json --grid 1:0:3 2> /dev/null") == exit_usage);
  CHECK(cli("sample --input " + d + "/a.json --count -3 2> /dev/null") == exit_usage);

  CHECK(cli("eval --input " + d + "/a.json --grid -3:3:7 --output " + d + "/e.csv") == 0);
  CHECK(slurp(dir.path / "e.csv").rfind("x,pdf,log_pdf,cdf\n", 0) == 0);
  CHECK(cli("sample --input " + d + "/a.json --count 10 --seed 3 --output " + d + "/s1.txt") == 0);
  CHECK(cli("sample --input " + d + "/a.json --count 10 --seed 3 --output " + d + "/s2.txt") == 0);
  CHECK(slurp(dir.path / "s1.txt") == slurp(dir.path / "s2.txt"));

  std::string sim = "simulate --densities normal --sizes 50 --M 2 --seed 7 --output ";
  CHECK(cli(sim + d + "/m1.csv") == 0);
  CHECK(cli(sim + d + "/m2.csv") == 0);
  CHECK(slurp(dir.path / "m1.csv") == slurp(dir.path / "m2.csv"));
}

TEST_CASE("two-point fit is uniform")
{
  TempDir dir;
  fs::path data = dir.file("two.txt", "0\n1\n");
  std::ostringstream out;
  CHECK(run_fit(FitCommand{ .input = data }, out) == exit_success);
  FitArtifact a = artifact_from_text(out.str());
  CHECK(a.theta == std::vector<double>{ 0.0, 0.0 });
  CHECK(a.slopes == std::vector<double>{ 0.0 });
  CHECK(a.converged);
  CHECK(a.log_likelihood == 0.0);
}
