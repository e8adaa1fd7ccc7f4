#include <doctest.h>

#include <mpfr.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "qwalk/cli.hpp"

using namespace qwalk;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "qwalk_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

// pi / d rounded to nearest with 200 bits of working precision.
double mpfr_pi_over(unsigned long d) {
  mpfr_t v;
  mpfr_init2(v, 200);
  mpfr_const_pi(v, MPFR_RNDN);
  mpfr_div_ui(v, v, d, MPFR_RNDN);
  const double out = mpfr_get_d(v, MPFR_RNDN);
  mpfr_clear(v);
  return out;
}

}  // namespace

TEST_CASE("theta parsing") {
  for (unsigned long d = 1; d <= 360; ++d) {
    CHECK(cli::parse_theta("pi/" + std::to_string(d)) == mpfr_pi_over(d));
  }
  CHECK(cli::parse_theta("pi") == std::numbers::pi);
  CHECK(cli::parse_theta("pi/4") == std::numbers::pi / 4);

  for (double v : {0.1, 1.0 / 3.0, -2.718281828459045, 1e-300, 0.7853981633974483}) {
    CHECK(cli::parse_theta(cli::format_real(v)) == v);
  }
  for (const char* bad : {"", "pi/", "pi/0", "pi/x", "tau", "1.0rad", "nan", "inf", "pi/-4"}) {
    CHECK_THROWS_AS(cli::parse_theta(bad), std::invalid_argument);
  }
}

TEST_CASE("seed parsing") {
  CHECK(cli::parse_seed("0") == 0);
  CHECK(cli::parse_seed("18446744073709551615") == std::numeric_limits<std::uint64_t>::max());
  CHECK(cli::parse_seed("0xDEADbeef") == 0xDEADBEEFULL);
  CHECK(cli::parse_seed_list("1,2, 0x10") == std::vector<std::uint64_t>{1, 2, 16});
  for (const char* bad : {"", "-1", "0x", "12a", "18446744073709551616", "1,,2"}) {
    CHECK_THROWS_AS(cli::parse_seed_list(bad), std::invalid_argument);
  }
}

TEST_CASE("walk writes the distribution CSV") {
  const auto path = scratch("walk_dtqw.csv");
  const auto r = run_cli({"walk", "--kind", "dtqw", "--theta", "pi/4", "--steps", "2", "--initial", "up",
                          "--output", path.string()});
  REQUIRE(r.code == cli::kOk);
  CHECK(r.out.find("sigma=") != std::string::npos);
  const auto rows = parse_csv(slurp(path));
  REQUIRE(rows.size() == 4);
  CHECK(rows[0] == std::vector<std::string>{"x", "probability"});
  const std::vector<std::pair<long, double>> expected{{-2, 0.25}, {0, 0.5}, {2, 0.25}};
  for (std::size_t i = 0; i < expected.size(); ++i) {
    CHECK(std::stol(rows[i + 1][0]) == expected[i].first);
    CHECK(std::abs(std::stod(rows[i + 1][1]) - expected[i].second) <= 1e-14);
  }
  CHECK(slurp(path).find('\r') == std::string::npos);
}

TEST_CASE("walk without --output sends CSV to stdout") {
  const auto r = run_cli({"walk", "--kind", "dtqw", "--steps", "1"});
  REQUIRE(r.code == cli::kOk);
  CHECK(r.out.rfind("x,probability\n", 0) == 0);
  CHECK(r.err.find("norm=") != std::string::npos);
}

TEST_CASE("unbiased walk of size 3 lives on multiples of 6") {
  const auto path = scratch("walk_ubqw.csv");
  const auto r = run_cli({"walk", "--kind", "ubqw", "--step-size", "3", "--theta", "pi/6", "--steps", "100",
                          "-o", path.string()});
  REQUIRE(r.code == cli::kOk);
  const auto rows = parse_csv(slurp(path));
  REQUIRE(rows.size() > 10);
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(std::stol(rows[i][0]) % 6 == 0);
}

TEST_CASE("random-step walk output is reproducible") {
  const auto a = scratch("rsqw_a.csv");
  const auto b = scratch("rsqw_b.csv");
  const std::vector<std::string> base{"walk", "--kind", "rsqw", "--interval-max", "10", "--seed", "7",
                                      "--steps", "100", "--theta", "pi/4", "-o"};
  auto args_a = base;
  args_a.push_back(a.string());
  auto args_b = base;
  args_b.push_back(b.string());
  REQUIRE(run_cli(args_a).code == cli::kOk);
  REQUIRE(run_cli(args_b).code == cli::kOk);
  CHECK(slurp(a) == slurp(b));
  CHECK_FALSE(slurp(a).empty());
}

TEST_CASE("seed lists produce one block per run in seed order") {
  const auto r = run_cli({"sigma-sweep", "--kind", "rsqw", "--interval-max", "3", "--seed", "5,1,0x2",
                          "--steps", "4"});
  REQUIRE(r.code == cli::kOk);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 1 + 3 * 4);
  CHECK(rows[0] == std::vector<std::string>{"seed", "t", "sigma", "rms", "mean"});
  CHECK(rows[1][0] == "5");
  CHECK(rows[5][0] == "1");
  CHECK(rows[9][0] == "2");
  CHECK(rows[12][1] == "4");

  CHECK(run_cli({"walk", "--kind", "dtqw", "--seed", "1,2", "--steps", "3"}).code == cli::kUsage);
}

TEST_CASE("sigma-sweep columns") {
  const auto r = run_cli({"sigma-sweep", "--kind", "dtqw", "--theta", "pi/4", "--steps", "2"});
  REQUIRE(r.code == cli::kOk);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == std::vector<std::string>{"t", "sigma", "rms", "mean"});
  CHECK(rows[1][0] == "1");
  CHECK(std::abs(std::stod(rows[1][1]) - 1.0) <= 1e-14);
  CHECK(std::abs(std::stod(rows[1][2]) - 1.0) <= 1e-14);
  CHECK(std::abs(std::stod(rows[1][3])) <= 1e-14);
  CHECK(rows[2][0] == "2");
  CHECK(std::abs(std::stod(rows[2][1]) - std::sqrt(2.0)) <= 1e-14);
  CHECK(std::abs(std::stod(rows[2][2]) - std::sqrt(2.0)) <= 1e-14);
  CHECK(std::abs(std::stod(rows[2][3])) <= 1e-14);
}

TEST_CASE("sigma-sweep scaling and drift") {
  const auto unit = parse_csv(run_cli({"sigma-sweep", "--kind", "dtqw", "--steps", "40"}).out);
  const auto six = parse_csv(
      run_cli({"sigma-sweep", "--kind", "ubqw", "--step-size", "6", "--steps", "40"}).out);
  REQUIRE(unit.size() == six.size());
  for (std::size_t i = 1; i < unit.size(); ++i) {
    CHECK(std::abs(std::stod(six[i][1]) - 6.0 * std::stod(unit[i][1])) <= 1e-9);
  }

  const auto biased = parse_csv(run_cli({"sigma-sweep", "--kind", "bqw", "--left-step", "3",
                                         "--right-step", "1", "--steps", "30"})
                                    .out);
  REQUIRE(biased.size() == 31);
  for (std::size_t i = 1; i < biased.size(); ++i) CHECK(std::stod(biased[i][3]) < 0.0);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run_cli({}).code == cli::kUsage);
  CHECK(run_cli({"walk", "--kind", "dtqw", "--step-size", "3", "--steps", "2"}).code == cli::kUsage);
  CHECK(run_cli({"walk", "--kind", "ubqw", "--steps", "2"}).code == cli::kUsage);
  CHECK(run_cli({"walk", "--kind", "ubqw", "--step-size", "0", "--steps", "2"}).code == cli::kUsage);
  CHECK(run_cli({"walk", "--kind", "bqw", "--left-step", "3", "--steps", "2"}).code == cli::kUsage);
  CHECK(run_cli({"walk", "--kind", "rsqw", "--interval-max", "3", "--step-size", "2", "--steps", "2"}).code ==
        cli::kUsage);
  CHECK(run_cli({"walk", "--kind", "qqqq", "--steps", "2"}).code == cli::kUsage);
  CHECK(run_cli({"walk", "--kind", "dtqw", "--theta", "pi/0", "--steps", "2"}).code == cli::kUsage);
  CHECK(run_cli({"walk", "--kind", "dtqw", "--seed", "0xZZ", "--steps", "2"}).code == cli::kUsage);
  CHECK(run_cli({"walk", "--kind", "dtqw", "--initial", "sideways", "--steps", "2"}).code == cli::kUsage);
  CHECK(run_cli({"--help"}).code == cli::kOk);
}

TEST_CASE("unwritable output exits with 1") {
  const auto r = run_cli({"walk", "--kind", "dtqw", "--steps", "2", "-o", "/nonexistent-dir/qwalk/out.csv"});
  CHECK(r.code == cli::kIoError);
}

TEST_CASE("step cap can be overridden from the environment") {
  ::setenv(cli::kStepCapVariable, "5", 1);
  CHECK(cli::step_cap_from_environment() == 5);
  CHECK(run_cli({"walk", "--kind", "dtqw", "--steps", "6"}).code == cli::kUsage);
  CHECK(run_cli({"walk", "--kind", "dtqw", "--steps", "5"}).code == cli::kOk);
  ::setenv(cli::kStepCapVariable, "lots", 1);
  CHECK(run_cli({"walk", "--kind", "dtqw", "--steps", "5"}).code == cli::kUsage);
  ::unsetenv(cli::kStepCapVariable);
  CHECK(cli::step_cap_from_environment() == kDefaultStepCap);
}

TEST_CASE("verify subcommand") {
  SUBCASE("unit walk passes") {
    const auto r = run_cli({"verify", "--kind", "dtqw", "--theta", "pi/4", "--steps", "10"});
    CHECK(r.code == cli::kOk);
    CHECK(r.out.find("PASS parity") != std::string::npos);
    CHECK(r.out.find("PASS oracle") != std::string::npos);
  }
  SUBCASE("random walk replays its j-sequence") {
    const auto r = run_cli(
        {"verify", "--kind", "rsqw", "--interval-max", "6", "--seed", "42", "--steps", "12", "--theta", "pi/4"});
    CHECK(r.code == cli::kOk);
    CHECK(r.out.find("replayed j-sequence: ") != std::string::npos);
  }
  SUBCASE("unbiased and biased walks run their remap checks") {
    const auto u = run_cli({"verify", "--kind", "ubqw", "--step-size", "6", "--steps", "12"});
    CHECK(u.code == cli::kOk);
    CHECK(u.out.find("PASS scaling") != std::string::npos);
    const auto b = run_cli({"verify", "--kind", "bqw", "--left-step", "1", "--right-step", "6", "--steps", "11",
                            "--initial", "down", "--theta", "pi/3"});
    CHECK(b.code == cli::kOk);
    CHECK(b.out.find("PASS affine-remap") != std::string::npos);
  }
  SUBCASE("corrupted distribution fails") {
    const auto r = run_cli({"verify", "--kind", "dtqw", "--steps", "10", "--inject-fault"});
    CHECK(r.code == cli::kVerifyFailed);
    CHECK(r.out.find("first failing check: norm") != std::string::npos);
  }
  SUBCASE("too many steps") {
    CHECK(run_cli({"verify", "--kind", "dtqw", "--steps", "13"}).code == cli::kUsage);
  }
}

TEST_CASE("verify report on each kind") {
  WalkConfig c;
  c.theta = 0.9;
  c.steps = 12;
  for (StepPolicy p : {StepPolicy{policy::Unit{}}, StepPolicy{policy::FixedUnbiased{4}},
                       StepPolicy{policy::Biased{5, 2}}, StepPolicy{policy::RandomInterval{7}}}) {
    c.policy = p;
    const auto report = cli::verify(c);
    CHECK(report.passed());
    CHECK(report.replayed_steps.size() == 12);
    CHECK(cli::verify(c, {true}).first_failure() != nullptr);
  }
  c.steps = 13;
  CHECK_THROWS_AS(cli::verify(c), std::invalid_argument);
}

TEST_CASE("peaks subcommand") {
  const auto ok = run_cli({"peaks", "--kind", "ubqw", "--step-size", "3", "--steps", "100", "--theta", "pi/4"});
  CHECK(ok.code == cli::kOk);
  CHECK(ok.out.rfind("index,position,height\n", 0) == 0);
  CHECK(ok.err.find("rule_satisfied=true") != std::string::npos);

  const auto odd = run_cli({"peaks", "--kind", "ubqw", "--step-size", "3", "--steps", "5"});
  CHECK(odd.code == cli::kVerifyFailed);
  CHECK(odd.err.find("flag=odd-step-grid") != std::string::npos);

  const auto biased = run_cli({"peaks", "--kind", "bqw", "--left-step", "3", "--right-step", "1", "--steps", "20"});
  CHECK(biased.code == cli::kOk);
  CHECK(biased.err.find("rule_satisfied") == std::string::npos);
}
