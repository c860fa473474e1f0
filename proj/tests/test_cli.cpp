#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "qbounds/cli.hpp"

using namespace qbounds;
using namespace qbounds::cli;
namespace fs = std::filesystem;
constexpr double pi = std::numbers::pi;

namespace {

class TempDir {
 public:
  TempDir() : path_(fs::temp_directory_path() / ("qbounds_cli_" + std::to_string(counter_++) + "_" +
                                                 std::to_string(reinterpret_cast<std::uintptr_t>(this)))) {
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  static inline int counter_ = 0;
  fs::path path_;
};

int run(std::vector<std::string> args) {
  args.insert(args.begin(), "qbounds");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return cli::main(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> read_csv(const std::string& path) {
  std::vector<std::vector<std::string>> rows;
  std::stringstream in(slurp(path));
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.push_back("");
    rows.push_back(cells);
  }
  return rows;
}

RunConfig resolved(ConfigOverrides o) { return resolve_config(o); }

}  // namespace

TEST_CASE("parse helpers") {
  CHECK(parse_real("pi") == pi);
  CHECK(parse_real("pi/10") == pi / 10.0);
  CHECK(parse_real("2*pi") == 2.0 * pi);
  CHECK(parse_real("3pi/4") == 3.0 * pi / 4.0);
  CHECK(parse_real(" 0.25 ") == 0.25);
  CHECK(parse_real("-1e-3") == -1e-3);
  CHECK_THROWS_AS(parse_real("abc"), Error);
  CHECK_THROWS_AS(parse_real("pi/0"), Error);
  CHECK_THROWS_AS(parse_real("1.5x"), Error);

  const auto values = parse_value_list("0.1:1.0:0.1");
  REQUIRE(values.size() == 10);
  CHECK(values.front() == doctest::Approx(0.1));
  CHECK(values.back() == doctest::Approx(1.0));
  CHECK(parse_value_list("1,2.5,pi") == std::vector<double>{1.0, 2.5, pi});
  CHECK_THROWS_AS(split_pair("1:2:3"), Error);
}

TEST_CASE("resolve_config: defaults and validation") {
  ConfigOverrides o;
  o.example = Example::Noon;
  const RunConfig c = resolved(o);
  CHECK(c.n_values.size() == 30);
  CHECK(c.params.at("N") == 10.0);
  CHECK(c.prior.a2 == doctest::Approx(pi / 10.0));

  ConfigOverrides deph;
  deph.example = Example::Dephasing;
  const RunConfig d = resolved(deph);
  REQUIRE(d.sweep.has_value());
  CHECK(d.sweep->key == "eta");
  CHECK(d.n_values == std::vector<int>{5});

  ConfigOverrides gamma = deph;
  gamma.params["gamma"] = 1.0;
  CHECK(resolved(gamma).params.at("eta") == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));

  ConfigOverrides bad_param = o;
  bad_param.params["eta"] = 0.5;
  CHECK_THROWS_AS(resolved(bad_param), Error);

  ConfigOverrides even_grid = o;
  even_grid.grid_points = 400;
  CHECK_THROWS_AS(resolved(even_grid), Error);

  ConfigOverrides zero_n = o;
  zero_n.n_values = std::vector<int>{0, 1};
  CHECK_THROWS_AS(resolved(zero_n), Error);
  zero_n.command = Command::Mmse;
  CHECK_NOTHROW(resolved(zero_n));

  ConfigOverrides sweep_many_n = deph;
  sweep_many_n.n_values = std::vector<int>{1, 2};
  sweep_many_n.sweep = Sweep{"eta", {0.5}};
  CHECK_THROWS_AS(resolved(sweep_many_n), Error);
}

TEST_CASE("merge: flags override file fields") {
  ConfigOverrides file;
  file.example = Example::Dephasing;
  file.params["gamma"] = 0.5;
  file.grid_points = 101;
  ConfigOverrides flags;
  flags.params["eta"] = 0.9;
  const ConfigOverrides merged = merge(file, flags);
  CHECK(merged.params.count("gamma") == 0);
  CHECK(merged.params.at("eta") == 0.9);
  CHECK(*merged.grid_points == 101);
}

TEST_CASE("QBOUNDS_GRID overrides the default grid size") {
  ::setenv("QBOUNDS_GRID", "201", 1);
  CHECK(resolved(ConfigOverrides{}).grid_points == 201);
  ConfigOverrides explicit_grid;
  explicit_grid.grid_points = 301;
  CHECK(resolved(explicit_grid).grid_points == 301);
  ::setenv("QBOUNDS_GRID", "200", 1);
  CHECK_THROWS_AS(resolved(ConfigOverrides{}), Error);
  ::unsetenv("QBOUNDS_GRID");
  CHECK(resolved(ConfigOverrides{}).grid_points == kDefaultGridPoints);
}

TEST_CASE("bounds sweep: NOON n = 1..30") {
  TempDir tmp;
  REQUIRE(run({"bounds", "--example", "noon", "--param", "N=10", "--prior", "0:pi/10", "--n-range", "1:30", "--out",
               tmp.file("noon.csv")}) == kSuccess);
  const auto rows = read_csv(tmp.file("noon.csv"));
  REQUIRE(rows.size() == 31);
  CHECK(rows[0] == std::vector<std::string>{"axis", "qcrb", "obb", "mmse", "obb_residual"});
  CHECK(rows[1][0] == "1");
  CHECK(std::stod(rows[1][1]) == doctest::Approx(0.01).epsilon(1e-12));
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(std::stod(rows[i][2]) <= std::stod(rows[i][1]));
    CHECK(std::stod(rows[i][2]) <= std::stod(rows[i][3]) + 1e-10);
  }
}

TEST_CASE("bounds sweep: dephasing eta axis at n = 5") {
  TempDir tmp;
  REQUIRE(run({"bounds", "--example", "dephasing", "--n", "5", "--sweep", "eta=0.1:1.0:0.1", "--prior", "0:pi",
               "--out", tmp.file("deph.csv")}) == kSuccess);
  const auto rows = read_csv(tmp.file("deph.csv"));
  REQUIRE(rows.size() == 11);
  CHECK(std::stod(rows[1][0]) == doctest::Approx(0.1));
  CHECK(std::stod(rows[10][0]) == doctest::Approx(1.0));
  CHECK(std::stod(rows[10][1]) == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("bounds sweep: field and interferometer") {
  TempDir tmp;
  REQUIRE(run({"bounds", "--example", "field", "--param", "B=pi/2", "--prior", "0:pi/2", "--n", "1", "--out",
               tmp.file("field.csv")}) == kSuccess);
  const auto field = read_csv(tmp.file("field.csv"));
  REQUIRE(field.size() == 2);
  CHECK(std::stod(field[1][1]) == doctest::Approx(0.70711).epsilon(1e-5));

  REQUIRE(run({"bounds", "--example", "interferometer", "--n", "1,4", "--out", tmp.file("int.csv")}) == kSuccess);
  const auto inter = read_csv(tmp.file("int.csv"));
  REQUIRE(inter.size() == 3);
  CHECK(inter[1][3].empty());
}

TEST_CASE("bias dump") {
  TempDir tmp;
  REQUIRE(run({"bias", "--example", "noon", "--n", "1", "--stride", "100", "--out", tmp.file("b1.csv")}) ==
          kSuccess);
  REQUIRE(run({"bias", "--example", "noon", "--n", "20", "--stride", "100", "--out", tmp.file("b20.csv")}) ==
          kSuccess);
  const auto b1 = read_csv(tmp.file("b1.csv"));
  const auto b20 = read_csv(tmp.file("b20.csv"));
  REQUIRE(b1.size() == 42);
  CHECK(b1[0] == std::vector<std::string>{"x", "bias_opt", "bias_mmse"});
  auto max_abs = [](const auto& rows) {
    double m = 0.0;
    for (std::size_t i = 1; i < rows.size(); ++i) m = std::max(m, std::abs(std::stod(rows[i][2])));
    return m;
  };
  CHECK(max_abs(b20) < max_abs(b1));
  CHECK(std::abs(std::stod(b1[21][1])) <= 1e-8);  // node 2000 = a/2

  CHECK(run({"bias", "--example", "interferometer", "--out", tmp.file("x.csv")}) == kConfigError);
}

TEST_CASE("mmse command") {
  TempDir tmp;
  REQUIRE(run({"mmse", "--example", "noon", "--n", "0,1", "--out", tmp.file("m.csv")}) == kSuccess);
  const auto rows = read_csv(tmp.file("m.csv"));
  REQUIRE(rows.size() == 3);
  CHECK(std::stod(rows[1][1]) == doctest::Approx(std::pow(pi / 10.0, 2) / 12.0).epsilon(1e-10));
}

TEST_CASE("JSON report and round trip") {
  TempDir tmp;
  REQUIRE(run({"bounds", "--example", "noon", "--n-range", "1:6", "--grid", "2001", "--out", tmp.file("a.csv"),
               "--report", tmp.file("a.json")}) == kSuccess);
  const auto doc = nlohmann::json::parse(slurp(tmp.file("a.json")));
  CHECK(doc.at("version") == kVersion);
  CHECK(doc.at("rows").size() == 6);
  CHECK(doc.at("diagnostics").at("max_ode_residual").get<double>() <= 1e-6);
  CHECK(doc.at("diagnostics").at("grid_m") == 2001);
  CHECK(doc.at("diagnostics").contains("wall_time_ms"));
  for (const char* key : {"command", "example", "params", "prior", "grid_points", "n", "sweep", "stride", "out",
                          "report"}) {
    CHECK(doc.at("config").contains(key));
  }

  REQUIRE(run({"bounds", "--config", tmp.file("a.json"), "--out", tmp.file("b.csv"), "--report",
               tmp.file("b.json")}) == kSuccess);
  CHECK(slurp(tmp.file("a.csv")) == slurp(tmp.file("b.csv")));
}

TEST_CASE("determinism: identical bytes across runs") {
  TempDir tmp;
  for (const char* name : {"r1.csv", "r2.csv"}) {
    REQUIRE(run({"bounds", "--example", "field", "--n-range", "1:8", "--grid", "1001", "--out", tmp.file(name)}) ==
            kSuccess);
  }
  const std::string first = slurp(tmp.file("r1.csv"));
  CHECK(first == slurp(tmp.file("r2.csv")));
  CHECK(first.find('\r') == std::string::npos);
}

TEST_CASE("exit codes") {
  TempDir tmp;
  CHECK(run({"bounds", "--example", "noon", "--n-range", "5:1"}) == kConfigError);
  CHECK(run({"bounds", "--example", "bogus"}) == kConfigError);
  CHECK(run({"bounds", "--example", "noon", "--param", "N=0"}) == kConfigError);
  CHECK(run({"bounds", "--example", "noon", "--grid", "100"}) == kConfigError);
  CHECK(run({"bounds", "--config", tmp.file("missing.json")}) == kConfigError);
  CHECK(run({"bounds", "--no-such-flag"}) == kConfigError);
  CHECK(run({"bounds", "--example", "interferometer", "--param", "n_a=0", "--param", "n_b=0", "--n", "1", "--out",
             tmp.file("z.csv")}) == kNumericalFailure);
  CHECK(run({"bounds", "--example", "noon", "--n", "1", "--out", (fs::path(tmp.file("nodir")) / "x.csv").string()}) ==
        kConfigError);

  std::ofstream(tmp.file("bad.json")) << R"({"example": "noon", "colour": 3})";
  CHECK(run({"bounds", "--config", tmp.file("bad.json")}) == kConfigError);
}

TEST_CASE("ordering_violations flags rows breaking the bound order") {
  std::vector<SweepRow> rows{{1.0, 0.01, 0.004, 0.0042, 0.0}, {2.0, 0.005, 0.006, std::nullopt, 0.0},
                             {3.0, 0.003, 0.002, 0.0019, 0.0}};
  const auto v = ordering_violations(rows);
  REQUIRE(v.size() == 2);
  CHECK(v[0].find("qcrb") != std::string::npos);
  CHECK(v[1].find("mmse") != std::string::npos);
}
