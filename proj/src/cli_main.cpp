#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "qbounds/cli.hpp"

namespace qbounds::cli {

namespace {

struct FlagValues {
  std::string example;
  std::vector<std::string> n;
  std::string n_range;
  std::string prior;
  int grid = 0;
  std::vector<std::string> params;
  std::string sweep;
  int stride = 0;
  std::string out;
  std::string report;
  std::string config;
};

void add_run_flags(CLI::App& sub, FlagValues& f) {
  sub.add_option("--example", f.example, "noon | dephasing | interferometer | field");
  sub.add_option("--n", f.n, "repetition count(s); comma lists allowed")->delimiter(',');
  sub.add_option("--n-range", f.n_range, "inclusive repetition range MIN:MAX");
  sub.add_option("--prior", f.prior, "uniform prior support A1:A2 (accepts pi, pi/10, ...)");
  sub.add_option("--grid", f.grid, "odd number of grid nodes (default 4001 or $QBOUNDS_GRID)");
  sub.add_option("--param", f.params, "model parameter KEY=VALUE (repeatable)");
  sub.add_option("--sweep", f.sweep, "secondary axis KEY=V1,V2,... or KEY=START:STOP:STEP");
  sub.add_option("--stride", f.stride, "keep every k-th grid node in the bias dump");
  sub.add_option("--out", f.out, "CSV output path (default stdout)");
  sub.add_option("--report", f.report, "JSON report path");
  sub.add_option("--config", f.config, "JSON config file; flags override its fields");
}

ConfigOverrides overrides_from_flags(const FlagValues& f, Command command) {
  ConfigOverrides o;
  o.command = command;
  if (!f.example.empty()) o.example = parse_example(f.example);
  if (!f.n_range.empty() && !f.n.empty()) throw Error(ErrorCode::ConfigError, "use either --n or --n-range");
  if (!f.n_range.empty()) {
    const auto [lo, hi] = split_pair(f.n_range);
    nlohmann::json range = {std::stoi(lo), std::stoi(hi)};
    o.n_values = overrides_from_json(nlohmann::json{{"n_range", range}}).n_values;
  }
  if (!f.n.empty()) {
    std::vector<int> values;
    for (const auto& item : f.n) {
      const double v = parse_real(item);
      if (v != std::floor(v)) throw Error(ErrorCode::ConfigError, "--n expects integers, got '" + item + "'");
      values.push_back(static_cast<int>(v));
    }
    o.n_values = values;
  }
  if (!f.prior.empty()) {
    const auto [a1, a2] = split_pair(f.prior);
    o.prior = Support{parse_real(a1), parse_real(a2)};
  }
  if (f.grid != 0) o.grid_points = f.grid;
  for (const auto& kv : f.params) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::ConfigError, "--param expects KEY=VALUE, got '" + kv + "'");
    o.params[kv.substr(0, eq)] = parse_real(kv.substr(eq + 1));
  }
  if (!f.sweep.empty()) {
    const auto eq = f.sweep.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::ConfigError, "--sweep expects KEY=VALUES");
    o.sweep = Sweep{f.sweep.substr(0, eq), parse_value_list(f.sweep.substr(eq + 1))};
  }
  if (f.stride != 0) o.stride = f.stride;
  if (!f.out.empty()) o.out = f.out;
  if (!f.report.empty()) o.report = f.report;
  return o;
}

ConfigOverrides load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot read config file '" + path + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::ConfigError, "config file '" + path + "': " + e.what());
  }
  return overrides_from_json(doc);
}

void emit(const RunConfig& config, const std::string& csv, const nlohmann::json& report) {
  if (config.out.empty()) {
    std::cout << csv;
  } else {
    write_text_file(config.out, csv);
  }
  if (!config.report.empty()) write_text_file(config.report, report.dump(2) + "\n");
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::SingularSystem:
    case ErrorCode::ConvergenceFailure:
    case ErrorCode::NonPositiveQfi:
    case ErrorCode::ZeroEvidence:
      return kNumericalFailure;
    default:
      return kConfigError;
  }
}

int execute(const RunConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  auto elapsed_ms = [&] {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  };
  std::ostringstream csv;
  ReportDiagnostics diag;
  diag.grid_m = config.grid_points;

  switch (config.command) {
    case Command::Bounds: {
      const std::vector<SweepRow> rows = run_bounds_sweep(config);
      for (const SweepRow& r : rows) diag.max_ode_residual = std::max(diag.max_ode_residual, r.obb_residual);
      diag.wall_time_ms = elapsed_ms();
      write_csv(csv, rows);
      emit(config, csv.str(), emit_report(config, rows, diag));
      if (diag.max_ode_residual > kOdeResidualTolerance) {
        std::cerr << "warning: bias equation residual " << format_real(diag.max_ode_residual)
                  << " exceeds tolerance; bounds stay valid but may not be optimal\n";
      }
      const auto violations = ordering_violations(rows);
      for (const auto& v : violations) std::cerr << "invariant violation: " << v << '\n';
      return violations.empty() ? kSuccess : kInvariantViolation;
    }
    case Command::Bias: {
      const BiasDump dump = run_bias_dump(config);
      diag.max_ode_residual = dump.ode_residual;
      diag.wall_time_ms = elapsed_ms();
      write_csv(csv, dump.rows);
      emit(config, csv.str(), emit_report(config, dump.rows, diag));
      return kSuccess;
    }
    case Command::Mmse: {
      const std::vector<MmseRow> rows = run_mmse_sweep(config);
      diag.wall_time_ms = elapsed_ms();
      write_csv(csv, rows);
      emit(config, csv.str(), emit_report(config, rows, diag));
      return kSuccess;
    }
  }
  return kConfigError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lower bounds on the mean square error of quantum parameter estimation"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  FlagValues flags;
  CLI::App* bounds = app.add_subcommand("bounds", "QCRB / optimal biased bound / MMSE sweep");
  CLI::App* bias = app.add_subcommand("bias", "optimal bias and MMSE estimator bias on the grid");
  CLI::App* mmse = app.add_subcommand("mmse", "Bayes risk of the posterior-mean estimator");
  for (CLI::App* sub : {bounds, bias, mmse}) add_run_flags(*sub, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kSuccess : kConfigError;
  }

  const Command command = bounds->parsed() ? Command::Bounds : bias->parsed() ? Command::Bias : Command::Mmse;
  try {
    ConfigOverrides overrides;
    if (!flags.config.empty()) overrides = load_config_file(flags.config);
    overrides = merge(std::move(overrides), overrides_from_flags(flags, command));
    return execute(resolve_config(overrides));
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  }
}

}  // namespace qbounds::cli
