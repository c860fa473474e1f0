#pragma once

#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "qbounds/bounds.hpp"
#include "qbounds/models.hpp"

namespace qbounds::cli {

inline constexpr const char* kVersion = "0.1.0";

enum class Example { Noon, Dephasing, Interferometer, Field };
enum class Command { Bounds, Bias, Mmse };

std::string to_string(Example example);
Example parse_example(const std::string& name);
std::string to_string(Command command);
Command parse_command(const std::string& name);

/// Secondary sweep axis replacing n as the row key (e.g. eta for dephasing).
struct Sweep {
  std::string key;
  std::vector<double> values;
};

/// Fully resolved run description. Every field carries a concrete value after
/// resolve_config; the JSON echo of a resolved config reproduces the run.
struct RunConfig {
  Command command = Command::Bounds;
  Example example = Example::Noon;
  std::map<std::string, double> params;
  Support prior;
  Eigen::Index grid_points = kDefaultGridPoints;
  std::vector<int> n_values;
  std::optional<Sweep> sweep;
  int stride = 1;
  std::string out;
  std::string report;
};

/// Partially specified config as read from flags or a JSON file; unset fields
/// fall back to per-example defaults.
struct ConfigOverrides {
  std::optional<Command> command;
  std::optional<Example> example;
  std::map<std::string, double> params;
  std::optional<Support> prior;
  std::optional<Eigen::Index> grid_points;
  std::optional<std::vector<int>> n_values;
  std::optional<Sweep> sweep;
  std::optional<int> stride;
  std::optional<std::string> out;
  std::optional<std::string> report;
};

/// Later overrides win field by field; params merge key by key.
ConfigOverrides merge(ConfigOverrides base, const ConfigOverrides& top);

/// Applies defaults (including the QBOUNDS_GRID environment override for the
/// grid size) and validates. Throws Error(ConfigError).
RunConfig resolve_config(const ConfigOverrides& overrides);

/// Reads a config object, or the "config" member of an emitted report.
ConfigOverrides overrides_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const RunConfig& config);

/// Parses "pi", "pi/10", "2*pi", "0.25", "3pi/4".
double parse_real(const std::string& text);
/// "A:B" pairs, used for --prior and --n-range.
std::pair<std::string, std::string> split_pair(const std::string& text);
/// "V1,V2,..." or "START:STOP:STEP" (inclusive of STOP within half a step).
std::vector<double> parse_value_list(const std::string& text);

ModelInstance build_model(const RunConfig& config, int n, const std::map<std::string, double>& params);

struct SweepRow {
  double axis = 0.0;
  double qcrb = 0.0;
  double obb = 0.0;
  std::optional<double> mmse;
  double obb_residual = 0.0;
};

struct BiasRow {
  double x = 0.0;
  double bias_opt = 0.0;
  double bias_mmse = 0.0;
};

struct MmseRow {
  int n = 0;
  double mse = 0.0;
  double variance = 0.0;
  double squared_bias = 0.0;
};

std::vector<SweepRow> run_bounds_sweep(const RunConfig& config);
/// Uses the first entry of n_values. Throws UnsupportedExample for the
/// interferometer, which has no measurement model.
struct BiasDump {
  std::vector<BiasRow> rows;
  double ode_residual = 0.0;
};

BiasDump run_bias_dump(const RunConfig& config);
std::vector<MmseRow> run_mmse_sweep(const RunConfig& config);

inline constexpr double kQcrbOrderingSlack = 1e-12;
inline constexpr double kMmseOrderingSlack = 1e-10;

/// Human-readable descriptions of rows breaking obb <= qcrb or obb <= mmse.
std::vector<std::string> ordering_violations(const std::vector<SweepRow>& rows);

void write_csv(std::ostream& os, const std::vector<SweepRow>& rows);
void write_csv(std::ostream& os, const std::vector<BiasRow>& rows);
void write_csv(std::ostream& os, const std::vector<MmseRow>& rows);

/// Formats with 12 significant digits.
std::string format_real(double value);

struct ReportDiagnostics {
  double max_ode_residual = 0.0;
  Eigen::Index grid_m = 0;
  double wall_time_ms = 0.0;
};

nlohmann::json emit_report(const RunConfig& config, const std::vector<SweepRow>& rows, const ReportDiagnostics& diag);
nlohmann::json emit_report(const RunConfig& config, const std::vector<BiasRow>& rows, const ReportDiagnostics& diag);
nlohmann::json emit_report(const RunConfig& config, const std::vector<MmseRow>& rows, const ReportDiagnostics& diag);

/// Writes `doc` to `path`; throws IoError.
void write_text_file(const std::string& path, const std::string& contents);

/// Entry point of the command-line tool; returns the process exit code.
int main(int argc, char** argv);

enum ExitCode : int { kSuccess = 0, kConfigError = 2, kNumericalFailure = 3, kInvariantViolation = 4 };

}  // namespace qbounds::cli
