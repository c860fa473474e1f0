#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <future>
#include <numbers>
#include <set>
#include <sstream>
#include <thread>

#include "qbounds/cli.hpp"
#include "qbounds/numerics.hpp"

namespace qbounds::cli {

namespace {

using nlohmann::json;

[[noreturn]] void config_error(const std::string& what) { throw Error(ErrorCode::ConfigError, what); }

const std::set<std::string>& allowed_params(Example example) {
  static const std::set<std::string> noon{"N"};
  static const std::set<std::string> dephasing{"gamma", "eta"};
  static const std::set<std::string> interferometer{"n_a", "n_b"};
  static const std::set<std::string> field{"B"};
  switch (example) {
    case Example::Noon: return noon;
    case Example::Dephasing: return dephasing;
    case Example::Interferometer: return interferometer;
    case Example::Field: return field;
  }
  return noon;
}

Support default_prior(Example example) {
  constexpr double pi = std::numbers::pi;
  switch (example) {
    case Example::Noon: return {0.0, pi / 10.0};
    case Example::Dephasing: return {0.0, pi};
    case Example::Interferometer: return {0.0, pi / 5.0};
    case Example::Field: return {0.0, pi / 2.0};
  }
  return {};
}

std::map<std::string, double> default_params(Example example) {
  switch (example) {
    case Example::Noon: return {{"N", 10.0}};
    case Example::Dephasing: return {{"eta", 1.0}};
    case Example::Interferometer: return {{"n_a", 1.0}, {"n_b", 1.0}};
    case Example::Field: return {{"B", std::numbers::pi / 2.0}};
  }
  return {};
}

std::vector<int> inclusive_range(int lo, int hi) {
  if (lo > hi) config_error("empty n range " + std::to_string(lo) + ":" + std::to_string(hi));
  std::vector<int> out;
  for (int n = lo; n <= hi; ++n) out.push_back(n);
  return out;
}

int parse_int(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  int value = 0;
  try {
    value = std::stoi(text, &used);
  } catch (const std::exception&) {
    config_error(what + ": expected an integer, got '" + text + "'");
  }
  if (used != text.size()) config_error(what + ": expected an integer, got '" + text + "'");
  return value;
}

Eigen::Index grid_from_environment() {
  const char* env = std::getenv("QBOUNDS_GRID");
  if (env == nullptr || *env == '\0') return kDefaultGridPoints;
  return parse_int(env, "QBOUNDS_GRID");
}

// Runs fn(i) for i in [0, count) on worker threads; results keep index order.
template <typename Fn>
auto parallel_map(std::size_t count, Fn fn) -> std::vector<decltype(fn(std::size_t{}))> {
  using Result = decltype(fn(std::size_t{}));
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(count, std::thread::hardware_concurrency()));
  std::vector<std::optional<Result>> slots(count);
  std::vector<std::future<void>> jobs;
  for (std::size_t w = 0; w < workers; ++w) {
    jobs.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t i = w; i < count; i += workers) slots[i].emplace(fn(i));
    }));
  }
  for (auto& job : jobs) job.get();
  std::vector<Result> out;
  out.reserve(count);
  for (auto& slot : slots) out.push_back(std::move(*slot));
  return out;
}

std::map<std::string, double> row_params(const RunConfig& config, std::optional<double> sweep_value) {
  std::map<std::string, double> params = config.params;
  if (config.sweep && sweep_value) {
    if (config.example == Example::Dephasing) {
      params.erase("eta");
      params.erase("gamma");
    }
    params[config.sweep->key] = *sweep_value;
  }
  return params;
}

}  // namespace

std::string to_string(Example example) {
  switch (example) {
    case Example::Noon: return "noon";
    case Example::Dephasing: return "dephasing";
    case Example::Interferometer: return "interferometer";
    case Example::Field: return "field";
  }
  return "unknown";
}

Example parse_example(const std::string& name) {
  if (name == "noon") return Example::Noon;
  if (name == "dephasing") return Example::Dephasing;
  if (name == "interferometer") return Example::Interferometer;
  if (name == "field") return Example::Field;
  config_error("unknown example '" + name + "' (expected noon, dephasing, interferometer or field)");
}

std::string to_string(Command command) {
  switch (command) {
    case Command::Bounds: return "bounds";
    case Command::Bias: return "bias";
    case Command::Mmse: return "mmse";
  }
  return "unknown";
}

Command parse_command(const std::string& name) {
  if (name == "bounds") return Command::Bounds;
  if (name == "bias") return Command::Bias;
  if (name == "mmse") return Command::Mmse;
  config_error("unknown command '" + name + "'");
}

double parse_real(const std::string& raw) {
  std::string text;
  for (char ch : raw) {
    if (!std::isspace(static_cast<unsigned char>(ch))) text += ch;
  }
  if (text.empty()) config_error("expected a number, got an empty string");

  auto plain = [&](const std::string& token) {
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(token, &used);
    } catch (const std::exception&) {
      config_error("cannot parse number '" + raw + "'");
    }
    if (used != token.size() || !std::isfinite(value)) config_error("cannot parse number '" + raw + "'");
    return value;
  };

  const auto pi_at = text.find("pi");
  if (pi_at == std::string::npos) return plain(text);

  std::string head = text.substr(0, pi_at);
  std::string tail = text.substr(pi_at + 2);
  double scale = 1.0;
  if (!head.empty()) {
    if (head.back() == '*') head.pop_back();
    scale = head == "-" ? -1.0 : plain(head);
  }
  double divisor = 1.0;
  if (!tail.empty()) {
    if (tail.front() != '/') config_error("cannot parse number '" + raw + "'");
    divisor = plain(tail.substr(1));
    if (divisor == 0.0) config_error("division by zero in '" + raw + "'");
  }
  return scale * std::numbers::pi / divisor;
}

std::pair<std::string, std::string> split_pair(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos || text.find(':', colon + 1) != std::string::npos) {
    config_error("expected A:B, got '" + text + "'");
  }
  return {text.substr(0, colon), text.substr(colon + 1)};
}

std::vector<double> parse_value_list(const std::string& text) {
  std::vector<double> values;
  if (std::count(text.begin(), text.end(), ':') == 2) {
    const auto first = text.find(':');
    const auto second = text.find(':', first + 1);
    const double start = parse_real(text.substr(0, first));
    const double stop = parse_real(text.substr(first + 1, second - first - 1));
    const double step = parse_real(text.substr(second + 1));
    if (!(step > 0.0) || stop < start) config_error("invalid range '" + text + "'");
    const auto count = static_cast<long>(std::floor((stop - start) / step + 0.5));
    for (long i = 0; i <= count; ++i) values.push_back(start + double(i) * step);
    return values;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) values.push_back(parse_real(item));
  if (values.empty()) config_error("empty value list");
  return values;
}

ConfigOverrides merge(ConfigOverrides base, const ConfigOverrides& top) {
  if (top.command) base.command = top.command;
  if (top.example) {
    if (base.example && *base.example != *top.example) base.params.clear();
    base.example = top.example;
  }
  for (const auto& [key, value] : top.params) {
    if (key == "eta") base.params.erase("gamma");
    if (key == "gamma") base.params.erase("eta");
    base.params[key] = value;
  }
  if (top.prior) base.prior = top.prior;
  if (top.grid_points) base.grid_points = top.grid_points;
  if (top.n_values) base.n_values = top.n_values;
  if (top.sweep) base.sweep = top.sweep;
  if (top.stride) base.stride = top.stride;
  if (top.out) base.out = top.out;
  if (top.report) base.report = top.report;
  return base;
}

RunConfig resolve_config(const ConfigOverrides& o) {
  RunConfig c;
  c.command = o.command.value_or(Command::Bounds);
  c.example = o.example.value_or(Example::Noon);

  const auto& allowed = allowed_params(c.example);
  c.params = default_params(c.example);
  for (const auto& [key, value] : o.params) {
    if (!allowed.count(key)) config_error("parameter '" + key + "' does not apply to example " + to_string(c.example));
    c.params[key] = value;
  }
  if (c.example == Example::Dephasing) {
    // gamma is an input alias; the resolved config always carries eta.
    if (o.params.count("gamma") && o.params.count("eta")) config_error("give either gamma or eta, not both");
    const DephasingParams dp = o.params.count("gamma") ? DephasingParams::from_gamma(o.params.at("gamma"))
                                                       : DephasingParams::from_eta(c.params.at("eta"));
    c.params = {{"eta", dp.eta()}};
  }
  if (c.example == Example::Noon) {
    const double N = c.params.at("N");
    if (N < 1.0 || N != std::floor(N)) config_error("N must be a positive integer");
  }

  c.prior = o.prior.value_or(default_prior(c.example));
  if (!(c.prior.a2 > c.prior.a1)) config_error("prior support needs a2 > a1");

  c.grid_points = o.grid_points.value_or(grid_from_environment());
  if (c.grid_points < 5 || c.grid_points % 2 == 0) {
    config_error("grid size must be odd and >= 5, got " + std::to_string(c.grid_points));
  }

  if (o.sweep) {
    c.sweep = o.sweep;
    if (!allowed.count(c.sweep->key)) {
      config_error("sweep key '" + c.sweep->key + "' does not apply to example " + to_string(c.example));
    }
    if (c.sweep->values.empty()) config_error("sweep has no values");
  }

  if (o.n_values) {
    c.n_values = *o.n_values;
  } else if (c.example == Example::Dephasing && !c.sweep && c.command == Command::Bounds) {
    c.n_values = {5};
    c.sweep = Sweep{"eta", parse_value_list("0.1:1.0:0.1")};
  } else if (c.command == Command::Bias) {
    c.n_values = {1};
  } else {
    c.n_values = inclusive_range(1, 30);
  }
  if (c.n_values.empty()) config_error("no repetition counts given");
  const int n_floor = c.command == Command::Mmse ? 0 : 1;
  for (int n : c.n_values) {
    if (n < n_floor) config_error("repetition count " + std::to_string(n) + " below " + std::to_string(n_floor));
  }
  if (c.sweep && c.n_values.size() != 1) config_error("a sweep needs exactly one repetition count");
  if (c.command == Command::Bias && c.n_values.size() != 1) config_error("bias dump needs exactly one n");

  c.stride = o.stride.value_or(1);
  if (c.stride < 1) config_error("stride must be >= 1");
  c.out = o.out.value_or("");
  c.report = o.report.value_or("");
  return c;
}

ConfigOverrides overrides_from_json(const json& doc_in) {
  const json& doc = doc_in.contains("config") ? doc_in.at("config") : doc_in;
  if (!doc.is_object()) config_error("config must be a JSON object");
  ConfigOverrides o;
  try {
    for (const auto& [key, value] : doc.items()) {
      if (key == "command") {
        o.command = parse_command(value.get<std::string>());
      } else if (key == "example") {
        o.example = parse_example(value.get<std::string>());
      } else if (key == "params") {
        for (const auto& [pk, pv] : value.items()) o.params[pk] = pv.is_string() ? parse_real(pv.get<std::string>()) : pv.get<double>();
      } else if (key == "prior") {
        if (!value.is_array() || value.size() != 2) config_error("field 'prior': expected [a1, a2]");
        auto num = [](const json& v) { return v.is_string() ? parse_real(v.get<std::string>()) : v.get<double>(); };
        o.prior = Support{num(value[0]), num(value[1])};
      } else if (key == "grid_points") {
        o.grid_points = value.get<Eigen::Index>();
      } else if (key == "n") {
        o.n_values = value.is_array() ? value.get<std::vector<int>>() : std::vector<int>{value.get<int>()};
      } else if (key == "n_range") {
        if (!value.is_array() || value.size() != 2) config_error("field 'n_range': expected [min, max]");
        o.n_values = inclusive_range(value[0].get<int>(), value[1].get<int>());
      } else if (key == "sweep") {
        if (value.is_null()) continue;
        o.sweep = Sweep{value.at("key").get<std::string>(), value.at("values").get<std::vector<double>>()};
      } else if (key == "stride") {
        o.stride = value.get<int>();
      } else if (key == "out") {
        o.out = value.get<std::string>();
      } else if (key == "report") {
        o.report = value.get<std::string>();
      } else {
        config_error("unknown config field '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    config_error(std::string("malformed config: ") + e.what());
  }
  return o;
}

json to_json(const RunConfig& c) {
  json doc;
  doc["command"] = to_string(c.command);
  doc["example"] = to_string(c.example);
  doc["params"] = c.params;
  doc["prior"] = {c.prior.a1, c.prior.a2};
  doc["grid_points"] = c.grid_points;
  doc["n"] = c.n_values;
  doc["sweep"] = c.sweep ? json{{"key", c.sweep->key}, {"values", c.sweep->values}} : json(nullptr);
  doc["stride"] = c.stride;
  doc["out"] = c.out;
  doc["report"] = c.report;
  return doc;
}

ModelInstance build_model(const RunConfig& config, int n, const std::map<std::string, double>& params) {
  switch (config.example) {
    case Example::Noon:
      return noon_model(NoonParams{static_cast<int>(params.at("N"))}, config.prior, config.grid_points, n);
    case Example::Dephasing: {
      const DephasingParams dp = params.count("gamma") ? DephasingParams::from_gamma(params.at("gamma"))
                                                       : DephasingParams::from_eta(params.at("eta"));
      return dephasing_model(dp, config.prior, config.grid_points, n);
    }
    case Example::Interferometer:
      return interferometer_problem(
          InterferometerParams::from_photon_numbers(params.at("n_a"), params.at("n_b")), config.prior,
          config.grid_points, n);
    case Example::Field:
      return field_model(FieldParams{params.at("B")}, config.prior, config.grid_points, n);
  }
  throw Error(ErrorCode::UnsupportedExample, "unhandled example");
}

std::vector<SweepRow> run_bounds_sweep(const RunConfig& config) {
  const std::size_t count = config.sweep ? config.sweep->values.size() : config.n_values.size();
  return parallel_map(count, [&](std::size_t i) {
    const int n = config.sweep ? config.n_values.front() : config.n_values[i];
    std::optional<double> sweep_value;
    if (config.sweep) sweep_value = config.sweep->values[i];
    const ModelInstance model = build_model(config, n, row_params(config, sweep_value));

    SweepRow row;
    row.axis = sweep_value.value_or(double(n));
    row.qcrb = bayesian_qcrb(model.problem).value;
    const BoundReport obb = obb_variational(model.problem);
    row.obb = obb.value;
    row.obb_residual = obb.diagnostics.ode_residual_max.value_or(0.0);
    if (model.measurement) {
      row.mmse = mmse_mse(*model.measurement, model.problem.prior, n, model.problem.target).mse;
    }
    return row;
  });
}

BiasDump run_bias_dump(const RunConfig& config) {
  if (config.example == Example::Interferometer) {
    throw Error(ErrorCode::UnsupportedExample, "interferometer has no measurement model, so no estimator bias");
  }
  const int n = config.n_values.front();
  const ModelInstance model = build_model(config, n, row_params(config, std::nullopt));
  const BoundReport obb = obb_variational(model.problem);
  const MmseReport mmse = mmse_mse(*model.measurement, model.problem.prior, n, model.problem.target);

  BiasDump dump;
  dump.ode_residual = obb.diagnostics.ode_residual_max.value_or(0.0);
  const ParameterGrid& grid = model.problem.grid();
  for (Eigen::Index i = 0; i < grid.size(); i += config.stride) {
    dump.rows.push_back({grid.node(i), (*obb.bias)[i], mmse.bias_curve[i]});
  }
  return dump;
}

std::vector<MmseRow> run_mmse_sweep(const RunConfig& config) {
  if (config.example == Example::Interferometer) {
    throw Error(ErrorCode::UnsupportedExample, "interferometer has no measurement model");
  }
  const std::size_t count = config.sweep ? config.sweep->values.size() : config.n_values.size();
  return parallel_map(count, [&](std::size_t i) {
    const int n = config.sweep ? config.n_values.front() : config.n_values[i];
    std::optional<double> sweep_value;
    if (config.sweep) sweep_value = config.sweep->values[i];
    // The problem's QFI profile needs n >= 1; the measurement model does not depend on n.
    const ModelInstance model = build_model(config, std::max(n, 1), row_params(config, sweep_value));
    const MmseReport report = mmse_mse(*model.measurement, model.problem.prior, n, model.problem.target);
    const MseDecomposition parts =
        mmse_mse_decomposed(*model.measurement, model.problem.prior, n, model.problem.target);
    return MmseRow{n, report.mse, parts.variance, parts.squared_bias};
  });
}

std::vector<std::string> ordering_violations(const std::vector<SweepRow>& rows) {
  std::vector<std::string> out;
  for (const SweepRow& row : rows) {
    if (!(row.obb <= row.qcrb + kQcrbOrderingSlack)) {
      out.push_back("axis " + format_real(row.axis) + ": obb " + format_real(row.obb) + " exceeds qcrb " +
                    format_real(row.qcrb));
    }
    if (row.mmse && !(row.obb <= *row.mmse + kMmseOrderingSlack)) {
      out.push_back("axis " + format_real(row.axis) + ": obb " + format_real(row.obb) + " exceeds mmse " +
                    format_real(*row.mmse));
    }
  }
  return out;
}

std::string format_real(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

void write_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "axis,qcrb,obb,mmse,obb_residual\n";
  for (const SweepRow& r : rows) {
    os << format_real(r.axis) << ',' << format_real(r.qcrb) << ',' << format_real(r.obb) << ','
       << (r.mmse ? format_real(*r.mmse) : std::string()) << ',' << format_real(r.obb_residual) << '\n';
  }
}

void write_csv(std::ostream& os, const std::vector<BiasRow>& rows) {
  os << "x,bias_opt,bias_mmse\n";
  for (const BiasRow& r : rows) {
    os << format_real(r.x) << ',' << format_real(r.bias_opt) << ',' << format_real(r.bias_mmse) << '\n';
  }
}

void write_csv(std::ostream& os, const std::vector<MmseRow>& rows) {
  os << "n,mse,variance,squared_bias\n";
  for (const MmseRow& r : rows) {
    os << r.n << ',' << format_real(r.mse) << ',' << format_real(r.variance) << ',' << format_real(r.squared_bias)
       << '\n';
  }
}

namespace {

json report_skeleton(const RunConfig& config, const ReportDiagnostics& diag) {
  return json{{"config", to_json(config)},
              {"rows", json::array()},
              {"diagnostics",
               {{"max_ode_residual", diag.max_ode_residual},
                {"grid_m", diag.grid_m},
                {"wall_time_ms", diag.wall_time_ms}}},
              {"version", kVersion}};
}

}  // namespace

json emit_report(const RunConfig& config, const std::vector<SweepRow>& rows, const ReportDiagnostics& diag) {
  json doc = report_skeleton(config, diag);
  for (const SweepRow& r : rows) {
    doc["rows"].push_back({{"axis", r.axis},
                           {"qcrb", r.qcrb},
                           {"obb", r.obb},
                           {"mmse", r.mmse ? json(*r.mmse) : json(nullptr)},
                           {"obb_residual", r.obb_residual}});
  }
  return doc;
}

json emit_report(const RunConfig& config, const std::vector<BiasRow>& rows, const ReportDiagnostics& diag) {
  json doc = report_skeleton(config, diag);
  for (const BiasRow& r : rows) doc["rows"].push_back({{"x", r.x}, {"bias_opt", r.bias_opt}, {"bias_mmse", r.bias_mmse}});
  return doc;
}

json emit_report(const RunConfig& config, const std::vector<MmseRow>& rows, const ReportDiagnostics& diag) {
  json doc = report_skeleton(config, diag);
  for (const MmseRow& r : rows) {
    doc["rows"].push_back(
        {{"n", r.n}, {"mse", r.mse}, {"variance", r.variance}, {"squared_bias", r.squared_bias}});
  }
  return doc;
}

void write_text_file(const std::string& path, const std::string& contents) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error(ErrorCode::IoError, "cannot open '" + path + "' for writing");
  file << contents;
  file.flush();
  if (!file) throw Error(ErrorCode::IoError, "write to '" + path + "' failed");
}

}  // namespace qbounds::cli
