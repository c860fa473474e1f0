#include "qbounds/models.hpp"

#include <boost/math/tools/roots.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

namespace qbounds {

namespace {

EstimationProblem constant_qfi_problem(Support support, Eigen::Index m, double j, int n) {
  PriorDensity prior = make_uniform_prior(support.a1, support.a2, m);
  const ParameterGrid grid = prior.grid();
  return EstimationProblem{std::move(prior), TargetFunction::identity(grid), QfiProfile::constant(grid, j, n)};
}

}  // namespace

ModelInstance noon_model(const NoonParams& params, Support support, Eigen::Index m, int n) {
  if (params.particles < 1) throw Error(ErrorCode::DomainError, "NOON state needs N >= 1");
  const double N = params.particles;
  EstimationProblem problem = constant_qfi_problem(support, m, N * N, n);
  GridFunction p1 = sample(problem.grid(), [N](double x) { return std::pow(std::sin(0.5 * N * x), 2); });
  return {std::move(problem), BinaryMeasurementModel(std::move(p1), "noon")};
}

DephasingParams DephasingParams::from_gamma(double gamma) {
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
    throw Error(ErrorCode::DomainError, "dephasing rate gamma must be finite and >= 0");
  }
  return DephasingParams(gamma, std::exp(-gamma));
}

DephasingParams DephasingParams::from_eta(double eta) {
  if (!(eta > 0.0 && eta <= 1.0)) throw Error(ErrorCode::DomainError, "eta must lie in (0, 1]");
  return DephasingParams(-std::log(eta), eta);
}

ModelInstance dephasing_model(const DephasingParams& params, Support support, Eigen::Index m, int n) {
  const double eta = params.eta();
  if (!(eta > 0.0)) throw Error(ErrorCode::DomainError, "eta must be positive");
  EstimationProblem problem = constant_qfi_problem(support, m, eta * eta, n);
  GridFunction p1 = sample(problem.grid(), [eta](double x) { return 0.5 * (1.0 - eta * std::cos(x)); });
  return {std::move(problem), BinaryMeasurementModel(std::move(p1), "dephasing")};
}

double cat_amplitude_squared(double n_b) {
  if (!(n_b >= 0.0) || !std::isfinite(n_b)) throw Error(ErrorCode::DomainError, "n_b must be finite and >= 0");
  if (n_b == 0.0) return 0.0;
  auto excess = [n_b](double u) { return u * std::tanh(u) - n_b; };
  // u tanh u >= u - 1 and u tanh u <= u, so the root lies in [n_b, n_b + 1];
  // the lower end is pulled to 0 since u tanh u ~ u^2 for small u.
  double lo = 0.0;
  double hi = n_b + 1.0;
  if (!(excess(lo) < 0.0 && excess(hi) > 0.0)) {
    throw Error(ErrorCode::ConvergenceFailure, "could not bracket u tanh u = " + std::to_string(n_b));
  }
  std::uintmax_t iterations = 200;
  const auto tol = [](double a, double b) { return std::abs(b - a) <= 1e-14 * std::max(1.0, std::abs(a)); };
  const auto [left, right] = boost::math::tools::toms748_solve(excess, lo, hi, tol, iterations);
  if (iterations >= 200) throw Error(ErrorCode::ConvergenceFailure, "root finder did not converge");
  return 0.5 * (left + right);
}

InterferometerParams InterferometerParams::from_photon_numbers(double n_a, double n_b) {
  if (!(n_a >= 0.0) || !std::isfinite(n_a)) throw Error(ErrorCode::DomainError, "n_a must be finite and >= 0");
  return InterferometerParams{n_a, n_b, cat_amplitude_squared(n_b)};
}

double interferometer_qfi(double n_a, double n_b) {
  const InterferometerParams p = InterferometerParams::from_photon_numbers(n_a, n_b);
  return 2.0 * p.n_a * p.n_b + p.n_a + p.n_b + 2.0 * p.n_a * p.alpha_sq;
}

ModelInstance interferometer_problem(const InterferometerParams& params, Support support, Eigen::Index m, int n) {
  const double j = interferometer_qfi(params.n_a, params.n_b);
  if (!(j > 0.0)) throw Error(ErrorCode::NonPositiveQfi, "interferometer QFI vanishes for n_a = n_b = 0");
  return {constant_qfi_problem(support, m, j, n), std::nullopt};
}

double field_qfi(double field, double x) {
  const double s2 = std::pow(std::sin(0.5 * field), 2);
  const double c2 = std::pow(std::cos(0.5 * field), 2);
  return 4.0 * s2 * (1.0 - c2 * std::pow(std::sin(x), 2));
}

ModelInstance field_model(const FieldParams& params, Support support, Eigen::Index m, int n) {
  const double s2 = std::pow(std::sin(0.5 * params.field), 2);
  const double c2 = std::pow(std::cos(0.5 * params.field), 2);
  if (!(s2 > 0.0)) throw Error(ErrorCode::DomainError, "sin(B/2) = 0 makes the QFI vanish");

  PriorDensity prior = make_uniform_prior(support.a1, support.a2, m);
  const ParameterGrid grid = prior.grid();
  GridFunction j_base = sample(grid, [&](double x) { return field_qfi(params.field, x); });
  if (!(j_base.values().array() > 0.0).all()) {
    throw Error(ErrorCode::DomainError, "field QFI vanishes on the support");
  }
  GridFunction j_prime = sample(grid, [&](double x) { return -4.0 * s2 * c2 * std::sin(2.0 * x); });
  GridFunction p1 = sample(grid, [&](double x) { return s2 * std::pow(std::sin(x), 2); });

  EstimationProblem problem{std::move(prior), TargetFunction::identity(grid),
                            QfiProfile(std::move(j_base), std::move(j_prime), n)};
  return {std::move(problem), BinaryMeasurementModel(std::move(p1), "field")};
}

}  // namespace qbounds
