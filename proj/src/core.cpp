#include "qbounds/core.hpp"

#include <cmath>
#include <string>

#include "qbounds/numerics.hpp"

namespace qbounds {

namespace {

GridFunction log_slope_by_differences(const GridFunction& density) {
  if ((density.values().array() <= 0.0).any()) {
    throw Error(ErrorCode::DomainError, "log-slope of a prior needs strictly positive samples");
  }
  const Vector logp = density.values().array().log().matrix();
  return GridFunction(density.grid(), central_derivative(logp, density.grid().spacing()));
}

}  // namespace

PriorDensity::PriorDensity(GridFunction density, std::optional<GridFunction> log_slope)
    : density_(std::move(density)),
      log_slope_(log_slope ? std::move(*log_slope) : log_slope_by_differences(density_)) {
  require_same_grid(density_.grid(), log_slope_.grid(), "PriorDensity");
  if ((density_.values().array() < 0.0).any()) {
    throw Error(ErrorCode::DomainError, "prior density has negative samples");
  }
}

double PriorDensity::mean() const {
  const Vector x = grid().nodes();
  return simpson_integrate(Vector(density_.values().cwiseProduct(x)), grid().spacing());
}

double PriorDensity::variance() const {
  const double mu = mean();
  const Vector dx = (grid().nodes().array() - mu).matrix();
  return simpson_integrate(Vector(density_.values().cwiseProduct(dx.cwiseAbs2())), grid().spacing());
}

TargetFunction::TargetFunction(GridFunction f_in, GridFunction f_prime_in, GridFunction f_double_prime_in)
    : f(std::move(f_in)), f_prime(std::move(f_prime_in)), f_double_prime(std::move(f_double_prime_in)) {
  require_same_grid(f.grid(), f_prime.grid(), "TargetFunction");
  require_same_grid(f.grid(), f_double_prime.grid(), "TargetFunction");
}

TargetFunction TargetFunction::identity(const ParameterGrid& grid) {
  return TargetFunction(GridFunction(grid, grid.nodes()), GridFunction(grid, Vector::Ones(grid.size())),
                        GridFunction(grid));
}

TargetFunction TargetFunction::from_samples(GridFunction f) {
  const double h = f.grid().spacing();
  GridFunction fp(f.grid(), central_derivative(f.values(), h));
  GridFunction fpp(f.grid(), central_second_derivative(f.values(), h));
  return TargetFunction(std::move(f), std::move(fp), std::move(fpp));
}

QfiProfile::QfiProfile(GridFunction j_base, GridFunction j_prime, int repetitions)
    : j_base_(std::move(j_base)), j_prime_(std::move(j_prime)), repetitions_(repetitions) {
  require_same_grid(j_base_.grid(), j_prime_.grid(), "QfiProfile");
  if (repetitions_ < 1) {
    throw Error(ErrorCode::DomainError, "repetition count must be positive, got " + std::to_string(repetitions_));
  }
}

QfiProfile QfiProfile::constant(const ParameterGrid& grid, double j, int repetitions) {
  return QfiProfile(GridFunction(grid, Vector::Constant(grid.size(), j)), GridFunction(grid), repetitions);
}

QfiProfile QfiProfile::from_samples(GridFunction j_base, int repetitions) {
  GridFunction jp(j_base.grid(), central_derivative(j_base.values(), j_base.grid().spacing()));
  return QfiProfile(std::move(j_base), std::move(jp), repetitions);
}

QfiProfile QfiProfile::with_repetitions(int repetitions) const {
  return QfiProfile(j_base_, j_prime_, repetitions);
}

PriorDensity make_uniform_prior(double a1, double a2, Eigen::Index m) {
  const ParameterGrid grid(a1, a2, m);
  return PriorDensity(GridFunction(grid, Vector::Constant(m, 1.0 / (a2 - a1))), GridFunction(grid));
}

void validate_problem(const EstimationProblem& problem) {
  const ParameterGrid& grid = problem.grid();
  require_same_grid(grid, problem.target.grid(), "validate_problem(target)");
  require_same_grid(grid, problem.qfi.grid(), "validate_problem(qfi)");

  const Vector& j = problem.qfi.j_base().values();
  for (Eigen::Index i = 0; i < j.size(); ++i) {
    if (!(j[i] > 0.0) || !std::isfinite(j[i])) {
      throw Error(ErrorCode::NonPositiveQfi,
                  "J(x) = " + std::to_string(j[i]) + " at x = " + std::to_string(grid.node(i)));
    }
  }
  const double mass = simpson_integrate(problem.prior.density());
  if (!(std::abs(mass - 1.0) <= kPriorNormalizationTolerance)) {
    throw Error(ErrorCode::UnnormalizedPrior, "prior integrates to " + std::to_string(mass));
  }
}

}  // namespace qbounds
