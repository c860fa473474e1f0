#include "qbounds/bounds.hpp"

#include <cmath>
#include <string>

#include "qbounds/numerics.hpp"

namespace qbounds {

std::string_view to_string(BoundMethod method) noexcept {
  switch (method) {
    case BoundMethod::BayesianQcrb: return "bayesian_qcrb";
    case BoundMethod::ObbClosedForm: return "obb_closed_form";
    case BoundMethod::ObbVariational: return "obb_variational";
  }
  return "unknown";
}

namespace {

// d/dx ln(p / J) at every node.
Vector drift(const EstimationProblem& problem) {
  return problem.prior.log_slope().values() - problem.qfi.log_slope();
}

double residual_scale(const EstimationProblem& problem) {
  const double scale =
      problem.target.f_prime.values().cwiseAbs().cwiseProduct(problem.qfi.effective()).maxCoeff();
  return scale > 0.0 ? scale : 1.0;
}

}  // namespace

double bound_functional(const EstimationProblem& problem, const GridFunction& bias, const GridFunction& bias_prime) {
  require_same_grid(problem.grid(), bias.grid(), "bound_functional(bias)");
  require_same_grid(problem.grid(), bias_prime.grid(), "bound_functional(bias_prime)");
  const auto slope = (problem.target.f_prime.values() + bias_prime.values()).array();
  const Vector integrand = (problem.prior.density().values().array() *
                            (slope.square() / problem.qfi.effective().array() + bias.values().array().square()))
                               .matrix();
  return simpson_integrate(integrand, problem.grid().spacing());
}

BoundReport bayesian_qcrb(const EstimationProblem& problem) {
  validate_problem(problem);
  BoundReport report;
  report.method = BoundMethod::BayesianQcrb;
  report.value = bound_functional(problem, GridFunction(problem.grid()), GridFunction(problem.grid()));
  report.diagnostics.grid_m = problem.grid().size();
  return report;
}

GridFunction optimal_bias_closed_form(double j, double a, const ParameterGrid& grid) {
  if (!(j > 0.0) || !(a > 0.0)) {
    throw Error(ErrorCode::DomainError, "closed-form bias needs j > 0 and a > 0");
  }
  if (grid.a1() != 0.0 || std::abs(grid.a2() - a) > 1e-12 * a) {
    throw Error(ErrorCode::DomainError, "closed-form bias grid must span [0, a]");
  }
  const double s = std::sqrt(j);
  const double denom = -s * std::expm1(-2.0 * s * a);
  return sample(grid, [&](double x) {
    return (std::exp(-s * x) + std::exp(-s * (2.0 * a - x)) - std::exp(s * (x - a)) - std::exp(-s * (x + a))) /
           denom;
  });
}

double obb_closed_form_value(double j_effective, double a) {
  if (!(j_effective > 0.0) || !(a > 0.0) || !std::isfinite(j_effective) || !std::isfinite(a)) {
    throw Error(ErrorCode::DomainError, "closed-form bound needs positive finite j and a");
  }
  // 1/j - 2 tanh(y) / (a j^{3/2}) == (1 - tanh(y)/y) / j with y = a sqrt(j) / 2.
  const double y = 0.5 * a * std::sqrt(j_effective);
  double shortfall;
  if (y < 1e-2) {
    const double y2 = y * y;
    shortfall = y2 * (1.0 / 3.0 - y2 * (2.0 / 15.0 - y2 * (17.0 / 315.0)));
  } else {
    shortfall = 1.0 - std::tanh(y) / y;
  }
  return shortfall / j_effective;
}

BoundReport obb_closed_form(double j_effective, double a, Eigen::Index m) {
  BoundReport report;
  report.method = BoundMethod::ObbClosedForm;
  report.value = obb_closed_form_value(j_effective, a);
  const ParameterGrid grid(0.0, a, m);
  report.bias = optimal_bias_closed_form(j_effective, a, grid);
  report.diagnostics.grid_m = m;
  return report;
}

GridFunction solve_optimal_bias(const EstimationProblem& problem) {
  validate_problem(problem);
  const ParameterGrid& grid = problem.grid();
  const Eigen::Index m = grid.size();
  const double h = grid.spacing();
  const double inv_h2 = 1.0 / (h * h);
  const double inv_2h = 0.5 / h;

  const Vector c = drift(problem);
  const Vector j = problem.qfi.effective();
  const Vector& fp = problem.target.f_prime.values();
  const Vector& fpp = problem.target.f_double_prime.values();

  TridiagonalSystem<double> sys(m);
  Vector lower(m), upper(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    lower[i] = inv_h2 - c[i] * inv_2h;
    upper[i] = inv_h2 + c[i] * inv_2h;
    sys.diag[i] = -2.0 * inv_h2 - j[i];
    sys.rhs[i] = -fpp[i] - c[i] * fp[i];
  }
  for (Eigen::Index i = 1; i + 1 < m; ++i) {
    sys.sub[i - 1] = lower[i];
    sys.sup[i] = upper[i];
  }
  // Ghost nodes: b[-1] = b[1] + 2h f'(a1), b[m] = b[m-2] - 2h f'(a2).
  sys.sup[0] = lower[0] + upper[0];
  sys.rhs[0] -= lower[0] * 2.0 * h * fp[0];
  sys.sub[m - 2] = lower[m - 1] + upper[m - 1];
  sys.rhs[m - 1] += upper[m - 1] * 2.0 * h * fp[m - 1];

  return GridFunction(grid, solve_tridiagonal(sys));
}

double bias_ode_residual(const EstimationProblem& problem, const GridFunction& bias) {
  require_same_grid(problem.grid(), bias.grid(), "bias_ode_residual");
  const Eigen::Index m = problem.grid().size();
  const double h = problem.grid().spacing();
  const Vector c = drift(problem);
  const Vector j = problem.qfi.effective();
  const Vector& fp = problem.target.f_prime.values();
  const Vector& fpp = problem.target.f_double_prime.values();
  const Vector& b = bias.values();

  double worst = 0.0;
  for (Eigen::Index i = 1; i + 1 < m; ++i) {
    const double d2 = (b[i + 1] - 2.0 * b[i] + b[i - 1]) / (h * h);
    const double d1 = (b[i + 1] - b[i - 1]) / (2.0 * h);
    const double r = d2 + c[i] * d1 - j[i] * b[i] + fpp[i] + c[i] * fp[i];
    worst = std::max(worst, std::abs(r));
  }
  return worst / residual_scale(problem);
}

BoundReport obb_variational(const EstimationProblem& problem) {
  GridFunction bias = solve_optimal_bias(problem);
  const GridFunction bias_prime = fourth_order_derivative(bias);

  BoundReport report;
  report.method = BoundMethod::ObbVariational;
  report.value = bound_functional(problem, bias, bias_prime);
  report.diagnostics.grid_m = problem.grid().size();
  report.diagnostics.ode_residual_max = bias_ode_residual(problem, bias);
  report.diagnostics.residual_warning = *report.diagnostics.ode_residual_max > kOdeResidualTolerance;
  report.bias = std::move(bias);
  return report;
}

}  // namespace qbounds
