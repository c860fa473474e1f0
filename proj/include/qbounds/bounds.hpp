#pragma once

#include <optional>
#include <string_view>

#include "qbounds/core.hpp"

namespace qbounds {

inline constexpr Eigen::Index kDefaultGridPoints = 4001;
inline constexpr double kOdeResidualTolerance = 1e-6;

enum class BoundMethod { BayesianQcrb, ObbClosedForm, ObbVariational };

std::string_view to_string(BoundMethod method) noexcept;

struct SolverDiagnostics {
  /// Max interior residual of the bias equation relative to max|f'| n J.
  /// Only set for the variational bound.
  std::optional<double> ode_residual_max;
  Eigen::Index grid_m = 0;
  /// Set when ode_residual_max exceeds kOdeResidualTolerance. The bound is still
  /// valid in that case, just not optimal.
  bool residual_warning = false;
};

/// A lower bound on the mean square error, in squared parameter units.
struct BoundReport {
  double value = 0.0;
  BoundMethod method = BoundMethod::BayesianQcrb;
  std::optional<GridFunction> bias;
  SolverDiagnostics diagnostics;
};

/// Integral of p(x) { [f'(x) + b'(x)]^2 / (n J(x)) + b(x)^2 } over the support.
/// Any bias b yields a valid lower bound on the MSE of every estimator.
double bound_functional(const EstimationProblem& problem, const GridFunction& bias, const GridFunction& bias_prime);

/// The b = 0 value of the functional: integral of p f'^2 / (n J).
BoundReport bayesian_qcrb(const EstimationProblem& problem);

/// Optimal bias for f(x) = x, uniform prior on (0, a) and constant effective
/// information j:
///   b(x) = [cosh(sqrt(j)(a - x)) - cosh(sqrt(j) x)] / (sqrt(j) sinh(sqrt(j) a)),
/// evaluated in an overflow-free exponential form. `grid` must span [0, a].
GridFunction optimal_bias_closed_form(double j, double a, const ParameterGrid& grid);

/// 1/j - 2 tanh(a sqrt(j) / 2) / (a j^{3/2}) with the bias sampled on an
/// m-node grid over [0, a].
BoundReport obb_closed_form(double j_effective, double a, Eigen::Index m = kDefaultGridPoints);

/// Just the scalar of obb_closed_form, stable for both small and large a sqrt(j).
double obb_closed_form_value(double j_effective, double a);

/// Solves the optimal-bias boundary-value problem
///   b'' + c b' - J b = -f'' - c f',   c = d/dx ln(p / J),   J = n J_base,
///   b'(a1) = -f'(a1),  b'(a2) = -f'(a2)
/// with second-order central differences; the Neumann data enter through
/// ghost nodes folded into the first and last rows.
GridFunction solve_optimal_bias(const EstimationProblem& problem);

/// Max over interior nodes of |b'' + c b' - J b + f'' + c f'| (central
/// differences on `bias`) divided by max|f'| J. Falls back to an absolute
/// residual when f' vanishes identically.
double bias_ode_residual(const EstimationProblem& problem, const GridFunction& bias);

/// The functional evaluated at the solved optimal bias.
BoundReport obb_variational(const EstimationProblem& problem);

}  // namespace qbounds
