#pragma once

#include <optional>

#include "qbounds/grid.hpp"

namespace qbounds {

inline constexpr double kPriorNormalizationTolerance = 1e-10;

/// Prior density p(x) sampled inside its support. Values outside the grid are
/// zero by construction, so every integral runs over the grid only.
class PriorDensity {
 public:
  /// `log_slope` is d/dx ln p(x). When omitted it is estimated with central
  /// differences (one-sided at the ends).
  explicit PriorDensity(GridFunction density, std::optional<GridFunction> log_slope = std::nullopt);

  const GridFunction& density() const noexcept { return density_; }
  const GridFunction& log_slope() const noexcept { return log_slope_; }
  const ParameterGrid& grid() const noexcept { return density_.grid(); }

  double mean() const;
  double variance() const;

 private:
  GridFunction density_;
  GridFunction log_slope_;
};

/// The function f(x) being estimated together with f' and f''.
struct TargetFunction {
  GridFunction f;
  GridFunction f_prime;
  GridFunction f_double_prime;

  TargetFunction(GridFunction f, GridFunction f_prime, GridFunction f_double_prime);

  /// f(x) = x exactly.
  static TargetFunction identity(const ParameterGrid& grid);
  /// Derivatives filled in by central differences.
  static TargetFunction from_samples(GridFunction f);

  const ParameterGrid& grid() const noexcept { return f.grid(); }
};

/// Single-shot quantum Fisher information J(x) and its slope, with the
/// number of independent repetitions n.
class QfiProfile {
 public:
  QfiProfile(GridFunction j_base, GridFunction j_prime, int repetitions);

  static QfiProfile constant(const ParameterGrid& grid, double j, int repetitions);
  /// j_prime filled in by central differences.
  static QfiProfile from_samples(GridFunction j_base, int repetitions);

  const GridFunction& j_base() const noexcept { return j_base_; }
  const GridFunction& j_prime() const noexcept { return j_prime_; }
  int repetitions() const noexcept { return repetitions_; }
  const ParameterGrid& grid() const noexcept { return j_base_.grid(); }

  /// n * J(x) at every node.
  Vector effective() const { return double(repetitions_) * j_base_.values(); }
  /// d/dx ln J(x); independent of n.
  Vector log_slope() const { return j_prime_.values().cwiseQuotient(j_base_.values()); }

  QfiProfile with_repetitions(int repetitions) const;

 private:
  GridFunction j_base_;
  GridFunction j_prime_;
  int repetitions_;
};

/// Everything the bound functional needs, on one shared grid.
struct EstimationProblem {
  PriorDensity prior;
  TargetFunction target;
  QfiProfile qfi;

  const ParameterGrid& grid() const noexcept { return prior.grid(); }
};

PriorDensity make_uniform_prior(double a1, double a2, Eigen::Index m);

/// Checks grid agreement, prior normalization and positivity of the QFI.
/// Throws GridMismatch, UnnormalizedPrior or NonPositiveQfi.
void validate_problem(const EstimationProblem& problem);

}  // namespace qbounds
