#pragma once

#include <string>
#include <vector>

#include "qbounds/core.hpp"

namespace qbounds {

/// Two-outcome measurement: probability of outcome 1 as a function of x.
class BinaryMeasurementModel {
 public:
  BinaryMeasurementModel(GridFunction p1, std::string label);

  const GridFunction& p1() const noexcept { return p1_; }
  const std::string& label() const noexcept { return label_; }
  const ParameterGrid& grid() const noexcept { return p1_.grid(); }

 private:
  GridFunction p1_;
  std::string label_;
};

/// Law of the number k of 1-outcomes in n repetitions at a fixed x.
struct OutcomeDistribution {
  int n = 0;
  std::vector<double> probs;
  double conditioned_on = 0.0;
};

OutcomeDistribution outcome_pmf(const BinaryMeasurementModel& model, Eigen::Index x_index, int n);

/// Likelihood table L(i, k) = P(k | x_i) for k = 0..n.
Eigen::MatrixXd likelihood_table(const BinaryMeasurementModel& model, int n);

/// Posterior density of x after observing k ones in n shots. Throws
/// ZeroEvidence when the outcome has zero marginal probability.
GridFunction posterior(const BinaryMeasurementModel& model, const PriorDensity& prior, int n, int k);

struct PosteriorMeans {
  std::vector<double> estimates;  ///< x̂(k), indexed by k
  std::vector<double> evidence;   ///< marginal probability of k
  /// True where the outcome is impossible; the estimate is then the prior mean
  /// and carries zero weight in any risk.
  std::vector<bool> placeholder;
};

PosteriorMeans mmse_estimates(const BinaryMeasurementModel& model, const PriorDensity& prior, int n);

struct MmseReport {
  int n = 0;
  PosteriorMeans means;
  double mse = 0.0;
  /// E[x̂ | x] - x at every node.
  GridFunction bias_curve;
};

/// Bayes risk of the posterior-mean estimator of x, computed directly as
/// the prior average of sum_k (x̂(k) - x)^2 P(k | x). `target` must be f(x) = x.
MmseReport mmse_mse(const BinaryMeasurementModel& model, const PriorDensity& prior, int n,
                    const TargetFunction& target);

/// The same risk split into conditional variance and squared bias.
struct MseDecomposition {
  double variance = 0.0;
  double squared_bias = 0.0;
  double total() const noexcept { return variance + squared_bias; }
};

MseDecomposition mmse_mse_decomposed(const BinaryMeasurementModel& model, const PriorDensity& prior, int n,
                                     const TargetFunction& target);

}  // namespace qbounds
