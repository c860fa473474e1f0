#include "qbounds/estimation.hpp"

#include <cmath>

#include "qbounds/numerics.hpp"

namespace qbounds {

namespace {

void require_identity_target(const TargetFunction& target) {
  const ParameterGrid& grid = target.grid();
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    if (target.f[i] != grid.node(i) || target.f_prime[i] != 1.0) {
      throw Error(ErrorCode::DomainError, "MMSE simulation only supports the identity target f(x) = x");
    }
  }
}

void require_repetitions(int n) {
  if (n < 0) throw Error(ErrorCode::DomainError, "repetition count must be >= 0");
}

}  // namespace

BinaryMeasurementModel::BinaryMeasurementModel(GridFunction p1, std::string label)
    : p1_(std::move(p1)), label_(std::move(label)) {
  const auto& v = p1_.values();
  if (!((v.array() >= 0.0).all() && (v.array() <= 1.0).all())) {
    throw Error(ErrorCode::DomainError, "outcome probability outside [0, 1] in model '" + label_ + "'");
  }
}

OutcomeDistribution outcome_pmf(const BinaryMeasurementModel& model, Eigen::Index x_index, int n) {
  if (x_index < 0 || x_index >= model.grid().size()) {
    throw Error(ErrorCode::DomainError, "grid index " + std::to_string(x_index) + " out of range");
  }
  require_repetitions(n);
  OutcomeDistribution dist;
  dist.n = n;
  dist.conditioned_on = model.grid().node(x_index);
  dist.probs.resize(std::size_t(n) + 1);
  for (int k = 0; k <= n; ++k) dist.probs[std::size_t(k)] = binomial_pmf(n, k, model.p1()[x_index]);
  return dist;
}

Eigen::MatrixXd likelihood_table(const BinaryMeasurementModel& model, int n) {
  require_repetitions(n);
  const Eigen::Index m = model.grid().size();
  Eigen::MatrixXd table(m, n + 1);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (int k = 0; k <= n; ++k) table(i, k) = binomial_pmf(n, k, model.p1()[i]);
  }
  return table;
}

GridFunction posterior(const BinaryMeasurementModel& model, const PriorDensity& prior, int n, int k) {
  require_same_grid(model.grid(), prior.grid(), "posterior");
  require_repetitions(n);
  if (k < 0 || k > n) throw Error(ErrorCode::DomainError, "outcome count outside [0, n]");
  Vector joint(prior.grid().size());
  for (Eigen::Index i = 0; i < joint.size(); ++i) {
    joint[i] = prior.density()[i] * binomial_pmf(n, k, model.p1()[i]);
  }
  const double evidence = simpson_integrate(joint, prior.grid().spacing());
  if (!(evidence > 0.0)) {
    throw Error(ErrorCode::ZeroEvidence, "outcome k=" + std::to_string(k) + " of n=" + std::to_string(n) +
                                             " is impossible under model '" + model.label() + "'");
  }
  return GridFunction(prior.grid(), joint / evidence);
}

PosteriorMeans mmse_estimates(const BinaryMeasurementModel& model, const PriorDensity& prior, int n) {
  require_same_grid(model.grid(), prior.grid(), "mmse_estimates");
  const Eigen::MatrixXd table = likelihood_table(model, n);
  const Vector weighted = simpson_weights(prior.grid()).cwiseProduct(prior.density().values());
  const Vector evidence = table.transpose() * weighted;
  const Vector first_moment = table.transpose() * weighted.cwiseProduct(prior.grid().nodes());
  const double prior_mean = prior.mean();

  PosteriorMeans means;
  for (int k = 0; k <= n; ++k) {
    const bool impossible = !(evidence[k] > 0.0);
    means.placeholder.push_back(impossible);
    means.evidence.push_back(evidence[k]);
    means.estimates.push_back(impossible ? prior_mean : first_moment[k] / evidence[k]);
  }
  return means;
}

MmseReport mmse_mse(const BinaryMeasurementModel& model, const PriorDensity& prior, int n,
                    const TargetFunction& target) {
  require_same_grid(prior.grid(), target.grid(), "mmse_mse");
  require_identity_target(target);
  const ParameterGrid& grid = prior.grid();
  const Eigen::MatrixXd table = likelihood_table(model, n);

  MmseReport report{n, mmse_estimates(model, prior, n), 0.0, GridFunction(grid)};
  const Eigen::Map<const Vector> xhat(report.means.estimates.data(), n + 1);

  Vector risk(grid.size());
  Vector bias(grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const double x = grid.node(i);
    risk[i] = table.row(i).dot((xhat.array() - x).square().matrix());
    bias[i] = table.row(i).dot(xhat) - x;
  }
  report.mse = simpson_integrate(Vector(prior.density().values().cwiseProduct(risk)), grid.spacing());
  report.bias_curve = GridFunction(grid, std::move(bias));
  return report;
}

MseDecomposition mmse_mse_decomposed(const BinaryMeasurementModel& model, const PriorDensity& prior, int n,
                                     const TargetFunction& target) {
  require_same_grid(prior.grid(), target.grid(), "mmse_mse_decomposed");
  require_identity_target(target);
  const ParameterGrid& grid = prior.grid();
  const Eigen::MatrixXd table = likelihood_table(model, n);
  const PosteriorMeans means = mmse_estimates(model, prior, n);
  const Eigen::Map<const Vector> xhat(means.estimates.data(), n + 1);

  Vector spread(grid.size());
  Vector offset(grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const double conditional_mean = table.row(i).dot(xhat);
    spread[i] = table.row(i).dot((xhat.array() - conditional_mean).square().matrix());
    offset[i] = std::pow(conditional_mean - grid.node(i), 2);
  }
  const Vector& p = prior.density().values();
  return {simpson_integrate(Vector(p.cwiseProduct(spread)), grid.spacing()),
          simpson_integrate(Vector(p.cwiseProduct(offset)), grid.spacing())};
}

}  // namespace qbounds
