#include "qbounds/numerics.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <limits>

namespace qbounds {

double simpson_integrate(const GridFunction& f) {
  return simpson_integrate(f.values(), f.grid().spacing());
}

Vector simpson_weights(const ParameterGrid& grid) {
  const Eigen::Index m = grid.size();
  Vector w(m);
  for (Eigen::Index i = 0; i < m; ++i) w[i] = (i % 2 == 1) ? 4.0 : 2.0;
  w[0] = 1.0;
  w[m - 1] = 1.0;
  return w * (grid.spacing() / 3.0);
}

GridFunction central_derivative(const GridFunction& f) {
  return GridFunction(f.grid(), central_derivative(f.values(), f.grid().spacing()));
}

GridFunction fourth_order_derivative(const GridFunction& f) {
  return GridFunction(f.grid(), fourth_order_derivative(f.values(), f.grid().spacing()));
}

double binomial_log_pmf(int n, int k, double p1) {
  if (n < 0 || k < 0 || k > n) {
    throw Error(ErrorCode::DomainError,
                "binomial outcome k=" + std::to_string(k) + " outside [0, " + std::to_string(n) + "]");
  }
  if (!(p1 >= 0.0 && p1 <= 1.0)) {
    throw Error(ErrorCode::DomainError, "success probability " + std::to_string(p1) + " outside [0, 1]");
  }
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  if (p1 == 0.0) return k == 0 ? 0.0 : kNegInf;
  if (p1 == 1.0) return k == n ? 0.0 : kNegInf;

  using boost::math::lgamma;
  // Grouped so that (k, p) and (n-k, 1-p) produce bitwise-equal coefficients.
  const double log_choose = lgamma(double(n) + 1.0) - (lgamma(double(k) + 1.0) + lgamma(double(n - k) + 1.0));
  // Each log is taken of whichever of p, 1-p is exact, so the (p, 1-p) and
  // (1-p, p) calls evaluate the same two logarithms.
  const double q1 = 1.0 - p1;
  const double log_p = p1 < 0.5 ? std::log(p1) : std::log1p(-q1);
  const double log_q = q1 < 0.5 ? std::log(q1) : std::log1p(-p1);
  const double successes = k > 0 ? double(k) * log_p : 0.0;
  const double failures = n - k > 0 ? double(n - k) * log_q : 0.0;
  return log_choose + (successes + failures);
}

double binomial_pmf(int n, int k, double p1) {
  return std::exp(binomial_log_pmf(n, k, p1));
}

}  // namespace qbounds
