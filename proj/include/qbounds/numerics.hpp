#pragma once

#include <Eigen/Core>

#include <cmath>
#include <string>

#include "qbounds/error.hpp"
#include "qbounds/grid.hpp"

namespace qbounds {

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------

/// Composite Simpson rule over equally spaced samples. The sample count must be
/// odd and at least 3; the rule is exact for cubics on every panel pair.
template <typename Derived>
typename Derived::Scalar simpson_integrate(const Eigen::MatrixBase<Derived>& samples,
                                           typename Derived::Scalar spacing) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index m = samples.size();
  if (m < 3 || m % 2 == 0) {
    throw Error(ErrorCode::InvalidGrid, "Simpson rule needs an odd sample count >= 3, got " + std::to_string(m));
  }
  const Eigen::Index pairs = (m - 1) / 2;
  const Scalar odd = samples(Eigen::seqN(1, pairs, 2)).sum();
  const Scalar even = pairs > 1 ? Scalar(samples(Eigen::seqN(2, pairs - 1, 2)).sum()) : Scalar(0);
  return spacing / Scalar(3) * (samples(0) + samples(m - 1) + Scalar(4) * odd + Scalar(2) * even);
}

double simpson_integrate(const GridFunction& f);

/// Simpson weights w such that w.dot(values) equals simpson_integrate(values, h).
Vector simpson_weights(const ParameterGrid& grid);

// ---------------------------------------------------------------------------
// Finite differences
// ---------------------------------------------------------------------------

/// First derivative: second-order central differences in the interior and
/// second-order one-sided differences at both ends.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> central_derivative(
    const Eigen::MatrixBase<Derived>& u, typename Derived::Scalar h) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index m = u.size();
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> du(m);
  if (m < 3) throw Error(ErrorCode::InvalidGrid, "derivative stencil needs at least 3 samples");
  const Scalar two_h = Scalar(2) * h;
  du(Eigen::seq(1, m - 2)) = (u(Eigen::seq(2, m - 1)) - u(Eigen::seq(0, m - 3))) / two_h;
  du(0) = (Scalar(-3) * u(0) + Scalar(4) * u(1) - u(2)) / two_h;
  du(m - 1) = (Scalar(3) * u(m - 1) - Scalar(4) * u(m - 2) + u(m - 3)) / two_h;
  return du;
}

GridFunction central_derivative(const GridFunction& f);

/// First derivative accurate to fourth order: five-point central stencil in
/// the interior, five-point one-sided stencils on the two nodes nearest each end.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> fourth_order_derivative(
    const Eigen::MatrixBase<Derived>& u, typename Derived::Scalar h) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index m = u.size();
  if (m < 5) throw Error(ErrorCode::InvalidGrid, "fourth-order stencil needs at least 5 samples");
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> du(m);
  const Scalar twelve_h = Scalar(12) * h;
  du(Eigen::seq(2, m - 3)) = (u(Eigen::seq(0, m - 5)) - Scalar(8) * u(Eigen::seq(1, m - 4)) +
                              Scalar(8) * u(Eigen::seq(3, m - 2)) - u(Eigen::seq(4, m - 1))) /
                             twelve_h;
  du(0) = (Scalar(-25) * u(0) + Scalar(48) * u(1) - Scalar(36) * u(2) + Scalar(16) * u(3) - Scalar(3) * u(4)) /
          twelve_h;
  du(1) = (Scalar(-3) * u(0) - Scalar(10) * u(1) + Scalar(18) * u(2) - Scalar(6) * u(3) + u(4)) / twelve_h;
  du(m - 1) = (Scalar(25) * u(m - 1) - Scalar(48) * u(m - 2) + Scalar(36) * u(m - 3) - Scalar(16) * u(m - 4) +
               Scalar(3) * u(m - 5)) /
              twelve_h;
  du(m - 2) = (Scalar(3) * u(m - 1) + Scalar(10) * u(m - 2) - Scalar(18) * u(m - 3) + Scalar(6) * u(m - 4) -
               u(m - 5)) /
              twelve_h;
  return du;
}

GridFunction fourth_order_derivative(const GridFunction& f);

/// Second derivative: central three-point stencil in the interior, second-order
/// four-point one-sided stencil at the ends.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> central_second_derivative(
    const Eigen::MatrixBase<Derived>& u, typename Derived::Scalar h) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index m = u.size();
  if (m < 4) throw Error(ErrorCode::InvalidGrid, "second-derivative stencil needs at least 4 samples");
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> d2u(m);
  const Scalar h2 = h * h;
  d2u(Eigen::seq(1, m - 2)) =
      (u(Eigen::seq(2, m - 1)) - Scalar(2) * u(Eigen::seq(1, m - 2)) + u(Eigen::seq(0, m - 3))) / h2;
  d2u(0) = (Scalar(2) * u(0) - Scalar(5) * u(1) + Scalar(4) * u(2) - u(3)) / h2;
  d2u(m - 1) = (Scalar(2) * u(m - 1) - Scalar(5) * u(m - 2) + Scalar(4) * u(m - 3) - u(m - 4)) / h2;
  return d2u;
}

// ---------------------------------------------------------------------------
// Tridiagonal systems
// ---------------------------------------------------------------------------

/// Row i reads sub[i-1]*u[i-1] + diag[i]*u[i] + sup[i]*u[i+1] = rhs[i].
template <typename Scalar>
struct TridiagonalSystem {
  using VectorType = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  VectorType sub;
  VectorType diag;
  VectorType sup;
  VectorType rhs;

  explicit TridiagonalSystem(Eigen::Index m)
      : sub(VectorType::Zero(m > 0 ? m - 1 : 0)),
        diag(VectorType::Zero(m)),
        sup(VectorType::Zero(m > 0 ? m - 1 : 0)),
        rhs(VectorType::Zero(m)) {}

  Eigen::Index size() const noexcept { return diag.size(); }
};

inline constexpr double kPivotTolerance = 1e-14;

/// Thomas algorithm without pivoting. Throws SingularSystem when a pivot drops
/// below kPivotTolerance times the magnitude of its row.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> solve_tridiagonal(const TridiagonalSystem<Scalar>& sys) {
  using std::abs;
  using VectorType = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  const Eigen::Index m = sys.size();
  if (m == 0 || sys.sub.size() != m - 1 || sys.sup.size() != m - 1 || sys.rhs.size() != m) {
    throw Error(ErrorCode::DomainError, "tridiagonal system has inconsistent band lengths");
  }
  auto row_scale = [&](Eigen::Index i) {
    Scalar s = abs(sys.diag(i));
    if (i > 0) s += abs(sys.sub(i - 1));
    if (i + 1 < m) s += abs(sys.sup(i));
    return s;
  };
  auto check_pivot = [&](Scalar pivot, Eigen::Index i) {
    const Scalar scale = row_scale(i);
    if (!(abs(pivot) > Scalar(kPivotTolerance) * scale) || scale == Scalar(0)) {
      throw Error(ErrorCode::SingularSystem, "pivot breakdown at row " + std::to_string(i));
    }
  };

  VectorType c(m);  // modified super-diagonal
  VectorType d(m);  // modified right-hand side
  check_pivot(sys.diag(0), 0);
  c(0) = m > 1 ? sys.sup(0) / sys.diag(0) : Scalar(0);
  d(0) = sys.rhs(0) / sys.diag(0);
  for (Eigen::Index i = 1; i < m; ++i) {
    const Scalar pivot = sys.diag(i) - sys.sub(i - 1) * c(i - 1);
    check_pivot(pivot, i);
    c(i) = i + 1 < m ? sys.sup(i) / pivot : Scalar(0);
    d(i) = (sys.rhs(i) - sys.sub(i - 1) * d(i - 1)) / pivot;
  }
  VectorType u(m);
  u(m - 1) = d(m - 1);
  for (Eigen::Index i = m - 2; i >= 0; --i) u(i) = d(i) - c(i) * u(i + 1);
  return u;
}

// ---------------------------------------------------------------------------
// Binomial law
// ---------------------------------------------------------------------------

/// log of C(n,k) p^k (1-p)^(n-k); -infinity for impossible outcomes.
double binomial_log_pmf(int n, int k, double p1);

/// C(n,k) p^k (1-p)^(n-k) evaluated in the log domain.
double binomial_pmf(int n, int k, double p1);

}  // namespace qbounds
