#include "doctest.h"

#include <cmath>
#include <numbers>

#include "qbounds/core.hpp"
#include "qbounds/models.hpp"
#include "qbounds/numerics.hpp"

using namespace qbounds;
constexpr double pi = std::numbers::pi;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected qbounds::Error");
  return ErrorCode::IoError;
}

}  // namespace

TEST_CASE("uniform prior: density and normalization") {
  const PriorDensity unit = make_uniform_prior(0.0, 1.0, 3);
  CHECK(unit.density().values() == Vector::Ones(3));

  const PriorDensity narrow = make_uniform_prior(0.0, pi / 10.0, 4001);
  CHECK((narrow.density().values().array() - 10.0 / pi).abs().maxCoeff() < 1e-14);
  CHECK(narrow.density()[0] == doctest::Approx(3.18310).epsilon(1e-5));

  const PriorDensity wide = make_uniform_prior(0.0, pi, 2001);
  CHECK(std::abs(simpson_integrate(wide.density()) - 1.0) < 1e-12);
  CHECK(wide.log_slope().values().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("uniform prior: normalization for arbitrary supports (property)") {
  for (double a1 : {-3.0, -0.1, 0.0, 2.5}) {
    for (double width : {1e-3, 0.7, pi, 40.0}) {
      for (Eigen::Index m : {3, 5, 101, 4001}) {
        CHECK(std::abs(simpson_integrate(make_uniform_prior(a1, a1 + width, m).density()) - 1.0) < 1e-12);
      }
    }
  }
}

TEST_CASE("uniform prior: invalid inputs") {
  CHECK(code_of([] { make_uniform_prior(1.0, 1.0, 11); }) == ErrorCode::InvalidSupport);
  CHECK(code_of([] { make_uniform_prior(2.0, 1.0, 11); }) == ErrorCode::InvalidSupport);
  CHECK(code_of([] { make_uniform_prior(0.0, 1.0, 10); }) == ErrorCode::InvalidGrid);
  CHECK(code_of([] { make_uniform_prior(0.0, 1.0, 1); }) == ErrorCode::InvalidGrid);
}

TEST_CASE("grid nodes are reproducible") {
  const ParameterGrid grid(-0.3, 1.9, 4001);
  const double h = (1.9 - -0.3) / 4000.0;
  for (Eigen::Index i = 0; i < grid.size(); i += 37) CHECK(grid.node(i) == -0.3 + double(i) * h);
  CHECK(std::abs(grid.node(4000) - 1.9) <= 4.0 * std::numeric_limits<double>::epsilon());
}

TEST_CASE("identity target has exact derivatives") {
  const ParameterGrid grid(0.0, 2.0, 21);
  const TargetFunction t = TargetFunction::identity(grid);
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    CHECK(t.f[i] == grid.node(i));
    CHECK(t.f_prime[i] == 1.0);
    CHECK(t.f_double_prime[i] == 0.0);
  }
}

TEST_CASE("difference fallbacks for user-supplied profiles") {
  const ParameterGrid grid(0.0, 1.0, 801);
  const TargetFunction t = TargetFunction::from_samples(sample(grid, [](double x) { return std::sin(x); }));
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    CHECK(std::abs(t.f_prime[i] - std::cos(grid.node(i))) < 1e-5);
    CHECK(std::abs(t.f_double_prime[i] + std::sin(grid.node(i))) < 1e-4);
  }
  const QfiProfile q = QfiProfile::from_samples(sample(grid, [](double x) { return 2.0 + x * x; }), 3);
  for (Eigen::Index i = 0; i < grid.size(); ++i) CHECK(std::abs(q.j_prime()[i] - 2.0 * grid.node(i)) < 1e-10);
  CHECK(q.effective()[0] == doctest::Approx(6.0));
}

TEST_CASE("validate_problem") {
  const Support support{0.0, pi / 10.0};
  const ModelInstance noon = noon_model(NoonParams{10}, support, 4001, 1);
  CHECK_NOTHROW(validate_problem(noon.problem));

  SUBCASE("zero QFI node") {
    Vector j = noon.problem.qfi.j_base().values();
    j[17] = 0.0;
    const EstimationProblem bad{noon.problem.prior, noon.problem.target,
                                QfiProfile(GridFunction(noon.problem.grid(), j), noon.problem.qfi.j_prime(), 1)};
    CHECK(code_of([&] { validate_problem(bad); }) == ErrorCode::NonPositiveQfi);
  }
  SUBCASE("prior scaled by two") {
    const PriorDensity doubled(GridFunction(noon.problem.grid(), 2.0 * noon.problem.prior.density().values()),
                               noon.problem.prior.log_slope());
    const EstimationProblem bad{doubled, noon.problem.target, noon.problem.qfi};
    CHECK(code_of([&] { validate_problem(bad); }) == ErrorCode::UnnormalizedPrior);
  }
  SUBCASE("grid mismatch") {
    const ParameterGrid other(0.0, pi / 10.0, 2001);
    const EstimationProblem bad{noon.problem.prior, TargetFunction::identity(other), noon.problem.qfi};
    CHECK(code_of([&] { validate_problem(bad); }) == ErrorCode::GridMismatch);
  }
}

TEST_CASE("validate_problem accepts every built-in model across documented ranges") {
  for (int n : {1, 7, 30}) {
    for (int N : {1, 4, 10, 25}) CHECK_NOTHROW(validate_problem(noon_model({N}, {0.0, pi / 10.0}, 401, n).problem));
    for (double eta : {0.05, 0.5, 1.0}) {
      CHECK_NOTHROW(validate_problem(dephasing_model(DephasingParams::from_eta(eta), {0.0, pi}, 401, n).problem));
    }
    for (double na : {0.0, 1.0, 10.0}) {
      for (double nb : {0.5, 3.0}) {
        CHECK_NOTHROW(validate_problem(
            interferometer_problem(InterferometerParams::from_photon_numbers(na, nb), {0.0, pi / 5.0}, 401, n)
                .problem));
      }
    }
    for (double B : {0.3, pi / 2.0, 2.0, pi}) {
      CHECK_NOTHROW(validate_problem(field_model({B}, {0.0, pi / 2.0}, 401, n).problem));
    }
  }
}
