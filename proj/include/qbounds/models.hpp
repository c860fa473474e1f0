#pragma once

#include <optional>

#include "qbounds/core.hpp"
#include "qbounds/estimation.hpp"

namespace qbounds {

/// Support (a1, a2) of a uniform prior.
struct Support {
  double a1 = 0.0;
  double a2 = 1.0;
};

/// A ready-to-use example system. `measurement` is empty for bounds-only
/// examples.
struct ModelInstance {
  EstimationProblem problem;
  std::optional<BinaryMeasurementModel> measurement;
};

// NOON model: N spins in a NOON state, phase x accumulated per spin.
struct NoonParams {
  int particles = 10;
};

ModelInstance noon_model(const NoonParams& params, Support support, Eigen::Index m, int n);

// Dephasing model: qubit with dephasing; coherence shrinks by eta = exp(-gamma).
class DephasingParams {
 public:
  static DephasingParams from_gamma(double gamma);
  static DephasingParams from_eta(double eta);

  double gamma() const noexcept { return gamma_; }
  double eta() const noexcept { return eta_; }

 private:
  DephasingParams(double gamma, double eta) : gamma_(gamma), eta_(eta) {}
  double gamma_;
  double eta_;
};

ModelInstance dephasing_model(const DephasingParams& params, Support support, Eigen::Index m, int n);

// Interferometer model: SU(2) interferometer with a coherent state in port A and a cat
// state in port B.
struct InterferometerParams {
  double n_a = 1.0;       ///< |beta|^2
  double n_b = 1.0;       ///< |alpha|^2 tanh |alpha|^2
  double alpha_sq = 0.0;  ///< |alpha|^2, solved from n_b

  static InterferometerParams from_photon_numbers(double n_a, double n_b);
};

/// Solves u tanh(u) = n_b for u >= 0.
double cat_amplitude_squared(double n_b);

/// J = 2 n_a n_b + n_a + n_b + 2 n_a |alpha|^2.
double interferometer_qfi(double n_a, double n_b);

/// Constant-QFI problem; no measurement model is attached.
ModelInstance interferometer_problem(const InterferometerParams& params, Support support, Eigen::Index m, int n);

// Field model: qubit in a field of magnitude B whose direction x in the XZ plane
// is estimated; the QFI depends on x.
struct FieldParams {
  double field = 1.5707963267948966;
};

double field_qfi(double field, double x);
ModelInstance field_model(const FieldParams& params, Support support, Eigen::Index m, int n);

}  // namespace qbounds
