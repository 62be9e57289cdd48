#pragma once

#include <vector>

#include "wqed/dynamics.hpp"
#include "wqed/model.hpp"

namespace wqed {

enum class Direction { Forward, Backward };

// Forward field is read out at z = N a and carries the input wave
// E_in exp(ikz); the backward field is read out at z = 0 and has no input.
struct FieldOperatorSpec {
  Direction direction = Direction::Forward;
  cplx input = 0.0;  // input amplitude at z = 0
};

StateVector apply_output_field(const StateVector& psi, const FieldOperatorSpec& spec,
                               const PhysicalParams& p, const BasisIndex& basis);

// <psi|E^dag E|psi>, divided by <psi|psi> when normalize is set.
double intensity(const StateVector& psi, const FieldOperatorSpec& spec, const PhysicalParams& p,
                 const BasisIndex& basis, bool normalize = true);

double g2_zero(const StateVector& psi, const PhysicalParams& p, const BasisIndex& basis, cplx input);

struct Populations {
  double ground = 0.0;
  double p_e = 0.0;
  double p_s = 0.0;
};
Populations populations(const StateVector& psi, const BasisIndex& basis);

// |<s_m s_n|psi>|^2, symmetric with zero diagonal.
Eigen::MatrixXd population_map(const StateVector& psi, const BasisIndex& basis);

// Share of population_map weight on pairs with m + n even.
double even_parity_fraction(const Eigen::MatrixXd& map);

struct SpectrumResult {
  std::vector<double> detuning;
  std::vector<double> reflectance;
  std::vector<double> transmittance;
};

enum class Channel { Reflected, Transmitted };

struct PulseIntegral {
  double value = 0.0;
  double min_integrand = 0.0;  // most negative subtracted intensity seen
  bool negative_warning = false;
};

// Trapezoidal integral of the background-subtracted intensity divided by
// input_energy, over the recorded window or up to t_stop when given.
PulseIntegral pulse_reflectance(const Trajectory& with_gate, const Trajectory& background,
                                double input_energy, Channel channel = Channel::Reflected,
                                double t_stop = -1.0);

}  // namespace wqed
