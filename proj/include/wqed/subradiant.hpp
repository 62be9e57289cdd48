#pragma once

#include <vector>

#include "wqed/dynamics.hpp"
#include "wqed/model.hpp"

namespace wqed {

struct EigenMode {
  cplx lambda;
  CVector vec;              // unit norm, over atoms 1..N
  double gamma_wg = 0.0;    // -2 Im(lambda)
  double k_centroid = 0.0;  // momentum centroid in [-pi, pi) per lattice site
};

// Eigenmodes of the N x N waveguide block (no free-space decay), sorted by
// ascending decay rate.
std::vector<EigenMode> single_excitation_eigenmodes(const PhysicalParams& p);

// Circular mean of |DFT(c)|^2 over ka in [-pi, pi), zero-padded.
double momentum_centroid(const CVector& c);

enum class GateStateKind { Subradiant, SingleSite, Ancilla };

struct GateState {
  GateStateKind kind = GateStateKind::Subradiant;
  StateVector state;          // over the basis passed in; empty for Ancilla
  CVector amplitudes;         // per-atom s amplitudes
  double nominal_rate = 0.0;  // waveguide rate of the source mode
  double k_centroid = 0.0;
};

// Subradiant: the least-decaying waveguide mode put on the s levels, picking
// the one centred near ka = pi within a degenerate pair. SingleSite: |s_site>.
GateState build_gate_state(const PhysicalParams& p, GateStateKind kind, const BasisIndex& basis, int site = 1);

// 1 / t_{1/e} of p_e + p_s. The long-time variant starts the clock at 5% of
// the recorded window.
double decay_rate_from_trajectory(const Trajectory& tr, bool long_time = false);

struct ScalingFit {
  double alpha = 0.0;      // Gamma ~ prefactor * N^-alpha
  double prefactor = 0.0;
  double residual = 0.0;   // RMS of the log residuals
  bool non_polynomial = false;
};

inline constexpr double kScalingResidualThreshold = 0.05;

ScalingFit fit_scaling(const std::vector<std::pair<double, double>>& points,
                       double threshold = kScalingResidualThreshold);

}  // namespace wqed
