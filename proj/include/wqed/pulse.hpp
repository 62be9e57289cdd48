#pragma once

#include <string>
#include <vector>

#include "wqed/dynamics.hpp"
#include "wqed/observables.hpp"
#include "wqed/subradiant.hpp"

namespace wqed {

// A sin^2 signal pulse sent onto a chain that may hold a gate excitation.
struct PulseSetup {
  PhysicalParams params;
  double detuning = 0.0;
  double amplitude = 2e-4;
  GateStateKind gate = GateStateKind::Subradiant;
  int gate_site = 1;
  double tail = 10.0;      // evolution continues this long after the pulse ends
  int record_stride = 10;
  double dt = 0.0;         // 0 picks the step bound
};

double pulse_input_energy(double amplitude, double t0);
double pulse_dt(const PulseSetup& s);
// dimension x steps x N for one run of length t_end.
double pulse_cost(const PulseSetup& s, bool with_gate, double t_end);

// Gate state evolved without any signal: the leaked background field.
Trajectory run_background(const PulseSetup& s, double t_end);
// First `n` records of a longer run on the same grid.
Trajectory slice(const Trajectory& tr, std::size_t n);

struct PulseOutcome {
  double t0 = 0.0;
  double input_energy = 0.0;
  double t_stop = 0.0;        // end of the integration window
  bool window_closed = true;  // transmitted signal fell below 1e-4 of its peak
  Trajectory run;
  Trajectory background;      // zero record for runs without gate
  PulseIntegral reflectance;
  PulseIntegral transmittance;
};

// With gate: background is sliced from `background` when given (it must be at
// least as long), otherwise computed. Without gate the chain starts in the
// ground state and the background is identically zero.
PulseOutcome run_pulse(const PulseSetup& s, double t0, bool with_gate, const Trajectory* background = nullptr);

}  // namespace wqed
