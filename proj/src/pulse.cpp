#include "wqed/pulse.hpp"

#include <algorithm>
#include <cmath>

#include "wqed/errors.hpp"
#include "wqed/hamiltonian.hpp"

namespace wqed {

namespace {

DriveSpec pulse_drive(const PulseSetup& s, double amplitude, double t0) {
  DriveSpec d;
  d.kind = DriveKind::Sin2Pulse;
  d.amplitude = amplitude;
  d.detuning = s.detuning;
  d.pulse_width = t0;
  return d;
}

EvolveOptions record_options(const PulseSetup& s) {
  EvolveOptions o;
  o.record_stride = s.record_stride;
  o.record_fields = true;
  o.normalize_fields = false;
  return o;
}

StateVector initial_state(const PulseSetup& s, bool with_gate, const BasisIndex& basis) {
  if (!with_gate) {
    StateVector psi = StateVector::Zero(basis.dimension());
    psi(0) = 1.0;
    return psi;
  }
  if (s.gate == GateStateKind::Ancilla) throw ValidationError("pulse runs need a chain gate state");
  return build_gate_state(s.params, s.gate, basis, s.gate_site).state;
}

}  // namespace

double pulse_input_energy(double amplitude, double t0) { return 0.75 * t0 * amplitude * amplitude; }

double pulse_dt(const PulseSetup& s) {
  if (s.dt > 0.0) return s.dt;
  const double b = step_bound(s.params, pulse_drive(s, s.amplitude, 1.0));
  if (!std::isfinite(b)) throw ValidationError("pulse run has no finite time scale; set dt");
  return b;
}

double pulse_cost(const PulseSetup& s, bool with_gate, double t_end) {
  const double dim = double(basis_dimension(s.params.n_atoms, with_gate ? 2 : 1));
  return dim * std::ceil(t_end / pulse_dt(s)) * s.params.n_atoms;
}

Trajectory run_background(const PulseSetup& s, double t_end) {
  auto basis = std::make_shared<const BasisIndex>(s.params.n_atoms, 2);
  Hamiltonian h(s.params, pulse_drive(s, 0.0, 1.0), basis);
  return evolve(h, initial_state(s, true, *basis), t_end, pulse_dt(s), record_options(s));
}

Trajectory slice(const Trajectory& tr, std::size_t n) {
  if (n > tr.size()) throw ValidationError("cannot slice a trajectory beyond its length");
  auto cut = [n](const std::vector<double>& v) {
    return v.size() >= n ? std::vector<double>(v.begin(), v.begin() + n) : v;
  };
  Trajectory out;
  out.dt = tr.dt;
  out.time = cut(tr.time);
  out.norm = cut(tr.norm);
  out.p_e = cut(tr.p_e);
  out.p_s = cut(tr.p_s);
  out.i_r = cut(tr.i_r);
  out.i_t = cut(tr.i_t);
  out.ground = cut(tr.ground);
  return out;
}

PulseOutcome run_pulse(const PulseSetup& s, double t0, bool with_gate, const Trajectory* background) {
  if (!(t0 > 0.0)) throw ValidationError("pulse width t0 must be positive");
  if (!(s.amplitude > 0.0)) throw ValidationError("pulse amplitude must be positive");
  if (!(s.tail >= 0.0)) throw ValidationError("pulse tail must be non-negative");
  PulseOutcome out;
  out.t0 = t0;
  out.input_energy = pulse_input_energy(s.amplitude, t0);
  const double t_end = 2.0 * t0 + s.tail;

  auto basis = std::make_shared<const BasisIndex>(s.params.n_atoms, with_gate ? 2 : 1);
  Hamiltonian h(s.params, pulse_drive(s, s.amplitude, t0), basis);
  out.run = evolve(h, initial_state(s, with_gate, *basis), t_end, pulse_dt(s), record_options(s));

  const std::size_t n = out.run.size();
  if (!with_gate) {
    out.background = out.run;
    std::fill(out.background.i_r.begin(), out.background.i_r.end(), 0.0);
    std::fill(out.background.i_t.begin(), out.background.i_t.end(), 0.0);
  } else if (background) {
    out.background = slice(*background, n);
  } else {
    out.background = run_background(s, t_end);
  }

  double peak = 0.0;
  for (std::size_t i = 0; i < n; ++i) peak = std::max(peak, std::abs(out.run.i_t[i] - out.background.i_t[i]));
  out.t_stop = out.run.time.back();
  out.window_closed = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (out.run.time[i] <= 2.0 * t0) continue;
    if (std::abs(out.run.i_t[i] - out.background.i_t[i]) < 1e-4 * peak) {
      out.t_stop = out.run.time[i];
      out.window_closed = true;
      break;
    }
  }
  out.reflectance = pulse_reflectance(out.run, out.background, out.input_energy, Channel::Reflected, out.t_stop);
  out.transmittance =
      pulse_reflectance(out.run, out.background, out.input_energy, Channel::Transmitted, out.t_stop);
  return out;
}

}  // namespace wqed
