#include "wqed/effective_theory.hpp"

#include <cmath>
#include <sstream>

#include "wqed/errors.hpp"

namespace wqed {

namespace {

void check_detuning(std::vector<std::string>& w, double den, double rabi, const char* what) {
  if (std::abs(den) < 10.0 * std::abs(rabi)) {
    std::ostringstream os;
    os << what << " = " << den << " is not large against 10*rabi; perturbative shifts are unreliable";
    w.push_back(os.str());
  }
}

}  // namespace

StarkShifts stark_shifts(const PhysicalParams& p, int sign) {
  if (sign != 1 && sign != -1) throw ValidationError("sign must be +1 or -1");
  if (p.delta_c == 0.0) throw ValidationError("stark shifts need delta_c != 0");
  const double o2 = p.rabi * p.rabi;
  const double j = sign * p.coupling_j;
  StarkShifts s;
  s.single_e = -o2 / p.delta_c;
  s.single_s = p.delta_c + o2 / p.delta_c;
  s.d_omega_ee = -2.0 * o2 / (p.delta_c + j);
  s.d_omega_ss = 2.0 * o2 / (p.delta_c - j);
  check_detuning(s.warnings, p.delta_c + p.coupling_j, p.rabi, "delta_c + J");
  check_detuning(s.warnings, p.delta_c - p.coupling_j, p.rabi, "delta_c - J");
  return s;
}

ResonanceSet resonances(const PhysicalParams& p, Branch branch) {
  const StarkShifts plus = stark_shifts(p, +1);
  const StarkShifts minus = stark_shifts(p, -1);
  const double dc = p.delta_c, j = p.coupling_j;
  ResonanceSet r;
  r.branch = branch;
  r.warnings = plus.warnings;
  r.eps = p.rabi / dc;
  r.eps_plus = p.rabi / (j + dc);
  r.eps_minus = p.rabi / (j - dc);
  if (branch == Branch::S) {
    r.single = plus.single_s;
    // Second photon into s next to an s excitation: E(ss) - E(s).
    r.plus = 2.0 * dc + plus.d_omega_ss - plus.single_s;
    r.minus = 2.0 * dc + minus.d_omega_ss - minus.single_s;
    r.p_single = r.eps * r.eps;
    const double ep = p.rabi / (j - dc);    // J_mn = +J
    const double em = p.rabi / (-j - dc);   // J_mn = -J
    r.p_plus = ep * ep;
    r.p_minus = em * em;
  } else {
    r.single = plus.single_e;
    r.plus = plus.d_omega_ee - plus.single_e;
    r.minus = minus.d_omega_ee - minus.single_e;
    r.p_single = r.p_plus = r.p_minus = 1.0;
  }
  r.splitting = r.plus - r.minus;
  r.gamma_1d_eff_single = r.p_single * p.gamma_1d;
  r.gamma_1d_eff_plus = r.p_plus * p.gamma_1d;
  r.gamma_1d_eff_minus = r.p_minus * p.gamma_1d;
  r.gamma_prime_eff_single = r.p_single * p.gamma_prime;
  return r;
}

double sublattice_splitting(double rabi, double delta_c, double j) {
  return 4.0 * rabi * rabi * j / (delta_c * delta_c - j * j);
}

double lorentzian_reflectance(int n_half, double gamma_1d, double gamma_prime, double delta) {
  const double a = n_half * gamma_1d;
  return a * a / ((a + gamma_prime) * (a + gamma_prime) + 4.0 * delta * delta);
}

double dephasing_kappa(double rabi, double delta_c, double lambda) {
  const double d = lambda - delta_c;
  if (d == 0.0) throw SingularityError("kappa_lambda diverges at lambda = delta_c");
  return 1.0 + 2.0 * rabi * rabi / (d * d);
}

double dephased_lorentzian(const DephasedLorentzian& d, double delta_prime) {
  if (d.gamma > 0.0 && d.gamma >= std::abs(d.lambda - d.delta_c))
    throw ValidationError("dephased Lorentzian needs gamma << |lambda - delta_c|");
  const double a = d.n_half * d.gamma_1d;
  const double p = d.p_lambda;
  const double b = a + d.gamma_prime + d.gamma * d.kappa_lambda;
  return p * p * a * a / (p * p * b * b + 4.0 * delta_prime * delta_prime);
}

PhaseCompensation phase_compensation(double delta_e, double delta_s, double gamma_1d_e, double gamma_1d_s) {
  PhaseCompensation out;
  auto term = [&](double g, double d, const char* name) {
    if (g == 0.0) return 0.0;
    if (d == 0.0) throw SingularityError(std::string("phase compensation: zero detuning for ") + name);
    if (std::abs(d) < 10.0 * std::abs(g))
      out.warnings.push_back(std::string("first-order expansion questionable for ") + name +
                             " (|Delta| not >> gamma_1d)");
    return g / (kPi * d);
  };
  out.kappa = term(gamma_1d_e, delta_e, "e") + term(gamma_1d_s, delta_s, "s");
  out.ka = 0.5 * kPi * (1.0 + out.kappa);
  return out;
}

DressedLevel dressed_s_level(double rabi, double delta_c) {
  if (delta_c == 0.0) throw ValidationError("dressed s level needs delta_c != 0");
  const double half = 0.5 * delta_c;
  const double root = std::sqrt(half * half + rabi * rabi);
  DressedLevel d;
  d.energy = half + std::copysign(root, delta_c);
  d.p_e = rabi * rabi / (rabi * rabi + d.energy * d.energy);
  return d;
}

}  // namespace wqed
