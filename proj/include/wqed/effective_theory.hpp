#pragma once

#include <string>
#include <vector>

#include "wqed/model.hpp"
#include "wqed/transfer_matrix.hpp"

namespace wqed {

struct StarkShifts {
  double single_e = 0.0;  // dressed e-like single excitation, -Omega^2/delta_c
  double single_s = 0.0;  // dressed s-like single excitation, delta_c + Omega^2/delta_c
  double d_omega_ee = 0.0;
  double d_omega_ss = 0.0;
  std::vector<std::string> warnings;
};

StarkShifts stark_shifts(const PhysicalParams& p, int sign);

struct ResonanceSet {
  Branch branch = Branch::S;
  double single = 0.0;       // single-photon resonance
  double plus = 0.0;         // conditional resonance, sublattice sign +
  double minus = 0.0;        // conditional resonance, sublattice sign -
  double splitting = 0.0;    // plus - minus
  double gamma_1d_eff_single = 0.0;
  double gamma_1d_eff_plus = 0.0;
  double gamma_1d_eff_minus = 0.0;
  double gamma_prime_eff_single = 0.0;
  double p_single = 0.0;     // dressed e-population
  double p_plus = 0.0;
  double p_minus = 0.0;
  double eps = 0.0;          // Omega / delta_c
  double eps_plus = 0.0;     // Omega / (J + delta_c)
  double eps_minus = 0.0;    // Omega / (J - delta_c)
  std::vector<std::string> warnings;
};

ResonanceSet resonances(const PhysicalParams& p, Branch branch);

// 4 Omega^2 J / (delta_c^2 - J^2)
double sublattice_splitting(double rabi, double delta_c, double j);

double lorentzian_reflectance(int n_half, double gamma_1d, double gamma_prime, double delta);

// 1 + 2 Omega^2 / (lambda - delta_c)^2
double dephasing_kappa(double rabi, double delta_c, double lambda);

struct DephasedLorentzian {
  int n_half = 1;
  double gamma_1d = 1.0;
  double gamma_prime = 1.0;
  double gamma = 0.0;
  double p_lambda = 1.0;
  double kappa_lambda = 1.0;
  double lambda = 0.0;    // resonance position, used for the validity check
  double delta_c = 0.0;
};

// Reflectance at detuning delta' = delta - lambda from the resonance.
double dephased_lorentzian(const DephasedLorentzian& d, double delta_prime);

struct PhaseCompensation {
  double kappa = 0.0;
  double ka = 0.5 * kPi;
  std::vector<std::string> warnings;
};

// kappa = sum over mu in {e, s} of gamma_1d_mu / (pi Delta_mu).
PhaseCompensation phase_compensation(double delta_e, double delta_s, double gamma_1d_e, double gamma_1d_s);

// Exact dressed single-excitation resonance of a bare three-level atom
// (root of the 2x2 (e, s) block nearest the s level) and its e-population.
struct DressedLevel {
  double energy = 0.0;
  double p_e = 0.0;
};
DressedLevel dressed_s_level(double rabi, double delta_c);

}  // namespace wqed
