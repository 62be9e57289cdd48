#include <cmath>

#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "wqed/effective_theory.hpp"
#include "wqed/errors.hpp"

using namespace wqed;

namespace {

PhysicalParams fig_params(double rabi, double delta_c, double j) {
  PhysicalParams p;
  p.rabi = rabi;
  p.delta_c = delta_c;
  p.coupling_j = j;
  return p;
}

}  // namespace

TEST_CASE("Stark shifts") {
  const StarkShifts a = stark_shifts(fig_params(18.8, 94.0, 25.0), 1);
  CHECK(a.single_s - 94.0 == doctest::Approx(3.76));
  CHECK(a.single_e == doctest::Approx(-3.76));
  const StarkShifts b = stark_shifts(fig_params(94.0, 470.0, 235.0), 1);
  CHECK(b.d_omega_ee == doctest::Approx(-2.0 * 8836.0 / 705.0));
  CHECK(b.d_omega_ee == doctest::Approx(-25.07).epsilon(1e-3));
  CHECK(b.d_omega_ss == doctest::Approx(2.0 * 8836.0 / 235.0));
  CHECK_FALSE(b.warnings.empty());
  const StarkShifts c = stark_shifts(fig_params(2.0, 100.0, 0.0), 1);
  const StarkShifts d = stark_shifts(fig_params(2.0, 100.0, 0.0), -1);
  CHECK(c.d_omega_ee == d.d_omega_ee);
  CHECK(c.d_omega_ss == d.d_omega_ss);
  CHECK(c.d_omega_ee == doctest::Approx(-0.08));
  CHECK(c.warnings.empty());
  CHECK_THROWS_AS(stark_shifts(fig_params(1.0, 1.0, 0.0), 0), ValidationError);
}

TEST_CASE("resonance sets") {
  const ResonanceSet s = resonances(fig_params(18.8, 94.0, 25.0), Branch::S);
  CHECK(s.single == doctest::Approx(97.76));
  CHECK(s.splitting == doctest::Approx(4.0 * 18.8 * 18.8 * 25.0 / (94.0 * 94.0 - 625.0)));
  CHECK(s.splitting == doctest::Approx(4.30).epsilon(1e-3));
  CHECK(s.gamma_1d_eff_single == doctest::Approx(0.04));

  const ResonanceSet f = resonances(fig_params(94.0, 470.0, 235.0), Branch::S);
  CHECK(f.p_plus == doctest::Approx(0.16));
  CHECK(f.p_minus == doctest::Approx(94.0 * 94.0 / (705.0 * 705.0)));
  CHECK(f.p_minus == doctest::Approx(0.0178).epsilon(2e-3));
  CHECK(f.plus > f.minus);
  CHECK_FALSE(f.warnings.empty());

  const ResonanceSet e = resonances(fig_params(18.8, 94.0, 25.0), Branch::E);
  CHECK(e.single == doctest::Approx(-3.76));
  CHECK(e.p_single == 1.0);
  CHECK(e.gamma_1d_eff_plus == 1.0);

  // Splitting against the closed formula over a range of couplings.
  for (double j : {5.0, 30.0, 100.0, 235.0}) {
    const ResonanceSet r = resonances(fig_params(30.0, 470.0, j), Branch::S);
    const double ref = sublattice_splitting(30.0, 470.0, j);
    CHECK(std::abs(r.splitting - ref) < 0.05 * std::abs(ref));
    const ResonanceSet re = resonances(fig_params(30.0, 470.0, j), Branch::E);
    CHECK(std::abs(std::abs(re.splitting) - ref) < 0.05 * std::abs(ref) + 2.0 * std::pow(j / 470.0, 2) * ref);
  }
}

TEST_CASE("sign symmetry of the conditional resonances") {
  for (Branch br : {Branch::S, Branch::E}) {
    const ResonanceSet a = resonances(fig_params(20.0, 300.0, 60.0), br);
    const ResonanceSet b = resonances(fig_params(20.0, 300.0, -60.0), br);
    CHECK(a.plus == doctest::Approx(b.minus));
    CHECK(a.minus == doctest::Approx(b.plus));
    CHECK(a.gamma_1d_eff_plus == doctest::Approx(b.gamma_1d_eff_minus));
    CHECK(a.gamma_1d_eff_minus == doctest::Approx(b.gamma_1d_eff_plus));
  }
  const ResonanceSet z = resonances(fig_params(20.0, 300.0, 0.0), Branch::S);
  CHECK(z.splitting == 0.0);
}

TEST_CASE("Lorentzian mirror") {
  CHECK(lorentzian_reflectance(50, 1.0, 1.0, 0.0) == doctest::Approx(2500.0 / 2601.0));
  CHECK(lorentzian_reflectance(7, 0.3, 0.0, 0.0) == doctest::Approx(1.0));
  const double w = 50 * 0.2 + 1.0;
  CHECK(lorentzian_reflectance(50, 0.2, 1.0, 0.5 * w) ==
        doctest::Approx(0.5 * lorentzian_reflectance(50, 0.2, 1.0, 0.0)));
  for (double d : {0.1, 1.0, 7.0}) {
    CHECK(lorentzian_reflectance(20, 0.5, 1.0, d) == lorentzian_reflectance(20, 0.5, 1.0, -d));
    CHECK(lorentzian_reflectance(20, 0.5, 1.0, d) < lorentzian_reflectance(20, 0.5, 1.0, 0.0));
  }
}

TEST_CASE("dephased Lorentzian") {
  CHECK(dephasing_kappa(0.2, 1.0, 1.04) == doctest::Approx(51.0));
  CHECK(dephasing_kappa(94.0, 470.0, 470.0 + 94.0 * 94.0 / 470.0) == doctest::Approx(51.0));
  DephasedLorentzian d{50, 1.0, 1.0, 0.0, 0.16, 3.0, 514.0, 470.0};
  for (double dp : {0.0, 0.3, -2.0})
    CHECK(dephased_lorentzian(d, dp) == doctest::Approx(lorentzian_reflectance(50, 0.16, 0.16, dp)));
  d.gamma = 0.01;
  CHECK(dephased_lorentzian(d, 0.0) < lorentzian_reflectance(50, 0.16, 0.16, 0.0));
  d.gamma = 50.0;
  CHECK_THROWS_AS(dephased_lorentzian(d, 0.0), ValidationError);
}

TEST_CASE("phase compensation") {
  const PhaseCompensation z = phase_compensation(10.0, 20.0, 0.0, 0.0);
  CHECK(z.kappa == 0.0);
  CHECK(z.ka == doctest::Approx(kPi / 2));
  const PhaseCompensation k = phase_compensation(-500.0, 40.0, 1.0, 0.16);
  CHECK(k.kappa == doctest::Approx(1.0 / (kPi * -500.0) + 0.16 / (kPi * 40.0)));
  CHECK(k.ka == doctest::Approx(0.5 * kPi * (1.0 + k.kappa)));
  CHECK(k.warnings.empty());
  CHECK_FALSE(phase_compensation(1.0, 40.0, 1.0, 0.0).warnings.empty());
}

TEST_CASE("dressed single-excitation level") {
  for (auto [om, dc] : {std::pair{94.0, 470.0}, {18.8, 94.0}, {5.0, -200.0}}) {
    Eigen::Matrix2d h;
    h << 0.0, om, om, dc;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(h);
    const int k = std::abs(es.eigenvalues()(0) - dc) < std::abs(es.eigenvalues()(1) - dc) ? 0 : 1;
    const DressedLevel d = dressed_s_level(om, dc);
    CHECK(d.energy == doctest::Approx(es.eigenvalues()(k)).epsilon(1e-12));
    CHECK(d.p_e == doctest::Approx(std::norm(es.eigenvectors()(0, k))).epsilon(1e-12));
    const StarkShifts s = stark_shifts(fig_params(om, dc, 0.0), 1);
    CHECK(std::abs(d.energy - s.single_s) <= 1.5 * std::pow(om, 4) / std::pow(std::abs(dc), 3));
  }
  const DressedLevel f = dressed_s_level(94.0, 470.0);
  CHECK(f.energy == doctest::Approx(488.103).epsilon(1e-5));
  CHECK(f.p_e == doctest::Approx(0.03576).epsilon(1e-3));
}
