#include <cmath>

#include "doctest.h"
#include "wqed/dynamics.hpp"
#include "wqed/errors.hpp"
#include "wqed/hamiltonian.hpp"
#include "wqed/subradiant.hpp"

using namespace wqed;

namespace {

PhysicalParams chain(int n, double ka) {
  PhysicalParams p;
  p.n_atoms = n;
  p.gamma_1d = 1.0;
  p.gamma_prime = 1.0;
  p.ka = ka;
  return p;
}

}  // namespace

TEST_CASE("small-chain eigenmodes") {
  const auto one = single_excitation_eigenmodes(chain(1, kPi / 2));
  REQUIRE(one.size() == 1);
  CHECK(one[0].gamma_wg == doctest::Approx(1.0));

  const auto bragg = single_excitation_eigenmodes(chain(2, kPi));
  CHECK(std::abs(bragg[0].gamma_wg) < 1e-12);
  CHECK(bragg[1].gamma_wg == doctest::Approx(2.0));

  const auto quarter = single_excitation_eigenmodes(chain(2, kPi / 2));
  for (const auto& m : quarter) {
    CHECK(m.gamma_wg == doctest::Approx(1.0));
    CHECK(std::abs(std::abs(m.lambda.real()) - 0.5) < 1e-12);
  }
}

TEST_CASE("eigenmodes are complete and ordered") {
  for (double ka : {kPi / 2, 0.7, kPi}) {
    PhysicalParams p = chain(30, ka);
    const auto modes = single_excitation_eigenmodes(p);
    REQUIRE(modes.size() == 30);
    CMatrix v(30, 30);
    CVector lam(30);
    for (int i = 0; i < 30; ++i) {
      v.col(i) = modes[i].vec;
      lam(i) = modes[i].lambda;
      CHECK(modes[i].gamma_wg >= -1e-10);
      if (i > 0) CHECK(modes[i].gamma_wg >= modes[i - 1].gamma_wg);
      CHECK(modes[i].vec.norm() == doctest::Approx(1.0));
    }
    PhysicalParams q = p;
    q.gamma_prime = 0.0;
    const CMatrix h = waveguide_block(q);
    const CMatrix rebuilt = v * lam.asDiagonal() * v.inverse();
    CHECK((rebuilt - h).norm() < 1e-8);
  }
}

TEST_CASE("quarter-wave chains carry a degenerate subradiant pair") {
  for (int n : {20, 41, 100}) {
    CAPTURE(n);
    const auto modes = single_excitation_eigenmodes(chain(n, kPi / 2));
    CHECK(std::abs(modes[0].gamma_wg - modes[1].gamma_wg) <= 1e-6 * modes[0].gamma_wg);
    // The pair sits near k = 0 and k = pi.
    const double d0 = std::min(std::abs(modes[0].k_centroid), std::abs(modes[1].k_centroid));
    const double dpi = std::min(std::abs(std::remainder(modes[0].k_centroid - kPi, 2 * kPi)),
                                std::abs(std::remainder(modes[1].k_centroid - kPi, 2 * kPi)));
    CHECK(d0 < 2 * kPi / n);
    CHECK(dpi < 2 * kPi / n);
  }
}

TEST_CASE("momentum centroid") {
  CVector c(16);
  for (int m = 0; m < 16; ++m) c(m) = std::polar(1.0, 0.9 * m);
  CHECK(momentum_centroid(c) == doctest::Approx(0.9).epsilon(1e-6));
  for (int m = 0; m < 16; ++m) c(m) = std::polar(1.0, -2.0 * m);
  CHECK(momentum_centroid(c) == doctest::Approx(-2.0).epsilon(1e-6));
}

TEST_CASE("gate states") {
  {
    PhysicalParams p = chain(1, kPi / 2);
    BasisIndex b(1, 2);
    for (auto kind : {GateStateKind::Subradiant, GateStateKind::SingleSite}) {
      const GateState g = build_gate_state(p, kind, b);
      CHECK(std::abs(g.state(b.single(1, Level::S)) - 1.0) < 1e-15);
      CHECK(g.state.norm() == doctest::Approx(1.0));
    }
  }
  PhysicalParams p = chain(100, kPi / 2);
  BasisIndex b(100, 1);
  const GateState g = build_gate_state(p, GateStateKind::Subradiant, b);
  CHECK(g.state.norm() == doctest::Approx(1.0));
  double off_s = 0.0;
  for (std::int64_t i = 0; i < b.dimension(); ++i) {
    const Configuration c = b.config(i);
    if (!(c.n_exc == 1 && c.level_m == Level::S)) off_s += std::norm(g.state(i));
  }
  CHECK(off_s == 0.0);
  CHECK(std::abs(std::remainder(g.k_centroid - kPi, 2 * kPi)) < 2 * kPi / 100);
  // Smooth envelope, small at the edges.
  const Eigen::VectorXd env = g.amplitudes.cwiseAbs();
  CHECK(env(0) < 0.2 * env.maxCoeff());
  CHECK(env(99) < 0.2 * env.maxCoeff());
  for (int m = 1; m < 100; ++m) CHECK(std::abs(env(m) - env(m - 1)) < 0.1 * env.maxCoeff());

  const GateState s = build_gate_state(p, GateStateKind::SingleSite, b, 7);
  CHECK(std::abs(s.state(b.single(7, Level::S)) - 1.0) < 1e-15);
  CHECK(build_gate_state(p, GateStateKind::Ancilla, b).state.size() == 0);
  CHECK_THROWS_AS(build_gate_state(p, GateStateKind::SingleSite, b, 101), ValidationError);
  CHECK_THROWS_AS(build_gate_state(p, GateStateKind::Subradiant, BasisIndex(5, 1)), DimensionError);
}

TEST_CASE("decay rate from a trajectory") {
  Trajectory tr;
  for (int i = 0; i <= 400; ++i) {
    tr.time.push_back(0.01 * i);
    tr.p_e.push_back(0.3 * std::exp(-0.01 * i));
    tr.p_s.push_back(0.7 * std::exp(-0.01 * i));
  }
  CHECK(decay_rate_from_trajectory(tr) == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(decay_rate_from_trajectory(tr, true) == doctest::Approx(1.0).epsilon(1e-4));
  tr.time.resize(50);
  tr.p_e.resize(50);
  tr.p_s.resize(50);
  CHECK_THROWS_AS(decay_rate_from_trajectory(tr), NumericError);
}

TEST_CASE("eigenvalue rate matches the evolved decay") {
  PhysicalParams p = chain(20, kPi / 2);
  p.gamma_prime = 0.0;
  const auto modes = single_excitation_eigenmodes(p);
  auto b = std::make_shared<const BasisIndex>(20, 1);
  Hamiltonian h(p, {DriveKind::Cw, 0.0, 0.0}, b);
  StateVector psi = StateVector::Zero(b->dimension());
  for (int m = 1; m <= 20; ++m) psi(b->single(m, Level::E)) = modes[0].vec(m - 1);
  const double t_end = 1.5 / modes[0].gamma_wg;
  const Trajectory tr = evolve(h, psi, t_end, step_bound(p, {}), {.record_stride = 50});
  CHECK(decay_rate_from_trajectory(tr) == doctest::Approx(modes[0].gamma_wg).epsilon(0.02));
}

TEST_CASE("power-law fit") {
  std::vector<std::pair<double, double>> pts;
  for (double n : {20.0, 30.0, 40.0, 50.0, 60.0}) pts.emplace_back(n, 7.0 * std::pow(n, -3.0));
  const ScalingFit f = fit_scaling(pts);
  CHECK(f.alpha == doctest::Approx(3.0).epsilon(1e-6));
  CHECK(f.prefactor == doctest::Approx(7.0).epsilon(1e-6));
  CHECK_FALSE(f.non_polynomial);
  std::vector<std::pair<double, double>> sat;
  for (double n : {20.0, 30.0, 40.0, 50.0, 60.0}) sat.emplace_back(n, std::pow(n, -3.0) + 1e-5);
  CHECK(fit_scaling(sat).non_polynomial);
  CHECK_THROWS_AS(fit_scaling({{10.0, 1.0}, {20.0, 0.1}}), ValidationError);

  std::vector<std::pair<double, double>> real;
  for (int n : {20, 30, 40, 50, 60})
    real.emplace_back(n, single_excitation_eigenmodes(chain(n, kPi / 2))[0].gamma_wg);
  const ScalingFit r = fit_scaling(real);
  CHECK(r.alpha >= 2.5);
  CHECK(r.alpha <= 3.5);
}
