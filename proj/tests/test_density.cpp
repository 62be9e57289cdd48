#include <cmath>

#include "doctest.h"
#include "wqed/dynamics.hpp"
#include "wqed/errors.hpp"
#include "wqed/hamiltonian.hpp"

using namespace wqed;

namespace {

// Brute-force RK4 of d rho/dt = -i(H rho - rho H^dag) - gamma (rho - diag rho).
CMatrix rk4_oracle(const PhysicalParams& p, CMatrix rho, double gamma, double t_end, double dt) {
  const CMatrix h = waveguide_block(p);
  auto f = [&](const CMatrix& r) {
    CMatrix d = cplx(0.0, -1.0) * (h * r - r * h.adjoint());
    CMatrix off = r;
    off.diagonal().setZero();
    return CMatrix(d - gamma * off);
  };
  const long long n = std::llround(t_end / dt);
  for (long long s = 0; s < n; ++s) {
    const CMatrix k1 = f(rho);
    const CMatrix k2 = f(rho + 0.5 * dt * k1);
    const CMatrix k3 = f(rho + 0.5 * dt * k2);
    const CMatrix k4 = f(rho + dt * k3);
    rho += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return rho;
}

PhysicalParams chain(int n, double ka) {
  PhysicalParams p;
  p.n_atoms = n;
  p.gamma_1d = 1.0;
  p.gamma_prime = 0.0;
  p.ka = ka;
  return p;
}

}  // namespace

TEST_CASE("single emitter decays at the waveguide rate") {
  PhysicalParams p = chain(1, kPi);
  DensityBlock r0{CMatrix::Ones(1, 1), 0.0};
  const Trajectory tr = evolve_density_single_exc(p, r0, 0.3, 4.0, 0.01, 50);
  for (std::size_t i = 0; i < tr.size(); ++i) {
    CHECK(tr.p_e[i] == doctest::Approx(std::exp(-tr.time[i])).epsilon(1e-5));
    CHECK(tr.norm[i] == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("dark pair is stationary without dephasing and leaks with it") {
  PhysicalParams p = chain(2, kPi);
  CMatrix dark(2, 2);
  dark << 0.5, 0.5, 0.5, 0.5;  // (1,1)/sqrt2 at ka = pi
  const Trajectory a = evolve_density_single_exc(p, {dark, 0.0}, 0.0, 100.0, 7.0);
  CHECK(a.p_e.back() == doctest::Approx(1.0).epsilon(1e-12));
  const Trajectory b = evolve_density_single_exc(p, {dark, 0.0}, 0.05, 20.0, 0.01);
  CHECK(b.p_e.back() < 0.9);
}

TEST_CASE("matches a brute-force integration with dephasing") {
  for (double ka : {kPi, 0.3 * kPi}) {
    CAPTURE(ka);
    PhysicalParams p = chain(4, ka);
    CMatrix psi = CMatrix::Zero(4, 1);
    psi << 0.5, cplx(0.1, 0.4), -0.3, cplx(0.0, 0.6);
    psi /= psi.norm();
    const CMatrix rho = psi * psi.adjoint();
    const double gamma = 0.2, t_end = 3.0;
    const CMatrix ref = rk4_oracle(p, rho, gamma, t_end, 1e-4);
    const Trajectory tr = evolve_density_single_exc(p, {rho, 0.0}, gamma, t_end, 1e-3);
    CHECK(tr.p_e.back() == doctest::Approx(ref.trace().real()).epsilon(1e-6));
    CHECK(tr.norm.back() == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("dephased trace converges under step halving") {
  PhysicalParams p = chain(6, kPi);
  CMatrix rho = CMatrix::Zero(6, 6);
  rho(2, 2) = 1.0;
  const Trajectory a = evolve_density_single_exc(p, {rho, 0.0}, 0.1, 10.0, 0.02, 1);
  const Trajectory b = evolve_density_single_exc(p, {rho, 0.0}, 0.1, 10.0, 0.01, 2);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(std::abs(a.p_e[i] - b.p_e[i]) < 1e-5);
    CHECK(a.norm[i] == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("zero dephasing agrees with the state-vector evolution") {
  PhysicalParams p = chain(5, 0.4 * kPi);
  p.gamma_prime = 0.5;
  auto basis = std::make_shared<const BasisIndex>(5, 1);
  Hamiltonian h(p, {DriveKind::Cw, 0.0, 0.0}, basis);
  StateVector psi = StateVector::Zero(basis->dimension());
  psi(basis->single(2, Level::E)) = 0.8;
  psi(basis->single(4, Level::E)) = cplx(0.0, 0.6);
  const Trajectory sv = evolve(h, psi, 5.0, 0.01, {.record_stride = 100});
  CMatrix c(5, 1);
  for (int m = 1; m <= 5; ++m) c(m - 1, 0) = psi(basis->single(m, Level::E));
  const Trajectory dm = evolve_density_single_exc(p, {c * c.adjoint(), 0.0}, 0.0, 5.0, 1.0);
  REQUIRE(sv.size() == dm.size());
  for (std::size_t i = 0; i < dm.size(); ++i) CHECK(dm.p_e[i] == doctest::Approx(sv.p_e[i]).epsilon(1e-8));
}

TEST_CASE("input validation") {
  PhysicalParams p = chain(2, kPi);
  CMatrix bad(2, 2);
  bad << 1.0, 0.3, 0.0, 0.0;
  CHECK_THROWS_AS(evolve_density_single_exc(p, {bad, 0.0}, 0.0, 1.0, 0.1), ValidationError);
  CHECK_THROWS_AS(evolve_density_single_exc(p, {CMatrix::Zero(3, 3), 0.0}, 0.0, 1.0, 0.1), DimensionError);
  CHECK_THROWS_AS(evolve_density_single_exc(p, {CMatrix::Zero(2, 2), 0.0}, -1.0, 1.0, 0.1), ValidationError);
}
