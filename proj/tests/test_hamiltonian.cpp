#include <random>

#include "dense_oracle.hpp"
#include "doctest.h"
#include "wqed/errors.hpp"
#include "wqed/hamiltonian.hpp"

using namespace wqed;

namespace {

CVector random_state(std::int64_t dim, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> nd;
  CVector v(dim);
  for (auto& x : v) x = cplx(nd(rng), nd(rng));
  return v.normalized();
}

PhysicalParams mixed_params(int n) {
  PhysicalParams p;
  p.n_atoms = n;
  p.gamma_1d = 0.8;
  p.gamma_prime = 1.0;
  p.coupling_j = 2.1;
  p.rabi = 1.3;
  p.delta_c = 3.0;
  p.kappa = 0.07;
  return p;
}

CMatrix matrix_of(const Hamiltonian& h, cplx drive) {
  const auto dim = h.dimension();
  CMatrix m(dim, dim);
  CVector e = CVector::Zero(dim), out;
  for (std::int64_t i = 0; i < dim; ++i) {
    e.setZero();
    e(i) = 1.0;
    h.apply_with_drive(e, drive, out);
    m.col(i) = out;
  }
  return m;
}

}  // namespace

TEST_CASE("single-atom and two-atom matrix elements") {
  PhysicalParams p;
  p.n_atoms = 1;
  p.gamma_1d = 0.6;
  auto b1 = std::make_shared<const BasisIndex>(1, 2);
  Hamiltonian h1(p, {}, b1);
  CVector e = CVector::Zero(3);
  e(1) = 1.0;
  const CVector he = h1.apply(e, 0.0);
  CHECK(std::abs(he(1) - cplx(0.0, -0.5 * (1.0 + 0.6))) < 1e-15);

  p.n_atoms = 2;
  p.ka = kPi;
  p.coupling_j = 3.0;
  auto b2 = std::make_shared<const BasisIndex>(2, 2);
  Hamiltonian h2(p, {}, b2);
  const CMatrix m = matrix_of(h2, 0.0);
  CHECK(std::abs(m(b2->single(2, Level::E), b2->single(1, Level::E)) - cplx(0.0, 0.3)) < 1e-15);
  const auto es = b2->twin(1, Level::E, 2, Level::S);
  const auto se = b2->twin(1, Level::S, 2, Level::E);
  CHECK(std::abs(m(es, se) - cplx(-3.0)) < 1e-15);
  CHECK(std::abs(m(se, es) - cplx(-3.0)) < 1e-15);
}

TEST_CASE("ground state: annihilated without drive, raised with cw drive") {
  PhysicalParams p = mixed_params(5);
  auto b = std::make_shared<const BasisIndex>(5, 2);
  CVector g = CVector::Zero(b->dimension());
  g(0) = 1.0;
  Hamiltonian h0(p, {DriveKind::Cw, 0.0, 0.4}, b);
  CHECK(h0.apply(g, 0.0).norm() == 0.0);
  Hamiltonian h(p, {DriveKind::Cw, 0.25, 0.4}, b);
  const CVector out = h.apply(g, 0.0);
  for (int m = 1; m <= 5; ++m) {
    const cplx want = -0.25 * std::exp(kI * (p.phase() * m));
    CHECK(std::abs(out(b->single(m, Level::E)) - want) < 1e-15);
    CHECK(out(b->single(m, Level::S)) == cplx(0.0));
  }
  CHECK(out.squaredNorm() == doctest::Approx(5 * 0.0625));
}

TEST_CASE("matrix-free apply equals brute-force dense product (N <= 25)") {
  struct Case {
    int n;
    int max_exc;
    bool finite_range;
    std::vector<int> decoupled;
  };
  const std::vector<Case> cases{{1, 2, false, {}}, {2, 2, false, {}}, {3, 1, false, {}},
                                {7, 2, true, {}},  {8, 2, false, {8}}, {20, 2, false, {}},
                                {25, 2, true, {3}}};
  unsigned seed = 11;
  for (const auto& c : cases) {
    CAPTURE(c.n);
    PhysicalParams p = mixed_params(c.n);
    if (c.finite_range) p.range_l = 2.5;
    p.decoupled = c.decoupled;
    const DriveSpec d{DriveKind::Cw, 0.37, 0.9};
    auto b = std::make_shared<const BasisIndex>(c.n, c.max_exc);
    Hamiltonian h(p, d, b);
    const CMatrix dense = oracle::dense_hamiltonian(p, d, *b, d.amplitude);
    for (int rep = 0; rep < 3; ++rep) {
      const CVector psi = random_state(b->dimension(), seed++);
      const CVector fast = h.apply(psi, 0.0);
      const CVector ref = dense * psi;
      CHECK((fast - ref).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("pulse envelope enters the drive term") {
  PhysicalParams p = mixed_params(4);
  const DriveSpec d{DriveKind::Sin2Pulse, 0.5, 1.1, 2.0};
  auto b = std::make_shared<const BasisIndex>(4, 2);
  Hamiltonian h(p, d, b);
  const CVector psi = random_state(b->dimension(), 3);
  for (double t : {-1.0, 0.3, 2.0, 3.7, 4.5}) {
    const CMatrix dense = oracle::dense_hamiltonian(p, d, *b, d.envelope(t));
    CHECK((h.apply(psi, t) - dense * psi).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("linearity") {
  PhysicalParams p = mixed_params(9);
  auto b = std::make_shared<const BasisIndex>(9, 2);
  Hamiltonian h(p, {DriveKind::Cw, 0.3, 0.2}, b);
  const CVector x = random_state(b->dimension(), 5), y = random_state(b->dimension(), 6);
  const cplx al(0.3, -1.2), be(-2.0, 0.5);
  const CVector lhs = h.apply(CVector(al * x + be * y), 0.0);
  const CVector rhs = al * h.apply(x, 0.0) + be * h.apply(y, 0.0);
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("excitation blocks are invariant without drive") {
  PhysicalParams p = mixed_params(10);
  auto b = std::make_shared<const BasisIndex>(10, 2);
  Hamiltonian h(p, {DriveKind::Cw, 0.0, 0.2}, b);
  const auto o1 = b->single_offset(), o2 = b->double_offset();
  CVector psi = random_state(b->dimension(), 8);
  CVector single = CVector::Zero(b->dimension());
  single.segment(o1, b->n_singles()) = psi.segment(o1, b->n_singles());
  CVector out = h.apply(single, 0.0);
  CHECK(out(0) == cplx(0.0));
  CHECK(out.segment(o2, b->n_doubles()).norm() == 0.0);
  CVector dbl = CVector::Zero(b->dimension());
  dbl.segment(o2, b->n_doubles()) = psi.segment(o2, b->n_doubles());
  out = h.apply(dbl, 0.0);
  CHECK(out.head(o2).norm() == 0.0);

  // The band-gap term alone keeps the numbers of e and s separately.
  PhysicalParams q;
  q.n_atoms = 6;
  q.gamma_1d = 0.0;
  q.gamma_prime = 0.0;
  q.coupling_j = 1.7;
  auto b6 = std::make_shared<const BasisIndex>(6, 2);
  Hamiltonian hq(q, {}, b6);
  const CMatrix m = matrix_of(hq, 0.0);
  for (std::int64_t i = 0; i < m.rows(); ++i)
    for (std::int64_t j = 0; j < m.cols(); ++j) {
      if (i == j || m(i, j) == cplx(0.0)) continue;
      const Configuration a = b6->config(i), c = b6->config(j);
      auto count_e = [](const Configuration& x) {
        return (x.n_exc >= 1 && x.level_m == Level::E) + (x.n_exc == 2 && x.level_n == Level::E);
      };
      CHECK(count_e(a) == count_e(c));
      CHECK(a.n_exc == c.n_exc);
    }
}

TEST_CASE("lossless blocks are complex symmetric") {
  PhysicalParams p = mixed_params(6);
  p.gamma_1d = 0.0;
  p.gamma_prime = 0.0;
  auto b = std::make_shared<const BasisIndex>(6, 2);
  Hamiltonian h(p, {DriveKind::Cw, 0.0, 0.4}, b);
  const CMatrix m = matrix_of(h, 0.0);
  CHECK((m - m.transpose()).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("block apply, raise/lower and local blocks agree with the full operator") {
  PhysicalParams p = mixed_params(6);
  p.decoupled = {2};
  auto b = std::make_shared<const BasisIndex>(6, 2);
  const DriveSpec d{DriveKind::Cw, 1.0, 0.4};
  Hamiltonian h(p, d, b);
  const CMatrix full = oracle::dense_hamiltonian(p, d, *b, 1.0);
  const CMatrix nodrive = oracle::dense_hamiltonian(p, d, *b, 0.0);
  const auto o1 = b->single_offset(), o2 = b->double_offset();
  const auto n1 = b->n_singles(), n2 = b->n_doubles();
  const CVector psi = random_state(b->dimension(), 21);
  const cplx shift(0.3, -0.2);

  CVector out1(n1), out2(n2);
  h.apply_block(1, psi.data() + o1, out1.data(), shift);
  CVector ref1 = nodrive.block(o1, o1, n1, n1) * psi.segment(o1, n1) - shift * psi.segment(o1, n1);
  CHECK((out1 - ref1).cwiseAbs().maxCoeff() < 1e-13);
  h.apply_block(2, psi.data() + o2, out2.data(), shift);
  CVector ref2 = nodrive.block(o2, o2, n2, n2) * psi.segment(o2, n2) - shift * psi.segment(o2, n2);
  CHECK((out2 - ref2).cwiseAbs().maxCoeff() < 1e-13);

  CVector up = CVector::Zero(n2);
  h.raise(1, psi.data() + o1, up.data());
  CHECK((up - (full - nodrive).block(o2, o1, n2, n1) * psi.segment(o1, n1)).cwiseAbs().maxCoeff() < 1e-13);
  CVector down = CVector::Zero(n1);
  h.lower(1, psi.data() + o2, down.data());
  CHECK((down - (full - nodrive).block(o1, o2, n1, n2) * psi.segment(o2, n2)).cwiseAbs().maxCoeff() < 1e-13);

  for (int m = 1; m <= 6; ++m) {
    const auto i = b->single(m, Level::E);
    CHECK((h.local_single(m) - nodrive.block(i, i, 2, 2)).cwiseAbs().maxCoeff() < 1e-14);
  }
  for (int m = 1; m <= 6; ++m)
    for (int q = m + 1; q <= 6; ++q) {
      const auto i = b->twin(m, Level::E, q, Level::E);
      CHECK((h.local_pair(m, q) - nodrive.block(i, i, 4, 4)).cwiseAbs().maxCoeff() < 1e-14);
    }
}

TEST_CASE("dimension errors") {
  PhysicalParams p = mixed_params(4);
  auto b = std::make_shared<const BasisIndex>(5, 2);
  CHECK_THROWS_AS(Hamiltonian(p, {}, b), DimensionError);
  auto b4 = std::make_shared<const BasisIndex>(4, 2);
  Hamiltonian h(p, {}, b4);
  CHECK_THROWS_AS(h.apply(CVector::Zero(3), 0.0), DimensionError);
}
