#include "wqed/transfer_matrix.hpp"

#include <array>
#include <cmath>

#include "wqed/errors.hpp"

namespace wqed {

ScatterCoeffs bare_three_level_coeffs(const PhysicalParams& p, double delta) {
  const double g1 = p.gamma_1d, gp = p.gamma_prime;
  cplx r;
  if (p.rabi == 0.0) {
    const cplx den(g1 + gp, -2.0 * delta);
    if (std::abs(den) < 1e-14) throw SingularityError("two-level coefficient denominator vanishes");
    r = -g1 / den;
  } else {
    const double dd = delta - p.delta_c;
    const cplx den = cplx(g1 + gp, -2.0 * delta) * dd + cplx(0.0, 2.0 * p.rabi * p.rabi);
    if (std::abs(den) < 1e-14) throw SingularityError("three-level coefficient denominator vanishes");
    r = -g1 * dd / den;
  }
  return {r, 1.0 + r};
}

namespace {

enum Lv { G = 0, E = 1, S = 2 };

// Per-level rates with only the g-s coherence dephased at gamma:
// gamma_g = gamma_s = gamma, gamma_e = 0, coherence x-y decays at the mean.
double level_rate(int l, double gamma) { return l == E ? 0.0 : gamma; }
double pair_rate(int a, int b, double gamma) {
  return a == b ? 0.0 : 0.5 * (level_rate(a, gamma) + level_rate(b, gamma));
}

// Bare dephased atom: atom coherences (e,g), (s,g) driven from ground.
ScatterCoeffs bare_dephased(const PhysicalParams& p, double delta, double gamma) {
  const cplx he(-delta, -0.5 * (p.gamma_1d + p.gamma_prime));
  const cplx hs(-(delta - p.delta_c), 0.0);
  Eigen::Matrix2cd a;
  a << he - kI * pair_rate(E, G, gamma), -p.rabi, -p.rabi, hs - kI * pair_rate(S, G, gamma);
  Eigen::Vector2cd b(1.0, 0.0);  // -V rho0 with V = -1 on g -> e
  if (std::abs(a.determinant()) < 1e-14) throw SingularityError("dephased atom system is singular");
  const Eigen::Vector2cd x = a.partialPivLu().solve(b);
  const cplx r = kI * (0.5 * p.gamma_1d) * x(0);
  return {r, 1.0 + r};
}

}  // namespace

// Kets: (atom, ancilla) in {ee, es, se, ss}; bras: atom g with ancilla in
// {e, s}. The first-order coherence X solves
//   H_K X - X H_B^dag - i D o X = -V rho0,
// with rho0 the pinned ancilla state and V the unit probe raising g -> e.
ScatterCoeffs dephased_coeffs(const PhysicalParams& p, double delta, double gamma, GateKind gate, int sign) {
  if (!(gamma >= 0.0)) throw ValidationError("gamma must be >= 0");
  if (gate == GateKind::None) return bare_dephased(p, delta, gamma);
  if (sign != 1 && sign != -1) throw ValidationError("sign must be +1 or -1");
  const double om = p.rabi;
  const cplx atom_e(-delta, -0.5 * (p.gamma_1d + p.gamma_prime));
  const cplx lvl_s(-(delta - p.delta_c), 0.0);
  const cplx anc_e(-delta, 0.0);
  static constexpr std::array<std::array<int, 2>, 4> kets{{{E, E}, {E, S}, {S, E}, {S, S}}};
  static constexpr std::array<int, 2> bras{E, S};

  Eigen::Matrix4cd hk = Eigen::Matrix4cd::Zero();
  for (int i = 0; i < 4; ++i) {
    const auto [a, c] = kets[i];
    hk(i, i) = (a == E ? atom_e : lvl_s) + (c == E ? anc_e : lvl_s);
    for (int j = 0; j < 4; ++j) {
      const auto [a2, c2] = kets[j];
      if (i == j) continue;
      if (c == c2 && a != a2) hk(i, j) -= om;
      if (a == a2 && c != c2) hk(i, j) -= om;
      if (a != a2 && c != c2 && a != c) hk(i, j) += sign * p.coupling_j;
    }
  }
  Eigen::Matrix2cd hb;
  hb << anc_e, -om, -om, lvl_s;

  // Pinned ancilla: populations of the Omega-dressed gate level, coherence
  // from its own steady state with the population difference held fixed.
  // At gamma = 0 this is exactly the pure dressed eigenstate; populations of
  // the bare level would give a non-positive rho0 and spurious gain.
  const double d_es = pair_rate(E, S, gamma);
  const double root = std::sqrt(0.25 * p.delta_c * p.delta_c + om * om);
  const double lam_s = -0.5 * p.delta_c + (p.delta_c >= 0.0 ? root : -root);  // s-like, e at -delta_c
  const double lam_e = -p.delta_c - lam_s;
  const double lam = gate == GateKind::S ? lam_s : lam_e;
  const double pop_e = om == 0.0 ? (gate == GateKind::S ? 0.0 : 1.0) : lam * lam / (lam * lam + om * om);
  const double pop_s = 1.0 - pop_e;
  const cplx den(p.delta_c, d_es);
  if (std::abs(den) < 1e-14) throw SingularityError("ancilla coherence is singular");
  const cplx rho_es = -om * (pop_s - pop_e) / den;
  Eigen::Matrix2cd rho0;
  rho0 << pop_e, rho_es, std::conj(rho_es), pop_s;

  // -V rho0: V maps bra-space (g, c) to ket (e, c) with amplitude -1.
  Eigen::Matrix<cplx, 4, 2> rhs = Eigen::Matrix<cplx, 4, 2>::Zero();
  rhs.row(0) = rho0.row(0);  // ket (e, e) <- (g, e)
  rhs.row(1) = rho0.row(1);  // ket (e, s) <- (g, s)

  Eigen::Matrix<cplx, 8, 8> a = Eigen::Matrix<cplx, 8, 8>::Zero();
  Eigen::Matrix<cplx, 8, 1> b;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 2; ++j) {
      const int row = 2 * i + j;
      b(row) = rhs(i, j);
      for (int k = 0; k < 4; ++k) a(row, 2 * k + j) += hk(i, k);
      for (int k = 0; k < 2; ++k) a(row, 2 * i + k) -= std::conj(hb(j, k));
      const double rate = pair_rate(kets[i][0], G, gamma) + pair_rate(kets[i][1], bras[j], gamma);
      a(row, row) -= kI * rate;
    }
  Eigen::FullPivLU<Eigen::Matrix<cplx, 8, 8>> lu(a);
  if (!lu.isInvertible()) throw SingularityError("ancilla linear system is singular");
  const Eigen::Matrix<cplx, 8, 1> x = lu.solve(b);
  // <sigma_ge (x) 1> = X[(e,e),(g,e)] + X[(e,s),(g,s)]
  const cplx coh = x(0) + x(3);
  const cplx r = kI * (0.5 * p.gamma_1d) * coh;
  return {r, 1.0 + r};
}

ScatterCoeffs ancilla_dressed_coeffs(const PhysicalParams& p, double delta, Branch probe, GateKind gate,
                                     int sign) {
  const bool match = (probe == Branch::S && gate == GateKind::S) || (probe == Branch::E && gate == GateKind::E);
  if (!match)
    throw ValidationError(
        "ancilla model only covers a probe on the same branch as the gate excitation");
  return dephased_coeffs(p, delta, 0.0, gate, sign);
}

ScatterCoeffs ancilla_dressed_coeffs(const PhysicalParams& p, double delta, Branch branch, int sign) {
  return ancilla_dressed_coeffs(p, delta, branch, branch == Branch::S ? GateKind::S : GateKind::E, sign);
}

Mat2 scatter_matrix(const ScatterCoeffs& c) {
  if (std::abs(c.t) < 1e-12) throw SingularityError("scatterer with t = 0 has no transfer matrix");
  Mat2 m;
  m << c.t * c.t - c.r * c.r, c.r, -c.r, 1.0;
  return m / c.t;
}

Mat2 free_matrix(double ka) {
  Mat2 m;
  m << std::polar(1.0, ka), 0.0, 0.0, std::polar(1.0, -ka);
  return m;
}

CascadeResult cascade(const std::vector<UnitCell>& cells, int n_repeats) {
  if (n_repeats < 0) throw ValidationError("n_repeats must be >= 0");
  Mat2 cell = Mat2::Identity();
  for (const auto& uc : cells)
    for (const auto& [coeffs, phase] : uc.entries) cell = scatter_matrix(coeffs) * free_matrix(phase) * cell;
  Mat2 tot = Mat2::Identity();
  for (int i = 0; i < n_repeats; ++i) tot = cell * tot;
  if (std::abs(tot(1, 1)) < 1e-300) throw SingularityError("cascade transfer matrix is singular");
  return {-tot(1, 0) / tot(1, 1), 1.0 / tot(1, 1), tot(0, 1) / tot(1, 1)};
}

SpectrumResult cascade_spectrum(const CellFactory& cells, int n_repeats, const std::vector<double>& grid) {
  SpectrumResult out;
  out.detuning = grid;
  out.reflectance.reserve(grid.size());
  out.transmittance.reserve(grid.size());
  for (double d : grid) {
    const CascadeResult c = cascade(cells(d), n_repeats);
    out.reflectance.push_back(std::norm(c.r));
    out.transmittance.push_back(std::norm(c.t));
  }
  return out;
}

CellFactory bare_chain(const PhysicalParams& p) {
  return [p](double d) {
    const double gamma = p.gamma_deph;
    const ScatterCoeffs c = gamma > 0.0 ? dephased_coeffs(p, d, gamma, GateKind::None, 1)
                                        : bare_three_level_coeffs(p, d);
    return std::vector<UnitCell>{UnitCell{{{c, p.phase()}}}};
  };
}

CellFactory ancilla_chain(const PhysicalParams& p, Branch branch, double gamma) {
  const GateKind gate = branch == Branch::S ? GateKind::S : GateKind::E;
  return [p, gate, gamma](double d) {
    const double ka = p.phase();
    UnitCell uc;
    uc.entries.push_back({dephased_coeffs(p, d, gamma, gate, +1), ka});
    uc.entries.push_back({dephased_coeffs(p, d, gamma, gate, -1), ka});
    return std::vector<UnitCell>{uc};
  };
}

}  // namespace wqed
