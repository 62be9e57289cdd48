#pragma once

// Brute-force reference operators built configuration by configuration from
// occupation lists. Shares nothing with the fast kernels except BasisIndex.

#include <cmath>
#include <vector>

#include "wqed/model.hpp"

namespace oracle {

using namespace wqed;

enum Occ { G = 0, E = 1, S = 2 };

inline std::vector<int> occupation(const BasisIndex& b, std::int64_t i) {
  std::vector<int> occ(b.n_atoms() + 1, G);
  const Configuration c = b.config(i);
  if (c.n_exc >= 1) occ[c.m] = c.level_m == Level::E ? E : S;
  if (c.n_exc == 2) occ[c.n] = c.level_n == Level::E ? E : S;
  return occ;
}

// Index of an occupation list, or -1 if it is outside the truncated space.
inline std::int64_t index_of(const BasisIndex& b, const std::vector<int>& occ) {
  std::vector<std::pair<int, int>> ex;
  for (int m = 1; m <= b.n_atoms(); ++m)
    if (occ[m] != G) ex.push_back({m, occ[m]});
  if (int(ex.size()) > b.max_exc()) return -1;
  Configuration c;
  c.n_exc = int(ex.size());
  if (c.n_exc >= 1) {
    c.m = ex[0].first;
    c.level_m = ex[0].second == E ? Level::E : Level::S;
  }
  if (c.n_exc == 2) {
    c.n = ex[1].first;
    c.level_n = ex[1].second == E ? Level::E : Level::S;
  }
  return b.index(c);
}

inline CMatrix dense_hamiltonian(const PhysicalParams& p, const DriveSpec& d, const BasisIndex& b,
                                 cplx drive) {
  const std::int64_t dim = b.dimension();
  const int n = p.n_atoms;
  const double ka = p.phase();
  CMatrix h = CMatrix::Zero(dim, dim);
  auto cpl = [&](int m) { return p.is_decoupled(m) ? 0.0 : 1.0; };
  for (std::int64_t i = 0; i < dim; ++i) {
    const auto occ = occupation(b, i);
    auto add = [&](std::vector<int> o, cplx amp) {
      const std::int64_t j = index_of(b, o);
      if (j >= 0) h(j, i) += amp;
    };
    for (int m = 1; m <= n; ++m) {
      if (occ[m] == E) h(i, i) += cplx(-d.detuning, -0.5 * p.gamma_prime * cpl(m));
      if (occ[m] == S) h(i, i) += -(d.detuning - p.delta_c);
    }
    // waveguide exchange including the self term
    for (int bb = 1; bb <= n; ++bb) {
      if (occ[bb] != E) continue;
      for (int a = 1; a <= n; ++a) {
        auto o = occ;
        o[bb] = G;
        if (o[a] != G) continue;
        o[a] = E;
        add(o, cplx(0.0, -0.5 * p.gamma_1d) * std::exp(kI * (ka * std::abs(a - bb))) * cpl(a) * cpl(bb));
      }
    }
    // control field
    for (int m = 1; m <= n; ++m) {
      if (occ[m] == G) continue;
      auto o = occ;
      o[m] = occ[m] == E ? S : E;
      add(o, -p.rabi);
    }
    // band-gap swap
    for (int m = 1; m <= n; ++m)
      for (int q = 1; q <= n; ++q) {
        if (m == q || occ[m] != S || occ[q] != E) continue;
        auto o = occ;
        o[m] = E;
        o[q] = S;
        const double range = std::isfinite(p.range_l) ? std::exp(-std::abs(m - q) / p.range_l) : 1.0;
        add(o, p.coupling_j * std::pow(-1.0, m + q) * range);
      }
    // drive
    for (int m = 1; m <= n; ++m) {
      auto o = occ;
      if (occ[m] == G) {
        o[m] = E;
        add(o, -drive * std::exp(kI * (ka * m)) * cpl(m));
      } else if (occ[m] == E) {
        o[m] = G;
        add(o, -std::conj(drive) * std::exp(-kI * (ka * m)) * cpl(m));
      }
    }
  }
  return h;
}

// i (gamma_1d/2) sum_m exp(i k (z - z_m) sign) sigma_ge^m + input term.
inline CMatrix dense_field(const PhysicalParams& p, const BasisIndex& b, bool forward, cplx input) {
  const std::int64_t dim = b.dimension();
  const int n = p.n_atoms;
  const double ka = p.phase();
  CMatrix f = CMatrix::Zero(dim, dim);
  if (forward) f.diagonal().setConstant(input * std::exp(kI * (ka * n)));
  for (std::int64_t i = 0; i < dim; ++i) {
    const auto occ = occupation(b, i);
    for (int m = 1; m <= n; ++m) {
      if (occ[m] != E || p.is_decoupled(m)) continue;
      auto o = occ;
      o[m] = G;
      const double z = forward ? n : 0.0;
      const double arg = forward ? ka * (z - m) : -ka * (z - m);
      f(index_of(b, o), i) += kI * (0.5 * p.gamma_1d) * std::exp(kI * arg);
    }
  }
  return f;
}

}  // namespace oracle
