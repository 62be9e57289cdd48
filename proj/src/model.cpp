#include "wqed/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wqed/errors.hpp"

namespace wqed {

double PhysicalParams::phase() const {
  if (std::isnan(ka)) return 0.5 * kPi * (1.0 + kappa);
  return ka;
}

bool PhysicalParams::is_decoupled(int m) const {
  return std::find(decoupled.begin(), decoupled.end(), m) != decoupled.end();
}

double DriveSpec::envelope(double t) const {
  if (kind == DriveKind::Cw) return amplitude;
  if (t < 0.0 || t > 2.0 * pulse_width) return 0.0;
  const double s = std::sin(kPi * t / (2.0 * pulse_width));
  return amplitude * s * s;
}

ParamReport validate_params(const PhysicalParams& p) {
  ParamReport rep;
  auto bad = [&](const std::string& s) { rep.violations.push_back(s); };
  if (p.n_atoms < 1) bad("n_atoms must be >= 1");
  if (!(p.gamma_1d >= 0.0)) bad("gamma_1d must be >= 0");
  if (!(p.gamma_prime >= 0.0)) bad("gamma_prime must be >= 0");
  if (!(p.gamma_deph >= 0.0)) bad("gamma_deph must be >= 0");
  if (!(p.range_l > 0.0)) bad("range_l must be > 0 or infinite");
  if (!std::isfinite(p.coupling_j) || !std::isfinite(p.rabi) || !std::isfinite(p.delta_c) ||
      !std::isfinite(p.kappa))
    bad("coupling_j, rabi, delta_c and kappa must be finite");
  if (!std::isnan(p.ka) && !std::isfinite(p.ka)) bad("ka must be finite");
  for (int m : p.decoupled)
    if (m < 1 || m > p.n_atoms) {
      std::ostringstream os;
      os << "decoupled atom " << m << " outside 1.." << p.n_atoms;
      bad(os.str());
    }
  if (p.rabi != 0.0) {
    if (p.delta_c == 0.0) {
      rep.warnings.push_back("delta_c = 0 with nonzero rabi: not dispersive");
    } else if (std::abs(p.rabi / p.delta_c) >= 0.5) {
      std::ostringstream os;
      os << "|rabi/delta_c| = " << std::abs(p.rabi / p.delta_c)
         << " is outside the dispersive regime (< 0.5)";
      rep.warnings.push_back(os.str());
    }
  }
  return rep;
}

std::int64_t basis_dimension(int n_atoms, int max_exc) {
  const std::int64_t n = n_atoms;
  std::int64_t d = 1 + 2 * n;
  if (max_exc == 2) d += 2 * n * (n - 1);
  return d;
}

BasisIndex::BasisIndex(int n_atoms, int max_exc) : n_(n_atoms), max_exc_(max_exc) {
  if (n_atoms < 1) throw ValidationError("basis needs at least one atom");
  if (max_exc != 1 && max_exc != 2)
    throw UnsupportedTruncation("max_exc must be 1 or 2, got " + std::to_string(max_exc));
  dim_ = basis_dimension(n_atoms, max_exc);
  if (max_exc == 2) {
    pair_start_.resize(n_);
    for (int m = 1; m <= n_; ++m) pair_start_[m - 1] = m < n_ ? pair(m, m + 1) : pair(m - 1, m) + 1;
  }
}

std::int64_t BasisIndex::index(const Configuration& c) const {
  auto atom_ok = [&](int m) { return m >= 1 && m <= n_; };
  switch (c.n_exc) {
    case 0:
      return 0;
    case 1:
      if (!atom_ok(c.m)) break;
      return single(c.m, c.level_m);
    case 2:
      if (max_exc_ < 2 || !atom_ok(c.m) || !atom_ok(c.n) || c.m >= c.n) break;
      return twin(c.m, c.level_m, c.n, c.level_n);
    default:
      break;
  }
  throw ValidationError("configuration not in basis");
}

Configuration BasisIndex::config(std::int64_t i) const {
  if (i < 0 || i >= dim_) throw DimensionError("basis index out of range");
  Configuration c;
  if (i == 0) return c;
  if (i < double_offset()) {
    const std::int64_t k = i - 1;
    c.n_exc = 1;
    c.m = static_cast<int>(k / 2) + 1;
    c.level_m = static_cast<Level>(k % 2);
    return c;
  }
  const std::int64_t k = i - double_offset();
  const std::int64_t p = k / 4;
  const int lv = static_cast<int>(k % 4);
  // Last m whose first pair index is <= p.
  auto it = std::upper_bound(pair_start_.begin(), pair_start_.end() - 1, p);
  const int m = static_cast<int>(it - pair_start_.begin());
  c.n_exc = 2;
  c.m = m;
  c.n = static_cast<int>(p - pair_start_[m - 1]) + m + 1;
  c.level_m = static_cast<Level>(lv / 2);
  c.level_n = static_cast<Level>(lv % 2);
  return c;
}

BasisIndex build_basis(int n_atoms, int max_exc) { return BasisIndex(n_atoms, max_exc); }

}  // namespace wqed
