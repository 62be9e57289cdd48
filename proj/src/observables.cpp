#include "wqed/observables.hpp"

#include <algorithm>
#include <cmath>

#include "wqed/errors.hpp"

namespace wqed {

namespace {

void check_dim(const StateVector& psi, const BasisIndex& basis) {
  if (psi.size() != basis.dimension()) throw DimensionError("state dimension does not match basis");
  if (basis.n_atoms() < 1) throw DimensionError("empty basis");
}

}  // namespace

StateVector apply_output_field(const StateVector& psi, const FieldOperatorSpec& spec,
                               const PhysicalParams& p, const BasisIndex& basis) {
  check_dim(psi, basis);
  const int n = basis.n_atoms();
  if (p.n_atoms != n) throw DimensionError("params and basis disagree on atom count");
  const double ka = p.phase();
  const bool fwd = spec.direction == Direction::Forward;
  std::vector<cplx> c(n);
  for (int m = 1; m <= n; ++m) {
    const double arg = fwd ? ka * (n - m) : ka * m;
    c[m - 1] = p.is_decoupled(m) ? cplx(0.0) : kI * (0.5 * p.gamma_1d) * std::polar(1.0, arg);
  }
  StateVector out = fwd ? StateVector(spec.input * std::polar(1.0, ka * n) * psi)
                        : StateVector(StateVector::Zero(psi.size()));
  const cplx* in = psi.data();
  cplx* o = out.data();
  for (int m = 0; m < n; ++m) o[0] += c[m] * in[1 + 2 * m];
  if (basis.max_exc() == 2) {
    const cplx* d = in + basis.double_offset();
    cplx* os = o + 1;
    std::size_t idx = 0;
    for (int m = 0; m < n; ++m)
      for (int q = m + 1; q < n; ++q, idx += 4) {
        os[2 * q] += c[m] * d[idx];
        os[2 * m] += c[q] * d[idx];
        os[2 * q + 1] += c[m] * d[idx + 1];
        os[2 * m + 1] += c[q] * d[idx + 2];
      }
  }
  return out;
}

double intensity(const StateVector& psi, const FieldOperatorSpec& spec, const PhysicalParams& p,
                 const BasisIndex& basis, bool normalize) {
  const double nrm = psi.squaredNorm();
  if (normalize && !(nrm > 0.0)) throw NumericError("intensity of a zero-norm state is undefined");
  const double v = apply_output_field(psi, spec, p, basis).squaredNorm();
  return normalize ? v / nrm : v;
}

double g2_zero(const StateVector& psi, const PhysicalParams& p, const BasisIndex& basis, cplx input) {
  const FieldOperatorSpec fwd{Direction::Forward, input};
  const StateVector once = apply_output_field(psi, fwd, p, basis);
  const StateVector twice = apply_output_field(once, fwd, p, basis);
  const double nrm = psi.squaredNorm();
  const double i1 = once.squaredNorm() / nrm;
  if (!(i1 > 1e-300)) throw NumericError("g2: transmitted intensity vanishes");
  return (twice.squaredNorm() / nrm) / (i1 * i1);
}

Populations populations(const StateVector& psi, const BasisIndex& basis) {
  check_dim(psi, basis);
  Populations pop;
  pop.ground = std::norm(psi(0));
  const int n = basis.n_atoms();
  for (int m = 0; m < n; ++m) {
    pop.p_e += std::norm(psi(1 + 2 * m));
    pop.p_s += std::norm(psi(2 + 2 * m));
  }
  if (basis.max_exc() == 2) {
    const std::int64_t off = basis.double_offset();
    const std::int64_t nd = basis.n_doubles();
    for (std::int64_t k = 0; k < nd; k += 4) {
      const double ee = std::norm(psi(off + k));
      const double es = std::norm(psi(off + k + 1)) + std::norm(psi(off + k + 2));
      const double ss = std::norm(psi(off + k + 3));
      pop.p_e += 2.0 * ee + es;
      pop.p_s += 2.0 * ss + es;
    }
  }
  return pop;
}

Eigen::MatrixXd population_map(const StateVector& psi, const BasisIndex& basis) {
  check_dim(psi, basis);
  const int n = basis.n_atoms();
  Eigen::MatrixXd map = Eigen::MatrixXd::Zero(n, n);
  if (basis.max_exc() < 2) return map;
  for (int m = 1; m <= n; ++m)
    for (int q = m + 1; q <= n; ++q) {
      const double w = std::norm(psi(basis.twin(m, Level::S, q, Level::S)));
      map(m - 1, q - 1) = w;
      map(q - 1, m - 1) = w;
    }
  return map;
}

double even_parity_fraction(const Eigen::MatrixXd& map) {
  double even = 0.0, total = 0.0;
  for (Eigen::Index i = 0; i < map.rows(); ++i)
    for (Eigen::Index j = 0; j < map.cols(); ++j) {
      total += map(i, j);
      if ((i + j) % 2 == 0) even += map(i, j);
    }
  if (total <= 0.0) return 0.0;
  return even / total;
}

PulseIntegral pulse_reflectance(const Trajectory& with_gate, const Trajectory& background,
                                double input_energy, Channel channel, double t_stop) {
  const auto& a = channel == Channel::Reflected ? with_gate.i_r : with_gate.i_t;
  const auto& b = channel == Channel::Reflected ? background.i_r : background.i_t;
  if (a.size() != with_gate.time.size() || b.size() != background.time.size() || a.empty())
    throw ValidationError("pulse_reflectance: trajectories carry no field record");
  if (with_gate.time.size() != background.time.size() ||
      std::abs(with_gate.dt - background.dt) > 1e-12 * std::max(1.0, with_gate.dt))
    throw ValidationError("pulse_reflectance: time grids differ");
  if (!(input_energy > 0.0)) throw NumericError("pulse_reflectance: zero input energy");
  PulseIntegral out;
  double peak = 0.0;
  const auto& t = with_gate.time;
  std::size_t last = t.size() - 1;
  if (t_stop >= 0.0)
    while (last > 0 && t[last] > t_stop + 1e-12) --last;
  for (std::size_t i = 0; i <= last; ++i) {
    const double f = a[i] - b[i];
    peak = std::max(peak, std::abs(f));
    out.min_integrand = std::min(out.min_integrand, f);
    if (i > 0) out.value += 0.5 * (t[i] - t[i - 1]) * (f + (a[i - 1] - b[i - 1]));
  }
  out.value /= input_energy;
  out.negative_warning = out.min_integrand < -1e-3 * peak;
  return out;
}

}  // namespace wqed
