#include "wqed/hamiltonian.hpp"

#include <cmath>

#include "wqed/errors.hpp"

namespace wqed {

struct Hamiltonian::Workspace {
  std::vector<cplx> ee, fe, ss, hee, hfe, row;
  void resize(int n) {
    const std::size_t nn = std::size_t(n) * n;
    if (ee.size() != nn) {
      ee.assign(nn, 0.0);
      fe.assign(nn, 0.0);
      ss.assign(nn, 0.0);
      hee.assign(nn, 0.0);
      hfe.assign(nn, 0.0);
      row.assign(n, 0.0);
    }
  }
};

Hamiltonian::Hamiltonian(PhysicalParams p, DriveSpec d, std::shared_ptr<const BasisIndex> basis)
    : p_(std::move(p)), d_(d), basis_(std::move(basis)) {
  if (!basis_) throw ValidationError("null basis");
  if (basis_->n_atoms() != p_.n_atoms)
    throw DimensionError("basis built for " + std::to_string(basis_->n_atoms()) +
                         " atoms, params have " + std::to_string(p_.n_atoms));
  const auto rep = validate_params(p_);
  if (!rep.ok()) throw ValidationError(rep.violations.front());
  n_ = p_.n_atoms;
  const double ka = p_.phase();
  hop_phase_ = std::polar(1.0, ka);
  hop_scale_ = cplx(0.0, -0.5 * p_.gamma_1d);
  g_.assign(n_, 1.0);
  for (int m : p_.decoupled) g_[m - 1] = 0.0;
  eikz_.resize(n_);
  for (int m = 1; m <= n_; ++m) eikz_[m - 1] = std::polar(1.0, ka * m);
  jmat_.assign(std::size_t(n_) * n_, 0.0);
  for (int m = 1; m <= n_; ++m)
    for (int n = 1; n <= n_; ++n) {
      if (m == n) continue;
      double range = 1.0;
      if (std::isfinite(p_.range_l)) range = std::exp(-std::abs(m - n) / p_.range_l);
      jmat_[(m - 1) * n_ + (n - 1)] = p_.coupling_j * sublattice_sign(m) * sublattice_sign(n) * range;
    }
  diag_e_ = cplx(-d_.detuning, -0.5 * p_.gamma_prime);
  diag_s_ = cplx(-(d_.detuning - p_.delta_c), 0.0);
}

std::shared_ptr<const Hamiltonian> assemble_hamiltonian(const PhysicalParams& p, const DriveSpec& d,
                                                        std::shared_ptr<const BasisIndex> basis) {
  return std::make_shared<const Hamiltonian>(p, d, std::move(basis));
}

void Hamiltonian::hop_vector(const cplx* x, std::ptrdiff_t stride, cplx* y,
                             std::ptrdiff_t ystride) const {
  cplx f = 0.0;
  for (int m = 0; m < n_; ++m) {
    f = hop_phase_ * f + g_[m] * x[m * stride];
    y[m * ystride] = f;
  }
  cplx h = 0.0;
  for (int m = n_ - 1; m >= 0; --m) {
    const cplx xm = g_[m] * x[m * stride];
    h = hop_phase_ * h + xm;
    y[m * ystride] = (y[m * ystride] + h - xm) * (hop_scale_ * g_[m]);
  }
}

void Hamiltonian::hop_columns(const cplx* x, cplx* y) const {
  const int n = n_;
  // Forward recursion down the rows, all columns at once.
  for (int c = 0; c < n; ++c) y[c] = g_[0] * x[c];
  for (int m = 1; m < n; ++m) {
    const cplx* xr = x + std::size_t(m) * n;
    const cplx* yp = y + std::size_t(m - 1) * n;
    cplx* yr = y + std::size_t(m) * n;
    const double gm = g_[m];
    for (int c = 0; c < n; ++c) yr[c] = hop_phase_ * yp[c] + gm * xr[c];
  }
  thread_local std::vector<cplx> h;
  h.assign(n, 0.0);
  for (int m = n - 1; m >= 0; --m) {
    const cplx* xr = x + std::size_t(m) * n;
    cplx* yr = y + std::size_t(m) * n;
    const double gm = g_[m];
    const cplx s = hop_scale_ * gm;
    for (int c = 0; c < n; ++c) {
      const cplx xm = gm * xr[c];
      h[c] = hop_phase_ * h[c] + xm;
      yr[c] = (yr[c] + h[c] - xm) * s;
    }
  }
}

void Hamiltonian::singles_part(const cplx* in, cplx* out) const {
  hop_vector(in, 2, out, 2);
  const double om = p_.rabi;
  for (int m = 0; m < n_; ++m) {
    const cplx xe = in[2 * m];
    const cplx xs = in[2 * m + 1];
    const cplx de(diag_e_.real(), diag_e_.imag() * g_[m]);
    out[2 * m] += de * xe - om * xs;
    out[2 * m + 1] = diag_s_ * xs - om * xe;
  }
}

void Hamiltonian::unpack(const cplx* in, cplx* ee, cplx* fe, cplx* ss) const {
  const int n = n_;
  std::size_t k = 0;
  for (int m = 0; m < n; ++m) {
    ee[std::size_t(m) * n + m] = 0.0;
    fe[std::size_t(m) * n + m] = 0.0;
    ss[std::size_t(m) * n + m] = 0.0;
    for (int q = m + 1; q < n; ++q, k += 4) {
      const std::size_t mq = std::size_t(m) * n + q;
      const std::size_t qm = std::size_t(q) * n + m;
      ee[mq] = ee[qm] = in[k];
      fe[mq] = in[k + 1];  // e at m, s at q
      fe[qm] = in[k + 2];  // s at m, e at q
      ss[mq] = ss[qm] = in[k + 3];
    }
  }
}

void Hamiltonian::doubles_part(const cplx* in, cplx* out) const {
  thread_local Workspace ws;
  ws.resize(n_);
  const int n = n_;
  unpack(in, ws.ee.data(), ws.fe.data(), ws.ss.data());
  hop_columns(ws.ee.data(), ws.hee.data());
  hop_columns(ws.fe.data(), ws.hfe.data());
  const double om = p_.rabi;
  const double dss = 2.0 * diag_s_.real();
  std::size_t k = 0;
  for (int m = 0; m < n; ++m) {
    const cplx dem(diag_e_.real(), diag_e_.imag() * g_[m]);
    for (int q = m + 1; q < n; ++q, k += 4) {
      const cplx deq(diag_e_.real(), diag_e_.imag() * g_[q]);
      const std::size_t mq = std::size_t(m) * n + q;
      const std::size_t qm = std::size_t(q) * n + m;
      const cplx e = in[k], fmq = in[k + 1], fqm = in[k + 2], s = in[k + 3];
      const double j = jmat_[mq];
      out[k] = (dem + deq) * e + ws.hee[mq] + ws.hee[qm] - om * (fmq + fqm);
      out[k + 1] = (dem + diag_s_) * fmq + ws.hfe[mq] - om * (e + s) + j * fqm;
      out[k + 2] = (deq + diag_s_) * fqm + ws.hfe[qm] - om * (e + s) + j * fmq;
      out[k + 3] = dss * s - om * (fmq + fqm);
    }
  }
}

void Hamiltonian::apply_block(int n_exc, const cplx* in, cplx* out, cplx shift) const {
  switch (n_exc) {
    case 0:
      out[0] = -shift * in[0];
      return;
    case 1:
      singles_part(in, out);
      if (shift != 0.0)
        for (int i = 0; i < 2 * n_; ++i) out[i] -= shift * in[i];
      return;
    case 2: {
      if (basis_->max_exc() < 2) throw UnsupportedTruncation("basis has no double block");
      doubles_part(in, out);
      if (shift != 0.0) {
        const std::int64_t nd = basis_->n_doubles();
        for (std::int64_t i = 0; i < nd; ++i) out[i] -= shift * in[i];
      }
      return;
    }
    default:
      throw UnsupportedTruncation("excitation block must be 0, 1 or 2");
  }
}

namespace {

void raise_impl(int k, int n, const std::vector<double>& g, const std::vector<cplx>& eikz, cplx c,
                const cplx* in, cplx* out) {
  if (k == 0) {
    for (int m = 0; m < n; ++m) out[2 * m] -= c * g[m] * eikz[m] * in[0];
    return;
  }
  std::size_t idx = 0;
  for (int m = 0; m < n; ++m) {
    const cplx am = c * g[m] * eikz[m];
    for (int q = m + 1; q < n; ++q, idx += 4) {
      const cplx aq = c * g[q] * eikz[q];
      out[idx] -= am * in[2 * q] + aq * in[2 * m];
      out[idx + 1] -= am * in[2 * q + 1];
      out[idx + 2] -= aq * in[2 * m + 1];
    }
  }
}

void lower_impl(int k, int n, const std::vector<double>& g, const std::vector<cplx>& eikz, cplx c,
                const cplx* in, cplx* out) {
  if (k == 0) {
    cplx acc = 0.0;
    for (int m = 0; m < n; ++m) acc += g[m] * std::conj(eikz[m]) * in[2 * m];
    out[0] -= c * acc;
    return;
  }
  std::size_t idx = 0;
  for (int m = 0; m < n; ++m) {
    const cplx bm = c * g[m] * std::conj(eikz[m]);
    for (int q = m + 1; q < n; ++q, idx += 4) {
      const cplx bq = c * g[q] * std::conj(eikz[q]);
      out[2 * q] -= bm * in[idx];
      out[2 * m] -= bq * in[idx];
      out[2 * q + 1] -= bm * in[idx + 1];
      out[2 * m + 1] -= bq * in[idx + 2];
    }
  }
}

}  // namespace

void Hamiltonian::raise(int k, const cplx* in, cplx* out) const {
  if (k < 0 || k >= basis_->max_exc()) throw UnsupportedTruncation("no block above " + std::to_string(k));
  raise_impl(k, n_, g_, eikz_, 1.0, in, out);
}

void Hamiltonian::lower(int k, const cplx* in, cplx* out) const {
  if (k < 0 || k >= basis_->max_exc()) throw UnsupportedTruncation("no block above " + std::to_string(k));
  lower_impl(k, n_, g_, eikz_, 1.0, in, out);
}

void Hamiltonian::apply_with_drive(const CVector& psi, cplx drive, CVector& out) const {
  const std::int64_t dim = basis_->dimension();
  if (psi.size() != dim) throw DimensionError("state dimension does not match basis");
  out.resize(dim);
  const cplx* in = psi.data();
  cplx* o = out.data();
  const std::int64_t s1 = basis_->single_offset();
  const std::int64_t s2 = basis_->double_offset();
  o[0] = 0.0;
  singles_part(in + s1, o + s1);
  const bool doubles = basis_->max_exc() == 2;
  if (doubles) doubles_part(in + s2, o + s2);
  if (drive != 0.0) {
    raise_impl(0, n_, g_, eikz_, drive, in, o + s1);
    lower_impl(0, n_, g_, eikz_, std::conj(drive), in + s1, o);
    if (doubles) {
      raise_impl(1, n_, g_, eikz_, drive, in + s1, o + s2);
      lower_impl(1, n_, g_, eikz_, std::conj(drive), in + s2, o + s1);
    }
  }
}

void Hamiltonian::apply(const CVector& psi, double t, CVector& out) const {
  apply_with_drive(psi, d_.envelope(t), out);
}

CVector Hamiltonian::apply(const CVector& psi, double t) const {
  CVector out;
  apply(psi, t, out);
  return out;
}

Eigen::Matrix2cd Hamiltonian::local_single(int m) const {
  const double gm = g_[m - 1];
  Eigen::Matrix2cd b;
  b << cplx(diag_e_.real(), diag_e_.imag() * gm) + hop_scale_ * gm, -p_.rabi, -p_.rabi, diag_s_;
  return b;
}

Eigen::Matrix4cd Hamiltonian::local_pair(int m, int n) const {
  const double gm = g_[m - 1], gn = g_[n - 1];
  const cplx em = cplx(diag_e_.real(), diag_e_.imag() * gm) + hop_scale_ * gm;
  const cplx en = cplx(diag_e_.real(), diag_e_.imag() * gn) + hop_scale_ * gn;
  const double om = p_.rabi;
  const double j = band_gap(m, n);
  Eigen::Matrix4cd b;
  b << em + en, -om, -om, 0.0,
       -om, em + diag_s_, j, -om,
       -om, j, en + diag_s_, -om,
       0.0, -om, -om, 2.0 * diag_s_;
  return b;
}

}  // namespace wqed
