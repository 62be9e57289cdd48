#include <cmath>

#include <Eigen/Eigenvalues>

#include "wqed/dynamics.hpp"
#include "wqed/errors.hpp"

namespace wqed {

CMatrix waveguide_block(const PhysicalParams& p) {
  const int n = p.n_atoms;
  const double ka = p.phase();
  CMatrix h(n, n);
  for (int m = 0; m < n; ++m)
    for (int q = 0; q < n; ++q) h(m, q) = cplx(0.0, -0.5 * p.gamma_1d) * std::polar(1.0, ka * std::abs(m - q));
  h.diagonal().array() -= cplx(0.0, 0.5 * p.gamma_prime);
  return h;
}

namespace {

// (exp(z) - 1)/z and (exp(z) - 1 - z)/z^2 with series near zero.
cplx phi1(cplx z) {
  if (std::abs(z) < 1e-4) return 1.0 + z * (0.5 + z * (1.0 / 6.0 + z / 24.0));
  return (std::exp(z) - 1.0) / z;
}
cplx phi2(cplx z) {
  if (std::abs(z) < 1e-3) return 0.5 + z * (1.0 / 6.0 + z * (1.0 / 24.0 + z / 120.0));
  return (std::exp(z) - 1.0 - z) / (z * z);
}

}  // namespace

// The coherent part is diagonal in the eigenbasis of H, so it is propagated
// exactly there. The dephasing refill gamma * diag(rho) is handled with a
// second-order exponential Runge-Kutta step (Cox-Matthews ETD2); for
// gamma = 0 the scheme is exact for any dt.
Trajectory evolve_density_single_exc(const PhysicalParams& p, const DensityBlock& rho0, double gamma,
                                     double t_end, double dt, int record_stride) {
  const int n = p.n_atoms;
  if (rho0.rho.rows() != n || rho0.rho.cols() != n) throw DimensionError("rho0 must be N x N");
  const double scale = std::max(1.0, rho0.rho.norm());
  if ((rho0.rho - rho0.rho.adjoint()).norm() > 1e-12 * scale) throw ValidationError("rho0 is not Hermitian");
  if (!(gamma >= 0.0)) throw ValidationError("gamma must be >= 0");
  if (!(dt > 0.0) || !(t_end >= 0.0)) throw ValidationError("need dt > 0 and t_end >= 0");
  if (record_stride < 1) throw ValidationError("record_stride must be >= 1");

  const CMatrix h = waveguide_block(p);
  Eigen::ComplexEigenSolver<CMatrix> es(h);
  if (es.info() != Eigen::Success) throw NumericError("eigendecomposition of the waveguide block failed");
  const CMatrix v = es.eigenvectors();
  const CVector lam = es.eigenvalues();
  const CMatrix vinv = v.partialPivLu().inverse();
  const CMatrix vinv_adj = vinv.adjoint();
  const CMatrix gram_t = (v.adjoint() * v).transpose();

  CMatrix e(n, n), f1(n, n), f2(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const cplx z = (cplx(0.0, -1.0) * (lam(i) - std::conj(lam(j))) - gamma) * dt;
      e(i, j) = std::exp(z);
      f1(i, j) = dt * phi1(z);
      f2(i, j) = dt * phi2(z);
    }

  auto refill = [&](const CMatrix& rt, CMatrix& out) {
    const CMatrix w = v * rt;
    const Eigen::VectorXcd d = (w.array() * v.conjugate().array()).rowwise().sum();
    out = gamma * (vinv * d.asDiagonal() * vinv_adj);
  };
  auto trace_of = [&](const CMatrix& rt) { return (rt.array() * gram_t.array()).sum().real(); };

  CMatrix rt = vinv * rho0.rho * vinv_adj;
  CMatrix nl(n, n), a(n, n), nla(n, n);
  double ground = rho0.ground;
  double tr_prev = trace_of(rt);

  Trajectory tr;
  tr.dt = dt * record_stride;
  auto record = [&](double t, double trace) {
    tr.time.push_back(t);
    tr.p_e.push_back(trace);
    tr.p_s.push_back(0.0);
    tr.ground.push_back(ground);
    tr.norm.push_back(trace + ground);
  };
  record(0.0, tr_prev);
  const long long nsteps = std::llround(t_end / dt);
  for (long long s = 1; s <= nsteps; ++s) {
    if (gamma > 0.0) {
      refill(rt, nl);
      a = e.cwiseProduct(rt) + f1.cwiseProduct(nl);
      refill(a, nla);
      rt = a + f2.cwiseProduct(nla - nl);
    } else {
      rt = e.cwiseProduct(rt);
    }
    const double trace = trace_of(rt);
    ground += tr_prev - trace;
    tr_prev = trace;
    if (s % record_stride == 0) record(s * dt, trace);
  }
  return tr;
}

}  // namespace wqed
