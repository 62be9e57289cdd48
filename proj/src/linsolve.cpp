#include "wqed/linsolve.hpp"

#include <cmath>

namespace wqed {

SolverResult gmres(const LinearOp& a, const CVector& b, CVector& x, const LinearOp& precond,
                   const SolverOptions& opt) {
  const Eigen::Index n = b.size();
  SolverResult res;
  const double bnorm = b.norm();
  if (x.size() != n) x = CVector::Zero(n);
  if (bnorm == 0.0) {
    x.setZero();
    res.converged = true;
    return res;
  }
  const int m = std::max(1, std::min<int>(opt.restart, static_cast<int>(n)));
  std::vector<CVector> v(m + 1, CVector(n));
  CMatrix h = CMatrix::Zero(m + 1, m);
  std::vector<cplx> cs(m), sn(m);
  CVector gvec(m + 1), w(n), z(n), r(n), ax(n);

  auto precondition = [&](const CVector& in, CVector& out) {
    if (precond) precond(in, out);
    else out = in;
  };

  while (true) {
    a(x, ax);
    r = b - ax;
    double beta = r.norm();
    res.residual = beta / bnorm;
    if (res.residual <= opt.rel_tol) {
      res.converged = true;
      return res;
    }
    if (res.iterations >= opt.max_iter) return res;

    v[0] = r / beta;
    gvec.setZero();
    gvec(0) = beta;
    h.setZero();
    int j = 0;
    for (; j < m && res.iterations < opt.max_iter; ++j) {
      ++res.iterations;
      precondition(v[j], z);
      a(z, w);
      for (int i = 0; i <= j; ++i) {
        h(i, j) = v[i].dot(w);
        w -= h(i, j) * v[i];
      }
      const double hn = w.norm();
      h(j + 1, j) = hn;
      if (hn > 0.0) v[j + 1] = w / hn;
      for (int i = 0; i < j; ++i) {
        const cplx t = std::conj(cs[i]) * h(i, j) + std::conj(sn[i]) * h(i + 1, j);
        h(i + 1, j) = -sn[i] * h(i, j) + cs[i] * h(i + 1, j);
        h(i, j) = t;
      }
      const double den = std::hypot(std::abs(h(j, j)), hn);
      if (den == 0.0) {
        cs[j] = 1.0;
        sn[j] = 0.0;
      } else {
        cs[j] = h(j, j) / den;
        sn[j] = hn / den;
      }
      h(j, j) = den;
      h(j + 1, j) = 0.0;
      gvec(j + 1) = -sn[j] * gvec(j);
      gvec(j) = std::conj(cs[j]) * gvec(j);
      if (std::abs(gvec(j + 1)) <= 0.5 * opt.rel_tol * bnorm || hn == 0.0) {
        ++j;
        break;
      }
    }
    // Back substitution on the leading j x j triangle.
    CVector y = h.topLeftCorner(j, j).triangularView<Eigen::Upper>().solve(gvec.head(j));
    if (!y.allFinite()) return res;  // breakdown on a singular operator
    CVector upd = CVector::Zero(n);
    for (int i = 0; i < j; ++i) upd += y(i) * v[i];
    precondition(upd, z);
    x += z;
  }
}

}  // namespace wqed
