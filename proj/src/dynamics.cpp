#include "wqed/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wqed/errors.hpp"
#include "wqed/observables.hpp"

namespace wqed {

double step_bound(const PhysicalParams& p, const DriveSpec& d) {
  const double fastest = std::max({std::abs(d.detuning), std::abs(p.delta_c) + std::abs(p.coupling_j),
                                   std::abs(p.rabi), p.n_atoms * p.gamma_1d});
  return fastest > 0.0 ? 0.1 / fastest : kInf;
}

Trajectory evolve(const Hamiltonian& h, const StateVector& psi0, double t_end, double dt,
                  const EvolveOptions& opt) {
  const BasisIndex& basis = h.basis();
  if (psi0.size() != basis.dimension()) throw DimensionError("initial state does not match basis");
  if (!(dt > 0.0) || !(t_end >= 0.0)) throw ValidationError("evolve needs dt > 0 and t_end >= 0");
  if (opt.record_stride < 1) throw ValidationError("record_stride must be >= 1");
  const double bound = step_bound(h.params(), h.drive());
  if (opt.enforce_step_bound && dt > bound * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "dt = " << dt << " exceeds the resolution bound " << bound;
    throw StepSizeError(os.str());
  }
  const long long nsteps = std::llround(t_end / dt);
  Trajectory tr;
  tr.dt = dt * opt.record_stride;
  const std::size_t nrec = std::size_t(nsteps / opt.record_stride) + 1;
  tr.time.reserve(nrec);
  tr.norm.reserve(nrec);
  tr.p_e.reserve(nrec);
  tr.p_s.reserve(nrec);

  std::vector<double> snaps = opt.snapshot_times;
  std::sort(snaps.begin(), snaps.end());
  std::size_t next_snap = 0;

  const PhysicalParams& p = h.params();
  auto record = [&](double t, const StateVector& psi) {
    const Populations pop = populations(psi, basis);
    tr.time.push_back(t);
    tr.norm.push_back(psi.squaredNorm());
    tr.p_e.push_back(pop.p_e);
    tr.p_s.push_back(pop.p_s);
    if (opt.record_fields) {
      const cplx e_in = h.drive().envelope(t);
      tr.i_r.push_back(intensity(psi, {Direction::Backward, 0.0}, p, basis, opt.normalize_fields));
      tr.i_t.push_back(intensity(psi, {Direction::Forward, e_in}, p, basis, opt.normalize_fields));
    }
  };

  StateVector psi = psi0;
  CVector k(psi.size()), acc(psi.size()), tmp(psi.size());
  const cplx mi(0.0, -1.0);
  double min_norm = psi.squaredNorm();
  record(0.0, psi);
  while (next_snap < snaps.size() && snaps[next_snap] <= 0.5 * dt) tr.snapshots.emplace_back(0.0, psi), ++next_snap;

  for (long long s = 1; s <= nsteps; ++s) {
    const double t = (s - 1) * dt;
    h.apply(psi, t, k);
    k *= mi;
    acc = k;
    tmp = psi + (0.5 * dt) * k;
    h.apply(tmp, t + 0.5 * dt, k);
    k *= mi;
    acc += 2.0 * k;
    tmp = psi + (0.5 * dt) * k;
    h.apply(tmp, t + 0.5 * dt, k);
    k *= mi;
    acc += 2.0 * k;
    tmp = psi + dt * k;
    h.apply(tmp, t + dt, k);
    k *= mi;
    acc += k;
    psi += (dt / 6.0) * acc;

    const double nrm = psi.squaredNorm();
    if (!std::isfinite(nrm) || nrm > min_norm * (1.0 + 1e-6) + 1e-300) {
      std::ostringstream os;
      os << "norm grew from " << min_norm << " to " << nrm << " at t = " << s * dt
         << "; reduce dt (currently " << dt << ")";
      throw StepSizeError(os.str());
    }
    min_norm = std::min(min_norm, nrm);
    const double tn = s * dt;
    if (s % opt.record_stride == 0) record(tn, psi);
    while (next_snap < snaps.size() && snaps[next_snap] <= tn + 0.5 * dt)
      tr.snapshots.emplace_back(tn, psi), ++next_snap;
  }
  tr.final_state = std::move(psi);
  return tr;
}

namespace {

// Decoupled lossless levels make a local block singular; fall back to the pseudo-inverse.
template <int K>
Eigen::Matrix<cplx, K, K> safe_inverse(const Eigen::Matrix<cplx, K, K>& m) {
  Eigen::FullPivLU<Eigen::Matrix<cplx, K, K>> lu(m);
  if (lu.isInvertible()) return lu.inverse();
  return Eigen::CompleteOrthogonalDecomposition<Eigen::Matrix<cplx, K, K>>(m).pseudoInverse();
}

class BlockJacobi {
 public:
  BlockJacobi(const Hamiltonian& h, int n_exc, cplx shift) : n_exc_(n_exc) {
    const int n = h.n_atoms();
    if (n_exc == 1) {
      single_.reserve(n);
      for (int m = 1; m <= n; ++m)
        single_.push_back(safe_inverse<2>(h.local_single(m) - shift * Eigen::Matrix2cd::Identity()));
    } else if (n_exc == 2) {
      pair_.reserve(std::size_t(n) * (n - 1) / 2);
      for (int m = 1; m <= n; ++m)
        for (int q = m + 1; q <= n; ++q) {
          Eigen::Matrix4cd b = h.local_pair(m, q) - shift * Eigen::Matrix4cd::Identity();
          pair_.push_back(safe_inverse<4>(b));
        }
    }
  }

  void operator()(const CVector& in, CVector& out) const {
    out.resize(in.size());
    if (n_exc_ == 1) {
      for (std::size_t i = 0; i < single_.size(); ++i)
        out.segment<2>(2 * i) = single_[i] * in.segment<2>(2 * i);
    } else if (n_exc_ == 2) {
      for (std::size_t i = 0; i < pair_.size(); ++i)
        out.segment<4>(4 * i) = pair_[i] * in.segment<4>(4 * i);
    } else {
      out = in;
    }
  }

 private:
  int n_exc_;
  std::vector<Eigen::Matrix2cd> single_;
  std::vector<Eigen::Matrix4cd> pair_;
};

}  // namespace

SolverResult solve_block(const Hamiltonian& h, int n_exc, cplx shift, const CVector& b, CVector& x,
                         const SolverOptions& opt) {
  if (n_exc == 0) {
    if (shift == 0.0) throw SingularityError("ground block is singular at zero shift");
    x = CVector::Constant(1, -b(0) / shift);
    return {true, 0, 0.0};
  }
  const BlockJacobi pre(h, n_exc, shift);
  LinearOp op = [&](const CVector& in, CVector& out) {
    out.resize(in.size());
    h.apply_block(n_exc, in.data(), out.data(), shift);
  };
  LinearOp pc = [&](const CVector& in, CVector& out) { pre(in, out); };
  if (x.size() != b.size()) x = CVector::Zero(b.size());
  return gmres(op, b, x, pc, opt);
}

SteadyState steady_state_weak_drive(const Hamiltonian& h, const WeakDriveOptions& opt) {
  if (h.drive().kind != DriveKind::Cw) throw ValidationError("weak-drive steady state needs a cw drive");
  if (opt.order != 1 && opt.order != 2) throw ValidationError("order must be 1 or 2");
  const BasisIndex& basis = h.basis();
  if (opt.order == 2 && basis.max_exc() < 2) throw UnsupportedTruncation("order 2 needs doubles");
  const cplx e0 = h.drive().amplitude;
  const std::int64_t n1 = basis.n_singles();
  const std::int64_t o1 = basis.single_offset();
  const std::int64_t o2 = basis.double_offset();

  SteadyState ss;
  ss.psi = StateVector::Zero(basis.dimension());
  auto fail = [&](const char* what, const SolverResult& r) {
    std::ostringstream os;
    os << "weak-drive " << what << " solve did not converge: residual " << r.residual << " after "
       << r.iterations << " iterations (drive on a lossless dark resonance?)";
    throw ConvergenceError(os.str());
  };

  CVector first;
  if (!opt.vacuum) {
    ss.psi(0) = 1.0;
    CVector src = CVector::Zero(n1);
    const cplx one = 1.0;
    h.raise(0, &one, src.data());
    src *= -e0;
    ss.first = solve_block(h, 1, 0.0, src, first, opt.solver);
    if (!ss.first.converged) fail("single-excitation", ss.first);
    ss.psi.segment(o1, n1) = first;
  } else {
    if (opt.vacuum->size() != n1) throw DimensionError("vacuum must be a singles-block vector");
    first = *opt.vacuum;
    ss.psi.segment(o1, n1) = first;
    // Drive-induced ground component of the gate.
    cplx low = 0.0;
    h.lower(0, first.data(), &low);
    if (opt.vacuum_energy != 0.0) ss.psi(0) = std::conj(e0) * low / opt.vacuum_energy;
    ss.first = {true, 0, 0.0};
  }
  if (opt.order == 2) {
    CVector src = CVector::Zero(basis.n_doubles());
    h.raise(1, first.data(), src.data());
    src *= -e0;
    CVector second;
    ss.second = solve_block(h, 2, opt.vacuum ? opt.vacuum_energy : cplx(0.0), src, second, opt.solver);
    if (!ss.second.converged) fail("two-excitation", ss.second);
    ss.psi.segment(o2, basis.n_doubles()) = second;
  }
  return ss;
}

}  // namespace wqed
