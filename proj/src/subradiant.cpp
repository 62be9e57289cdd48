#include "wqed/subradiant.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "wqed/errors.hpp"

namespace wqed {

double momentum_centroid(const CVector& c) {
  const Eigen::Index n = c.size();
  const Eigen::Index nk = std::max<Eigen::Index>(64, 8 * n);
  cplx acc = 0.0;
  for (Eigen::Index j = 0; j < nk; ++j) {
    const double k = 2.0 * kPi * j / nk;
    cplx amp = 0.0;
    for (Eigen::Index m = 0; m < n; ++m) amp += c(m) * std::polar(1.0, -k * (m + 1));
    acc += std::norm(amp) * std::polar(1.0, k);
  }
  return std::arg(acc);
}

std::vector<EigenMode> single_excitation_eigenmodes(const PhysicalParams& p) {
  if (p.n_atoms < 1 || p.n_atoms > 1000) throw ValidationError("eigenmodes need 1 <= N <= 1000");
  PhysicalParams q = p;
  q.gamma_prime = 0.0;
  const CMatrix h = waveguide_block(q);
  Eigen::ComplexEigenSolver<CMatrix> es(h);
  if (es.info() != Eigen::Success) throw NumericError("eigensolver did not converge");
  const double hnorm = h.norm();
  std::vector<EigenMode> modes;
  modes.reserve(p.n_atoms);
  for (int i = 0; i < p.n_atoms; ++i) {
    EigenMode m;
    m.lambda = es.eigenvalues()(i);
    m.vec = es.eigenvectors().col(i).normalized();
    const double res = (h * m.vec - m.lambda * m.vec).norm();
    if (res > 1e-10 * std::max(1.0, hnorm)) {
      std::ostringstream os;
      os << "eigenmode residual " << res << " exceeds tolerance";
      throw NumericError(os.str());
    }
    m.gamma_wg = -2.0 * m.lambda.imag();
    m.k_centroid = momentum_centroid(m.vec);
    modes.push_back(std::move(m));
  }
  std::stable_sort(modes.begin(), modes.end(),
                   [](const EigenMode& a, const EigenMode& b) { return a.gamma_wg < b.gamma_wg; });
  return modes;
}

GateState build_gate_state(const PhysicalParams& p, GateStateKind kind, const BasisIndex& basis, int site) {
  if (basis.n_atoms() != p.n_atoms) throw DimensionError("basis and params disagree on atom count");
  GateState g;
  g.kind = kind;
  if (kind == GateStateKind::Ancilla) return g;
  const int n = p.n_atoms;
  g.amplitudes = CVector::Zero(n);
  if (kind == GateStateKind::SingleSite || n == 1) {
    if (site < 1 || site > n) throw ValidationError("gate site outside the chain");
    g.amplitudes(site - 1) = 1.0;
    g.nominal_rate = p.gamma_1d;
  } else {
    const auto modes = single_excitation_eigenmodes(p);
    // Near-degenerate partners of the slowest mode; keep the one closest to ka = pi.
    const double g0 = modes.front().gamma_wg;
    std::size_t best = 0;
    double best_dist = kInf;
    for (std::size_t i = 0; i < modes.size(); ++i) {
      if (std::abs(modes[i].gamma_wg - g0) > 1e-6 * std::max(std::abs(g0), 1e-300) + 1e-14) break;
      const double d = std::abs(std::remainder(modes[i].k_centroid - kPi, 2.0 * kPi));
      if (d < best_dist) {
        best_dist = d;
        best = i;
      }
    }
    g.amplitudes = modes[best].vec;
    g.nominal_rate = modes[best].gamma_wg;
  }
  g.k_centroid = momentum_centroid(g.amplitudes);
  g.state = StateVector::Zero(basis.dimension());
  for (int m = 1; m <= n; ++m) g.state(basis.single(m, Level::S)) = g.amplitudes(m - 1);
  return g;
}

double decay_rate_from_trajectory(const Trajectory& tr, bool long_time) {
  const std::size_t n = tr.time.size();
  if (n < 2 || tr.p_e.size() != n || tr.p_s.size() != n) throw ValidationError("trajectory too short");
  auto pop = [&](std::size_t i) { return tr.p_e[i] + tr.p_s[i]; };
  const std::size_t i0 = long_time ? static_cast<std::size_t>(std::floor(0.05 * double(n - 1))) : 0;
  const double target = pop(i0) / std::exp(1.0);
  for (std::size_t i = i0 + 1; i < n; ++i) {
    if (pop(i) <= target) {
      const double a = pop(i - 1), b = pop(i);
      const double frac = a == b ? 0.0 : (a - target) / (a - b);
      const double t = tr.time[i - 1] + frac * (tr.time[i] - tr.time[i - 1]);
      return 1.0 / (t - tr.time[i0]);
    }
  }
  throw NumericError("population never reaches 1/e inside the window; extend t_end");
}

ScalingFit fit_scaling(const std::vector<std::pair<double, double>>& points, double threshold) {
  if (points.size() < 3) throw ValidationError("scaling fit needs at least 3 points");
  const std::size_t n = points.size();
  Eigen::MatrixXd a(n, 2);
  Eigen::VectorXd y(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto [nn, g] = points[i];
    if (!(nn > 0.0) || !(g > 0.0)) throw ValidationError("scaling fit needs positive N and rates");
    a(i, 0) = 1.0;
    a(i, 1) = std::log(nn);
    y(i) = std::log(g);
  }
  const Eigen::Vector2d c = a.colPivHouseholderQr().solve(y);
  ScalingFit f;
  f.prefactor = std::exp(c(0));
  f.alpha = -c(1);
  f.residual = std::sqrt((a * c - y).squaredNorm() / double(n));
  f.non_polynomial = f.residual > threshold;
  return f;
}

}  // namespace wqed
