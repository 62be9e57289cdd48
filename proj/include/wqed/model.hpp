#pragma once

#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace wqed {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr cplx kI{0.0, 1.0};

// All rates in units of the free-space decay rate, times in its inverse.
struct PhysicalParams {
  int n_atoms = 1;
  double gamma_1d = 1.0;
  double gamma_prime = 1.0;
  double coupling_j = 0.0;
  double rabi = 0.0;
  double delta_c = 0.0;
  double kappa = 0.0;
  // NaN means "derive from kappa": ka = (pi/2)(1 + kappa).
  double ka = std::numeric_limits<double>::quiet_NaN();
  double range_l = kInf;
  double gamma_deph = 0.0;
  // 1-based atoms cut off from the waveguide, free space and the drive.
  // They still take part in the band-gap exchange (used for gate atoms).
  std::vector<int> decoupled;

  double phase() const;
  bool is_decoupled(int m) const;
};

// Sublattice sign (-1)^m of atom m (1-based), i.e. cos(q z_m) with q = pi/a.
inline int sublattice_sign(int m) { return (m % 2 == 0) ? 1 : -1; }

enum class DriveKind { Cw, Sin2Pulse };

struct DriveSpec {
  DriveKind kind = DriveKind::Cw;
  double amplitude = 0.0;
  double detuning = 0.0;
  double pulse_width = 1.0;

  double envelope(double t) const;
};

struct ParamReport {
  std::vector<std::string> violations;
  std::vector<std::string> warnings;
  bool ok() const { return violations.empty(); }
};

ParamReport validate_params(const PhysicalParams& p);

enum class Level : std::uint8_t { E = 0, S = 1 };

struct Configuration {
  // 0, 1 or 2 excitations. Atoms are 1-based; for doubles m < n.
  int n_exc = 0;
  int m = 0;
  Level level_m = Level::E;
  int n = 0;
  Level level_n = Level::E;

  bool operator==(const Configuration&) const = default;
};

// Dense enumeration of the truncated space. Layout: ground, then singles
// ordered by (m, level), then doubles ordered by (m, n, level_m, level_n).
class BasisIndex {
 public:
  BasisIndex(int n_atoms, int max_exc);

  int n_atoms() const { return n_; }
  int max_exc() const { return max_exc_; }
  std::int64_t dimension() const { return dim_; }

  std::int64_t single_offset() const { return 1; }
  std::int64_t double_offset() const { return 1 + 2 * std::int64_t(n_); }
  std::int64_t n_singles() const { return 2 * std::int64_t(n_); }
  std::int64_t n_doubles() const { return dim_ - double_offset(); }

  std::int64_t single(int m, Level l) const {
    return 1 + 2 * std::int64_t(m - 1) + static_cast<int>(l);
  }
  // Index of the unordered pair m < n among all C(N,2) pairs.
  std::int64_t pair(int m, int n) const {
    const std::int64_t a = m - 1;
    return a * (2 * std::int64_t(n_) - a - 1) / 2 + (n - m - 1);
  }
  std::int64_t twin(int m, Level lm, int n, Level ln) const {
    return double_offset() + 4 * pair(m, n) + 2 * static_cast<int>(lm) + static_cast<int>(ln);
  }

  std::int64_t index(const Configuration& c) const;
  Configuration config(std::int64_t i) const;

 private:
  int n_;
  int max_exc_;
  std::int64_t dim_;
  std::vector<std::int64_t> pair_start_;  // first pair index for each m
};

BasisIndex build_basis(int n_atoms, int max_exc = 2);

std::int64_t basis_dimension(int n_atoms, int max_exc = 2);

}  // namespace wqed
