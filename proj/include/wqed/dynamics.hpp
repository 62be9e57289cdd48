#pragma once

#include <optional>
#include <vector>

#include "wqed/hamiltonian.hpp"
#include "wqed/linsolve.hpp"

namespace wqed {

struct Trajectory {
  double dt = 0.0;  // spacing of the recorded grid
  std::vector<double> time;
  std::vector<double> norm;
  std::vector<double> p_e;
  std::vector<double> p_s;
  std::vector<double> i_r;  // reflected intensity, if recorded
  std::vector<double> i_t;  // transmitted intensity, if recorded
  std::vector<double> ground;  // ground population (density runs only)
  std::vector<std::pair<double, StateVector>> snapshots;
  StateVector final_state;

  std::size_t size() const { return time.size(); }
};

struct EvolveOptions {
  int record_stride = 1;
  bool record_fields = false;
  // Field intensities divided by the squared state norm (true) or raw
  // expectation values <psi|E^dag E|psi> (false).
  bool normalize_fields = true;
  std::vector<double> snapshot_times;
  bool enforce_step_bound = true;
};

// 0.1 / max(|delta|, |delta_c| + |J|, Omega, N gamma_1d); infinite when all vanish.
double step_bound(const PhysicalParams& p, const DriveSpec& d);

// Fixed-step RK4 for d psi/dt = -i H(t) psi.
Trajectory evolve(const Hamiltonian& h, const StateVector& psi0, double t_end, double dt,
                  const EvolveOptions& opt = {});

struct WeakDriveOptions {
  int order = 2;  // 1: ground + singles, 2: also doubles
  SolverOptions solver{};
  // Alternative vacuum: a single-excitation eigenvector (singles slice,
  // length 2N) with its eigenvalue. Default is the ground state.
  std::optional<CVector> vacuum;
  cplx vacuum_energy = 0.0;
};

struct SteadyState {
  StateVector psi;
  SolverResult first;
  SolverResult second;
};

// Weak cw drive, solved order by order in the drive amplitude with the vacuum
// amplitude fixed to one.
SteadyState steady_state_weak_drive(const Hamiltonian& h, const WeakDriveOptions& opt = {});

// Solve (H_k - shift) x = b on excitation block k with the matrix-free
// operator and a block-Jacobi preconditioner.
SolverResult solve_block(const Hamiltonian& h, int n_exc, cplx shift, const CVector& b, CVector& x,
                         const SolverOptions& opt = {});

struct DensityBlock {
  CMatrix rho;  // single-excitation block, N x N
  double ground = 0.0;
};

// Single-excitation master equation of an effective two-level chain,
// d rho/dt = -i(H rho - rho H^dag) - gamma (rho - diag rho), with ground
// refilled by whatever leaves the excited block. Records trace(rho) in p_e
// and norm = trace + ground.
Trajectory evolve_density_single_exc(const PhysicalParams& p, const DensityBlock& rho0, double gamma,
                                     double t_end, double dt, int record_stride = 1);

// The N x N non-Hermitian waveguide block used above.
CMatrix waveguide_block(const PhysicalParams& p);

}  // namespace wqed
