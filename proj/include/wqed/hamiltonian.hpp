#pragma once

#include <memory>

#include "wqed/model.hpp"

namespace wqed {

// Matrix-free rotating-frame Hamiltonian on the truncated basis.
//
// Doubles are handled by unpacking them into three N x N tables (ee, e-at-row
// with s-at-column, ss) with zero diagonals. The waveguide kernel
// exp(i ka |m - b|) is separable on each side of the diagonal, so the hopping
// sums reduce to one forward and one backward recursion per column and the
// whole product costs O(dimension).
class Hamiltonian {
 public:
  Hamiltonian(PhysicalParams p, DriveSpec d, std::shared_ptr<const BasisIndex> basis);

  const PhysicalParams& params() const { return p_; }
  const DriveSpec& drive() const { return d_; }
  const BasisIndex& basis() const { return *basis_; }
  std::shared_ptr<const BasisIndex> basis_ptr() const { return basis_; }
  std::int64_t dimension() const { return basis_->dimension(); }
  int n_atoms() const { return n_; }

  // out = H(t) psi with the drive envelope evaluated at t.
  void apply(const CVector& psi, double t, CVector& out) const;
  CVector apply(const CVector& psi, double t) const;
  // Same with an explicit drive amplitude; zero gives the block-diagonal part.
  void apply_with_drive(const CVector& psi, cplx drive, CVector& out) const;

  // Drive-free block with `n_exc` excitations acting on that block's
  // contiguous slice, minus shift * identity.
  void apply_block(int n_exc, const cplx* in, cplx* out, cplx shift = 0.0) const;
  // Unit-amplitude drive coupling between block k and k+1. `raise` maps the
  // k slice into the k+1 slice (adds -exp(ikz_m) sigma_eg^m), `lower` the
  // reverse (adds -exp(-ikz_m) sigma_ge^m). Both accumulate into out.
  void raise(int k, const cplx* in, cplx* out) const;
  void lower(int k, const cplx* in, cplx* out) const;

  // Diagonal-in-position pieces of the drive-free operator: 2x2 (e,s) block of
  // atom m and the 4x4 block of pair m < n in layout order (ee, es, se, ss).
  Eigen::Matrix2cd local_single(int m) const;
  Eigen::Matrix4cd local_pair(int m, int n) const;

  double coupling(int m) const { return g_[m - 1]; }
  cplx phase_factor(int m) const { return eikz_[m - 1]; }
  double band_gap(int m, int n) const { return jmat_[(m - 1) * n_ + (n - 1)]; }

 private:
  struct Workspace;

  void singles_part(const cplx* in, cplx* out) const;
  void doubles_part(const cplx* in, cplx* out) const;
  void unpack(const cplx* in, cplx* ee, cplx* fe, cplx* ss) const;
  // y(:, col) = g .* sum_b w(., b) g_b x(b, col) for every column, N x N row-major.
  void hop_columns(const cplx* x, cplx* y) const;
  void hop_vector(const cplx* x, std::ptrdiff_t stride, cplx* y, std::ptrdiff_t ystride) const;

  PhysicalParams p_;
  DriveSpec d_;
  std::shared_ptr<const BasisIndex> basis_;
  int n_;
  cplx hop_phase_;            // exp(i ka)
  cplx hop_scale_;            // -i gamma_1d / 2
  std::vector<double> g_;     // waveguide/free-space/drive mask per atom
  std::vector<cplx> eikz_;    // exp(i ka m)
  std::vector<double> jmat_;  // band-gap couplings, N x N
  cplx diag_e_;               // -delta - i gamma_prime/2 (times mask)
  cplx diag_s_;               // -(delta - delta_c)
};

std::shared_ptr<const Hamiltonian> assemble_hamiltonian(const PhysicalParams& p, const DriveSpec& d,
                                                        std::shared_ptr<const BasisIndex> basis);

}  // namespace wqed
