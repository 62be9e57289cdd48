#pragma once

#include <functional>

#include "wqed/model.hpp"

namespace wqed {

using LinearOp = std::function<void(const CVector& in, CVector& out)>;

struct SolverOptions {
  double rel_tol = 1e-10;  // on the true residual, relative to ||b||
  int restart = 80;
  int max_iter = 6000;
};

struct SolverResult {
  bool converged = false;
  int iterations = 0;
  double residual = 0.0;  // ||b - A x|| / ||b||
};

// Restarted GMRES with optional right preconditioner. x holds the initial
// guess on entry and the solution on exit.
SolverResult gmres(const LinearOp& a, const CVector& b, CVector& x, const LinearOp& precond,
                   const SolverOptions& opt = {});

}  // namespace wqed
