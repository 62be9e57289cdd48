#include "wqed/optimize.hpp"

#include <cmath>

#include "wqed/errors.hpp"

namespace wqed {

MaximizeTrace maximize_log_golden(const std::function<double(double)>& f, double lo, double hi, int coarse,
                                  double rel_tol) {
  if (!(lo > 0.0) || !(hi > lo)) throw ValidationError("optimizer needs 0 < lo < hi");
  if (coarse < 3) throw ValidationError("optimizer needs at least 3 coarse points");
  if (!(rel_tol > 0.0)) throw ValidationError("optimizer needs rel_tol > 0");
  MaximizeTrace tr;
  auto eval = [&](double x) {
    const double v = f(x);
    if (!std::isfinite(v)) throw NumericError("objective is not finite at x = " + std::to_string(x));
    tr.x.push_back(x);
    tr.value.push_back(v);
    if (tr.x.size() == 1 || v > tr.best_value) {
      tr.best_x = x;
      tr.best_value = v;
    }
    return v;
  };

  const double l0 = std::log(lo), l1 = std::log(hi);
  std::vector<double> grid(coarse);
  int best = 0;
  double best_v = 0.0;
  for (int i = 0; i < coarse; ++i) {
    grid[i] = l0 + (l1 - l0) * i / (coarse - 1);
    const double v = eval(std::exp(grid[i]));
    if (i == 0 || v > best_v) best = i, best_v = v;
  }
  if (best == 0 || best == coarse - 1) {
    tr.boundary_warning = true;
    tr.warnings.push_back("optimum at the " + std::string(best == 0 ? "lower" : "upper") +
                          " end of the range; widen the bounds");
  }

  double a = grid[std::max(best - 1, 0)];
  double b = grid[std::min(best + 1, coarse - 1)];
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = eval(std::exp(c)), fd = eval(std::exp(d));
  // Bracket width in log x approximates the relative width in x.
  while (b - a > rel_tol) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = eval(std::exp(c));
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = eval(std::exp(d));
    }
  }
  return tr;
}

}  // namespace wqed
