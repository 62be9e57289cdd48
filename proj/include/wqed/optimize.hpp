#pragma once

#include <functional>
#include <string>
#include <vector>

namespace wqed {

struct MaximizeTrace {
  std::vector<double> x;      // evaluation points in call order
  std::vector<double> value;
  double best_x = 0.0;
  double best_value = 0.0;
  bool boundary_warning = false;  // coarse optimum on an end of the range
  std::vector<std::string> warnings;
};

// Maximize f on [lo, hi]: `coarse` log-spaced points, then golden-section
// search in log x on the bracket around the best coarse point until the
// bracket is narrower than rel_tol relative to its centre.
MaximizeTrace maximize_log_golden(const std::function<double(double)>& f, double lo, double hi, int coarse = 8,
                                  double rel_tol = 1e-2);

}  // namespace wqed
