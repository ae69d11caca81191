#pragma once

#include <functional>
#include <span>
#include <vector>

namespace volret {

struct NelderMeadOptions {
  double initial_step = 0.25;
  double f_tol = 1e-12;  // relative spread of simplex values
  double x_tol = 1e-9;   // simplex diameter
  int max_evals = 4000;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  int n_evals = 0;
  bool converged = false;
};

// Minimises f. Non-finite values are treated as +infinity, which lets callers
// express box constraints by returning INFINITY outside the feasible set.
NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& f,
                             std::vector<double> start, const NelderMeadOptions& options = {});

}  // namespace volret
