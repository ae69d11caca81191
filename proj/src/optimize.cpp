#include "volret/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace volret {

NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& f,
                             std::vector<double> start, const NelderMeadOptions& options) {
  const std::size_t n = start.size();
  NelderMeadResult result;
  auto eval = [&](const std::vector<double>& x) {
    ++result.n_evals;
    const double v = f(x);
    return std::isfinite(v) ? v : INFINITY;
  };

  std::vector<std::vector<double>> simplex(n + 1, start);
  for (std::size_t i = 0; i < n; ++i) simplex[i + 1][i] += options.initial_step;
  std::vector<double> values(n + 1);
  for (std::size_t i = 0; i <= n; ++i) values[i] = eval(simplex[i]);

  std::vector<std::size_t> order(n + 1);
  std::vector<double> centroid(n), trial(n), trial2(n);
  auto point = [&](double t, std::vector<double>& out) {
    // centroid + t (centroid - worst)
    const auto& worst = simplex[order[n]];
    for (std::size_t j = 0; j < n; ++j) out[j] = centroid[j] + t * (centroid[j] - worst[j]);
  };

  while (true) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    const double best = values[order[0]];
    const double worst = values[order[n]];

    double diameter = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        diameter = std::max(diameter, std::abs(simplex[order[i]][j] - simplex[order[0]][j]));
      }
    }
    const bool flat = std::isfinite(worst) &&
                      worst - best <= options.f_tol * (std::abs(best) + options.f_tol);
    if (flat && diameter <= options.x_tol) {
      result.converged = true;
      break;
    }
    if (result.n_evals >= options.max_evals) break;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) centroid[j] += simplex[order[i]][j] / n;
    }

    point(1.0, trial);
    const double f_reflect = eval(trial);
    if (f_reflect < best) {
      point(2.0, trial2);
      const double f_expand = eval(trial2);
      if (f_expand < f_reflect) {
        simplex[order[n]] = trial2;
        values[order[n]] = f_expand;
      } else {
        simplex[order[n]] = trial;
        values[order[n]] = f_reflect;
      }
      continue;
    }
    if (f_reflect < values[order[n - 1]]) {
      simplex[order[n]] = trial;
      values[order[n]] = f_reflect;
      continue;
    }
    // contraction, outside if the reflection improved on the worst point
    const bool outside = f_reflect < worst;
    point(outside ? 0.5 : -0.5, trial2);
    const double f_contract = eval(trial2);
    if (f_contract < (outside ? f_reflect : worst)) {
      simplex[order[n]] = trial2;
      values[order[n]] = f_contract;
      continue;
    }
    // shrink toward the best vertex
    for (std::size_t i = 1; i <= n; ++i) {
      auto& p = simplex[order[i]];
      for (std::size_t j = 0; j < n; ++j) p[j] = simplex[order[0]][j] + 0.5 * (p[j] - simplex[order[0]][j]);
      values[order[i]] = eval(p);
    }
  }

  const auto best_it = std::min_element(values.begin(), values.end());
  result.x = simplex[static_cast<std::size_t>(best_it - values.begin())];
  result.value = *best_it;
  return result;
}

}  // namespace volret
