#pragma once

// Plain Nelder-Mead simplex minimizer. Internal header.

#include <functional>
#include <vector>

namespace wps::detail {

struct SimplexResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
};

/// Minimizes `f` from `x0`, initial simplex edges `steps[i]` along axis i.
/// Stops after `max_iters` iterations or when the spread of simplex values
/// drops below `tol`. Coefficients: reflection 1, expansion 2, contraction
/// 1/2, shrink 1/2.
SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x0,
                          const std::vector<double>& steps, int max_iters, double tol);

}  // namespace wps::detail
