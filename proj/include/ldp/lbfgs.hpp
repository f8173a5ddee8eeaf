#pragma once

#include <functional>
#include <span>
#include <vector>

namespace ldp {

/// Returns f(x) and writes the gradient into grad.
using Objective = std::function<double(std::span<const double> x, std::span<double> grad)>;

struct LbfgsOptions {
  int max_iterations = 5000;
  /// Stop when max_i |grad_i| <= gradient_tolerance.
  double gradient_tolerance = 1e-12;
  int memory = 10;
  /// Armijo sufficient-decrease constant.
  double armijo = 1e-4;
  int max_backtracks = 60;
};

struct LbfgsResult {
  std::vector<double> x;
  double value = 0.0;
  double gradient_norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Limited-memory BFGS with backtracking (step halving from 1) under the
/// Armijo condition. Falls back to steepest descent when the quasi-Newton
/// direction is not a descent direction; stops early when the line search
/// cannot decrease f.
LbfgsResult minimize_lbfgs(const Objective& f, std::vector<double> x0,
                           const LbfgsOptions& options = {});

}  // namespace ldp
