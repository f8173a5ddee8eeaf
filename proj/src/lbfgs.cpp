#include "ldp/lbfgs.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "ldp/error.hpp"

namespace ldp {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double max_abs(const std::vector<double>& a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::fabs(v));
  return m;
}

struct Pair {
  std::vector<double> s;
  std::vector<double> y;
  double rho;
};

std::vector<double> two_loop(const std::deque<Pair>& history, const std::vector<double>& g) {
  std::vector<double> q = g;
  std::vector<double> alpha(history.size());
  for (std::size_t i = history.size(); i-- > 0;) {
    alpha[i] = history[i].rho * dot(history[i].s, q);
    for (std::size_t k = 0; k < q.size(); ++k) q[k] -= alpha[i] * history[i].y[k];
  }
  if (!history.empty()) {
    const Pair& last = history.back();
    const double gamma = dot(last.s, last.y) / dot(last.y, last.y);
    for (double& v : q) v *= gamma;
  }
  for (std::size_t i = 0; i < history.size(); ++i) {
    const double beta = history[i].rho * dot(history[i].y, q);
    for (std::size_t k = 0; k < q.size(); ++k) q[k] += history[i].s[k] * (alpha[i] - beta);
  }
  for (double& v : q) v = -v;
  return q;
}

}  // namespace

LbfgsResult minimize_lbfgs(const Objective& f, std::vector<double> x0,
                           const LbfgsOptions& options) {
  if (options.memory < 1) throw ParameterError("L-BFGS memory must be >= 1");
  const std::size_t n = x0.size();
  LbfgsResult res;
  res.x = std::move(x0);
  std::vector<double> g(n), g_new(n), x_new(n);
  res.value = f(res.x, g);
  if (!std::isfinite(res.value)) throw EvaluationError("objective is not finite at the start point");
  std::deque<Pair> history;

  for (res.iterations = 0; res.iterations < options.max_iterations; ++res.iterations) {
    res.gradient_norm = max_abs(g);
    if (res.gradient_norm <= options.gradient_tolerance) {
      res.converged = true;
      return res;
    }
    std::vector<double> p = two_loop(history, g);
    double slope = dot(p, g);
    if (!(slope < 0.0)) {
      history.clear();
      p = g;
      for (double& v : p) v = -v;
      slope = dot(p, g);
    }
    if (history.empty()) {
      const double scale = std::min(1.0, 1.0 / max_abs(p));
      for (double& v : p) v *= scale;
      slope *= scale;
    }

    double step = 1.0;
    bool accepted = false;
    double f_new = 0.0;
    for (int k = 0; k < options.max_backtracks; ++k, step *= 0.5) {
      for (std::size_t i = 0; i < n; ++i) x_new[i] = res.x[i] + step * p[i];
      try {
        f_new = f(x_new, g_new);
      } catch (const DivergenceError&) {
        continue;
      }
      if (std::isfinite(f_new) && f_new <= res.value + options.armijo * step * slope) {
        accepted = true;
        break;
      }
    }
    if (!accepted || !(f_new < res.value)) {
      res.gradient_norm = max_abs(g);
      return res;
    }

    Pair pair{std::vector<double>(n), std::vector<double>(n), 0.0};
    for (std::size_t i = 0; i < n; ++i) {
      pair.s[i] = x_new[i] - res.x[i];
      pair.y[i] = g_new[i] - g[i];
    }
    const double sy = dot(pair.s, pair.y);
    if (sy > 1e-300) {
      pair.rho = 1.0 / sy;
      history.push_back(std::move(pair));
      if (history.size() > static_cast<std::size_t>(options.memory)) history.pop_front();
    }
    res.x.swap(x_new);
    g.swap(g_new);
    res.value = f_new;
  }
  res.gradient_norm = max_abs(g);
  res.converged = res.gradient_norm <= options.gradient_tolerance;
  return res;
}

}  // namespace ldp
