#include "ldp/rate_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ldp/error.hpp"
#include "ldp/rng.hpp"

namespace ldp {

namespace {

struct Problem {
  const RateQuery& q;
  std::size_t d, m, N, S;
  std::vector<double> grid;
  const Vec* terminal = nullptr;
  const SamplePath* path = nullptr;
  std::vector<std::size_t> path_nodes;  // index into h for each control node k
  double weight = 1.0;

  explicit Problem(const RateQuery& query)
      : q(query),
        d(static_cast<std::size_t>(query.field.dim())),
        m(static_cast<std::size_t>(query.field.noise_dim())),
        N(static_cast<std::size_t>(query.N)),
        S(static_cast<std::size_t>(query.substeps)) {
    if (query.N < 1) throw ParameterError("N must be ≥ 1");
    if (query.substeps < 1) throw ParameterError("substeps must be ≥ 1");
    if (query.x0.size() != d) throw ParameterError("x0 dimension does not match the field");
    if (query.penalties.empty()) throw ParameterError("penalty schedule is empty");
    for (std::size_t j = 0; j < query.penalties.size(); ++j) {
      if (!(query.penalties[j] > 0.0)) throw ParameterError("penalty weights must be > 0");
      if (j > 0 && !(query.penalties[j] > query.penalties[j - 1]))
        throw ParameterError("penalty weights must be strictly increasing");
    }
    if (query.starts < 1) throw ParameterError("starts must be ≥ 1");
    grid = uniform_nodes(query.N);
    if (const auto* y = std::get_if<Vec>(&query.target)) {
      if (y->size() != d) throw ParameterError("target dimension does not match the field");
      terminal = y;
    } else {
      path = &std::get<SamplePath>(query.target);
      if (path->dim() != query.field.dim())
        throw ParameterError("target path dimension does not match the field");
      path_nodes.resize(N + 1);
      for (std::size_t k = 0; k <= N; ++k) {
        path_nodes[k] = path->find(grid[k]);
        if (path_nodes[k] == SamplePath::npos)
          throw ParameterError("target path must contain every control node k/N");
      }
      weight = query.metric == PathMetric::MeanSquare ? 1.0 / static_cast<double>(N) : 1.0;
    }
  }

  SamplePath forward(std::span<const double> u) const {
    return detail::euler_with_slopes(q.field, grid, u, q.x0, static_cast<int>(S));
  }

  double residual(const SamplePath& x) const {
    if (terminal) return distance(x.terminal(), *terminal);
    double sup = 0.0, sq = 0.0;
    for (std::size_t k = 0; k <= N; ++k) {
      const double e = distance(x.state(k * S), path->state(path_nodes[k]));
      sup = std::max(sup, e);
      sq += e * e;
    }
    return q.metric == PathMetric::MeanSquare ? std::sqrt(sq / static_cast<double>(N + 1)) : sup;
  }

  double objective(double mu, std::span<const double> u, std::span<double> grad) const {
    const SamplePath x = forward(u);
    const double dt = 1.0 / static_cast<double>(N);
    double energy = 0.0;
    for (double v : u) energy += v * v;
    energy *= 0.5 * dt;

    Vec lam(d, 0.0), next(d);
    double phi = 0.0;
    const std::size_t K = N * S;
    if (terminal) {
      const auto xk = x.terminal();
      for (std::size_t i = 0; i < d; ++i) {
        const double e = xk[i] - (*terminal)[i];
        phi += e * e;
        lam[i] = 2.0 * mu * e;
      }
    } else {
      for (std::size_t k = 0; k <= N; ++k) {
        const auto xk = x.state(k * S);
        const auto hk = path->state(path_nodes[k]);
        for (std::size_t i = 0; i < d; ++i) phi += (xk[i] - hk[i]) * (xk[i] - hk[i]);
      }
      phi *= weight;
      const auto xk = x.state(K);
      const auto hk = path->state(path_nodes[N]);
      for (std::size_t i = 0; i < d; ++i) lam[i] = 2.0 * mu * weight * (xk[i] - hk[i]);
    }
    if (grad.empty()) return energy + mu * phi;

    std::fill(grad.begin(), grad.end(), 0.0);
    Vec sigma(d * m), jb(d * d), js(d * m * d);
    for (std::size_t j = K; j-- > 0;) {
      const std::size_t k = j / S;
      const double t0 = grid[k];
      const double h = (grid[k + 1] - t0) / static_cast<double>(S);
      const double t = t0 + static_cast<double>(j % S) * h;
      const auto xj = x.state(j);
      const double* uk = u.data() + k * m;
      q.field.diffusion(t, xj, sigma);
      for (std::size_t l = 0; l < m; ++l) {
        double s = 0.0;
        for (std::size_t i = 0; i < d; ++i) s += sigma[i * m + l] * lam[i];
        grad[k * m + l] += h * s;
      }
      q.field.drift_jacobian(t, xj, jb);
      q.field.diffusion_jacobian(t, xj, js);
      for (std::size_t c = 0; c < d; ++c) {
        double s = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
          double a = jb[i * d + c];
          for (std::size_t l = 0; l < m; ++l) a += uk[l] * js[(i * m + l) * d + c];
          s += lam[i] * a;
        }
        next[c] = lam[c] + h * s;
      }
      if (path && j % S == 0 && j > 0) {
        const auto hk = path->state(path_nodes[j / S]);
        for (std::size_t i = 0; i < d; ++i) next[i] += 2.0 * mu * weight * (xj[i] - hk[i]);
      }
      lam.swap(next);
    }
    for (std::size_t i = 0; i < u.size(); ++i) grad[i] += u[i] * dt;
    return energy + mu * phi;
  }
};

std::vector<double> random_control(std::size_t size, std::uint64_t seed, std::uint64_t stream,
                                   double scale) {
  std::vector<double> u(size);
  rng::Stream(seed, stream).normals(0, size, u.data());
  for (double& v : u) v *= scale;
  return u;
}

RateResult solve(const RateQuery& query) {
  const Problem p(query);
  const std::size_t size = p.N * p.m;

  RateResult best;
  double best_objective = std::numeric_limits<double>::infinity();
  for (int s = 0; s < query.starts; ++s) {
    std::vector<double> u =
        s == 0 ? std::vector<double>(size, 0.0)
               : random_control(size, query.seed, static_cast<std::uint64_t>(s), 1.0);
    std::vector<PenaltyStage> trace;
    LbfgsResult stage;
    for (double mu : query.penalties) {
      const Objective f = [&p, mu](std::span<const double> x, std::span<double> g) {
        return p.objective(mu, x, g);
      };
      stage = minimize_lbfgs(f, std::move(u), query.optimizer);
      u = stage.x;
      trace.push_back({mu, stage.value, p.residual(p.forward(u)), stage.iterations});
    }
    if (!(stage.value < best_objective)) continue;
    best_objective = stage.value;

    RateResult r;
    double e = 0.0;
    for (double v : u) e += v * v;
    r.value = 0.5 * e / static_cast<double>(p.N);
    r.control = ControlPath::from_slopes(p.grid, u, static_cast<int>(p.m));
    r.path = p.forward(u);
    r.residual = trace.back().residual;
    r.gradient_norm = stage.gradient_norm;
    r.trace = std::move(trace);
    r.converged = r.residual <= query.residual_tolerance;
    const std::size_t J = r.trace.size();
    r.infeasible = !r.converged && J >= 3 &&
                   r.trace[J - 1].residual >= 0.99 * r.trace[J - 3].residual;
    best = std::move(r);
  }
  return best;
}

}  // namespace

std::vector<double> default_penalties() {
  std::vector<double> mu;
  for (int j = 0; j <= 6; ++j) mu.push_back(std::pow(10.0, j));
  return mu;
}

double penalized_objective(const RateQuery& query, double mu, std::span<const double> u,
                           std::span<double> grad) {
  const Problem p(query);
  if (u.size() != p.N * p.m) throw ParameterError("control size must be N x m");
  if (!grad.empty() && grad.size() != u.size()) throw ParameterError("gradient size must be N x m");
  return p.objective(mu, u, grad);
}

double constraint_residual(const RateQuery& query, std::span<const double> u) {
  const Problem p(query);
  if (u.size() != p.N * p.m) throw ParameterError("control size must be N x m");
  return p.residual(p.forward(u));
}

RateResult minimize_terminal(const RateQuery& query) {
  if (!std::holds_alternative<Vec>(query.target))
    throw ParameterError("minimize_terminal needs a terminal target");
  return solve(query);
}

RateResult minimize_path(const RateQuery& query) {
  if (!std::holds_alternative<SamplePath>(query.target))
    throw ParameterError("minimize_path needs a path target");
  return solve(query);
}

double gradient_check(const RateQuery& query, int probe_count, double mu, double h,
                      std::uint64_t seed) {
  if (probe_count < 1) throw ParameterError("probe_count must be ≥ 1");
  const Problem p(query);
  const std::size_t size = p.N * p.m;
  std::vector<double> g(size), empty;
  double worst = 0.0;
  int done = 0;
  for (std::uint64_t stream = 0; done < probe_count; ++stream) {
    if (stream > 100 * static_cast<std::uint64_t>(probe_count))
      throw ParameterError("no admissible probe controls away from the non-smooth points");
    std::vector<double> u = random_control(size, seed, stream, 0.5);
    const SamplePath x = p.forward(u);
    bool near_locus = false;
    for (std::size_t k = 0; k < x.size(); ++k)
      for (const auto& locus : query.field.nonsmooth_points())
        near_locus |= distance(x.state(k), locus) < kNonsmoothExclusion;
    if (near_locus) continue;
    ++done;
    p.objective(mu, u, g);
    double gmax = 0.0;
    for (double v : g) gmax = std::max(gmax, std::fabs(v));
    const double floor = 1e-8 * std::max(1.0, gmax);
    for (std::size_t i = 0; i < size; ++i) {
      const double keep = u[i];
      u[i] = keep + h;
      const double fp = p.objective(mu, u, empty);
      u[i] = keep - h;
      const double fm = p.objective(mu, u, empty);
      u[i] = keep;
      const double fd = (fp - fm) / (2.0 * h);
      const double denom = std::max({std::fabs(g[i]), std::fabs(fd), floor});
      worst = std::max(worst, std::fabs(g[i] - fd) / denom);
    }
  }
  return worst;
}

std::vector<EnvelopeEntry> rate_lower_envelope(const RateQuery& query_template,
                                               const std::vector<Vec>& targets) {
  if (targets.empty()) throw ParameterError("targets must be nonempty");
  std::vector<EnvelopeEntry> out;
  out.reserve(targets.size());
  for (const Vec& y : targets) {
    RateQuery q = query_template;
    q.target = y;
    out.push_back({y, minimize_terminal(q)});
  }
  return out;
}

}  // namespace ldp
