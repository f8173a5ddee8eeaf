#include "ldp/skeleton.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

#include "ldp/error.hpp"

namespace ldp {

namespace {

void check_grid(const std::vector<double>& grid) {
  if (grid.size() < 2) throw ParameterError("grid needs at least two nodes");
  for (std::size_t k = 0; k + 1 < grid.size(); ++k)
    if (!(grid[k + 1] > grid[k])) throw ParameterError("grid must be strictly increasing");
}

struct UnionNode {
  double t;
  long coarse;  // coarse index or -1
};

std::vector<UnionNode> merge_grids(const std::vector<double>& coarse,
                                   const std::vector<double>& other) {
  std::vector<UnionNode> out;
  out.reserve(coarse.size() + other.size());
  std::size_t i = 0, j = 0;
  while (i < coarse.size() || j < other.size()) {
    if (j == other.size() || (i < coarse.size() && coarse[i] <= other[j] + kNodeMatchTolerance)) {
      if (j < other.size() && std::fabs(coarse[i] - other[j]) <= kNodeMatchTolerance) ++j;
      out.push_back({coarse[i], static_cast<long>(i)});
      ++i;
    } else {
      out.push_back({other[j], -1});
      ++j;
    }
  }
  return out;
}

}  // namespace

ControlPath::ControlPath(std::vector<double> grid, std::vector<double> values, int m)
    : grid_(std::move(grid)), values_(std::move(values)), m_(m) {
  if (m_ < 1) throw ParameterError("control dimension must be >= 1");
  check_grid(grid_);
  if (grid_.front() != 0.0 || grid_.back() != 1.0)
    throw ParameterError("control grid must cover exactly [0,1]");
  if (values_.size() != grid_.size() * static_cast<std::size_t>(m_))
    throw ParameterError("control values do not match grid size");
  for (int j = 0; j < m_; ++j)
    if (values_[static_cast<std::size_t>(j)] != 0.0) throw ParameterError("control must start at 0");
  for (double v : values_)
    if (!std::isfinite(v)) throw ParameterError("control values must be finite");
}

std::vector<double> ControlPath::uniform_grid(int intervals) {
  if (intervals < 1) throw ParameterError("control needs at least one interval");
  return uniform_nodes(intervals);
}

ControlPath ControlPath::zero(int m, int intervals) {
  auto grid = uniform_grid(intervals);
  std::vector<double> values(grid.size() * static_cast<std::size_t>(m), 0.0);
  return {std::move(grid), std::move(values), m};
}

ControlPath ControlPath::straight_line(std::span<const double> v, int intervals) {
  auto grid = uniform_grid(intervals);
  const std::size_t m = v.size();
  std::vector<double> values(grid.size() * m);
  for (std::size_t k = 0; k < grid.size(); ++k)
    for (std::size_t j = 0; j < m; ++j) values[k * m + j] = grid[k] * v[j];
  return {std::move(grid), std::move(values), static_cast<int>(m)};
}

ControlPath ControlPath::from_slopes(std::vector<double> grid, std::span<const double> slopes,
                                     int m) {
  check_grid(grid);
  const std::size_t mu = static_cast<std::size_t>(m);
  if (slopes.size() != (grid.size() - 1) * mu) throw ParameterError("slope count mismatch");
  std::vector<double> values(grid.size() * mu, 0.0);
  for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
    const double dt = grid[k + 1] - grid[k];
    for (std::size_t j = 0; j < mu; ++j)
      values[(k + 1) * mu + j] = values[k * mu + j] + slopes[k * mu + j] * dt;
  }
  return {std::move(grid), std::move(values), m};
}

Vec ControlPath::slope(std::size_t k) const {
  const auto a = value(k);
  const auto b = value(k + 1);
  const double dt = grid_[k + 1] - grid_[k];
  Vec s(static_cast<std::size_t>(m_));
  for (std::size_t j = 0; j < s.size(); ++j) s[j] = (b[j] - a[j]) / dt;
  return s;
}

Vec ControlPath::at(double t) const {
  const auto it = std::upper_bound(grid_.begin(), grid_.end(), t);
  std::size_t k = it == grid_.begin() ? 0 : static_cast<std::size_t>(it - grid_.begin()) - 1;
  if (k >= intervals()) k = intervals();
  const auto a = value(k);
  if (k == intervals() || t == grid_[k]) return Vec(a.begin(), a.end());
  const auto b = value(k + 1);
  const double w = (t - grid_[k]) / (grid_[k + 1] - grid_[k]);
  Vec out(static_cast<std::size_t>(m_));
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = a[j] + w * (b[j] - a[j]);
  return out;
}

ControlPath ControlPath::scaled(double c) const {
  std::vector<double> values = values_;
  for (auto& v : values) v *= c;
  return {grid_, std::move(values), m_};
}

ControlPath ControlPath::refined() const {
  std::vector<double> grid;
  std::vector<double> values;
  const std::size_t mu = static_cast<std::size_t>(m_);
  for (std::size_t k = 0; k < grid_.size(); ++k) {
    grid.push_back(grid_[k]);
    values.insert(values.end(), value(k).begin(), value(k).end());
    if (k + 1 < grid_.size()) {
      const double mid = 0.5 * (grid_[k] + grid_[k + 1]);
      grid.push_back(mid);
      for (std::size_t j = 0; j < mu; ++j) values.push_back(0.5 * (value(k)[j] + value(k + 1)[j]));
    }
  }
  return {std::move(grid), std::move(values), m_};
}

SamplePath::SamplePath(std::vector<double> grid, std::vector<double> values, int d)
    : grid_(std::move(grid)), values_(std::move(values)), d_(d) {
  if (d_ < 1) throw ParameterError("path dimension must be >= 1");
  if (grid_.empty()) throw ParameterError("path needs at least one node");
  for (std::size_t k = 0; k + 1 < grid_.size(); ++k)
    if (!(grid_[k + 1] > grid_[k])) throw ParameterError("path grid must be strictly increasing");
  if (values_.size() != grid_.size() * static_cast<std::size_t>(d_))
    throw ParameterError("path values do not match grid size");
}

std::size_t SamplePath::find(double t) const {
  const auto it = std::lower_bound(grid_.begin(), grid_.end(), t - kNodeMatchTolerance);
  if (it != grid_.end() && std::fabs(*it - t) <= kNodeMatchTolerance)
    return static_cast<std::size_t>(it - grid_.begin());
  return npos;
}

double energy(const ControlPath& l) {
  double e = 0.0;
  for (std::size_t k = 0; k < l.intervals(); ++k) {
    const auto a = l.value(k);
    const auto b = l.value(k + 1);
    double sq = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) sq += (b[j] - a[j]) * (b[j] - a[j]);
    e += sq / (l.grid()[k + 1] - l.grid()[k]);
  }
  return e;
}

std::vector<double> uniform_nodes(int n) {
  if (n < 1) throw ParameterError("step count must be >= 1");
  std::vector<double> t(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) t[static_cast<std::size_t>(i)] = static_cast<double>(i) / n;
  return t;
}

namespace detail {

void check_state(std::span<const double> x, double t, std::size_t index, const char* which) {
  double sq = 0.0;
  for (double c : x) sq += c * c;
  if (!std::isfinite(sq) || sq > kBlowUpThreshold * kBlowUpThreshold)
    throw DivergenceError(fmt::format("{} diverged at t = {} (step {})", which, t, index), t, index);
}

SamplePath euler_with_slopes(const CoefficientField& field, std::span<const double> grid,
                             std::span<const double> slopes, std::span<const double> x0,
                             int substeps) {
  const auto d = static_cast<std::size_t>(field.dim());
  const auto m = static_cast<std::size_t>(field.noise_dim());
  if (x0.size() != d) throw ParameterError("x0 dimension does not match the field");
  if (substeps < 1) throw ParameterError("substeps must be >= 1");
  const std::size_t N = grid.size() - 1;
  if (slopes.size() != N * m) throw ParameterError("control dimension does not match the field");
  const auto S = static_cast<std::size_t>(substeps);

  std::vector<double> times;
  times.reserve(N * S + 1);
  std::vector<double> values;
  values.reserve((N * S + 1) * d);
  Vec x(x0.begin(), x0.end());
  Vec b(d), s(d * m);
  times.push_back(grid[0]);
  values.insert(values.end(), x.begin(), x.end());
  detail::check_state(x, grid[0], 0, "skeleton");
  std::size_t step = 0;
  for (std::size_t k = 0; k < N; ++k) {
    const double t0 = grid[k];
    const double h = (grid[k + 1] - t0) / static_cast<double>(S);
    const double* u = slopes.data() + k * m;
    for (std::size_t j = 0; j < S; ++j) {
      const double t = t0 + static_cast<double>(j) * h;
      field.drift(t, x, b);
      field.diffusion(t, x, s);
      for (std::size_t r = 0; r < d; ++r) {
        double v = b[r];
        for (std::size_t c = 0; c < m; ++c) v += s[r * m + c] * u[c];
        x[r] += h * v;
      }
      ++step;
      const double tn = (j + 1 == S) ? grid[k + 1] : t0 + static_cast<double>(j + 1) * h;
      detail::check_state(x, tn, step, "skeleton");
      times.push_back(tn);
      values.insert(values.end(), x.begin(), x.end());
    }
  }
  return {std::move(times), std::move(values), static_cast<int>(d)};
}

}  // namespace detail

SamplePath integrate_skeleton(const CoefficientField& field, const ControlPath& l,
                              std::span<const double> x0, int substeps) {
  if (l.noise_dim() != field.noise_dim())
    throw ParameterError("control dimension does not match the field's noise dimension");
  std::vector<double> slopes;
  slopes.reserve(l.intervals() * static_cast<std::size_t>(l.noise_dim()));
  for (std::size_t k = 0; k < l.intervals(); ++k) {
    const Vec sk = l.slope(k);
    slopes.insert(slopes.end(), sk.begin(), sk.end());
  }
  return detail::euler_with_slopes(field, l.grid(), slopes, x0, substeps);
}

SamplePath integrate_skeleton_euler(const CoefficientField& field, const ControlPath& l,
                                    std::span<const double> x0, int n) {
  const auto d = static_cast<std::size_t>(field.dim());
  const auto m = static_cast<std::size_t>(field.noise_dim());
  if (l.noise_dim() != field.noise_dim())
    throw ParameterError("control dimension does not match the field's noise dimension");
  if (x0.size() != d) throw ParameterError("x0 dimension does not match the field");
  const std::vector<double> coarse = uniform_nodes(n);
  const auto nodes = merge_grids(coarse, l.grid());

  std::vector<double> times;
  std::vector<double> values;
  times.reserve(nodes.size());
  values.reserve(nodes.size() * d);

  Vec xi(x0.begin(), x0.end());
  detail::check_state(xi, 0.0, 0, "skeleton Euler");
  Vec b(d), s(d * m), x(d);
  double ti = coarse[0];
  Vec li = l.at(ti);
  field.drift(ti, xi, b);
  field.diffusion(ti, xi, s);
  times.push_back(ti);
  values.insert(values.end(), xi.begin(), xi.end());
  for (std::size_t q = 1; q < nodes.size(); ++q) {
    const double t = nodes[q].t;
    const Vec lt = l.at(t);
    const double dt = t - ti;
    for (std::size_t r = 0; r < d; ++r) {
      double c = 0.0;
      for (std::size_t j = 0; j < m; ++j) c += s[r * m + j] * (lt[j] - li[j]);
      x[r] = (xi[r] + b[r] * dt) + c;
    }
    detail::check_state(x, t, q, "skeleton Euler");
    times.push_back(t);
    values.insert(values.end(), x.begin(), x.end());
    if (nodes[q].coarse >= 0) {
      xi = x;
      ti = t;
      li = lt;
      field.drift(ti, xi, b);
      field.diffusion(ti, xi, s);
    }
  }
  return {std::move(times), std::move(values), static_cast<int>(d)};
}

double skeleton_gap(const CoefficientField& field, const ControlPath& l,
                    std::span<const double> x0, int n, int reference_steps) {
  if (n < 1) throw ParameterError("n must be >= 1");
  if (reference_steps < 10 * n)
    throw ParameterError("reference must be at least 10x finer than the coarse grid");
  const int N = static_cast<int>(l.intervals());
  const int substeps = (reference_steps + N - 1) / N;
  const SamplePath reference = integrate_skeleton(field, l, x0, substeps);
  const SamplePath coarse = integrate_skeleton_euler(field, l, x0, n);
  double gap = 0.0;
  for (std::size_t k = 0; k < coarse.size(); ++k) {
    const std::size_t r = reference.find(coarse.grid()[k]);
    if (r == SamplePath::npos) continue;
    gap = std::max(gap, distance(coarse.state(k), reference.state(r)));
  }
  return gap;
}

}  // namespace ldp
