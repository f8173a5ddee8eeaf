#include "ldp/sde_sim.hpp"

#include <cmath>
#include <fmt/format.h>

#include "ldp/error.hpp"
#include "ldp/rng.hpp"

namespace ldp {

void fill_noise(int n, int m, std::uint64_t root_seed, std::uint64_t replica,
                std::span<double> out) {
  if (n < 1 || m < 1) throw ParameterError("noise needs n >= 1 and m >= 1");
  const std::size_t count = static_cast<std::size_t>(n) * static_cast<std::size_t>(m);
  if (out.size() != count) throw ParameterError("noise buffer has the wrong size");
  const rng::Stream stream(root_seed, replica);
  stream.normals(0, count, out.data());
  const double scale = std::sqrt(1.0 / n);
  for (double& z : out) z *= scale;
}

NoisePath sample_noise(int n, int m, std::uint64_t root_seed, std::uint64_t replica) {
  NoisePath p;
  p.n = n;
  p.m = m;
  p.root_seed = root_seed;
  p.replica = replica;
  p.increments.resize(static_cast<std::size_t>(std::max(n, 0)) * static_cast<std::size_t>(std::max(m, 0)));
  fill_noise(n, m, root_seed, replica, p.increments);
  return p;
}

void validate(const ExperimentConfig& cfg) {
  if (!(cfg.epsilon >= 0.0) || !std::isfinite(cfg.epsilon))
    throw ParameterError("epsilon must be ≥ 0");
  if (cfg.n < 1) throw ParameterError("n must be ≥ 1");
  if (cfg.replicas < 1) throw ParameterError("replicas must be ≥ 1");
  if (!(cfg.delta0 > 0.0)) throw ParameterError("delta0 must be > 0");
  if (!(cfg.delta > 0.0)) throw ParameterError("delta must be > 0");
  if (!(cfg.R > 0.0)) throw ParameterError("R must be > 0");
}

void euler_maruyama_into(const CoefficientField& field, double epsilon, int n,
                         std::span<const double> increments, std::span<const double> x0,
                         std::span<double> out, const char* which) {
  const auto d = static_cast<std::size_t>(field.dim());
  const auto m = static_cast<std::size_t>(field.noise_dim());
  const auto nn = static_cast<std::size_t>(n);
  if (n < 1) throw ParameterError("n must be ≥ 1");
  if (x0.size() != d) throw ParameterError("x0 dimension does not match the field");
  if (increments.size() != nn * m) throw ParameterError("noise does not match n and the field's noise dimension");
  if (out.size() != (nn + 1) * d) throw ParameterError("path buffer has the wrong size");
  if (!(epsilon >= 0.0)) throw ParameterError("epsilon must be ≥ 0");

  const double sqrt_eps = std::sqrt(epsilon);
  thread_local Vec b, s;
  b.resize(d);
  s.resize(d * m);
  std::copy(x0.begin(), x0.end(), out.begin());
  detail::check_state(x0, 0.0, 0, which);
  double t_next = 0.0;
  for (std::size_t k = 0; k < nn; ++k) {
    const double t = t_next;
    t_next = static_cast<double>(k + 1) / n;
    const double dt = t_next - t;
    std::span<const double> x(out.data() + k * d, d);
    field.drift(t, x, b);
    field.diffusion(t, x, s);
    const double* dB = increments.data() + k * m;
    double* next = out.data() + (k + 1) * d;
    double sq = 0.0;
    for (std::size_t r = 0; r < d; ++r) {
      double c = 0.0;
      for (std::size_t j = 0; j < m; ++j) c += s[r * m + j] * dB[j];
      next[r] = (x[r] + b[r] * dt) + sqrt_eps * c;
      sq += next[r] * next[r];
    }
    if (!(sq <= kBlowUpThreshold * kBlowUpThreshold)) detail::check_state({next, d}, t_next, k + 1, which);
  }
}

SamplePath euler_maruyama(const CoefficientField& field, const ExperimentConfig& cfg,
                          const NoisePath& noise, std::span<const double> x0) {
  if (noise.n != cfg.n) throw ParameterError("noise grid does not match n");
  if (noise.m != field.noise_dim())
    throw ParameterError("noise dimension does not match the field");
  const auto d = static_cast<std::size_t>(field.dim());
  std::vector<double> values((static_cast<std::size_t>(cfg.n) + 1) * d);
  euler_maruyama_into(field, cfg.epsilon, cfg.n, noise.increments, x0, values);
  return {uniform_nodes(cfg.n), std::move(values), field.dim()};
}

void aggregate_increments(std::span<const double> fine, int n_fine, int n, int m,
                          std::span<double> out) {
  if (n < 1 || n_fine < n || n_fine % n != 0)
    throw ParameterError("n_fine must be a positive multiple of n");
  const auto mu = static_cast<std::size_t>(m);
  const auto ratio = static_cast<std::size_t>(n_fine / n);
  if (fine.size() != static_cast<std::size_t>(n_fine) * mu ||
      out.size() != static_cast<std::size_t>(n) * mu)
    throw ParameterError("increment buffers have the wrong size");
  for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i)
    for (std::size_t j = 0; j < mu; ++j) {
      double sum = 0.0;
      for (std::size_t q = 0; q < ratio; ++q) sum += fine[(i * ratio + q) * mu + j];
      out[i * mu + j] = sum;
    }
}

double coupled_euler_gap(const CoefficientField& field, const ExperimentConfig& cfg,
                         int n_fine, const NoisePath& noise_fine, std::span<const double> x0) {
  if (noise_fine.n != n_fine) throw ParameterError("noise grid does not match n_fine");
  if (noise_fine.m != field.noise_dim())
    throw ParameterError("noise dimension does not match the field");
  const auto d = static_cast<std::size_t>(field.dim());
  const auto m = static_cast<std::size_t>(field.noise_dim());
  std::vector<double> coarse_noise(static_cast<std::size_t>(cfg.n) * m);
  aggregate_increments(noise_fine.increments, n_fine, cfg.n, field.noise_dim(), coarse_noise);
  std::vector<double> fine((static_cast<std::size_t>(n_fine) + 1) * d);
  std::vector<double> coarse((static_cast<std::size_t>(cfg.n) + 1) * d);
  euler_maruyama_into(field, cfg.epsilon, n_fine, noise_fine.increments, x0, fine, "fine path");
  euler_maruyama_into(field, cfg.epsilon, cfg.n, coarse_noise, x0, coarse, "coarse path");
  const auto ratio = static_cast<std::size_t>(n_fine / cfg.n);
  double gap = 0.0;
  for (std::size_t i = 0; i <= static_cast<std::size_t>(cfg.n); ++i)
    gap = std::max(gap, distance({coarse.data() + i * d, d}, {fine.data() + i * ratio * d, d}));
  return gap;
}

double sup_distance(const SamplePath& a, const SamplePath& b) {
  if (a.dim() != b.dim()) throw ParameterError("paths have different dimensions");
  double gap = 0.0;
  bool any = false;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const std::size_t j = b.find(a.grid()[k]);
    if (j == SamplePath::npos) continue;
    any = true;
    gap = std::max(gap, distance(a.state(k), b.state(j)));
  }
  if (!any) throw ParameterError("paths share no grid nodes");
  return gap;
}

std::optional<double> first_passage(const SamplePath& path, double level) {
  if (!(level > 0.0)) throw ParameterError("level must be > 0");
  for (std::size_t k = 0; k < path.size(); ++k)
    if (norm(path.state(k)) >= level) return path.grid()[k];
  return std::nullopt;
}

std::optional<double> first_passage(const SamplePath& path, const SamplePath& reference,
                                    double level) {
  if (!(level > 0.0)) throw ParameterError("level must be > 0");
  if (path.dim() != reference.dim()) throw ParameterError("paths have different dimensions");
  for (std::size_t k = 0; k < path.size(); ++k) {
    const std::size_t j = reference.find(path.grid()[k]);
    if (j == SamplePath::npos) continue;
    if (distance(path.state(k), reference.state(j)) >= level) return path.grid()[k];
  }
  return std::nullopt;
}

}  // namespace ldp
