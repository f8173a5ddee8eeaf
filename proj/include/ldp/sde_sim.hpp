#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ldp/field.hpp"
#include "ldp/skeleton.hpp"

namespace ldp {

/// Brownian increments on the uniform grid k/n. increments is row-major
/// n x m with entry (k, j) = sqrt(1/n) * z, z the draw k*m + j of the stream
/// (root_seed, replica).
struct NoisePath {
  int n = 0;
  int m = 0;
  std::uint64_t root_seed = 0;
  std::uint64_t replica = 0;
  std::vector<double> increments;

  std::span<const double> step(std::size_t k) const {
    return {increments.data() + k * static_cast<std::size_t>(m), static_cast<std::size_t>(m)};
  }
};

NoisePath sample_noise(int n, int m, std::uint64_t root_seed, std::uint64_t replica);

/// Same increments as sample_noise, written into out (size n*m).
void fill_noise(int n, int m, std::uint64_t root_seed, std::uint64_t replica,
                std::span<double> out);

struct ExperimentConfig {
  double epsilon = 0.1;
  int n = 1000;
  int replicas = 1000;
  std::uint64_t root_seed = 1;
  double delta0 = 0.1;
  double delta = 0.1;
  double R = 10.0;
};

/// Throws ParameterError naming the first offending field.
void validate(const ExperimentConfig& cfg);

/// X_{k+1} = X_k + b(t_k, X_k) dt + sqrt(eps) sigma(t_k, X_k) dB_k on t_k = k/n.
SamplePath euler_maruyama(const CoefficientField& field, const ExperimentConfig& cfg,
                          const NoisePath& noise, std::span<const double> x0);

/// Buffer form of euler_maruyama used by the Monte Carlo loops. increments
/// is n x m, out receives (n+1) x d states. Bit-identical to the path form.
void euler_maruyama_into(const CoefficientField& field, double epsilon, int n,
                         std::span<const double> increments, std::span<const double> x0,
                         std::span<double> out, const char* which = "Euler-Maruyama path");

/// Sums consecutive groups of n_fine / n fine increments (n_fine x m) into
/// out (n x m).
void aggregate_increments(std::span<const double> fine, int n_fine, int n, int m,
                          std::span<double> out);

/// Fine path on noise_fine and coarse path (cfg.n steps) on the aggregated
/// increments of the same noise; returns the sup distance over coarse nodes.
double coupled_euler_gap(const CoefficientField& field, const ExperimentConfig& cfg,
                         int n_fine, const NoisePath& noise_fine, std::span<const double> x0);

/// max over common nodes of |a(t) - b(t)|.
double sup_distance(const SamplePath& a, const SamplePath& b);

/// First grid time with |x(t)| >= level.
std::optional<double> first_passage(const SamplePath& path, double level);

/// First common grid time with |x(t) - reference(t)| >= level.
std::optional<double> first_passage(const SamplePath& path, const SamplePath& reference,
                                    double level);

}  // namespace ldp
