#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ldp/field.hpp"
#include "ldp/lbfgs.hpp"
#include "ldp/skeleton.hpp"

namespace ldp {

enum class PathMetric { SupNode, MeanSquare };

/// Penalty weights 10^j for j = 0..6.
std::vector<double> default_penalties();

/// Inputs of a rate computation: inf of (1/2) e(l) over piecewise-linear
/// controls on N uniform intervals whose skeleton (explicit Euler with
/// `substeps` steps per interval) hits the target.
struct RateQuery {
  RateQuery(CoefficientField f, Vec start) : field(std::move(f)), x0(std::move(start)) {}

  CoefficientField field;
  Vec x0;
  /// Terminal point y, or a full path h whose grid contains every k/N.
  std::variant<Vec, SamplePath> target = Vec{};
  int N = 100;
  int substeps = 1;
  std::vector<double> penalties = default_penalties();
  LbfgsOptions optimizer;
  PathMetric metric = PathMetric::SupNode;
  /// Final residual at or below this counts as converged.
  double residual_tolerance = 1e-5;
  /// Number of starts: the zero control plus starts-1 random controls.
  int starts = 1;
  std::uint64_t seed = 1;
};

struct PenaltyStage {
  double mu;
  double objective;
  double residual;
  int iterations;
};

struct RateResult {
  double value = 0.0;
  ControlPath control = ControlPath::zero(1, 1);
  SamplePath path;
  double residual = 0.0;
  double gradient_norm = 0.0;
  std::vector<PenaltyStage> trace;
  bool converged = false;
  /// Residual fell by less than 1% over the last two penalty decades.
  bool infeasible = false;
};

/// Penalized objective (1/2) sum |u_k|^2 dt + mu * Phi(F_N(u)) and its adjoint
/// gradient. u is row-major N x m. Phi is |x_K - y|^2 for a terminal target;
/// for a path target it is w * sum_k |x(k/N) - h(k/N)|^2 with w = 1 (sup-node)
/// or 1/N (mean-square).
double penalized_objective(const RateQuery& query, double mu, std::span<const double> u,
                           std::span<double> grad);

/// Constraint residual of the slopes u: |x(1) - y|, or the sup-node or RMS
/// deviation from h over the control nodes.
double constraint_residual(const RateQuery& query, std::span<const double> u);

RateResult minimize_terminal(const RateQuery& query);
RateResult minimize_path(const RateQuery& query);

/// Probes passing this close to a non-smooth point of the field are redrawn.
inline constexpr double kNonsmoothExclusion = 1e-6;

/// Max over probes and coordinates of |g_adjoint - g_fd| / max(|g_adjoint|,
/// |g_fd|, floor), central differences with step `h` at random controls
/// (slopes N(0, 0.25)). floor = 1e-8 * max(1, max |g_adjoint|).
double gradient_check(const RateQuery& query, int probe_count, double mu = 1.0,
                      double h = 1e-6, std::uint64_t seed = 7);

struct EnvelopeEntry {
  Vec target;
  RateResult result;
};

/// minimize_terminal over each target (the query's own target is ignored).
std::vector<EnvelopeEntry> rate_lower_envelope(const RateQuery& query_template,
                                               const std::vector<Vec>& targets);

}  // namespace ldp
