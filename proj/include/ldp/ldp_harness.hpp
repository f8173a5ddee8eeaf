#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ldp/field.hpp"
#include "ldp/sde_sim.hpp"

namespace ldp {

/// <a, X(1)> >= c.
struct TerminalHalfspace {
  Vec a;
  double c = 0.0;
};
/// |X(1) - y0| >= r.
struct TerminalOutsideBall {
  Vec y0;
  double r = 0.0;
};
/// max_k |X(t_k)| >= R.
struct SupExit {
  double R = 1.0;
};
/// max over coarse nodes of |X_fine - X_coarse| >= delta0, coarse = cfg.n.
struct CoupledGap {
  double delta0 = 0.1;
  int n_fine = 1024;
};

using EventSpec = std::variant<TerminalHalfspace, TerminalOutsideBall, SupExit, CoupledGap>;

std::string describe(const EventSpec& event);

/// Replicas that diverge count as hits; more than this fraction aborts.
inline constexpr double kMaxDivergedFraction = 1e-3;

/// Replicas with fewer hits are flagged unreliable.
inline constexpr std::size_t kReliableHits = 30;

struct EventEstimate {
  double p_hat = 0.0;
  double std_err = 0.0;
  std::size_t hits = 0;
  std::size_t replicas = 0;
  std::size_t diverged = 0;
  /// Per-replica event indicators, replica order.
  std::vector<std::uint8_t> indicators;
};

/// Crude Monte Carlo over cfg.replicas Euler-Maruyama paths; replica r uses
/// the noise stream (cfg.root_seed, r), so estimates with the same seed share
/// their noise across epsilon and event parameters.
EventEstimate estimate_event(const CoefficientField& field, const ExperimentConfig& cfg,
                             std::span<const double> x0, const EventSpec& event);

struct LdpEntry {
  double epsilon = 0.0;
  int n = 0;
  std::size_t replicas = 0;
  std::size_t hits = 0;
  double p_hat = 0.0;
  double std_err = 0.0;
  /// epsilon * log(p_hat), or epsilon * log(3 / M) when hits = 0.
  double eps_log_p = 0.0;
  /// Delta-method standard error epsilon * se / p_hat (NaN when hits = 0).
  double eps_log_p_se = 0.0;
  bool zero_hits = false;
  bool reliable = false;
};

struct LdpReport {
  std::vector<LdpEntry> entries;
  /// -inf I over the event, when supplied.
  std::optional<double> rate_bound;
  std::uint64_t root_seed = 0;
  std::vector<std::string> warnings;
};

LdpReport ldp_curve(const CoefficientField& field, std::span<const double> x0,
                    const EventSpec& event, const std::vector<double>& epsilons,
                    const ExperimentConfig& cfg, std::optional<double> rate_bound = {});

struct GapRow {
  int n = 0;
  int n_fine = 0;
  double delta0 = 0.0;
  double epsilon = 0.0;
  EventEstimate estimate;
};

/// P(coupled gap >= delta0) for each coarse n against one fine path per
/// replica (common random numbers across n).
std::vector<GapRow> lemma1_experiment(const CoefficientField& field, const ExperimentConfig& cfg,
                                      std::span<const double> x0, const std::vector<int>& ns,
                                      int n_fine, double delta0);

struct ExitRow {
  double R = 0.0;
  EventEstimate estimate;
};

/// P(max_k |X(t_k)| >= R) for each R from one path per replica.
std::vector<ExitRow> exit_probability_experiment(const CoefficientField& field,
                                                 const ExperimentConfig& cfg,
                                                 std::span<const double> x0,
                                                 const std::vector<double>& radii);

}  // namespace ldp
