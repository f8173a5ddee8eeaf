#include "ldp/ldp_harness.hpp"

#include <cmath>
#include <limits>
#include <fmt/format.h>

#include "ldp/error.hpp"
#include "ldp/parallel.hpp"

namespace ldp {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

/// Per-replica outcomes of one event row.
struct RowState {
  std::vector<std::uint8_t> hit;
  std::vector<std::uint8_t> diverged;
  std::vector<double> divergence_time;

  explicit RowState(std::size_t M) : hit(M, 0), diverged(M, 0), divergence_time(M, 0.0) {}

  void mark_diverged(std::size_t r, const DivergenceError& e) {
    hit[r] = 1;
    diverged[r] = 1;
    divergence_time[r] = e.time();
  }
};

EventEstimate finish(RowState&& row, const std::string& label) {
  EventEstimate est;
  est.replicas = row.hit.size();
  std::size_t first = est.replicas;
  for (std::size_t r = 0; r < est.replicas; ++r) {
    est.hits += row.hit[r];
    est.diverged += row.diverged[r];
    if (row.diverged[r] && first == est.replicas) first = r;
  }
  if (static_cast<double>(est.diverged) > kMaxDivergedFraction * static_cast<double>(est.replicas))
    throw DivergenceError(
        fmt::format("{}: {} of {} replicas diverged (first: replica {} at t = {}); the field "
                    "likely violates the growth condition",
                    label, est.diverged, est.replicas, first, row.divergence_time[first]),
        row.divergence_time[first], first);
  const double M = static_cast<double>(est.replicas);
  est.p_hat = static_cast<double>(est.hits) / M;
  est.std_err = std::sqrt(est.p_hat * (1.0 - est.p_hat) / M);
  est.indicators = std::move(row.hit);
  return est;
}

double path_sup(std::span<const double> path, std::size_t d) {
  double sup = 0.0;
  for (std::size_t k = 0; k * d < path.size(); ++k) sup = std::max(sup, norm(path.subspan(k * d, d)));
  return sup;
}

double coarse_gap(std::span<const double> fine, std::span<const double> coarse, std::size_t d,
                  std::size_t n, std::size_t ratio) {
  double gap = 0.0;
  for (std::size_t i = 0; i <= n; ++i)
    gap = std::max(gap, distance(coarse.subspan(i * d, d), fine.subspan(i * ratio * d, d)));
  return gap;
}

void check_common(const CoefficientField& field, const ExperimentConfig& cfg,
                  std::span<const double> x0) {
  validate(cfg);
  if (x0.size() != static_cast<std::size_t>(field.dim()))
    throw ParameterError("x0 dimension does not match the field");
}

}  // namespace

std::string describe(const EventSpec& event) {
  return std::visit(
      overloaded{
          [](const TerminalHalfspace& e) { return fmt::format("<a, X(1)> >= {}", e.c); },
          [](const TerminalOutsideBall& e) { return fmt::format("|X(1) - y0| >= {}", e.r); },
          [](const SupExit& e) { return fmt::format("sup |X(t)| >= {}", e.R); },
          [](const CoupledGap& e) {
            return fmt::format("coupled gap (n_fine = {}) >= {}", e.n_fine, e.delta0);
          }},
      event);
}

namespace {

/// One noise draw per replica, reused for every epsilon (the noise depends
/// only on the seed and the replica index, so this equals separate runs).
std::vector<EventEstimate> estimate_for_epsilons(const CoefficientField& field,
                                                 const ExperimentConfig& cfg,
                                                 std::span<const double> x0,
                                                 const EventSpec& event,
                                                 const std::vector<double>& epsilons) {
  check_common(field, cfg, x0);
  for (double eps : epsilons)
    if (!(eps >= 0.0)) throw ParameterError("epsilon must be ≥ 0");
  const auto d = static_cast<std::size_t>(field.dim());
  const int m = field.noise_dim();
  const auto M = static_cast<std::size_t>(cfg.replicas);

  int n_noise = cfg.n;
  std::visit(overloaded{
                 [&](const TerminalHalfspace& e) {
                   if (e.a.size() != d) throw ParameterError("halfspace normal has the wrong dimension");
                 },
                 [&](const TerminalOutsideBall& e) {
                   if (e.y0.size() != d) throw ParameterError("ball centre has the wrong dimension");
                   if (!(e.r >= 0.0)) throw ParameterError("ball radius must be ≥ 0");
                 },
                 [&](const SupExit& e) {
                   if (!(e.R > 0.0)) throw ParameterError("R must be > 0");
                 },
                 [&](const CoupledGap& e) {
                   if (!(e.delta0 > 0.0)) throw ParameterError("delta0 must be > 0");
                   if (e.n_fine < cfg.n || e.n_fine % cfg.n != 0)
                     throw ParameterError("n_fine must be a positive multiple of n");
                   n_noise = e.n_fine;
                 }},
             event);
  const bool coupled = std::holds_alternative<CoupledGap>(event);

  std::vector<RowState> rows(epsilons.size(), RowState(M));
  parallel_chunks(M, [&](unsigned, std::size_t begin, std::size_t end) {
    const auto mu = static_cast<std::size_t>(m);
    std::vector<double> noise(static_cast<std::size_t>(n_noise) * mu);
    std::vector<double> path((static_cast<std::size_t>(n_noise) + 1) * d);
    std::vector<double> coarse_noise, coarse_path;
    if (coupled) {
      coarse_noise.resize(static_cast<std::size_t>(cfg.n) * mu);
      coarse_path.resize((static_cast<std::size_t>(cfg.n) + 1) * d);
    }
    for (std::size_t r = begin; r < end; ++r) {
      fill_noise(n_noise, m, cfg.root_seed, r, noise);
      if (coupled) aggregate_increments(noise, n_noise, cfg.n, m, coarse_noise);
      for (std::size_t q = 0; q < epsilons.size(); ++q) {
        const double eps = epsilons[q];
        try {
          euler_maruyama_into(field, eps, n_noise, noise, x0, path,
                              coupled ? "fine path" : "Euler-Maruyama path");
          const std::span<const double> terminal(path.data() + static_cast<std::size_t>(n_noise) * d, d);
          const bool hit = std::visit(
              overloaded{[&](const TerminalHalfspace& e) { return dot(e.a, terminal) >= e.c; },
                         [&](const TerminalOutsideBall& e) {
                           return distance(terminal, e.y0) >= e.r;
                         },
                         [&](const SupExit& e) { return path_sup(path, d) >= e.R; },
                         [&](const CoupledGap& e) {
                           euler_maruyama_into(field, eps, cfg.n, coarse_noise, x0, coarse_path,
                                               "coarse path");
                           return coarse_gap(path, coarse_path, d, static_cast<std::size_t>(cfg.n),
                                             static_cast<std::size_t>(e.n_fine / cfg.n)) >=
                                  e.delta0;
                         }},
              event);
          rows[q].hit[r] = hit ? 1 : 0;
        } catch (const DivergenceError& e) {
          rows[q].mark_diverged(r, e);
        }
      }
    }
  });
  std::vector<EventEstimate> out;
  for (std::size_t q = 0; q < epsilons.size(); ++q)
    out.push_back(finish(std::move(rows[q]),
                         fmt::format("{} at epsilon = {}", describe(event), epsilons[q])));
  return out;
}

}  // namespace

EventEstimate estimate_event(const CoefficientField& field, const ExperimentConfig& cfg,
                             std::span<const double> x0, const EventSpec& event) {
  return std::move(estimate_for_epsilons(field, cfg, x0, event, {cfg.epsilon}).front());
}

LdpReport ldp_curve(const CoefficientField& field, std::span<const double> x0,
                    const EventSpec& event, const std::vector<double>& epsilons,
                    const ExperimentConfig& cfg, std::optional<double> rate_bound) {
  if (epsilons.empty()) throw ParameterError("epsilons must be nonempty");
  for (std::size_t i = 0; i < epsilons.size(); ++i) {
    if (!(epsilons[i] > 0.0)) throw ParameterError("epsilons must be > 0");
    if (i > 0 && !(epsilons[i] < epsilons[i - 1]))
      throw ParameterError("epsilons must be strictly decreasing");
  }
  LdpReport report;
  report.rate_bound = rate_bound;
  report.root_seed = cfg.root_seed;
  const auto estimates = estimate_for_epsilons(field, cfg, x0, event, epsilons);
  for (std::size_t q = 0; q < epsilons.size(); ++q) {
    const double eps = epsilons[q];
    const EventEstimate& est = estimates[q];
    LdpEntry e;
    e.epsilon = eps;
    e.n = cfg.n;
    e.replicas = est.replicas;
    e.hits = est.hits;
    e.p_hat = est.p_hat;
    e.std_err = est.std_err;
    e.zero_hits = est.hits == 0;
    e.reliable = est.hits >= kReliableHits;
    if (e.zero_hits) {
      e.eps_log_p = eps * std::log(3.0 / static_cast<double>(est.replicas));
      e.eps_log_p_se = std::numeric_limits<double>::quiet_NaN();
    } else {
      e.eps_log_p = eps * std::log(est.p_hat);
      e.eps_log_p_se = eps * est.std_err / est.p_hat;
    }
    report.entries.push_back(e);
  }
  if (!report.entries.front().reliable)
    report.warnings.push_back(fmt::format(
        "only {} hits at the largest epsilon; increase replicas so that p_hat * M >= {}",
        report.entries.front().hits, kReliableHits));
  for (const auto& e : report.entries)
    if (e.zero_hits)
      report.warnings.push_back(
          fmt::format("no hits at epsilon = {}; reporting the rule-of-three bound 3/M", e.epsilon));
  return report;
}

std::vector<GapRow> lemma1_experiment(const CoefficientField& field, const ExperimentConfig& cfg,
                                      std::span<const double> x0, const std::vector<int>& ns,
                                      int n_fine, double delta0) {
  check_common(field, cfg, x0);
  if (ns.empty()) throw ParameterError("n list must be nonempty");
  if (!(delta0 > 0.0)) throw ParameterError("delta0 must be > 0");
  for (int n : ns)
    if (n < 1 || n_fine < n || n_fine % n != 0)
      throw ParameterError(fmt::format("n = {} does not divide n_fine = {}", n, n_fine));
  const auto d = static_cast<std::size_t>(field.dim());
  const int m = field.noise_dim();
  const auto mu = static_cast<std::size_t>(m);
  const auto M = static_cast<std::size_t>(cfg.replicas);

  std::vector<RowState> rows(ns.size(), RowState(M));
  parallel_chunks(M, [&](unsigned, std::size_t begin, std::size_t end) {
    std::vector<double> noise(static_cast<std::size_t>(n_fine) * mu);
    std::vector<double> fine((static_cast<std::size_t>(n_fine) + 1) * d);
    std::vector<double> coarse_noise, coarse;
    for (std::size_t r = begin; r < end; ++r) {
      fill_noise(n_fine, m, cfg.root_seed, r, noise);
      try {
        euler_maruyama_into(field, cfg.epsilon, n_fine, noise, x0, fine, "fine path");
      } catch (const DivergenceError& e) {
        for (auto& row : rows) row.mark_diverged(r, e);
        continue;
      }
      for (std::size_t q = 0; q < ns.size(); ++q) {
        const auto n = static_cast<std::size_t>(ns[q]);
        coarse_noise.resize(n * mu);
        coarse.resize((n + 1) * d);
        aggregate_increments(noise, n_fine, ns[q], m, coarse_noise);
        try {
          euler_maruyama_into(field, cfg.epsilon, ns[q], coarse_noise, x0, coarse, "coarse path");
          rows[q].hit[r] =
              coarse_gap(fine, coarse, d, n, static_cast<std::size_t>(n_fine) / n) >= delta0;
        } catch (const DivergenceError& e) {
          rows[q].mark_diverged(r, e);
        }
      }
    }
  });
  std::vector<GapRow> out;
  for (std::size_t q = 0; q < ns.size(); ++q)
    out.push_back({ns[q], n_fine, delta0, cfg.epsilon,
                   finish(std::move(rows[q]), fmt::format("coupled gap at n = {}", ns[q]))});
  return out;
}

std::vector<ExitRow> exit_probability_experiment(const CoefficientField& field,
                                                 const ExperimentConfig& cfg,
                                                 std::span<const double> x0,
                                                 const std::vector<double>& radii) {
  check_common(field, cfg, x0);
  if (radii.empty()) throw ParameterError("R list must be nonempty");
  for (double R : radii)
    if (!(R > 0.0)) throw ParameterError("R must be > 0");
  const auto d = static_cast<std::size_t>(field.dim());
  const int m = field.noise_dim();
  const auto M = static_cast<std::size_t>(cfg.replicas);

  std::vector<RowState> rows(radii.size(), RowState(M));
  parallel_chunks(M, [&](unsigned, std::size_t begin, std::size_t end) {
    std::vector<double> noise(static_cast<std::size_t>(cfg.n) * static_cast<std::size_t>(m));
    std::vector<double> path((static_cast<std::size_t>(cfg.n) + 1) * d);
    for (std::size_t r = begin; r < end; ++r) {
      fill_noise(cfg.n, m, cfg.root_seed, r, noise);
      try {
        euler_maruyama_into(field, cfg.epsilon, cfg.n, noise, x0, path);
      } catch (const DivergenceError& e) {
        for (auto& row : rows) row.mark_diverged(r, e);
        continue;
      }
      const double sup = path_sup(path, d);
      for (std::size_t q = 0; q < radii.size(); ++q) rows[q].hit[r] = sup >= radii[q];
    }
  });
  std::vector<ExitRow> out;
  for (std::size_t q = 0; q < radii.size(); ++q)
    out.push_back({radii[q], finish(std::move(rows[q]), fmt::format("sup-exit at R = {}", radii[q]))});
  return out;
}

}  // namespace ldp
