#include <doctest.h>

#include <cmath>
#include <vector>

#include "ldp/conditions.hpp"
#include "ldp/error.hpp"
#include "ldp/ldp_harness.hpp"
#include "ldp/models.hpp"
#include "oracles.hpp"

using namespace ldp;

TEST_CASE("radius-zero ball event always hits") {
  ExperimentConfig cfg;
  cfg.epsilon = 0.5;
  cfg.n = 64;
  cfg.replicas = 200;
  const auto e = estimate_event(models::brownian(1), cfg, Vec{0.0}, TerminalOutsideBall{{0.0}, 0.0});
  CHECK(e.p_hat == 1.0);
  CHECK(e.hits == 200);
}

TEST_CASE("Brownian halfspace through the start has probability one half") {
  ExperimentConfig cfg;
  cfg.epsilon = 1.0;
  cfg.n = 64;
  cfg.replicas = 20000;
  const auto e = estimate_event(models::brownian(1), cfg, Vec{0.0}, TerminalHalfspace{{1.0}, 0.0});
  CHECK(std::abs(e.p_hat - 0.5) < 3.0 * e.std_err);
  CHECK(e.std_err == doctest::Approx(std::sqrt(e.p_hat * (1.0 - e.p_hat) / 20000.0)));
}

TEST_CASE("Brownian two-sided exit against the series oracle") {
  ExperimentConfig cfg;
  cfg.epsilon = 0.25;
  cfg.n = 1 << 12;
  cfg.replicas = 100000;
  const auto e = estimate_event(models::brownian(1), cfg, Vec{0.0}, SupExit{1.0});
  const double level = (1.0 + std::sqrt(cfg.epsilon) * oracle::monitoring_shift(1.0 / cfg.n)) /
                       std::sqrt(cfg.epsilon);
  const double discrete = oracle::brownian_two_sided_exit(level);
  CHECK(std::abs(e.p_hat - discrete) < 3.0 * e.std_err);

  const auto rows = exit_probability_experiment(models::brownian(1), cfg, Vec{0.0}, {1.0});
  CHECK(rows[0].estimate.hits == e.hits);
  CHECK(rows[0].estimate.indicators == e.indicators);
}

TEST_CASE("estimates are reproducible and independent of the worker count") {
  ExperimentConfig cfg;
  cfg.epsilon = 0.3;
  cfg.n = 128;
  cfg.replicas = 3000;
  const auto f = models::rotational(1.0);
  const auto a = estimate_event(f, cfg, Vec{1.0, 0.0}, SupExit{1.2});
  setenv("LDP_WORKERS", "3", 1);
  const auto b = estimate_event(f, cfg, Vec{1.0, 0.0}, SupExit{1.2});
  unsetenv("LDP_WORKERS");
  CHECK(a.indicators == b.indicators);
  CHECK(a.p_hat == b.p_hat);
}

TEST_CASE("Brownian terminal curve against the exact finite-epsilon values") {
  ExperimentConfig cfg;
  cfg.n = 256;
  cfg.replicas = 20000;
  const std::vector<double> eps{1.0, 0.5, 0.25};
  const auto rep = ldp_curve(models::brownian(1), Vec{0.0}, TerminalHalfspace{{1.0}, 1.0}, eps, cfg,
                             -0.5);
  REQUIRE(rep.entries.size() == 3);
  CHECK(rep.rate_bound == -0.5);
  for (const auto& e : rep.entries) {
    const double exact = oracle::Phi(-1.0 / std::sqrt(e.epsilon));
    CHECK(std::abs(e.p_hat - exact) < 3.0 * e.std_err);
    CHECK(e.eps_log_p <= 0.0);
    CHECK(e.eps_log_p_se == doctest::Approx(e.epsilon * e.std_err / e.p_hat));
    CHECK(e.reliable);
    CHECK(std::abs(e.eps_log_p - e.epsilon * std::log(exact)) < 3.0 * e.eps_log_p_se);
  }
  for (std::size_t i = 1; i < rep.entries.size(); ++i)
    CHECK(-rep.entries[i].eps_log_p < -rep.entries[i - 1].eps_log_p);
}

TEST_CASE("typical event: probabilities stay near one") {
  ExperimentConfig cfg;
  cfg.n = 128;
  cfg.replicas = 2000;
  const auto rep = ldp_curve(models::ou(-1.0), Vec{1.0}, TerminalOutsideBall{{5.0}, 1.0},
                             {0.5, 0.1, 0.02}, cfg, 0.0);
  for (std::size_t i = 1; i < rep.entries.size(); ++i)
    CHECK(std::abs(rep.entries[i].eps_log_p) <= std::abs(rep.entries[i - 1].eps_log_p) + 1e-12);
  CHECK(std::abs(rep.entries.back().eps_log_p) < 1e-3);
}

TEST_CASE("zero hits use the rule of three") {
  ExperimentConfig cfg;
  cfg.n = 64;
  cfg.replicas = 500;
  const auto rep = ldp_curve(models::brownian(1), Vec{0.0}, TerminalHalfspace{{1.0}, 10.0},
                             {0.1, 0.05}, cfg);
  for (const auto& e : rep.entries) {
    CHECK(e.zero_hits);
    CHECK_FALSE(e.reliable);
    CHECK(e.eps_log_p == doctest::Approx(e.epsilon * std::log(3.0 / 500.0)));
    CHECK(std::isfinite(e.eps_log_p));
  }
  CHECK_FALSE(rep.warnings.empty());
}

TEST_CASE("curve epsilons must decrease") {
  ExperimentConfig cfg;
  cfg.replicas = 10;
  cfg.n = 8;
  CHECK_THROWS_AS(ldp_curve(models::brownian(1), Vec{0.0}, TerminalHalfspace{{1.0}, 1.0},
                            {0.1, 0.5}, cfg),
                  ParameterError);
}

TEST_CASE("coupled gap: ordering in n with common random numbers") {
  ExperimentConfig cfg;
  cfg.epsilon = 0.04;
  cfg.replicas = 3000;
  const auto rows = lemma1_experiment(models::ou(-1.0), cfg, Vec{0.0}, {4, 16, 64}, 1024, 0.03);
  CHECK(rows[0].estimate.p_hat > rows[1].estimate.p_hat);
  CHECK(rows[1].estimate.p_hat >= rows[2].estimate.p_hat);

  const auto zero = lemma1_experiment(models::brownian(1), cfg, Vec{0.0}, {4, 16}, 1024, 1e-9);
  for (const auto& r : zero) CHECK(r.estimate.hits == 0);
}

TEST_CASE("coupled gap: truncated cubic and a threshold beyond the path diameters") {
  ExperimentConfig cfg;
  cfg.epsilon = 0.04;
  cfg.replicas = 2000;
  const auto tf = truncate(models::cubic(), 2.0);
  const auto rows = lemma1_experiment(tf.field, cfg, Vec{1.5}, {4, 16, 64}, 1024, 0.3);
  for (std::size_t i = 1; i < rows.size(); ++i)
    CHECK(rows[i].estimate.p_hat <= rows[i - 1].estimate.p_hat);
  // |b| <= 9 and |sigma| = 1, so over [0,1] each path moves at most 9 + sqrt(eps) max|B|.
  const auto far = lemma1_experiment(tf.field, cfg, Vec{1.0}, {4, 16, 64}, 1024, 100.0);
  for (const auto& r : far) CHECK(r.estimate.hits == 0);
}

TEST_CASE("coupled gap event agrees with the experiment") {
  ExperimentConfig cfg;
  cfg.epsilon = 0.04;
  cfg.n = 16;
  cfg.replicas = 500;
  const auto e = estimate_event(models::ou(-1.0), cfg, Vec{0.0}, CoupledGap{0.1, 1024});
  const auto rows = lemma1_experiment(models::ou(-1.0), cfg, Vec{0.0}, {16}, 1024, 0.1);
  CHECK(e.indicators == rows[0].estimate.indicators);
}

TEST_CASE("exit probabilities are ordered per replica") {
  ExperimentConfig cfg;
  cfg.epsilon = 0.5;
  cfg.n = 256;
  cfg.replicas = 2000;
  const auto rows = exit_probability_experiment(models::rotational(1.0), cfg, Vec{1.0, 0.0},
                                                {0.5, 1.05, 1.2, 1.5});
  CHECK(rows[0].estimate.p_hat == 1.0);
  for (std::size_t i = 1; i < rows.size(); ++i)
    for (std::size_t r = 0; r < cfg.replicas; ++r)
      CHECK(rows[i].estimate.indicators[r] <= rows[i - 1].estimate.indicators[r]);
}

TEST_CASE("too many diverged replicas abort") {
  auto drift = [](double, auto x, auto out) { out[0] = x[0] * x[0] * x[0]; };
  auto diffusion = [](double, auto, auto out) { out[0] = 1.0; };
  const auto f = make_field("x^3", 1, 1, drift, diffusion);
  ExperimentConfig cfg;
  cfg.epsilon = 1.0;
  cfg.n = 16;
  cfg.replicas = 200;
  CHECK_THROWS_AS(estimate_event(f, cfg, Vec{2.0}, SupExit{10.0}), DivergenceError);
}
