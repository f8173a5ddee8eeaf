#include <doctest.h>

#include <cmath>
#include <vector>

#include "ldp/error.hpp"
#include "ldp/ldp_harness.hpp"
#include "ldp/models.hpp"
#include "ldp/sde_sim.hpp"

using namespace ldp;

namespace {

SamplePath path_1d(std::vector<double> grid, std::vector<double> values) {
  return SamplePath(std::move(grid), std::move(values), 1);
}

}  // namespace

TEST_CASE("experiment config validation") {
  ExperimentConfig cfg;
  CHECK_NOTHROW(validate(cfg));
  cfg.epsilon = -1.0;
  CHECK_THROWS_WITH_AS(validate(cfg), "epsilon must be ≥ 0", ParameterError);
  cfg = {};
  cfg.n = 0;
  CHECK_THROWS_AS(validate(cfg), ParameterError);
  cfg = {};
  cfg.replicas = 0;
  CHECK_THROWS_AS(validate(cfg), ParameterError);
  cfg = {};
  cfg.delta0 = 0.0;
  CHECK_THROWS_AS(validate(cfg), ParameterError);
}

TEST_CASE("Brownian Euler-Maruyama path is the sum of increments") {
  ExperimentConfig cfg;
  cfg.epsilon = 1.0;
  cfg.n = 500;
  const auto noise = sample_noise(cfg.n, 1, 3, 4);
  const auto path = euler_maruyama(models::brownian(1), cfg, noise, Vec{0.0});
  double sum = 0.0;
  for (int k = 0; k < cfg.n; ++k) {
    sum += noise.increments[static_cast<std::size_t>(k)];
    CHECK(path.state(static_cast<std::size_t>(k + 1))[0] == doctest::Approx(sum).epsilon(1e-13));
  }
}

TEST_CASE("additive noise scales with sqrt(epsilon)") {
  const auto noise = sample_noise(256, 2, 8, 1);
  const Vec x0{0.5, -1.0};
  ExperimentConfig a, b;
  a.n = b.n = 256;
  a.epsilon = 0.01;
  b.epsilon = 0.04;
  const auto pa = euler_maruyama(models::brownian(2), a, noise, x0);
  const auto pb = euler_maruyama(models::brownian(2), b, noise, x0);
  for (std::size_t k = 0; k < pa.size(); ++k)
    for (int j = 0; j < 2; ++j)
      CHECK(pb.state(k)[j] - x0[j] == doctest::Approx(2.0 * (pa.state(k)[j] - x0[j])).epsilon(1e-12));
}

TEST_CASE("buffer form matches the path form bit for bit") {
  ExperimentConfig cfg;
  cfg.epsilon = 0.3;
  cfg.n = 100;
  const auto noise = sample_noise(cfg.n, 1, 1, 0);
  const Vec x0{1.0, 0.2};
  const auto f = models::rotational(0.5);
  const auto path = euler_maruyama(f, cfg, noise, x0);
  std::vector<double> out(static_cast<std::size_t>(2 * (cfg.n + 1)));
  euler_maruyama_into(f, cfg.epsilon, cfg.n, noise.increments, x0, out);
  CHECK(out == path.values());
}

TEST_CASE("OU terminal moments") {
  const auto f = models::ou(-1.0);
  ExperimentConfig cfg;
  cfg.epsilon = 0.01;
  cfg.n = 1000;
  const int M = 10000;
  double s = 0.0, s2 = 0.0;
  for (int r = 0; r < M; ++r) {
    const auto noise = sample_noise(cfg.n, 1, 77, static_cast<std::uint64_t>(r));
    const double x = euler_maruyama(f, cfg, noise, Vec{0.0}).terminal()[0];
    s += x;
    s2 += x * x;
  }
  const double mean = s / M;
  const double var = (s2 - M * mean * mean) / (M - 1);
  CHECK(std::abs(var - 0.01 * (1.0 - std::exp(-2.0)) / 2.0) < 0.05 * 0.004323);
  CHECK(std::abs(mean) < 4.0 * std::sqrt(var / M));
}

TEST_CASE("OU mean from a nonzero start") {
  const auto f = models::ou(-1.0);
  ExperimentConfig cfg;
  cfg.epsilon = 0.1;
  cfg.n = 1000;
  const int M = 4000;
  double s = 0.0, s2 = 0.0;
  for (int r = 0; r < M; ++r) {
    const auto noise = sample_noise(cfg.n, 1, 5, static_cast<std::uint64_t>(r));
    const double x = euler_maruyama(f, cfg, noise, Vec{1.0}).terminal()[0];
    s += x;
    s2 += x * x;
  }
  const double mean = s / M;
  const double se = std::sqrt((s2 / M - mean * mean) / M);
  CHECK(std::abs(mean - std::exp(-1.0)) < 4.0 * se);
}

TEST_CASE("aggregated increments sum the fine increments") {
  const auto fine = sample_noise(64, 2, 1, 1);
  std::vector<double> coarse(8 * 2);
  aggregate_increments(fine.increments, 64, 8, 2, coarse);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 2; ++j) {
      double s = 0.0;
      for (int k = 0; k < 8; ++k) s += fine.increments[static_cast<std::size_t>((8 * i + k) * 2 + j)];
      CHECK(coarse[static_cast<std::size_t>(i * 2 + j)] == doctest::Approx(s).epsilon(1e-14));
    }
}

TEST_CASE("coupled gap vanishes for additive Brownian noise") {
  ExperimentConfig cfg;
  cfg.epsilon = 1.0;
  cfg.n = 16;
  const auto noise = sample_noise(1024, 1, 2, 0);
  CHECK(coupled_euler_gap(models::brownian(1), cfg, 1024, noise, Vec{0.0}) < 1e-13);
}

TEST_CASE("coupled gap at zero noise equals the skeleton gap") {
  ExperimentConfig cfg;
  cfg.epsilon = 0.0;
  cfg.n = 16;
  const auto noise = sample_noise(1024, 1, 2, 0);
  const double gap = coupled_euler_gap(models::ou(-1.0), cfg, 1024, noise, Vec{1.0});
  const double sk = skeleton_gap(models::ou(-1.0), ControlPath::zero(1, 1), Vec{1.0}, 16, 1024);
  CHECK(gap == doctest::Approx(sk).epsilon(1e-12));
}

TEST_CASE("coupled gap probability shrinks as the coarse grid refines") {
  ExperimentConfig cfg;
  cfg.epsilon = 0.04;
  cfg.replicas = 2000;
  // At delta0 = 0.25 neither grid produces a hit, so only the weak ordering is observable.
  const auto rare = lemma1_experiment(models::ou(-1.0), cfg, Vec{0.0}, {4, 16}, 1024, 0.25);
  CHECK(rare[1].estimate.p_hat <= rare[0].estimate.p_hat);
  const auto rows = lemma1_experiment(models::ou(-1.0), cfg, Vec{0.0}, {4, 16}, 1024, 0.05);
  CHECK(rows[0].estimate.hits > 0);
  CHECK(rows[1].estimate.p_hat < rows[0].estimate.p_hat);
}

TEST_CASE("coupled gap requires a multiple of the coarse count") {
  ExperimentConfig cfg;
  cfg.n = 10;
  const auto noise = sample_noise(64, 1, 1, 0);
  CHECK_THROWS_AS(coupled_euler_gap(models::ou(-1.0), cfg, 64, noise, Vec{0.0}), ParameterError);
}

TEST_CASE("sup distance") {
  const auto a = path_1d({0.0, 0.5, 1.0}, {0.0, 1.0, 0.0});
  const auto b = path_1d({0.0, 0.5, 1.0}, {0.0, 0.0, 1.0});
  CHECK(sup_distance(a, a) == 0.0);
  CHECK(sup_distance(a, b) == 1.0);
  const SamplePath p({0.0, 0.5, 1.0}, {0.0, 0.0, 1.0, 2.0, 3.0, -1.0}, 2);
  const SamplePath q({0.0, 0.5, 1.0}, {3.0, 4.0, 4.0, 6.0, 6.0, 3.0}, 2);
  CHECK(sup_distance(p, q) == doctest::Approx(5.0));
  const auto c = path_1d({0.0, 0.25}, {0.0, 1.0});
  const auto e = path_1d({0.5, 1.0}, {0.0, 1.0});
  CHECK_THROWS_AS(sup_distance(c, e), ParameterError);
}

TEST_CASE("first passage") {
  const auto flat = path_1d({0.0, 0.5, 1.0}, {0.5, 0.5, 0.5});
  CHECK_FALSE(first_passage(flat, 1.0).has_value());
  const auto p = path_1d({0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0}, {0.0, 0.5, 2.0, 3.0});
  REQUIRE(first_passage(p, 1.0).has_value());
  CHECK(*first_passage(p, 1.0) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("first passage of a Brownian polygon matches a brute-force scan") {
  ExperimentConfig cfg;
  cfg.epsilon = 1.0;
  cfg.n = 1000;
  const auto noise = sample_noise(cfg.n, 1, 11, 2);
  const auto path = euler_maruyama(models::brownian(1), cfg, noise, Vec{0.0});
  const auto ref = euler_maruyama(models::brownian(1), cfg, noise, Vec{0.0});
  const double level = 0.5;
  double s = 0.0;
  std::optional<double> expected;
  for (int k = 0; k < cfg.n && !expected; ++k) {
    s += noise.increments[static_cast<std::size_t>(k)];
    if (std::abs(s) >= level) expected = (k + 1) / 1000.0;
  }
  REQUIRE(expected.has_value());
  REQUIRE(first_passage(path, level).has_value());
  CHECK(*first_passage(path, level) == doctest::Approx(*expected).epsilon(1e-12));
  CHECK_FALSE(first_passage(path, ref, 1e-9).has_value());
}

TEST_CASE("divergence carries the path tag") {
  auto drift = [](double, auto x, auto out) { out[0] = x[0] * x[0] * x[0]; };
  auto diffusion = [](double, auto, auto out) { out[0] = 1.0; };
  const auto f = make_field("x^3", 1, 1, drift, diffusion);
  ExperimentConfig cfg;
  cfg.epsilon = 0.0;
  cfg.n = 4;
  const auto noise = sample_noise(64, 1, 1, 0);
  try {
    coupled_euler_gap(f, cfg, 64, noise, Vec{3.0});
    FAIL("expected divergence");
  } catch (const DivergenceError& e) {
    CHECK(std::string(e.what()).find("path") != std::string::npos);
  }
}
