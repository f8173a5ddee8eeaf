#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "ldp/conditions.hpp"
#include "ldp/error.hpp"
#include "ldp/models.hpp"
#include "ldp/modulus.hpp"

using namespace ldp;

namespace {

CoefficientField scalar_drift(double (*b)(double), const char* label) {
  auto drift = [b](double, auto x, auto out) {
    using T = std::remove_cvref_t<decltype(out[0])>;
    if constexpr (std::is_same_v<T, double>) {
      out[0] = b(x[0]);
    } else {
      // Tangents are not needed by the auditors; value only.
      out[0] = T(b(x[0].v));
    }
  };
  auto diffusion = [](double, auto, auto out) { out[0] = 0.0; };
  return make_field(label, 1, 1, drift, diffusion);
}

double sqrt_abs(double x) { return std::sqrt(std::abs(x)); }
double neg_signed_sqrt(double x) { return x > 0 ? -std::sqrt(x) : std::sqrt(-x); }
double cube(double x) { return x * x * x; }

// Brute-force Lipschitz ratio (||ds|| + |db|) / |x - y| on a grid in the unit disk.
double rotational_lipschitz_ratio() {
  const auto f = models::rotational(1.0);
  std::vector<Vec> pts;
  const int k = 41;
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      Vec p{-1.0 + 2.0 * i / (k - 1), -1.0 + 2.0 * j / (k - 1)};
      if (std::hypot(p[0], p[1]) <= 1.0) pts.push_back(p);
    }
  double worst = 0.0;
  for (std::size_t a = 0; a < pts.size(); ++a)
    for (std::size_t b = a + 1; b < pts.size(); ++b) {
      const auto ba = f.drift(0.0, pts[a]), bb = f.drift(0.0, pts[b]);
      const auto sa = f.diffusion(0.0, pts[a]), sb = f.diffusion(0.0, pts[b]);
      const double ds = std::hypot(sa[0] - sb[0], sa[1] - sb[1]);
      const double db = std::hypot(ba[0] - bb[0], ba[1] - bb[1]);
      const double gap = std::hypot(pts[a][0] - pts[b][0], pts[a][1] - pts[b][1]);
      worst = std::max(worst, (ds + db) / gap);
    }
  return worst;
}

// Brute-force sup of the localized left side over |x-y|^2 on the unit disk.
double rotational_localized_ratio(double c0) {
  const auto f = models::rotational(1.0);
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 200000; ++i) {
    Vec x{u(gen), u(gen)}, y{x[0] + c0 * u(gen), x[1] + c0 * u(gen)};
    if (std::hypot(x[0], x[1]) > 1.0 || std::hypot(y[0], y[1]) > 1.0) continue;
    const double dx0 = x[0] - y[0], dx1 = x[1] - y[1];
    const double g2 = dx0 * dx0 + dx1 * dx1;
    if (g2 == 0.0 || g2 >= c0 * c0) continue;
    const auto bx = f.drift(0.0, x), by = f.drift(0.0, y);
    const auto sx = f.diffusion(0.0, x), sy = f.diffusion(0.0, y);
    const double s0 = sx[0] - sy[0], s1 = sx[1] - sy[1];
    const double one = s0 * s0 + s1 * s1 + 2.0 * (dx0 * (bx[0] - by[0]) + dx1 * (bx[1] - by[1]));
    const double two = std::abs(s0 * dx0 + s1 * dx1);
    worst = std::max(worst, std::max(one, two) / g2);
  }
  return worst;
}

const ModulusSpec kLinear = ModulusSpec::near_zero([](double u) { return u; }, "u");

}  // namespace

TEST_CASE("modulus continuity: Brownian passes with H(u) = u") {
  SampleConfig s;
  s.count = 500;
  s.radius_max = 5.0;
  const auto r = check_modulus_continuity(models::brownian(1), EnvelopeSpec::constant(1.0),
                                          kLinear, s);
  CHECK(r.passed());
  CHECK(r.samples_checked == 500);
  CHECK(r.verdict() == "pass");
}

TEST_CASE("modulus continuity: rotational field on the unit disk with G = 10") {
  REQUIRE(rotational_lipschitz_ratio() < 10.0);
  SampleConfig s;
  s.count = 5000;
  s.radius_max = 1.0;
  const auto r = check_modulus_continuity(models::rotational(1.0), EnvelopeSpec::constant(10.0),
                                          kLinear, s);
  CHECK(r.passed());
}

TEST_CASE("modulus continuity: sqrt drift fails at (0, 1e-6)") {
  SampleConfig s;
  s.count = 0;
  s.explicit_points.push_back({0.5, {0.0}, {1e-6}});
  const auto r = check_modulus_continuity(scalar_drift(sqrt_abs, "sqrt|x|"),
                                          EnvelopeSpec::constant(1.0), kLinear, s);
  REQUIRE(r.violations.size() == 1);
  CHECK(r.violations[0].x[0] == 0.0);
  CHECK(r.violations[0].y[0] == 1e-6);
  CHECK(r.violations[0].lhs == doctest::Approx(1e-3).epsilon(1e-12));
  CHECK(r.violations[0].rhs == doctest::Approx(1e-6).epsilon(1e-12));
  CHECK(r.verdict() == "fail");
}

TEST_CASE("localized condition: forced x = y is not a violation") {
  SampleConfig s;
  s.count = 0;
  s.explicit_points.push_back({0.3, {0.4, 0.2}, {0.4, 0.2}});
  const auto r = check_localized_condition(models::rotational(1.0), EnvelopeSpec::constant(1.0),
                                           kLinear, 1.0, 0.5, s);
  CHECK(r.passed());
}

TEST_CASE("localized condition: rotational field with a brute-force constant") {
  const double c0 = 0.5;
  const double c_lip = 1.5 * rotational_localized_ratio(c0);
  SampleConfig s;
  s.count = 5000;
  s.radius_max = 1.0;
  s.gap_max = 0.49;
  const auto r = check_localized_condition(models::rotational(1.0),
                                           EnvelopeSpec::constant(c_lip), kLinear, 1.0, c0, s);
  CHECK(r.passed());
}

TEST_CASE("localized condition: negative one-sided term passes") {
  SampleConfig s;
  s.count = 0;
  for (double rho : {1e-1, 1e-2, 1e-3})
    s.explicit_points.push_back({0.0, {rho * rho}, {0.0}});
  const auto field = scalar_drift(neg_signed_sqrt, "-sign(x)sqrt|x|");
  const auto r = check_localized_condition(field, EnvelopeSpec::constant(1.0), kLinear, 1.0, 0.5, s);
  CHECK(r.passed());
}

TEST_CASE("localized condition: parameter errors") {
  SampleConfig s;
  s.count = 10;
  s.radius_max = 1.0;
  s.gap_max = 0.1;
  const auto f = models::rotational(1.0);
  CHECK_THROWS_AS(check_localized_condition(f, EnvelopeSpec::constant(1.0), kLinear, 1.0, 1.0, s),
                  ParameterError);
  CHECK_THROWS_AS(check_localized_condition(f, EnvelopeSpec::constant(1.0), kLinear, 1.0, 0.0, s),
                  ParameterError);
  s.radius_max = 2.0;
  CHECK_THROWS_AS(check_localized_condition(f, EnvelopeSpec::constant(1.0), kLinear, 1.0, 0.5, s),
                  ParameterError);
}

TEST_CASE("growth condition: rotational field has a zero left side") {
  const auto gamma = ModulusSpec::at_infinity([](double u) { return u; }, 1.0, "u");
  for (double r : {0.5, 1.0, 2.0}) {
    SampleConfig s;
    s.count = 2000;
    s.radius_min = 1.0;
    s.radius_max = 100.0;
    s.radial = RadialLaw::LogUniform;
    const auto rep = check_growth_condition(models::rotational(r), EnvelopeSpec::constant(1.0),
                                            gamma, 1.0, s);
    CHECK(rep.passed());
  }
}

TEST_CASE("growth condition: Brownian passes") {
  const auto gamma = ModulusSpec::at_infinity([](double u) { return u; }, 1.0, "u");
  SampleConfig s;
  s.count = 2000;
  s.radius_min = 1.0;
  s.radius_max = 1e3;
  s.radial = RadialLaw::LogUniform;
  CHECK(check_growth_condition(models::brownian(1), EnvelopeSpec::constant(1.0), gamma, 1.0, s)
            .passed());
}

TEST_CASE("growth condition: x^3 drift fails at x = 10 against u log u") {
  const auto gamma =
      ModulusSpec::at_infinity([](double u) { return u * std::log(u); }, 1.0, "u log u");
  SampleConfig s;
  s.count = 0;
  s.explicit_points.push_back({0.0, {10.0}, {}});
  const auto rep = check_growth_condition(scalar_drift(cube, "x^3"), EnvelopeSpec::constant(1.0),
                                          gamma, 1.0, s);
  REQUIRE(rep.violations.size() == 1);
  CHECK(rep.violations[0].lhs == doctest::Approx(2e4));
  CHECK(rep.violations[0].rhs == doctest::Approx(100.0 * std::log(100.0) + 1.0));
}

TEST_CASE("growth condition: the dissipative cubic model passes") {
  const auto gamma = ModulusSpec::at_infinity([](double u) { return u; }, 1.0, "u");
  SampleConfig s;
  s.count = 2000;
  s.radius_min = 1.0;
  s.radius_max = 1e3;
  s.radial = RadialLaw::LogUniform;
  CHECK(check_growth_condition(models::cubic(), EnvelopeSpec::constant(1.0), gamma, 1.0, s)
            .passed());
}

TEST_CASE("growth condition: enlarging the tolerance never adds violations") {
  const auto gamma = ModulusSpec::at_infinity([](double u) { return u; }, 1.0, "u");
  SampleConfig s;
  s.count = 3000;
  s.radius_min = 1.0;
  s.radius_max = 3.0;
  std::size_t previous = static_cast<std::size_t>(-1);
  for (double rel : {0.0, 1e-9, 1e-3, 0.5, 10.0, 1e3}) {
    s.tol.rel = rel;
    const auto rep = check_growth_condition(scalar_drift(cube, "x^3"),
                                            EnvelopeSpec::constant(1.0), gamma, 1.0, s);
    CHECK(rep.violations.size() <= previous);
    previous = rep.violations.size();
  }
  CHECK(previous == 0);
}

TEST_CASE("rotational identities hold to roundoff") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> lg(-3.0, 3.0);
  for (double r : {0.5, 1.0, 2.0}) {
    const auto f = models::rotational(r);
    for (int i = 0; i < 1000; ++i) {
      const double rho = std::pow(10.0, lg(gen)), th = ang(gen);
      const Vec x{rho * std::cos(th), rho * std::sin(th)};
      const auto b = f.drift(0.0, x);
      const auto s = f.diffusion(0.0, x);
      const double st_x = s[0] * x[0] + s[1] * x[1];
      CHECK(std::abs(st_x) <= 1e-12 * std::pow(rho, r + 1.0));
      const double lhs = s[0] * s[0] + s[1] * s[1] + 2.0 * (x[0] * b[0] + x[1] * b[1]);
      const double exact = -std::pow(rho, 2.0 * r + 2.0);
      CHECK(std::abs(lhs - exact) <= 1e-10 * std::abs(exact));
    }
  }
}

TEST_CASE("osgood: u diverges with value ln(1/delta)") {
  const auto cut = geometric_cutoffs(1e-1, 1e-12, 4);
  const auto v = osgood_integral(kLinear, 1.0, cut, 20.0);
  CHECK(v.verdict == OsgoodOutcome::DivergesHeuristic);
  for (const auto& [c, val] : v.integral_values)
    CHECK(val == doctest::Approx(std::log(1.0 / c)).epsilon(1e-6));
}

TEST_CASE("osgood: sqrt(u) converges to 2") {
  const auto eta = ModulusSpec::near_zero([](double u) { return std::sqrt(u); }, "sqrt(u)");
  const auto cut = geometric_cutoffs(1e-1, 1e-12, 4);
  const auto v = osgood_integral(eta, 1.0, cut, 20.0);
  CHECK(v.verdict == OsgoodOutcome::Converges);
  CHECK(std::abs(v.limit() - 2.0) < 0.02);
  for (const auto& [c, val] : v.integral_values)
    CHECK(val == doctest::Approx(2.0 - 2.0 * std::sqrt(c)).epsilon(1e-6));
}

TEST_CASE("osgood: u ln(1/u) diverges like ln ln(1/delta)") {
  const auto eta =
      ModulusSpec::near_zero([](double u) { return u * std::log(1.0 / u); }, "u ln(1/u)",
                             std::exp(-1.0));
  const auto cut = geometric_cutoffs(1e-2, 1e-30, 2);
  const auto v = osgood_integral(eta, 0.1, cut, 3.0);
  CHECK(v.verdict == OsgoodOutcome::DivergesHeuristic);
  double previous = 0.0;
  for (const auto& [c, val] : v.integral_values) {
    CHECK(val >= previous);
    previous = val;
    const double exact = std::log(std::log(1.0 / c)) - std::log(std::log(10.0));
    CHECK(val == doctest::Approx(exact).epsilon(1e-4));
  }
}

TEST_CASE("osgood: u ln u at infinity diverges") {
  const auto gamma = ModulusSpec::at_infinity([](double u) { return u * std::log(u); },
                                              std::numbers::e, "u ln u");
  const auto cut = geometric_cutoffs(10.0, 1e300, 1);
  const auto v = osgood_integral(gamma, std::numbers::e, cut, 3.0);
  CHECK(v.verdict == OsgoodOutcome::DivergesHeuristic);
}

TEST_CASE("osgood: zero of eta inside the range is singular") {
  const auto eta = ModulusSpec::near_zero([](double u) { return u < 0.5 ? u : 0.0; }, "bad");
  const std::vector<double> cut{0.1};
  CHECK_THROWS_AS(osgood_integral(eta, 1.0, cut), SingularIntegrandError);
}

TEST_CASE("modulus validation rejects bad specs") {
  CHECK_THROWS_AS(validate_modulus(ModulusSpec::near_zero([](double u) { return u + 1.0; })),
                  ParameterError);
  CHECK_THROWS_AS(validate_modulus(ModulusSpec::near_zero([](double u) { return -u; })),
                  ParameterError);
  CHECK_THROWS_AS(validate_modulus(ModulusSpec::at_infinity([](double) { return 1.0; }, 1.0)),
                  ParameterError);
  CHECK_NOTHROW(validate_modulus(kLinear));
}

TEST_CASE("envelope witness") {
  CHECK(EnvelopeSpec::constant(2.0).square_integrable_witness() == doctest::Approx(4.0));
  CHECK_THROWS_AS(EnvelopeSpec([](double t) { return t - 0.5; }), ParameterError);
}

TEST_CASE("truncate: identity map at R = 1") {
  const auto tf = truncate(models::ou(1.0), 1.0);
  CHECK(tf.m_hat(0.0) == doctest::Approx(1.0));
  CHECK(tf.field.drift(0.0, Vec{3.0})[0] == doctest::Approx(2.0));
  CHECK(tf.field.drift(0.0, Vec{0.5})[0] == 0.5);
}

TEST_CASE("truncate: cubic at R = 2") {
  const auto tf = truncate(models::cubic(), 2.0);
  CHECK(tf.m_hat(0.0) == doctest::Approx(8.0));
  CHECK(tf.field.drift(0.0, Vec{-10.0})[0] == doctest::Approx(9.0));
  CHECK_THROWS_AS(truncate(models::cubic(), 0.0), ParameterError);
}

TEST_CASE("truncate: inside-ball identity and outside bound") {
  std::mt19937_64 gen(5);
  std::normal_distribution<double> z;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const auto& field : {models::cubic(), models::rotational(1.0)}) {
    const double R = 2.0;
    const auto tf = truncate(field, R);
    const int d = field.dim();
    const double bound = tf.m_hat(0.0) + 1.0;
    for (int i = 0; i < 1000; ++i) {
      Vec x(static_cast<std::size_t>(d));
      for (auto& c : x) c = z(gen);
      const double scale = R * std::pow(u(gen), 1.0 / d) / norm(x);
      for (auto& c : x) c *= scale;
      const double t = u(gen);
      CHECK(tf.field.drift(t, x) == field.drift(t, x));
      CHECK(tf.field.diffusion(t, x) == field.diffusion(t, x));
      Vec far = x;
      for (auto& c : far) c *= 1e3;
      for (double v : tf.field.drift(t, far)) CHECK(std::abs(v) <= bound);
      for (double v : tf.field.diffusion(t, far)) CHECK(std::abs(v) <= bound);
    }
    SampleConfig s;
    s.count = 1000;
    s.radius_max = 1e4;
    s.radial = RadialLaw::UniformVolume;
    CHECK(check_bounded_integrability(tf.field, s).passed());
  }
}

TEST_CASE("truncate: time-dependent field keeps the identity where the clamp is inactive") {
  auto drift = [](double t, auto x, auto out) { out[0] = (1.0 + t) * x[0]; };
  auto diffusion = [](double, auto, auto out) { out[0] = 1.0; };
  const auto field = make_field("(1+t)x", 1, 1, drift, diffusion, false);
  const auto tf = truncate(field, 1.0);
  std::mt19937_64 gen(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const double t = u(gen);
    for (int j = 0; j < 100; ++j) {
      const Vec x{2.0 * u(gen) - 1.0};
      const double b = field.drift(t, x)[0];
      if (std::abs(b) <= tf.m_hat(t)) CHECK(tf.field.drift(t, x)[0] == b);
      const double clamped = tf.field.drift(t, Vec{50.0})[0];
      CHECK(clamped <= tf.m_hat(t) + 1.0);
    }
  }
}

TEST_CASE("bounded integrability needs a global bound") {
  SampleConfig s;
  CHECK_THROWS_AS(check_bounded_integrability(models::cubic(), s), ParameterError);
}

TEST_CASE("integrability on a ball") {
  const auto rep = check_integrability(models::cubic(), 2.0);
  CHECK(rep.passed());
  CHECK(rep.witness == doctest::Approx(9.0).epsilon(1e-6));
}

TEST_CASE("test function closed forms") {
  CHECK(test_function(kLinear, 1.0, 1.0, 1.0) == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(test_function(kLinear, 0.5, 2.0, 2.0) == doctest::Approx(25.0).epsilon(1e-9));
  CHECK(test_function(kLinear, 0.3, 1.7, 0.0) == 1.0);
  CHECK_THROWS_AS(test_function(kLinear, 0.0, 1.0, 1.0), ParameterError);
}

TEST_CASE("test function is monotone and bounded") {
  const auto eta = ModulusSpec::near_zero([](double u) { return u * u + std::sqrt(u); }, "eta");
  for (double rho : {0.1, 1.0}) {
    for (double lambda : {0.5, 2.0}) {
      double previous = 1.0;
      for (double x = 0.0; x <= 3.0; x += 0.25) {
        const double v = test_function(eta, rho, lambda, x);
        CHECK(v >= previous);
        CHECK(v <= std::exp(lambda * x / rho) * (1.0 + 1e-12));
        previous = v;
      }
    }
  }
  CHECK(test_function(eta, 0.5, 1.0, 1.0) <= test_function(eta, 0.25, 1.0, 1.0));
}
