#include "ldp/conditions.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <fmt/format.h>
#include <fmt/ranges.h>
#include <limits>
#include <memory>

#include "ldp/error.hpp"
#include "ldp/rng.hpp"

namespace ldp {

namespace {

constexpr int kMaxRedraws = 10000;

Vec random_unit(rng::Stream& s, int d) {
  Vec v(static_cast<std::size_t>(d));
  double n = 0.0;
  while (n == 0.0) {
    for (auto& c : v) c = s.next_normal();
    n = norm(v);
  }
  for (auto& c : v) c /= n;
  return v;
}

double random_radius(rng::Stream& s, const SampleConfig& cfg, int d) {
  const double u = s.next_uniform();
  if (cfg.radial == RadialLaw::LogUniform) {
    const double lo = std::log(std::max(cfg.radius_min, 1e-300));
    return std::exp(lo + u * (std::log(cfg.radius_max) - lo));
  }
  const double lo = std::pow(cfg.radius_min, d);
  const double hi = std::pow(cfg.radius_max, d);
  return std::pow(lo + u * (hi - lo), 1.0 / d);
}

void check_sampler(const SampleConfig& cfg) {
  if (!(cfg.radius_min >= 0.0) || !(cfg.radius_max >= cfg.radius_min) ||
      !std::isfinite(cfg.radius_max))
    throw ParameterError("sampler radius range must satisfy 0 <= radius_min <= radius_max < inf");
  if (cfg.radial == RadialLaw::LogUniform && !(cfg.radius_min > 0.0))
    throw ParameterError("log-uniform radial law needs radius_min > 0");
  if (!(cfg.gap_min >= 0.0) || !(cfg.gap_max >= cfg.gap_min))
    throw ParameterError("sampler gap range must satisfy 0 <= gap_min <= gap_max");
  if (!(cfg.tol.rel >= 0.0) || !(cfg.tol.abs >= 0.0))
    throw ParameterError("tolerances must be nonnegative");
}

void check_finite(std::span<const double> v, double t, std::span<const double> x,
                  const char* what) {
  for (double c : v)
    if (!std::isfinite(c))
      throw EvaluationError(fmt::format("non-finite {} at t = {}, x = ({})", what, t,
                                        fmt::join(x, ", ")));
}

// Evaluates b and sigma at (t, x), raising EvaluationError on non-finite output.
struct Eval {
  explicit Eval(const CoefficientField& f)
      : field(f),
        b(static_cast<std::size_t>(f.dim())),
        s(static_cast<std::size_t>(f.dim() * f.noise_dim())) {}

  void at(double t, std::span<const double> x) {
    field.drift(t, x, b);
    field.diffusion(t, x, s);
    check_finite(b, t, x, "drift");
    check_finite(s, t, x, "diffusion");
  }

  const CoefficientField& field;
  Vec b;
  Vec s;
};

void require_dim(const SamplePoint& p, int d, bool pair) {
  if (p.x.size() != static_cast<std::size_t>(d) ||
      (pair && p.y.size() != static_cast<std::size_t>(d)))
    throw ParameterError("explicit sample point has the wrong dimension");
  if (!(p.t >= 0.0 && p.t <= 1.0)) throw ParameterError("sample time must lie in [0,1]");
}

// |A^T v| for a d x m row-major matrix A.
double transpose_apply_norm(std::span<const double> a, std::span<const double> v, int d, int m) {
  double sq = 0.0;
  for (int j = 0; j < m; ++j) {
    double c = 0.0;
    for (int i = 0; i < d; ++i) c += a[static_cast<std::size_t>(i * m + j)] * v[static_cast<std::size_t>(i)];
    sq += c * c;
  }
  return std::sqrt(sq);
}

double radical_inverse(std::uint64_t i, std::uint64_t base) {
  double inv = 1.0 / static_cast<double>(base);
  double f = inv;
  double r = 0.0;
  while (i > 0) {
    r += f * static_cast<double>(i % base);
    i /= base;
    f *= inv;
  }
  return r;
}

constexpr std::uint64_t kPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41,
                                     43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97};

}  // namespace

std::vector<SamplePoint> draw_points(const SampleConfig& cfg, int d) {
  check_sampler(cfg);
  rng::Stream s(cfg.seed, 0x5A3F1E);
  std::vector<SamplePoint> out;
  out.reserve(cfg.count + cfg.explicit_points.size());
  for (std::size_t k = 0; k < cfg.count; ++k) {
    SamplePoint p;
    p.t = s.next_uniform();
    const double r = random_radius(s, cfg, d);
    p.x = random_unit(s, d);
    for (auto& c : p.x) c *= r;
    out.push_back(std::move(p));
  }
  for (const auto& p : cfg.explicit_points) {
    require_dim(p, d, false);
    out.push_back(p);
  }
  return out;
}

std::vector<SamplePoint> draw_pairs(const SampleConfig& cfg, int d) {
  check_sampler(cfg);
  rng::Stream s(cfg.seed, 0x9A125);
  std::vector<SamplePoint> out;
  out.reserve(cfg.count + cfg.explicit_points.size());
  for (std::size_t k = 0; k < cfg.count; ++k) {
    SamplePoint p;
    p.t = s.next_uniform();
    bool ok = false;
    for (int attempt = 0; attempt < kMaxRedraws && !ok; ++attempt) {
      const double r = random_radius(s, cfg, d);
      p.x = random_unit(s, d);
      for (auto& c : p.x) c *= r;
      const double g = cfg.gap_min + s.next_uniform() * (cfg.gap_max - cfg.gap_min);
      const Vec w = random_unit(s, d);
      p.y = p.x;
      for (std::size_t i = 0; i < p.y.size(); ++i) p.y[i] += g * w[i];
      const double ny = norm(p.y);
      ok = ny >= cfg.radius_min && ny <= cfg.radius_max;
    }
    if (!ok) throw ParameterError("sampler cannot produce pairs inside the radius range");
    out.push_back(std::move(p));
  }
  for (const auto& p : cfg.explicit_points) {
    require_dim(p, d, true);
    out.push_back(p);
  }
  return out;
}

std::string to_string(ConditionId id) {
  switch (id) {
    case ConditionId::ModulusContinuity: return "modulus-continuity";
    case ConditionId::Localized: return "localized";
    case ConditionId::LocalizedWeak: return "localized-weak";
    case ConditionId::Growth: return "growth";
    case ConditionId::Integrability: return "integrability";
    case ConditionId::BoundedIntegrability: return "bounded-integrability";
  }
  return "unknown";
}

ConditionReport check_modulus_continuity(const CoefficientField& field, const EnvelopeSpec& G,
                                         const ModulusSpec& H, const SampleConfig& sampler) {
  if (H.kind != ModulusKind::NearZero) throw ParameterError("H must be a near-zero modulus");
  validate_modulus(H);
  const int d = field.dim();
  const auto pairs = draw_pairs(sampler, d);
  ConditionReport report{ConditionId::ModulusContinuity, pairs.size(), {}, NAN};
  Eval ex(field), ey(field);
  for (const auto& p : pairs) {
    ex.at(p.t, p.x);
    ey.at(p.t, p.y);
    Vec ds(ex.s.size()), db(ex.b.size());
    for (std::size_t i = 0; i < ds.size(); ++i) ds[i] = ex.s[i] - ey.s[i];
    for (std::size_t i = 0; i < db.size(); ++i) db[i] = ex.b[i] - ey.b[i];
    const double lhs = frobenius(ds) + norm(db);
    const double rhs = G(p.t) * H(distance(p.x, p.y));
    if (sampler.tol.exceeds(lhs, rhs)) report.violations.push_back({p.t, p.x, p.y, lhs, rhs});
  }
  return report;
}

ConditionReport check_localized_condition(const CoefficientField& field, const EnvelopeSpec& f,
                                          const ModulusSpec& eta, double R, double c0,
                                          const SampleConfig& sampler, bool weak) {
  if (!(c0 > 0.0 && c0 < 1.0)) throw ParameterError("c0 must lie in (0,1)");
  if (!(R > 0.0)) throw ParameterError("R must be > 0");
  if (eta.kind != ModulusKind::NearZero) throw ParameterError("eta must be a near-zero modulus");
  if (sampler.count > 0 && (sampler.radius_max > R || sampler.gap_max >= c0))
    throw ParameterError("sampler must stay inside |x| v |y| <= R with |x-y| < c0");
  validate_modulus(eta);
  const int d = field.dim();
  const int m = field.noise_dim();
  const auto pairs = draw_pairs(sampler, d);
  for (const auto& p : pairs) {
    if (std::max(norm(p.x), norm(p.y)) > R || distance(p.x, p.y) >= c0)
      throw ParameterError("sample pair lies outside |x| v |y| <= R, |x-y| < c0");
  }
  ConditionReport report{weak ? ConditionId::LocalizedWeak : ConditionId::Localized, pairs.size(),
                         {}, NAN};
  Eval ex(field), ey(field);
  Vec ds(static_cast<std::size_t>(d * m)), db(static_cast<std::size_t>(d)),
      dx(static_cast<std::size_t>(d));
  for (const auto& p : pairs) {
    ex.at(p.t, p.x);
    ey.at(p.t, p.y);
    for (std::size_t i = 0; i < ds.size(); ++i) ds[i] = ex.s[i] - ey.s[i];
    for (std::size_t i = 0; i < db.size(); ++i) db[i] = ex.b[i] - ey.b[i];
    for (std::size_t i = 0; i < dx.size(); ++i) dx[i] = p.x[i] - p.y[i];
    const double one_sided =
        weak ? dot(dx, db) : dot(ds, ds) + 2.0 * dot(dx, db);
    const double lhs = std::max(one_sided, transpose_apply_norm(ds, dx, d, m));
    const double rhs = f(p.t) * eta(dot(dx, dx));
    if (sampler.tol.exceeds(lhs, rhs)) report.violations.push_back({p.t, p.x, p.y, lhs, rhs});
  }
  return report;
}

ConditionReport check_growth_condition(const CoefficientField& field, const EnvelopeSpec& g,
                                       const ModulusSpec& gamma, double K,
                                       const SampleConfig& sampler) {
  if (gamma.kind != ModulusKind::AtInfinity)
    throw ParameterError("gamma must be an at-infinity modulus");
  if (!(K > 0.0)) throw ParameterError("K must be > 0");
  if (sampler.count > 0 && sampler.radius_min < K)
    throw ParameterError("growth sampler must stay in |x| >= K");
  const int d = field.dim();
  const int m = field.noise_dim();
  const auto points = draw_points(sampler, d);
  for (const auto& p : points)
    if (norm(p.x) < K) throw ParameterError("growth sample point lies inside |x| < K");
  ConditionReport report{ConditionId::Growth, points.size(), {}, NAN};
  Eval e(field);
  for (const auto& p : points) {
    e.at(p.t, p.x);
    const double one_sided = dot(e.s, e.s) + 2.0 * dot(p.x, e.b);
    const double lhs = std::max(one_sided, transpose_apply_norm(e.s, p.x, d, m));
    const double rhs = g(p.t) * (gamma(dot(p.x, p.x)) + 1.0);
    if (sampler.tol.exceeds(lhs, rhs)) report.violations.push_back({p.t, p.x, {}, lhs, rhs});
  }
  return report;
}

ConditionReport check_integrability(const CoefficientField& field, double R,
                                    std::size_t ball_count, int time_nodes) {
  if (!(R > 0.0)) throw ParameterError("R must be > 0");
  if (time_nodes < 1) throw ParameterError("time_nodes must be >= 1");
  const int d = field.dim();
  if (ball_count == 0) ball_count = 4096u * static_cast<std::size_t>(d);
  const auto pts = ball_points(d, R, ball_count);
  const int nodes = field.time_homogeneous() ? 1 : time_nodes;
  ConditionReport report{ConditionId::Integrability, 0, {}, NAN};
  Vec b(static_cast<std::size_t>(d)), s(static_cast<std::size_t>(d * field.noise_dim()));
  double integral = 0.0;
  for (int k = 0; k <= nodes; ++k) {
    const double t = field.time_homogeneous() ? 0.0 : static_cast<double>(k) / nodes;
    double sup = 0.0;
    for (const auto& x : pts) {
      field.drift(t, x, b);
      field.diffusion(t, x, s);
      const double v = norm(b) + dot(s, s);
      ++report.samples_checked;
      if (!std::isfinite(v)) {
        report.violations.push_back({t, x, {}, v, std::numeric_limits<double>::max()});
        continue;
      }
      sup = std::max(sup, v);
    }
    if (field.time_homogeneous()) {
      integral = sup;
      break;
    }
    integral += ((k == 0 || k == nodes) ? 0.5 : 1.0) * sup / nodes;
  }
  report.witness = integral;
  return report;
}

ConditionReport check_bounded_integrability(const CoefficientField& field,
                                            const SampleConfig& sampler) {
  const auto& bound = field.global_bound();
  if (!bound)
    throw ParameterError("bounded integrability is only verifiable for fields with a global "
                         "bound (apply truncate first)");
  const auto points = draw_points(sampler, field.dim());
  ConditionReport report{ConditionId::BoundedIntegrability, points.size(), {}, NAN};
  Eval e(field);
  for (const auto& p : points) {
    e.at(p.t, p.x);
    const double lhs = std::max(norm(e.b), frobenius(e.s));
    const double rhs = bound(p.t);
    if (sampler.tol.exceeds(lhs, rhs)) report.violations.push_back({p.t, p.x, {}, lhs, rhs});
  }
  constexpr int kNodes = EnvelopeSpec::kDefaultNodes;
  double integral = 0.0;
  for (int k = 0; k <= kNodes; ++k) {
    const double t = static_cast<double>(k) / kNodes;
    const double v = bound(t);
    if (!std::isfinite(v)) {
      report.violations.push_back({t, {}, {}, v, std::numeric_limits<double>::max()});
      continue;
    }
    integral += ((k == 0 || k == kNodes) ? 0.5 : 1.0) * v / kNodes;
  }
  report.witness = integral;
  return report;
}

std::string to_string(OsgoodOutcome v) {
  switch (v) {
    case OsgoodOutcome::DivergesHeuristic: return "diverges-heuristic";
    case OsgoodOutcome::Converges: return "converges";
    case OsgoodOutcome::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

OsgoodVerdict osgood_integral(const ModulusSpec& spec, double anchor,
                              std::span<const double> cutoffs, double threshold,
                              int nodes_per_decade) {
  if (cutoffs.empty()) throw ParameterError("osgood_integral needs at least one cutoff");
  if (!(threshold > 0.0)) throw ParameterError("threshold must be > 0");
  if (nodes_per_decade < 1) throw ParameterError("nodes_per_decade must be >= 1");
  const bool near_zero = spec.kind == ModulusKind::NearZero;
  double prev = anchor;
  for (double c : cutoffs) {
    const bool ordered = near_zero ? (c < prev && c > 0.0) : (c > prev);
    if (!ordered || !std::isfinite(c))
      throw ParameterError(near_zero ? "cutoffs must decrease from the anchor toward 0"
                                     : "cutoffs must increase from the anchor K");
    prev = c;
  }
  if (!near_zero && !(anchor > 0.0)) throw ParameterError("anchor K must be > 0");

  auto integrand = [&](double s) {
    const double den = near_zero ? spec(s) : spec(s) + 1.0;
    if (!(den > 0.0) || !std::isfinite(den))
      throw SingularIntegrandError(
          fmt::format("integrand singular at s = {} (denominator {})", s, den));
    return 1.0 / den;
  };
  // Trapezoid in u = ln s on [lo, hi]: int f(s) ds = int f(e^u) e^u du.
  auto segment = [&](double lo, double hi) {
    const double a = std::log(lo);
    const double b = std::log(hi);
    const int n = std::max(8, static_cast<int>(std::ceil(nodes_per_decade * (b - a) / std::log(10.0))));
    const double h = (b - a) / n;
    double sum = 0.0;
    for (int k = 0; k <= n; ++k) {
      const double s = (k == 0) ? lo : (k == n ? hi : std::exp(a + k * h));
      sum += ((k == 0 || k == n) ? 0.5 : 1.0) * integrand(s) * s;
    }
    return sum * h;
  };

  OsgoodVerdict out;
  out.threshold = threshold;
  double total = 0.0;
  double last_increment = 0.0;
  prev = anchor;
  for (double c : cutoffs) {
    last_increment = near_zero ? segment(c, prev) : segment(prev, c);
    total += last_increment;
    out.integral_values.emplace_back(c, total);
    prev = c;
  }
  constexpr double kRelTol = 1e-6;
  const bool vanishing = last_increment < kRelTol * total;
  if (vanishing && total < threshold) {
    out.verdict = OsgoodOutcome::Converges;
  } else if (!vanishing && total > threshold) {
    out.verdict = OsgoodOutcome::DivergesHeuristic;
  } else {
    out.verdict = OsgoodOutcome::Inconclusive;
  }
  return out;
}

std::vector<double> geometric_cutoffs(double from, double to, int per_decade) {
  if (!(from > 0.0 && to > 0.0) || per_decade < 1)
    throw ParameterError("geometric_cutoffs needs positive endpoints and per_decade >= 1");
  const double decades = std::log10(to / from);
  const int n = std::max(1, static_cast<int>(std::lround(std::fabs(decades) * per_decade)));
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) {
    if (k == n) {
      out.push_back(to);
    } else {
      out.push_back(from * std::pow(10.0, decades * k / n));
    }
  }
  return out;
}

std::vector<Vec> ball_points(int d, double R, std::size_t count) {
  if (d < 1 || !(R > 0.0)) throw ParameterError("ball_points needs d >= 1 and R > 0");
  std::vector<Vec> pts;
  if (d == 1) {
    const std::size_t n = std::max<std::size_t>(count, 3);
    pts.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
      const double u = static_cast<double>(k) / static_cast<double>(n - 1);
      pts.push_back({k + 1 == n ? R : -R + 2.0 * R * u});
    }
    pts.push_back({0.0});
    return pts;
  }
  if (static_cast<std::size_t>(d) > std::size(kPrimes))
    throw ParameterError("ball_points supports d <= 25");
  const auto du = static_cast<std::size_t>(d);
  pts.push_back(Vec(du, 0.0));
  for (std::size_t i = 0; i < du; ++i) {
    Vec e(du, 0.0);
    e[i] = R;
    pts.push_back(e);
    e[i] = -R;
    pts.push_back(e);
  }
  for (std::uint64_t idx = 1; pts.size() < count; ++idx) {
    Vec p(du);
    for (std::size_t i = 0; i < du; ++i) p[i] = 2.0 * radical_inverse(idx, kPrimes[i]) - 1.0;
    const double r = norm(p);
    if (r > 1.0 || r == 0.0) continue;
    Vec inside = p;
    for (auto& c : inside) c *= R;
    pts.push_back(std::move(inside));
    for (auto& c : p) c *= R / r;
    pts.push_back(std::move(p));
  }
  return pts;
}

double TruncatedField::m_hat(double t) const {
  if (times.size() == 1) return sup_values.front();
  const double tc = std::clamp(t, 0.0, 1.0);
  const auto n = times.size() - 1;
  auto k = static_cast<std::size_t>(std::floor(tc * static_cast<double>(n)));
  if (k >= n) k = n - 1;
  return std::max(sup_values[k], sup_values[k + 1]);
}

TruncatedField truncate(const CoefficientField& field, double R, const EnvelopeSampler& sampler) {
  if (!(R > 0.0)) throw ParameterError("truncation radius R must be > 0");
  if (sampler.points_per_dim < 1 || sampler.time_nodes < 1)
    throw ParameterError("envelope sampler needs points and time nodes");
  const int d = field.dim();
  const int m = field.noise_dim();
  const auto pts = ball_points(d, R, sampler.points_per_dim * static_cast<std::size_t>(d));

  auto table = std::make_shared<TruncatedField>(TruncatedField{field, R, {}, {}});
  const int nodes = field.time_homogeneous() ? 0 : sampler.time_nodes;
  Vec b(static_cast<std::size_t>(d)), s(static_cast<std::size_t>(d * m));
  for (int k = 0; k <= nodes; ++k) {
    const double t = nodes == 0 ? 0.0 : static_cast<double>(k) / nodes;
    double sup = 0.0;
    for (const auto& x : pts) {
      field.drift(t, x, b);
      field.diffusion(t, x, s);
      check_finite(b, t, x, "drift");
      check_finite(s, t, x, "diffusion");
      sup = std::max({sup, norm(b), frobenius(s)});
    }
    table->times.push_back(t);
    table->sup_values.push_back(sup);
  }

  std::shared_ptr<const TruncatedField> env = table;
  auto clamp_all = [env](double t, auto out) {
    const double c = env->m_hat(t) + 1.0;
    for (auto& v : out) {
      if (v > c) {
        v = c;
      } else if (v < -c) {
        v = -c;
      }
    }
  };
  const CoefficientField base = field;
  Kernel<double> drift = [base, clamp_all](double t, std::span<const double> x, std::span<double> o) {
    base.drift(t, x, o);
    clamp_all(t, o);
  };
  Kernel<double> diffusion = [base, clamp_all](double t, std::span<const double> x,
                                               std::span<double> o) {
    base.diffusion(t, x, o);
    clamp_all(t, o);
  };
  Kernel<Dual> drift_dual = [base, clamp_all](double t, std::span<const Dual> x, std::span<Dual> o) {
    base.drift_tangent()(t, x, o);
    clamp_all(t, o);
  };
  Kernel<Dual> diffusion_dual = [base, clamp_all](double t, std::span<const Dual> x,
                                                  std::span<Dual> o) {
    base.diffusion_tangent()(t, x, o);
    clamp_all(t, o);
  };
  const double rows = std::sqrt(static_cast<double>(d) * std::max(1, m));
  CoefficientField clamped(fmt::format("{}|R={}", field.label(), R), d, m, std::move(drift),
                           std::move(diffusion), std::move(drift_dual), std::move(diffusion_dual),
                           field.time_homogeneous());
  TruncatedField result = *table;
  result.field =
      clamped.with_global_bound([env, rows](double t) { return rows * (env->m_hat(t) + 1.0); })
          .with_nonsmooth_points(field.nonsmooth_points());
  return result;
}

double test_function(const ModulusSpec& eta, double rho, double lambda, double x) {
  if (!(rho > 0.0)) throw ParameterError("rho must be > 0");
  if (!(lambda > 0.0)) throw ParameterError("lambda must be > 0");
  if (!(x >= 0.0)) throw ParameterError("x must be >= 0");
  if (x == 0.0) return 1.0;
  auto integrand = [&](double s) { return 1.0 / (eta(s) + rho); };
  const double q = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      integrand, 0.0, x, 15, 1e-14);
  return std::exp(lambda * q);
}

}  // namespace ldp
