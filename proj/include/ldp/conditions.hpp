#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ldp/field.hpp"
#include "ldp/modulus.hpp"

namespace ldp {

/// Slack applied to the right-hand side of every inequality check: a sample
/// violates iff lhs > rhs + rel*|rhs| + abs.
struct Tolerance {
  double rel = 1e-9;
  double abs = 1e-12;

  bool exceeds(double lhs, double rhs) const noexcept {
    return lhs > rhs + rel * (rhs < 0.0 ? -rhs : rhs) + abs;
  }
};

enum class RadialLaw { UniformVolume, LogUniform };

/// One sampled evaluation site. `y` is empty for single-point conditions.
struct SamplePoint {
  double t = 0.0;
  Vec x;
  Vec y;
};

/// Random sample sites for the condition auditors.
///
/// Points x are drawn with radius_min <= |x| <= radius_max (uniform in volume
/// or log-uniform in radius) and uniform direction; pair partners are
/// y = x + g w with g uniform in [gap_min, gap_max] and w a uniform unit
/// vector, redrawn until |y| also lies in the radius range. Times are uniform
/// on [0,1]. Explicit points are checked in addition to the random ones.
struct SampleConfig {
  std::size_t count = 1000;
  std::uint64_t seed = 1;
  double radius_min = 0.0;
  double radius_max = 1.0;
  RadialLaw radial = RadialLaw::UniformVolume;
  double gap_min = 0.0;
  double gap_max = 1.0;
  std::vector<SamplePoint> explicit_points;
  Tolerance tol;
};

std::vector<SamplePoint> draw_points(const SampleConfig& cfg, int d);
std::vector<SamplePoint> draw_pairs(const SampleConfig& cfg, int d);

enum class ConditionId {
  ModulusContinuity,
  Localized,
  LocalizedWeak,
  Growth,
  Integrability,
  BoundedIntegrability,
};

std::string to_string(ConditionId id);

struct Violation {
  double t = 0.0;
  Vec x;
  Vec y;
  double lhs = 0.0;
  double rhs = 0.0;
};

/// Outcome of a sampling audit: "pass" means no violation was found on the
/// `samples_checked` sites, not that the condition is certified.
struct ConditionReport {
  ConditionId id = ConditionId::Growth;
  std::size_t samples_checked = 0;
  std::vector<Violation> violations;
  /// Quadrature value backing integrability audits; NaN otherwise.
  double witness = 0.0 / 0.0;

  bool passed() const noexcept { return violations.empty(); }
  std::string verdict() const { return passed() ? "pass" : "fail"; }
};

/// ||sigma(t,x) - sigma(t,y)|| + |b(t,x) - b(t,y)| <= G(t) H(|x-y|).
ConditionReport check_modulus_continuity(const CoefficientField& field, const EnvelopeSpec& G,
                                         const ModulusSpec& H, const SampleConfig& sampler);

/// (||dsigma||^2 + 2<x-y, db>) v |dsigma^T (x-y)| <= f(t) eta(|x-y|^2) for
/// |x| v |y| <= R and |x-y| < c0. With `weak`, the left side is the weaker
/// <x-y, db> v |dsigma^T (x-y)| used for the skeleton Euler scheme.
ConditionReport check_localized_condition(const CoefficientField& field, const EnvelopeSpec& f,
                                          const ModulusSpec& eta, double R, double c0,
                                          const SampleConfig& sampler, bool weak = false);

/// (||sigma||^2 + 2<x, b>) v |sigma^T x| <= g(t) (gamma(|x|^2) + 1) for |x| >= K.
ConditionReport check_growth_condition(const CoefficientField& field, const EnvelopeSpec& g,
                                       const ModulusSpec& gamma, double K,
                                       const SampleConfig& sampler);

/// Witnesses int_0^1 sup_{|x|<=R} (|b| + ||sigma||^2) dt < inf on a uniform
/// time grid of `time_nodes` intervals and the ball point set.
ConditionReport check_integrability(const CoefficientField& field, double R,
                                    std::size_t ball_points = 0, int time_nodes = 256);

/// For fields carrying a global bound B(t): checks |b| v ||sigma|| <= B(t) on
/// the sample sites and witnesses int_0^1 B(t) dt < inf.
ConditionReport check_bounded_integrability(const CoefficientField& field,
                                            const SampleConfig& sampler);

enum class OsgoodOutcome { DivergesHeuristic, Converges, Inconclusive };
std::string to_string(OsgoodOutcome v);

struct OsgoodVerdict {
  /// (cutoff, integral from the anchor to the cutoff), in probe order.
  std::vector<std::pair<double, double>> integral_values;
  OsgoodOutcome verdict = OsgoodOutcome::Inconclusive;
  double threshold = 20.0;

  double limit() const { return integral_values.empty() ? 0.0 : integral_values.back().second; }
};

/// Accumulates int ds/eta(s) from the anchor down to each cutoff (near-zero
/// kind) or int ds/(gamma(s)+1) from the anchor K up to each cutoff
/// (at-infinity kind), by the trapezoid rule in log coordinates.
///
/// Verdict: converges when the last increment is below 1e-6 of the total and
/// the total stays below `threshold`; diverges-heuristic when the total
/// exceeds `threshold` and increments are still above that level;
/// inconclusive otherwise.
OsgoodVerdict osgood_integral(const ModulusSpec& spec, double anchor,
                              std::span<const double> cutoffs, double threshold = 20.0,
                              int nodes_per_decade = 2048);

/// `per_decade` geometric points per decade from `from` to `to` (both included).
std::vector<double> geometric_cutoffs(double from, double to, int per_decade);

/// Deterministic point set covering the closed ball of radius R: for d = 1 a
/// uniform grid including +-R; otherwise the origin, the axis points +-R e_i,
/// and Halton points inside the ball together with their radial projections
/// onto the sphere.
std::vector<Vec> ball_points(int d, double R, std::size_t count);

struct EnvelopeSampler {
  /// Points per state dimension; the ball set has points_per_dim * d points.
  std::size_t points_per_dim = 4096;
  /// Uniform time nodes on [0,1] for time-dependent fields.
  int time_nodes = 64;
};

/// Coefficients clamped componentwise into [-m(t)-1, m(t)+1], where m(t)
/// is the sampled sup of |b(t,.)| v ||sigma(t,.)|| over the ball of radius R.
struct TruncatedField {
  CoefficientField field;
  double R = 0.0;
  /// Nodes and sampled sups; a single node for time-homogeneous fields.
  std::vector<double> times;
  std::vector<double> sup_values;

  /// Sampled sup used at time t (the larger of the two bracketing nodes).
  double m_hat(double t) const;
};

TruncatedField truncate(const CoefficientField& field, double R,
                        const EnvelopeSampler& sampler = {});

/// exp(lambda * int_0^x ds / (eta(s) + rho)).
double test_function(const ModulusSpec& eta, double rho, double lambda, double x);

}  // namespace ldp
