#pragma once

#include <functional>
#include <span>
#include <string>

namespace ldp {

enum class ModulusKind { NearZero, AtInfinity };

/// A scalar comparison function: a modulus of continuity near 0 (H, eta_R)
/// or a growth function at infinity (gamma).
struct ModulusSpec {
  std::function<double(double)> fn;
  ModulusKind kind = ModulusKind::NearZero;
  /// Left end of the domain: 0 for near-zero kinds, K for at-infinity kinds.
  double lower = 0.0;
  /// Right end of the range where monotonicity is claimed (near-zero kinds
  /// are typically only monotone on [0, 1/e] or [0, 1)).
  double upper = 1.0;
  bool claimed_monotone = true;
  std::string label;

  double operator()(double u) const { return fn(u); }

  static ModulusSpec near_zero(std::function<double(double)> fn, std::string label = "",
                               double upper = 1.0);
  static ModulusSpec at_infinity(std::function<double(double)> fn, double K,
                                 std::string label = "");
};

/// Checks the kind-specific invariants on the given probe points
/// (eta(0) = 0, nonnegativity, monotonicity, growth to infinity).
/// Throws ParameterError naming the first violation.
void validate_modulus(const ModulusSpec& spec, std::span<const double> probes);

/// Validates on a default geometric probe set spanning the modulus domain.
void validate_modulus(const ModulusSpec& spec);

/// A nonnegative time envelope f, g or G on [0,1] with a numerical
/// witness of square integrability.
class EnvelopeSpec {
 public:
  static constexpr int kDefaultNodes = 1024;

  explicit EnvelopeSpec(std::function<double(double)> fn, int nodes = kDefaultNodes,
                        std::string label = "");
  static EnvelopeSpec constant(double c);

  double operator()(double t) const { return fn_(t); }
  /// Trapezoid value of the integral of fn^2 over [0,1] on `nodes` uniform
  /// intervals.
  double square_integrable_witness() const noexcept { return witness_; }
  const std::string& label() const noexcept { return label_; }

 private:
  std::function<double(double)> fn_;
  double witness_ = 0.0;
  std::string label_;
};

}  // namespace ldp
