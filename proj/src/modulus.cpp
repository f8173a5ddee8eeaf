#include "ldp/modulus.hpp"

#include <cmath>
#include <fmt/format.h>
#include <vector>

#include "ldp/error.hpp"

namespace ldp {

ModulusSpec ModulusSpec::near_zero(std::function<double(double)> fn, std::string label,
                                   double upper) {
  if (!(upper > 0.0)) throw ParameterError("near-zero modulus needs a positive upper end");
  return ModulusSpec{std::move(fn), ModulusKind::NearZero, 0.0, upper, true, std::move(label)};
}

ModulusSpec ModulusSpec::at_infinity(std::function<double(double)> fn, double K,
                                     std::string label) {
  if (!(K >= 0.0)) throw ParameterError("at-infinity modulus needs K >= 0");
  return ModulusSpec{std::move(fn), ModulusKind::AtInfinity, K, INFINITY, true,
                     std::move(label)};
}

void validate_modulus(const ModulusSpec& spec, std::span<const double> probes) {
  if (!spec.fn) throw ParameterError("modulus has no function");
  if (spec.kind == ModulusKind::NearZero) {
    const double at0 = spec.fn(0.0);
    if (at0 != 0.0)
      throw ParameterError(fmt::format("near-zero modulus {} must vanish at 0 (got {})",
                                       spec.label, at0));
  }
  double prev = -INFINITY;
  double prev_u = 0.0;
  for (double u : probes) {
    if (u < spec.lower || u > spec.upper) continue;
    const double v = spec.fn(u);
    if (!std::isfinite(v) || v < 0.0)
      throw ParameterError(fmt::format("modulus {} is negative or non-finite at {}", spec.label, u));
    if (spec.claimed_monotone && v < prev)
      throw ParameterError(fmt::format("modulus {} decreases between {} and {}", spec.label,
                                       prev_u, u));
    prev = v;
    prev_u = u;
  }
  if (spec.kind == ModulusKind::AtInfinity && !(prev > spec.fn(spec.lower)))
    throw ParameterError(fmt::format("at-infinity modulus {} does not grow on the probe range",
                                     spec.label));
}

void validate_modulus(const ModulusSpec& spec) {
  std::vector<double> probes;
  if (spec.kind == ModulusKind::NearZero) {
    for (int k = 200; k >= 0; --k) probes.push_back(spec.upper * std::pow(10.0, -0.1 * k));
  } else {
    const double base = std::max(spec.lower, 1e-300);
    for (int k = 0; k <= 200; ++k) probes.push_back(base * std::pow(10.0, 0.1 * k));
  }
  validate_modulus(spec, probes);
}

EnvelopeSpec::EnvelopeSpec(std::function<double(double)> fn, int nodes, std::string label)
    : fn_(std::move(fn)), label_(std::move(label)) {
  if (!fn_) throw ParameterError("envelope has no function");
  if (nodes < 1) throw ParameterError("envelope quadrature needs at least one interval");
  double sum = 0.0;
  for (int k = 0; k <= nodes; ++k) {
    const double t = static_cast<double>(k) / nodes;
    const double v = fn_(t);
    if (!std::isfinite(v) || v < 0.0)
      throw ParameterError(fmt::format("envelope {} is negative or non-finite at t = {}", label_, t));
    const double w = (k == 0 || k == nodes) ? 0.5 : 1.0;
    sum += w * v * v;
  }
  witness_ = sum / nodes;
  if (!std::isfinite(witness_))
    throw ParameterError(fmt::format("envelope {} is not square integrable on the grid", label_));
}

EnvelopeSpec EnvelopeSpec::constant(double c) {
  return EnvelopeSpec([c](double) { return c; }, kDefaultNodes, fmt::format("{}", c));
}

}  // namespace ldp
