#pragma once

// Reference values computed independently of the library under test.

#include <cmath>
#include <numbers>

namespace oracle {

/// Standard normal CDF.
inline double Phi(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

/// P(sup_{t <= 1} |B_t| >= a) from the eigenfunction series of the exit
/// time of (-a, a).
inline double brownian_two_sided_exit(double a) {
  double stay = 0.0;
  for (int k = 0; k < 200; ++k) {
    const double j = 2.0 * k + 1.0;
    stay += (k % 2 == 0 ? 1.0 : -1.0) / j *
            std::exp(-j * j * std::numbers::pi * std::numbers::pi / (8.0 * a * a));
  }
  return 1.0 - 4.0 / std::numbers::pi * stay;
}

/// Barrier shift that turns discrete monitoring with step dt into the
/// continuous problem (Broadie-Glasserman-Kou continuity correction).
inline double monitoring_shift(double dt) { return 0.5826 * std::sqrt(dt); }

/// min (1/2) int_0^1 u^2 subject to x' = a x + u, x(0) = x0, x(1) = y.
/// Pontryagin gives u = p with p' = -a p; the shooting map p(0) -> x(1) is
/// affine, so two RK4 sweeps fix p(0) and a third integrates the cost.
inline double lq_terminal_rate(double a, double x0, double y, int steps = 20000) {
  auto sweep = [&](double p0, double& cost) {
    double x = x0, p = p0, J = 0.0;
    const double h = 1.0 / steps;
    auto fx = [&](double xx, double pp) { return a * xx + pp; };
    auto fp = [&](double pp) { return -a * pp; };
    for (int k = 0; k < steps; ++k) {
      const double k1x = fx(x, p), k1p = fp(p), k1j = 0.5 * p * p;
      const double p2 = p + 0.5 * h * k1p;
      const double k2x = fx(x + 0.5 * h * k1x, p2), k2p = fp(p2), k2j = 0.5 * p2 * p2;
      const double p3 = p + 0.5 * h * k2p;
      const double k3x = fx(x + 0.5 * h * k2x, p3), k3p = fp(p3), k3j = 0.5 * p3 * p3;
      const double p4 = p + h * k3p;
      const double k4x = fx(x + h * k3x, p4), k4p = fp(p4), k4j = 0.5 * p4 * p4;
      x += h / 6.0 * (k1x + 2 * k2x + 2 * k3x + k4x);
      p += h / 6.0 * (k1p + 2 * k2p + 2 * k3p + k4p);
      J += h / 6.0 * (k1j + 2 * k2j + 2 * k3j + k4j);
    }
    cost = J;
    return x;
  };
  double unused = 0.0;
  const double at0 = sweep(0.0, unused);
  const double at1 = sweep(1.0, unused);
  const double p0 = (y - at0) / (at1 - at0);
  double cost = 0.0;
  sweep(p0, cost);
  return cost;
}

}  // namespace oracle
