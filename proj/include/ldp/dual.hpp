#pragma once

#include <cmath>

namespace ldp {

/// Forward-mode dual number carrying a value and one directional derivative.
///
/// Coefficient kernels are written as templates over the scalar type so the
/// same source yields both the field and its Jacobian columns.
struct Dual {
  double v = 0.0;
  double d = 0.0;

  constexpr Dual() = default;
  constexpr Dual(double value) : v(value) {}  // NOLINT(google-explicit-constructor)
  constexpr Dual(double value, double deriv) : v(value), d(deriv) {}

  Dual& operator+=(const Dual& o) { v += o.v; d += o.d; return *this; }
  Dual& operator-=(const Dual& o) { v -= o.v; d -= o.d; return *this; }
  Dual& operator*=(const Dual& o) { d = d * o.v + v * o.d; v *= o.v; return *this; }
  Dual& operator/=(const Dual& o) {
    d = (d * o.v - v * o.d) / (o.v * o.v);
    v /= o.v;
    return *this;
  }
};

inline Dual operator+(Dual a, const Dual& b) { return a += b; }
inline Dual operator-(Dual a, const Dual& b) { return a -= b; }
inline Dual operator*(Dual a, const Dual& b) { return a *= b; }
inline Dual operator/(Dual a, const Dual& b) { return a /= b; }
inline Dual operator-(const Dual& a) { return {-a.v, -a.d}; }
inline Dual operator+(const Dual& a) { return a; }

inline bool operator<(const Dual& a, const Dual& b) { return a.v < b.v; }
inline bool operator>(const Dual& a, const Dual& b) { return a.v > b.v; }
inline bool operator<=(const Dual& a, const Dual& b) { return a.v <= b.v; }
inline bool operator>=(const Dual& a, const Dual& b) { return a.v >= b.v; }

inline double value_of(double x) { return x; }

// Plain overloads so generic kernels written inside this namespace resolve
// to the same names for both scalar types.
inline double sqrt(double x) { return std::sqrt(x); }
inline double exp(double x) { return std::exp(x); }
inline double log(double x) { return std::log(x); }
inline double sin(double x) { return std::sin(x); }
inline double cos(double x) { return std::cos(x); }
inline double tanh(double x) { return std::tanh(x); }
inline double abs(double x) { return std::fabs(x); }
inline double pow(double x, double p) { return std::pow(x, p); }
inline double value_of(const Dual& x) { return x.v; }

inline Dual sqrt(const Dual& a) {
  const double s = std::sqrt(a.v);
  return {s, a.d / (2.0 * s)};
}
inline Dual exp(const Dual& a) {
  const double e = std::exp(a.v);
  return {e, e * a.d};
}
inline Dual log(const Dual& a) { return {std::log(a.v), a.d / a.v}; }
inline Dual sin(const Dual& a) { return {std::sin(a.v), std::cos(a.v) * a.d}; }
inline Dual cos(const Dual& a) { return {std::cos(a.v), -std::sin(a.v) * a.d}; }
inline Dual tanh(const Dual& a) {
  const double th = std::tanh(a.v);
  return {th, (1.0 - th * th) * a.d};
}
inline Dual abs(const Dual& a) {
  return a.v < 0.0 ? -a : a;
}
inline Dual pow(const Dual& a, double p) {
  if (p == 0.0) return {1.0, 0.0};
  const double vp = std::pow(a.v, p);
  if (a.d == 0.0) return {vp, 0.0};
  return {vp, p * std::pow(a.v, p - 1.0) * a.d};
}
inline Dual pow(const Dual& a, const Dual& b) {
  if (b.d == 0.0) return pow(a, b.v);
  const double vp = std::pow(a.v, b.v);
  double da = 0.0;
  if (a.d != 0.0) da = b.v * std::pow(a.v, b.v - 1.0) * a.d;
  return {vp, da + vp * std::log(a.v) * b.d};
}

/// sign(x) with sign(0) = 0; its derivative is zero away from the jump.
inline double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }
inline Dual sign(const Dual& a) { return {sign(a.v), 0.0}; }

}  // namespace ldp
