#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ldp/dual.hpp"

namespace ldp {

using Vec = std::vector<double>;

template <class T>
using Kernel = std::function<void(double, std::span<const T>, std::span<T>)>;

/// Drift b(t,x) in R^d and diffusion sigma(t,x) in R^{d x m} of a
/// small-noise SDE  dX = b(t,X) dt + sqrt(eps) sigma(t,X) dB.
///
/// Diffusion matrices are stored row-major: out[i*m + j] = sigma_ij.
/// Evaluation is pure; the dual-number kernels give directional derivatives
/// with respect to x and back the Jacobians used by the rate solver.
class CoefficientField {
 public:
  CoefficientField(std::string label, int d, int m, Kernel<double> drift,
                   Kernel<double> diffusion, Kernel<Dual> drift_tangent,
                   Kernel<Dual> diffusion_tangent, bool time_homogeneous);

  int dim() const noexcept { return d_; }
  int noise_dim() const noexcept { return m_; }
  const std::string& label() const noexcept { return label_; }
  bool time_homogeneous() const noexcept { return time_homogeneous_; }

  void drift(double t, std::span<const double> x, std::span<double> out) const {
    drift_(t, x, out);
  }
  void diffusion(double t, std::span<const double> x, std::span<double> out) const {
    diffusion_(t, x, out);
  }

  Vec drift(double t, std::span<const double> x) const;
  Vec diffusion(double t, std::span<const double> x) const;

  /// out[i*d + k] = d b_i / d x_k.
  void drift_jacobian(double t, std::span<const double> x, std::span<double> out) const;
  /// out[(i*m + j)*d + k] = d sigma_ij / d x_k.
  void diffusion_jacobian(double t, std::span<const double> x, std::span<double> out) const;

  const Kernel<Dual>& drift_tangent() const noexcept { return drift_dual_; }
  const Kernel<Dual>& diffusion_tangent() const noexcept { return diffusion_dual_; }

  /// Optional B(t) with |b(t,x)| and ||sigma(t,x)|| bounded by B(t) for
  /// every x. Present on truncated fields.
  const std::function<double(double)>& global_bound() const noexcept { return bound_; }
  CoefficientField with_global_bound(std::function<double(double)> bound) const;
  CoefficientField relabeled(std::string label) const;

  /// Points where the coefficients are not differentiable (e.g. the origin
  /// for |x|^r with r < 1). Derivative checks stay away from them.
  const std::vector<Vec>& nonsmooth_points() const noexcept { return nonsmooth_; }
  CoefficientField with_nonsmooth_points(std::vector<Vec> points) const;

 private:
  std::string label_;
  int d_;
  int m_;
  Kernel<double> drift_;
  Kernel<double> diffusion_;
  Kernel<Dual> drift_dual_;
  Kernel<Dual> diffusion_dual_;
  bool time_homogeneous_;
  std::function<double(double)> bound_;
  std::vector<Vec> nonsmooth_;
};

/// Builds a field from generic kernels callable as
/// `f(double t, std::span<const T> x, std::span<T> out)` for T in
/// {double, Dual}.
template <class DriftK, class DiffusionK>
CoefficientField make_field(std::string label, int d, int m, DriftK drift,
                            DiffusionK diffusion, bool time_homogeneous = true) {
  Kernel<double> b = [drift](double t, std::span<const double> x, std::span<double> o) {
    drift(t, x, o);
  };
  Kernel<double> s = [diffusion](double t, std::span<const double> x, std::span<double> o) {
    diffusion(t, x, o);
  };
  Kernel<Dual> bd = [drift](double t, std::span<const Dual> x, std::span<Dual> o) {
    drift(t, x, o);
  };
  Kernel<Dual> sd = [diffusion](double t, std::span<const Dual> x, std::span<Dual> o) {
    diffusion(t, x, o);
  };
  return CoefficientField(std::move(label), d, m, std::move(b), std::move(s),
                          std::move(bd), std::move(sd), time_homogeneous);
}

double norm(std::span<const double> x);
double dot(std::span<const double> a, std::span<const double> b);
double distance(std::span<const double> a, std::span<const double> b);
/// Frobenius norm.
double frobenius(std::span<const double> a);

}  // namespace ldp
