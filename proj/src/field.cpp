#include "ldp/field.hpp"

#include <cmath>

#include "ldp/error.hpp"

namespace ldp {

CoefficientField::CoefficientField(std::string label, int d, int m, Kernel<double> drift,
                                   Kernel<double> diffusion, Kernel<Dual> drift_tangent,
                                   Kernel<Dual> diffusion_tangent, bool time_homogeneous)
    : label_(std::move(label)),
      d_(d),
      m_(m),
      drift_(std::move(drift)),
      diffusion_(std::move(diffusion)),
      drift_dual_(std::move(drift_tangent)),
      diffusion_dual_(std::move(diffusion_tangent)),
      time_homogeneous_(time_homogeneous) {
  if (d_ < 1 || m_ < 1) throw ParameterError("field dimensions must be positive");
  if (!drift_ || !diffusion_ || !drift_dual_ || !diffusion_dual_)
    throw ParameterError("field '" + label_ + "' is missing a kernel");
}

Vec CoefficientField::drift(double t, std::span<const double> x) const {
  Vec out(static_cast<std::size_t>(d_));
  drift_(t, x, out);
  return out;
}

Vec CoefficientField::diffusion(double t, std::span<const double> x) const {
  Vec out(static_cast<std::size_t>(d_ * m_));
  diffusion_(t, x, out);
  return out;
}

void CoefficientField::drift_jacobian(double t, std::span<const double> x,
                                      std::span<double> out) const {
  const auto d = static_cast<std::size_t>(d_);
  std::vector<Dual> xd(d), od(d);
  for (std::size_t k = 0; k < d; ++k) {
    for (std::size_t i = 0; i < d; ++i) xd[i] = Dual(x[i], i == k ? 1.0 : 0.0);
    drift_dual_(t, xd, od);
    for (std::size_t i = 0; i < d; ++i) out[i * d + k] = od[i].d;
  }
}

void CoefficientField::diffusion_jacobian(double t, std::span<const double> x,
                                          std::span<double> out) const {
  const auto d = static_cast<std::size_t>(d_);
  const auto dm = static_cast<std::size_t>(d_ * m_);
  std::vector<Dual> xd(d), od(dm);
  for (std::size_t k = 0; k < d; ++k) {
    for (std::size_t i = 0; i < d; ++i) xd[i] = Dual(x[i], i == k ? 1.0 : 0.0);
    diffusion_dual_(t, xd, od);
    for (std::size_t ij = 0; ij < dm; ++ij) out[ij * d + k] = od[ij].d;
  }
}

CoefficientField CoefficientField::with_global_bound(std::function<double(double)> bound) const {
  CoefficientField copy = *this;
  copy.bound_ = std::move(bound);
  return copy;
}

CoefficientField CoefficientField::with_nonsmooth_points(std::vector<Vec> points) const {
  for (const auto& p : points)
    if (p.size() != static_cast<std::size_t>(d_))
      throw ParameterError("non-smooth point has the wrong dimension");
  CoefficientField copy = *this;
  copy.nonsmooth_ = std::move(points);
  return copy;
}

CoefficientField CoefficientField::relabeled(std::string label) const {
  CoefficientField copy = *this;
  copy.label_ = std::move(label);
  return copy;
}

double norm(std::span<const double> x) { return std::sqrt(dot(x, x)); }

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    s += diff * diff;
  }
  return std::sqrt(s);
}

double frobenius(std::span<const double> a) { return norm(a); }

}  // namespace ldp
