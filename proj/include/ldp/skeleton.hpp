#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ldp/field.hpp"

namespace ldp {

/// Times closer than this are treated as the same grid node.
inline constexpr double kNodeMatchTolerance = 1e-12;

/// States with norm above this (or non-finite) raise DivergenceError.
inline constexpr double kBlowUpThreshold = 1e12;

/// Piecewise-linear control l: [0,1] -> R^m with l(0) = 0, stored by its
/// node values on a strictly increasing grid 0 = t_0 < ... < t_N = 1.
class ControlPath {
 public:
  /// values is row-major (N+1) x m.
  ControlPath(std::vector<double> grid, std::vector<double> values, int m);

  static ControlPath zero(int m, int intervals);
  /// Uniform grid with constant slope v on [0,1].
  static ControlPath straight_line(std::span<const double> v, int intervals);
  /// l(t_{k+1}) = l(t_k) + slopes_k * (t_{k+1} - t_k); slopes row-major N x m.
  static ControlPath from_slopes(std::vector<double> grid, std::span<const double> slopes, int m);
  static std::vector<double> uniform_grid(int intervals);

  int noise_dim() const noexcept { return m_; }
  std::size_t intervals() const noexcept { return grid_.size() - 1; }
  const std::vector<double>& grid() const noexcept { return grid_; }
  std::span<const double> value(std::size_t k) const {
    return {values_.data() + k * static_cast<std::size_t>(m_), static_cast<std::size_t>(m_)};
  }
  /// Constant derivative on interval k.
  Vec slope(std::size_t k) const;
  /// Piecewise-linear interpolation (exact node values at grid nodes).
  Vec at(double t) const;

  ControlPath scaled(double c) const;
  /// Inserts the midpoint of every interval (same piecewise-linear function).
  ControlPath refined() const;

 private:
  std::vector<double> grid_;
  std::vector<double> values_;
  int m_;
};

/// A trajectory x(t_k) in R^d on a strictly increasing grid in [0,1].
class SamplePath {
 public:
  SamplePath() = default;
  /// values is row-major (K+1) x d; values' first row is the start.
  SamplePath(std::vector<double> grid, std::vector<double> values, int d);

  int dim() const noexcept { return d_; }
  std::size_t size() const noexcept { return grid_.size(); }
  const std::vector<double>& grid() const noexcept { return grid_; }
  std::span<const double> state(std::size_t k) const {
    return {values_.data() + k * static_cast<std::size_t>(d_), static_cast<std::size_t>(d_)};
  }
  std::span<const double> start() const { return state(0); }
  std::span<const double> terminal() const { return state(size() - 1); }
  const std::vector<double>& values() const noexcept { return values_; }

  /// Index of the node at time t (within kNodeMatchTolerance), or npos.
  std::size_t find(double t) const;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  std::vector<double> grid_;
  std::vector<double> values_;
  int d_ = 0;
};

/// e(l) = sum_k |l(t_{k+1}) - l(t_k)|^2 / (t_{k+1} - t_k), the exact energy of
/// the piecewise-linear control.
double energy(const ControlPath& l);

/// Explicit Euler for x' = b(t,x) + sigma(t,x) u_k with `substeps` uniform
/// steps inside each control interval (u_k the slope of l there).
SamplePath integrate_skeleton(const CoefficientField& field, const ControlPath& l,
                              std::span<const double> x0, int substeps);

/// Euler polygon with the state frozen at the last coarse node i/n:
///   x(t) = x_i + b(t_i, x_i)(t - t_i) + sigma(t_i, x_i)(l(t) - l(t_i)),
/// reported on the union of the coarse grid and the control grid.
SamplePath integrate_skeleton_euler(const CoefficientField& field, const ControlPath& l,
                                    std::span<const double> x0, int n);

/// Sup over shared nodes of |F_n(l) - F(l)|, where F(l) is integrate_skeleton
/// with `reference_steps` total steps (at least 10 n), split evenly across the
/// control intervals.
double skeleton_gap(const CoefficientField& field, const ControlPath& l,
                    std::span<const double> x0, int n, int reference_steps);

/// Uniform coarse grid i/n, i = 0..n.
std::vector<double> uniform_nodes(int n);

namespace detail {
/// Euler recursion shared by the skeleton integrator and the rate solver:
/// slopes row-major N x m on `grid`, `substeps` steps per interval.
SamplePath euler_with_slopes(const CoefficientField& field, std::span<const double> grid,
                             std::span<const double> slopes, std::span<const double> x0,
                             int substeps);
void check_state(std::span<const double> x, double t, std::size_t index, const char* which);
}  // namespace detail

}  // namespace ldp
