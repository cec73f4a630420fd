#pragma once

#include <edepth/error.hpp>

#include <Eigen/Core>

#include <cstddef>
#include <span>
#include <vector>

namespace edepth {

/// Ordered sample locations on [0, 1]: strictly increasing, 0 first, 1 last,
/// at least three points.
class Grid {
public:
  explicit Grid(std::vector<double> points);

  static Grid uniform(std::size_t size);

  std::size_t size() const noexcept { return points_.size(); }
  double operator[](std::size_t i) const { return points_[i]; }
  std::span<const double> points() const noexcept { return points_; }

  /// True when spacing is constant to within 1e-9 (relative to the step).
  bool is_uniform() const noexcept;

  bool operator==(const Grid&) const = default;

private:
  std::vector<double> points_;
};

class ManifoldTag {
public:
  enum class Kind { R1, Rn, S2 };

  static ManifoldTag r1() { return ManifoldTag(Kind::R1, 1); }
  static ManifoldTag rn(int dim);
  static ManifoldTag s2() { return ManifoldTag(Kind::S2, 3); }

  Kind kind() const noexcept { return kind_; }
  /// Ambient dimension of a single sample: 1, n, or 3.
  int dim() const noexcept { return dim_; }

  bool operator==(const ManifoldTag&) const = default;

private:
  ManifoldTag(Kind kind, int dim) : kind_(kind), dim_(dim) {}

  Kind kind_;
  int dim_;
};

const char* to_string(ManifoldTag::Kind kind);

/// A sampled function on [0,1]. Values are stored column-per-node
/// (dim x grid.size()), so `values.col(i)` is the point at grid[i].
class Trajectory {
public:
  Trajectory(Grid grid, Eigen::MatrixXd values, ManifoldTag tag);

  /// Convenience for R1 data.
  static Trajectory scalar(Grid grid, std::span<const double> values);

  const Grid& grid() const noexcept { return grid_; }
  const Eigen::MatrixXd& values() const noexcept { return values_; }
  const ManifoldTag& tag() const noexcept { return tag_; }
  int dim() const noexcept { return tag_.dim(); }
  std::size_t size() const noexcept { return grid_.size(); }

  Eigen::VectorXd point(std::size_t i) const { return values_.col(static_cast<Eigen::Index>(i)); }

private:
  Grid grid_;
  Eigen::MatrixXd values_;
  ManifoldTag tag_;
};

/// Element of SO(n).
class Rotation {
public:
  explicit Rotation(Eigen::MatrixXd matrix);

  static Rotation identity(int dim);
  /// Planar rotation by `radians` (counter-clockwise).
  static Rotation planar(double radians);

  const Eigen::MatrixXd& matrix() const noexcept { return matrix_; }
  int dim() const noexcept { return static_cast<int>(matrix_.rows()); }
  Rotation transpose() const { return Rotation(matrix_.transpose()); }

private:
  Eigen::MatrixXd matrix_;
};

// Trapezoidal rule of `integrand` sampled on `grid`.
double trapezoid(const Grid& grid, std::span<const double> integrand);

/// Value of the trajectory at an arbitrary t in [0,1]: piecewise linear for
/// R1/Rn, slerp between neighbouring nodes for S2.
Eigen::VectorXd interpolate(const Trajectory& traj, double t);

Trajectory resample(const Trajectory& traj, const Grid& target);

/// Second-order finite differences (central inside, one-sided three-point at
/// the ends). On S2 each difference quotient is projected onto the tangent
/// plane of its base point.
Eigen::MatrixXd gradient(const Trajectory& traj);

/// Scales an Rn trajectory to unit arc length, int_0^1 |f'(t)| dt = 1.
Trajectory normalize_length(const Trajectory& traj);

/// Arc length int_0^1 |f'(t)| dt under the library's gradient and quadrature.
double arc_length(const Trajectory& traj);

/// Parallel transport of tangent vector `v` at `from` to the tangent space at
/// `to` along the minor great-circle arc.
Eigen::Vector3d parallel_transport_s2(const Eigen::Vector3d& v,
                                      const Eigen::Vector3d& from,
                                      const Eigen::Vector3d& to);

Trajectory apply_rotation(const Trajectory& traj, const Rotation& rotation);

/// Great-circle interpolation between unit vectors a and b, s in [0,1].
Eigen::Vector3d slerp(const Eigen::Vector3d& a, const Eigen::Vector3d& b, double s);

} // namespace edepth
