#pragma once

#include <edepth/geometry.hpp>

#include <Eigen/Core>

#include <optional>
#include <span>
#include <vector>

namespace edepth {

/// Discretized boundary-preserving warping of [0,1], piecewise linear between
/// grid nodes. Values start at 0, end at 1 and never decrease (ties up to
/// 1e-12 are tolerated).
class Warping {
public:
  Warping(Grid grid, std::vector<double> values);

  static Warping identity(const Grid& grid);

  const Grid& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const noexcept { return values_.size(); }

  /// Piecewise-linear evaluation at arbitrary t in [0,1].
  double operator()(double t) const;

  /// sup_t |gamma(t) - t| over the grid nodes.
  double sup_distance_from_identity() const;

private:
  Grid grid_;
  std::vector<double> values_;
};

enum class QKind { SRSF, SRVF, TSRVF };

/// Square-root representation of a trajectory, stored like Trajectory
/// (dim x grid.size()). TSRVF curves carry their reference point.
struct QCurve {
  Grid grid;
  Eigen::MatrixXd values;
  QKind kind;
  std::optional<Eigen::Vector3d> reference;

  int dim() const noexcept { return static_cast<int>(values.rows()); }
  std::size_t size() const noexcept { return grid.size(); }
};

/// Squared L2 norm int |q(t)|^2 dt (trapezoidal).
double squared_norm(const QCurve& q);

/// q = f' / sqrt|f'| with q = 0 wherever |f'| < 1e-12.
QCurve srsf(const Trajectory& traj);

/// Multivariate counterpart of srsf. The caller is expected to pass a
/// length-normalized trajectory; no scaling is done here.
QCurve srvf(const Trajectory& traj);

/// Transported square-root velocity field at reference point `reference`.
QCurve tsrvf(const Trajectory& traj, const Eigen::Vector3d& reference);

/// Normalized Euclidean mean of the starting points, used as the shared
/// TSRVF reference when the caller does not supply one.
Eigen::Vector3d default_reference_point(std::span<const Trajectory> sample);

/// (f o gamma)(t_i), evaluated on the trajectory's own grid.
Trajectory warp_apply(const Trajectory& traj, const Warping& gamma);

Warping warp_compose(const Warping& outer, const Warping& inner);
Warping warp_inverse(const Warping& gamma);

/// sqrt(gamma'(t)) at each node, using the same finite differences as
/// gradient(); negative one-sided estimates at the ends are clamped to 0.
std::vector<double> warping_srsf(const Warping& gamma);

/// int_0^1 sqrt(gamma'(t)) dt, exact for the piecewise-linear warping.
double warping_sqrt_slope_integral(const Warping& gamma);

} // namespace edepth
