#pragma once

#include <edepth/geometry.hpp>
#include <edepth/transform.hpp>

#include <Eigen/Core>

#include <optional>
#include <span>
#include <vector>

namespace edepth {

/// One admissible lattice move of the registration DP: advance `di` nodes in
/// the first curve's time and `dj` nodes in the warped time.
struct LatticeStep {
  int di;
  int dj;
  bool operator==(const LatticeStep&) const = default;
};

struct LatticePoint {
  int i;
  int j;
  bool operator==(const LatticePoint&) const = default;
};

/// Coprime moves with 1 <= di, dj <= 6; local slopes are bounded in [1/6, 6].
std::span<const LatticeStep> default_stencil();

struct AlignmentResult {
  Warping warping;
  std::optional<Rotation> rotation;
  /// int |q1(t) - O q2(gamma(t)) sqrt(gamma'(t))|^2 dt at the optimum.
  double residual_cost = 0.0;
  /// Lattice vertices of the optimal path, (0,0) to (N-1,N-1).
  std::vector<LatticePoint> path;
  /// Objective after every alternation round (Rn only; one entry otherwise).
  std::vector<double> objective_history;
  bool rotation_degenerate = false;
};

/// Dynamic-programming registration of q2 onto q1 over piecewise-linear
/// warpings whose segments follow `stencil`. Both curves must share one
/// uniform grid.
AlignmentResult optimal_warping(const QCurve& q1, const QCurve& q2,
                                std::span<const LatticeStep> stencil = default_stencil());

/// Cost of a single lattice segment (k,l) -> (i,j), the quantity the DP sums.
double lattice_segment_cost(const QCurve& q1, const QCurve& q2, LatticePoint from,
                            LatticePoint to);

/// Warping realized by a lattice path on `grid`.
Warping warping_from_path(const Grid& grid, std::span<const LatticePoint> path);

/// int |q1 - (q2, gamma)|^2 for an arbitrary piecewise-linear warping, where
/// (q2, gamma)(t) = q2(gamma(t)) sqrt(gamma'(t)). Evaluated interval by
/// interval with the trapezoidal rule; independent of the DP code path.
double warped_cost(const QCurve& q1, const QCurve& q2, const Warping& gamma);

/// int <q1(t), (q2, gamma)(t)> dt with the same discretization as warped_cost.
double warped_inner_product(const QCurve& q1, const QCurve& q2, const Warping& gamma);

/// int q1(t) (q2, gamma)(t)^T dt, the cross-covariance the rotation fit uses.
Eigen::MatrixXd warped_cross_covariance(const QCurve& q1, const QCurve& q2, const Warping& gamma);

struct RotationFit {
  Rotation rotation;
  bool degenerate = false;
};

/// Kabsch: the O in SO(n) maximizing trace(O A^T) for cross-covariance A.
/// A near-zero A, or one with two or more vanishing singular values, has no
/// unique optimum; identity is returned with `degenerate` set.
RotationFit rotation_from_cross_covariance(const Eigen::MatrixXd& cross);

/// argmax over SO(n) of int <q1(t), O q2(t)> dt.
RotationFit optimal_rotation(const QCurve& q1, const QCurve& q2);

QCurve rotate(const QCurve& q, const Rotation& rotation);

struct AlignOptions {
  /// Shared TSRVF reference point for S2 data.
  std::optional<Eigen::Vector3d> reference;
  int max_rounds = 20;
  double relative_tolerance = 1e-8;
};

/// Joint registration in square-root space. R1/S2: one DP. Rn: alternates
/// rotation and warping from the identity until the objective stalls.
AlignmentResult align_q(const QCurve& q1, const QCurve& q2, const AlignOptions& options = {});

/// Transforms both trajectories (normalizing Rn lengths first) and calls
/// align_q.
AlignmentResult align_pair(const Trajectory& f, const Trajectory& g,
                           const AlignOptions& options = {});

} // namespace edepth
