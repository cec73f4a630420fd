#include <edepth/geometry.hpp>

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <string>

namespace edepth {

namespace {

constexpr double kUnitNormTolerance = 1e-9;
constexpr double kRotationTolerance = 1e-9;

std::size_t locate(std::span<const double> points, double t) {
  // index k with points[k] <= t < points[k+1], clamped to the last interval
  auto it = std::upper_bound(points.begin(), points.end(), t);
  std::size_t k = it == points.begin() ? 0 : static_cast<std::size_t>(it - points.begin()) - 1;
  return std::min(k, points.size() - 2);
}

} // namespace

Grid::Grid(std::vector<double> points) : points_(std::move(points)) {
  if (points_.size() < 3)
    throw Error(ErrorCode::InvalidGrid, "grid needs at least 3 points, got " +
                                            std::to_string(points_.size()));
  if (points_.front() != 0.0 || points_.back() != 1.0)
    throw Error(ErrorCode::InvalidGrid, "grid must start at 0 and end at 1");
  for (std::size_t i = 1; i < points_.size(); ++i) {
    if (!(points_[i] > points_[i - 1]))
      throw Error(ErrorCode::InvalidGrid,
                  "grid must be strictly increasing (index " + std::to_string(i) + ")");
  }
}

Grid Grid::uniform(std::size_t size) {
  if (size < 3)
    throw Error(ErrorCode::InvalidGrid, "grid needs at least 3 points");
  std::vector<double> pts(size);
  const double step = 1.0 / static_cast<double>(size - 1);
  for (std::size_t i = 0; i < size; ++i)
    pts[i] = static_cast<double>(i) * step;
  pts.back() = 1.0;
  return Grid(std::move(pts));
}

bool Grid::is_uniform() const noexcept {
  const double step = 1.0 / static_cast<double>(points_.size() - 1);
  for (std::size_t i = 1; i < points_.size(); ++i) {
    if (std::abs((points_[i] - points_[i - 1]) - step) > 1e-9 * step)
      return false;
  }
  return true;
}

ManifoldTag ManifoldTag::rn(int dim) {
  if (dim < 2)
    throw Error(ErrorCode::InvalidArgument,
                "Rn dimension must be >= 2 (use the R1 tag for scalar data)");
  return ManifoldTag(Kind::Rn, dim);
}

const char* to_string(ManifoldTag::Kind kind) {
  switch (kind) {
  case ManifoldTag::Kind::R1: return "R1";
  case ManifoldTag::Kind::Rn: return "Rn";
  case ManifoldTag::Kind::S2: return "S2";
  }
  return "?";
}

Trajectory::Trajectory(Grid grid, Eigen::MatrixXd values, ManifoldTag tag)
    : grid_(std::move(grid)), values_(std::move(values)), tag_(tag) {
  if (values_.rows() != tag_.dim())
    throw Error(ErrorCode::DimensionMismatch,
                "trajectory values have " + std::to_string(values_.rows()) +
                    " rows but manifold dimension is " + std::to_string(tag_.dim()));
  if (static_cast<std::size_t>(values_.cols()) != grid_.size())
    throw Error(ErrorCode::DimensionMismatch,
                "trajectory has " + std::to_string(values_.cols()) + " samples for a grid of " +
                    std::to_string(grid_.size()));
  if (!values_.allFinite())
    throw Error(ErrorCode::InvalidArgument, "trajectory values must be finite");
  if (tag_.kind() == ManifoldTag::Kind::S2) {
    for (Eigen::Index i = 0; i < values_.cols(); ++i) {
      if (std::abs(values_.col(i).norm() - 1.0) > kUnitNormTolerance)
        throw Error(ErrorCode::InvalidArgument,
                    "S2 sample " + std::to_string(i) + " is not a unit vector");
    }
  }
}

Trajectory Trajectory::scalar(Grid grid, std::span<const double> values) {
  Eigen::MatrixXd m(1, static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i)
    m(0, static_cast<Eigen::Index>(i)) = values[i];
  return Trajectory(std::move(grid), std::move(m), ManifoldTag::r1());
}

Rotation::Rotation(Eigen::MatrixXd matrix) : matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() < 1)
    throw Error(ErrorCode::InvalidArgument, "rotation must be a square matrix");
  const Eigen::MatrixXd gram = matrix_.transpose() * matrix_;
  const auto n = matrix_.rows();
  if ((gram - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() > kRotationTolerance)
    throw Error(ErrorCode::InvalidArgument, "rotation matrix is not orthogonal");
  if (std::abs(matrix_.determinant() - 1.0) > kRotationTolerance)
    throw Error(ErrorCode::InvalidArgument, "rotation matrix must have determinant +1");
}

Rotation Rotation::identity(int dim) {
  return Rotation(Eigen::MatrixXd::Identity(dim, dim));
}

Rotation Rotation::planar(double radians) {
  Eigen::MatrixXd m(2, 2);
  m << std::cos(radians), -std::sin(radians), std::sin(radians), std::cos(radians);
  return Rotation(std::move(m));
}

double trapezoid(const Grid& grid, std::span<const double> integrand) {
  if (integrand.size() != grid.size())
    throw Error(ErrorCode::DimensionMismatch, "integrand length does not match grid");
  double acc = 0.0;
  for (std::size_t i = 1; i < grid.size(); ++i)
    acc += 0.5 * (grid[i] - grid[i - 1]) * (integrand[i] + integrand[i - 1]);
  return acc;
}

Eigen::Vector3d slerp(const Eigen::Vector3d& a, const Eigen::Vector3d& b, double s) {
  const double cosang = std::clamp(a.dot(b), -1.0, 1.0);
  const double angle = std::acos(cosang);
  Eigen::Vector3d out;
  if (angle < 1e-12) {
    out = (1.0 - s) * a + s * b;
  } else {
    const double sin_angle = std::sin(angle);
    out = (std::sin((1.0 - s) * angle) / sin_angle) * a + (std::sin(s * angle) / sin_angle) * b;
  }
  return out.normalized();
}

Eigen::VectorXd interpolate(const Trajectory& traj, double t) {
  const auto pts = traj.grid().points();
  t = std::clamp(t, 0.0, 1.0);
  const std::size_t k = locate(pts, t);
  const double s = (t - pts[k]) / (pts[k + 1] - pts[k]);
  const auto& v = traj.values();
  const auto ki = static_cast<Eigen::Index>(k);
  if (traj.tag().kind() == ManifoldTag::Kind::S2) {
    if (s == 0.0)
      return v.col(ki);
    return slerp(v.col(ki), v.col(ki + 1), s);
  }
  return (1.0 - s) * v.col(ki) + s * v.col(ki + 1);
}

Trajectory resample(const Trajectory& traj, const Grid& target) {
  if (target == traj.grid())
    return traj;
  Eigen::MatrixXd out(traj.dim(), static_cast<Eigen::Index>(target.size()));
  for (std::size_t i = 0; i < target.size(); ++i)
    out.col(static_cast<Eigen::Index>(i)) = interpolate(traj, target[i]);
  return Trajectory(target, std::move(out), traj.tag());
}

Eigen::MatrixXd gradient(const Trajectory& traj) {
  const auto& g = traj.grid();
  const auto& f = traj.values();
  const auto n = static_cast<Eigen::Index>(g.size());
  Eigen::MatrixXd d(f.rows(), n);

  // Three-point Lagrange derivative at x0 using nodes x0, x1, x2.
  auto three_point = [&](Eigen::Index at, Eigen::Index a, Eigen::Index b) {
    const double x0 = g[static_cast<std::size_t>(at)];
    const double x1 = g[static_cast<std::size_t>(a)];
    const double x2 = g[static_cast<std::size_t>(b)];
    const double w1 = (x0 - x2) / ((x1 - x0) * (x1 - x2));
    const double w2 = (x0 - x1) / ((x2 - x0) * (x2 - x1));
    // The weights sum to zero; differencing first keeps constant shifts exact.
    return Eigen::VectorXd(w1 * (f.col(a) - f.col(at)) + w2 * (f.col(b) - f.col(at)));
  };

  d.col(0) = three_point(0, 1, 2);
  for (Eigen::Index i = 1; i + 1 < n; ++i)
    d.col(i) = three_point(i, i - 1, i + 1);
  d.col(n - 1) = three_point(n - 1, n - 2, n - 3);

  if (traj.tag().kind() == ManifoldTag::Kind::S2) {
    for (Eigen::Index i = 0; i < n; ++i)
      d.col(i) -= d.col(i).dot(f.col(i)) * f.col(i);
  }
  return d;
}

double arc_length(const Trajectory& traj) {
  const Eigen::MatrixXd d = gradient(traj);
  std::vector<double> speed(traj.size());
  for (std::size_t i = 0; i < speed.size(); ++i)
    speed[i] = d.col(static_cast<Eigen::Index>(i)).norm();
  return trapezoid(traj.grid(), speed);
}

Trajectory normalize_length(const Trajectory& traj) {
  if (traj.tag().kind() != ManifoldTag::Kind::Rn)
    throw Error(ErrorCode::InvalidArgument, "normalize_length expects an Rn trajectory");
  const double len = arc_length(traj);
  if (!(len > 1e-12))
    throw Error(ErrorCode::ZeroLength, "cannot normalize a trajectory of zero length");
  return Trajectory(traj.grid(), traj.values() / len, traj.tag());
}

Eigen::Vector3d parallel_transport_s2(const Eigen::Vector3d& v, const Eigen::Vector3d& from,
                                      const Eigen::Vector3d& to) {
  const double scale = std::max(1.0, v.norm());
  if (std::abs(v.dot(from)) > 1e-8 * scale)
    throw Error(ErrorCode::NotTangent, "vector is not tangent at the source point");
  const Eigen::Vector3d sum = from + to;
  const double sum_sq = sum.squaredNorm();
  if (std::sqrt(sum_sq) < 1e-9)
    throw Error(ErrorCode::Antipodal, "parallel transport between antipodal points is undefined");
  return v - 2.0 * v.dot(to) * sum / sum_sq;
}

Trajectory apply_rotation(const Trajectory& traj, const Rotation& rotation) {
  if (rotation.dim() != traj.dim())
    throw Error(ErrorCode::DimensionMismatch, "rotation dimension " + std::to_string(rotation.dim()) +
                                                  " does not match trajectory dimension " +
                                                  std::to_string(traj.dim()));
  return Trajectory(traj.grid(), rotation.matrix() * traj.values(), traj.tag());
}

} // namespace edepth
