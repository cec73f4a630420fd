#include <edepth/transform.hpp>

#include <algorithm>
#include <cmath>
#include <string>

namespace edepth {

namespace {

constexpr double kMonotoneSlack = 1e-12;
constexpr double kZeroGradient = 1e-12;

double interp_linear(std::span<const double> xs, std::span<const double> ys, double x) {
  if (x <= xs.front())
    return ys.front();
  if (x >= xs.back())
    return ys.back();
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  const auto k = static_cast<std::size_t>(it - xs.begin()) - 1;
  const double s = (x - xs[k]) / (xs[k + 1] - xs[k]);
  return (1.0 - s) * ys[k] + s * ys[k + 1];
}

QCurve square_root_field(const Trajectory& traj, QKind kind) {
  const Eigen::MatrixXd d = gradient(traj);
  Eigen::MatrixXd q(d.rows(), d.cols());
  for (Eigen::Index i = 0; i < d.cols(); ++i) {
    const double speed = d.col(i).norm();
    if (speed < kZeroGradient)
      q.col(i).setZero();
    else
      q.col(i) = d.col(i) / std::sqrt(speed);
  }
  return QCurve{traj.grid(), std::move(q), kind, std::nullopt};
}

} // namespace

Warping::Warping(Grid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.size())
    throw Error(ErrorCode::DimensionMismatch, "warping length does not match its grid");
  if (std::abs(values_.front()) > kMonotoneSlack || std::abs(values_.back() - 1.0) > kMonotoneSlack)
    throw Error(ErrorCode::InvalidArgument, "warping must satisfy gamma(0)=0 and gamma(1)=1");
  values_.front() = 0.0;
  values_.back() = 1.0;
  for (std::size_t i = 1; i < values_.size(); ++i) {
    if (values_[i] < values_[i - 1] - kMonotoneSlack)
      throw Error(ErrorCode::InvalidArgument,
                  "warping decreases at index " + std::to_string(i));
    values_[i] = std::clamp(values_[i], values_[i - 1], 1.0);
  }
}

Warping Warping::identity(const Grid& grid) {
  return Warping(grid, std::vector<double>(grid.points().begin(), grid.points().end()));
}

double Warping::operator()(double t) const {
  return interp_linear(grid_.points(), values_, t);
}

double Warping::sup_distance_from_identity() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i)
    worst = std::max(worst, std::abs(values_[i] - grid_[i]));
  return worst;
}

double squared_norm(const QCurve& q) {
  std::vector<double> sq(q.size());
  for (std::size_t i = 0; i < sq.size(); ++i)
    sq[i] = q.values.col(static_cast<Eigen::Index>(i)).squaredNorm();
  return trapezoid(q.grid, sq);
}

QCurve srsf(const Trajectory& traj) {
  if (traj.tag().kind() != ManifoldTag::Kind::R1)
    throw Error(ErrorCode::InvalidArgument, "srsf expects an R1 trajectory");
  return square_root_field(traj, QKind::SRSF);
}

QCurve srvf(const Trajectory& traj) {
  if (traj.tag().kind() != ManifoldTag::Kind::Rn)
    throw Error(ErrorCode::InvalidArgument, "srvf expects an Rn trajectory");
  return square_root_field(traj, QKind::SRVF);
}

QCurve tsrvf(const Trajectory& traj, const Eigen::Vector3d& reference) {
  if (traj.tag().kind() != ManifoldTag::Kind::S2)
    throw Error(ErrorCode::InvalidArgument, "tsrvf expects an S2 trajectory");
  if (std::abs(reference.norm() - 1.0) > 1e-9)
    throw Error(ErrorCode::InvalidArgument, "TSRVF reference point must be a unit vector");
  const Eigen::MatrixXd d = gradient(traj);
  const auto& f = traj.values();
  Eigen::MatrixXd h(3, d.cols());
  for (Eigen::Index i = 0; i < d.cols(); ++i) {
    const Eigen::Vector3d p = f.col(i);
    if ((p + reference).norm() < 1e-9)
      throw Error(ErrorCode::Antipodal,
                  "trajectory sample " + std::to_string(i) + " is antipodal to the reference point");
    const double speed = d.col(i).norm();
    if (speed < kZeroGradient) {
      h.col(i).setZero();
      continue;
    }
    h.col(i) = parallel_transport_s2(d.col(i), p, reference) / std::sqrt(speed);
  }
  return QCurve{traj.grid(), std::move(h), QKind::TSRVF, reference};
}

Eigen::Vector3d default_reference_point(std::span<const Trajectory> sample) {
  Eigen::Vector3d acc = Eigen::Vector3d::Zero();
  for (const auto& traj : sample) {
    if (traj.tag().kind() != ManifoldTag::Kind::S2)
      throw Error(ErrorCode::InvalidArgument, "reference point requires S2 trajectories");
    acc += traj.values().col(0);
  }
  if (acc.norm() < 1e-12)
    throw Error(ErrorCode::InvalidArgument,
                "starting points average to the origin; supply a reference point");
  return acc.normalized();
}

Trajectory warp_apply(const Trajectory& traj, const Warping& gamma) {
  Eigen::MatrixXd out(traj.dim(), static_cast<Eigen::Index>(traj.size()));
  for (std::size_t i = 0; i < traj.size(); ++i)
    out.col(static_cast<Eigen::Index>(i)) = interpolate(traj, gamma(traj.grid()[i]));
  return Trajectory(traj.grid(), std::move(out), traj.tag());
}

Warping warp_compose(const Warping& outer, const Warping& inner) {
  std::vector<double> out(inner.size());
  for (std::size_t i = 0; i < inner.size(); ++i)
    out[i] = outer(inner[i]);
  return Warping(inner.grid(), std::move(out));
}

Warping warp_inverse(const Warping& gamma) {
  const auto xs = gamma.values();
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (xs[i] - xs[i - 1] <= kMonotoneSlack)
      throw Error(ErrorCode::NotInvertible, "warping is flat near t=" +
                                                std::to_string(gamma.grid()[i]) +
                                                " and cannot be inverted");
  }
  const auto ts = gamma.grid().points();
  std::vector<double> out(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i)
    out[i] = interp_linear(xs, ts, ts[i]);
  return Warping(gamma.grid(), std::move(out));
}

std::vector<double> warping_srsf(const Warping& gamma) {
  const Trajectory as_curve = Trajectory::scalar(gamma.grid(), gamma.values());
  const Eigen::MatrixXd d = gradient(as_curve);
  std::vector<double> out(gamma.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = std::sqrt(std::max(0.0, d(0, static_cast<Eigen::Index>(i))));
  return out;
}

double warping_sqrt_slope_integral(const Warping& gamma) {
  const auto& g = gamma.grid();
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < g.size(); ++i)
    acc += std::sqrt((gamma[i + 1] - gamma[i]) * (g[i + 1] - g[i]));
  return acc;
}

} // namespace edepth
