#pragma once

#include <edepth/alignment.hpp>
#include <edepth/geometry.hpp>
#include <edepth/random.hpp>
#include <edepth/transform.hpp>

#include <Eigen/Core>
#include <Eigen/LU>
#include <Eigen/QR>

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <vector>

namespace edepth::test {

inline constexpr double pi = std::numbers::pi;

inline Trajectory scalar_curve(const Grid& grid, const std::function<double(double)>& f) {
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    v[i] = f(grid[i]);
  return Trajectory::scalar(grid, v);
}

inline Trajectory scalar_curve(std::size_t n, const std::function<double(double)>& f) {
  return scalar_curve(Grid::uniform(n), f);
}

inline Trajectory vector_curve(const Grid& grid, int dim,
                               const std::function<Eigen::VectorXd(double)>& f) {
  Eigen::MatrixXd v(dim, static_cast<Eigen::Index>(grid.size()));
  for (std::size_t i = 0; i < grid.size(); ++i)
    v.col(static_cast<Eigen::Index>(i)) = f(grid[i]);
  return Trajectory(grid, v, dim == 1 ? ManifoldTag::r1() : ManifoldTag::rn(dim));
}

inline Trajectory sphere_curve(const Grid& grid,
                               const std::function<Eigen::Vector3d(double)>& f) {
  Eigen::MatrixXd v(3, static_cast<Eigen::Index>(grid.size()));
  for (std::size_t i = 0; i < grid.size(); ++i)
    v.col(static_cast<Eigen::Index>(i)) = f(grid[i]).normalized();
  return Trajectory(grid, v, ManifoldTag::s2());
}

inline Warping warping_from(const Grid& grid, const std::function<double(double)>& g) {
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    v[i] = g(grid[i]);
  v.front() = 0.0;
  v.back() = 1.0;
  return Warping(grid, v);
}

// Generators for property tests.

/// Random smooth scalar function: a few low harmonics plus a linear trend.
inline std::function<double(double)> random_smooth(Rng& rng, int harmonics = 3) {
  std::vector<double> a(static_cast<std::size_t>(harmonics)), b(a.size());
  for (std::size_t h = 0; h < a.size(); ++h) {
    a[h] = rng.normal() / static_cast<double>(h + 1);
    b[h] = rng.normal() / static_cast<double>(h + 1);
  }
  const double slope = rng.normal();
  const double offset = rng.normal();
  return [=](double t) {
    double s = offset + slope * t;
    for (std::size_t h = 0; h < a.size(); ++h) {
      const double w = 2.0 * pi * static_cast<double>(h + 1);
      s += a[h] * std::sin(w * t) + b[h] * std::cos(w * t);
    }
    return s;
  };
}

inline Eigen::Vector3d random_unit(Rng& rng) {
  Eigen::Vector3d v(rng.normal(), rng.normal(), rng.normal());
  return v.normalized();
}

/// Haar-ish random element of SO(n) from the QR of a Gaussian matrix.
inline Eigen::MatrixXd random_rotation(Rng& rng, int n) {
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      a(i, j) = rng.normal();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  Eigen::MatrixXd q = qr.householderQ();
  if (q.determinant() < 0)
    q.col(0) = -q.col(0);
  return q;
}

/// Smooth strictly increasing warping: gamma(t) = t + sum c_h sin(h pi t) / (h pi)
/// with sum |c_h| < 1 so the slope stays positive.
inline std::function<double(double)> random_diffeo(Rng& rng, double strength = 0.6) {
  double c[3];
  double total = 0.0;
  for (double& x : c) {
    x = rng.uniform(-1.0, 1.0);
    total += std::abs(x);
  }
  for (double& x : c)
    x *= strength / total;
  return [=](double t) {
    double s = t;
    for (int h = 1; h <= 3; ++h)
      s += c[h - 1] * std::sin(h * pi * t) / (h * pi);
    return s;
  };
}

/// Gaussian white-noise square-root curve.
inline QCurve random_q(Rng& rng, std::size_t n, int dim) {
  Eigen::MatrixXd v(dim, static_cast<Eigen::Index>(n));
  for (Eigen::Index c = 0; c < v.cols(); ++c)
    for (Eigen::Index r = 0; r < dim; ++r)
      v(r, c) = rng.normal();
  return QCurve{Grid::uniform(n), v, dim == 1 ? QKind::SRSF : QKind::SRVF, std::nullopt};
}

struct Enumerated {
  double best = std::numeric_limits<double>::infinity();
  double runner_up = std::numeric_limits<double>::infinity();
  std::vector<LatticePoint> path;
};

// Visits every stencil path from (0,0) to (n-1,n-1) and scores the realized
// warping with the interval-wise warped_cost, not with the DP kernel.
inline Enumerated enumerate_paths(const QCurve& q1, const QCurve& q2) {
  const int n = static_cast<int>(q1.size());
  Enumerated out;
  std::vector<LatticePoint> path{{0, 0}};
  std::function<void()> walk = [&] {
    const auto p = path.back();
    if (p.i == n - 1 && p.j == n - 1) {
      const double c = warped_cost(q1, q2, warping_from_path(q1.grid, path));
      if (c < out.best) {
        out.runner_up = out.best;
        out.best = c;
        out.path = path;
      } else if (c < out.runner_up) {
        out.runner_up = c;
      }
      return;
    }
    for (const auto& s : default_stencil()) {
      if (p.i + s.di > n - 1 || p.j + s.dj > n - 1)
        continue;
      path.push_back({p.i + s.di, p.j + s.dj});
      walk();
      path.pop_back();
    }
  };
  walk();
  return out;
}

} // namespace edepth::test
