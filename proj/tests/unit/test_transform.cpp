#include "support.hpp"

#include <edepth/transform.hpp>

#include <doctest.h>

#include <cmath>

using namespace edepth;
using edepth::test::pi;

TEST_CASE("warping validation") {
  const Grid g = Grid::uniform(4);
  CHECK_THROWS_AS(Warping(g, {0.0, 0.5, 1.0}), Error);
  CHECK_THROWS_AS(Warping(g, {0.1, 0.4, 0.6, 1.0}), Error);
  CHECK_THROWS_AS(Warping(g, {0.0, 0.6, 0.4, 1.0}), Error);
  CHECK_NOTHROW(Warping(g, {0.0, 0.5, 0.5 - 1e-13, 1.0}));
  const Warping id = Warping::identity(g);
  CHECK(id.sup_distance_from_identity() == 0.0);
  CHECK(id(0.37) == doctest::Approx(0.37));
}

TEST_CASE("SRSF of t^2 is sqrt(2t)") {
  // The three-point differences are exact on quadratics, so only rounding remains.
  const auto f = test::scalar_curve(201, [](double t) { return t * t; });
  const QCurve q = srsf(f);
  CHECK(q.kind == QKind::SRSF);
  for (std::size_t i = 0; i < q.size(); ++i)
    CHECK(q.values(0, static_cast<Eigen::Index>(i)) ==
          doctest::Approx(std::sqrt(2.0 * q.grid[i])).epsilon(1e-10));
}

TEST_CASE("SRSF of a decreasing function is negative and vanishes on flats") {
  const auto f = test::scalar_curve(21, [](double t) { return -4.0 * t; });
  const QCurve q = srsf(f);
  for (std::size_t i = 0; i < q.size(); ++i)
    CHECK(q.values(0, static_cast<Eigen::Index>(i)) == doctest::Approx(-2.0));
  const QCurve z = srsf(test::scalar_curve(21, [](double) { return 3.0; }));
  CHECK(z.values.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("SRSF norm is the total variation") {
  // |q|^2 = |f'|, so int |q|^2 = int |f'|.
  const auto f = test::scalar_curve(401, [](double t) { return std::sin(2 * pi * t); });
  CHECK(squared_norm(srsf(f)) == doctest::Approx(4.0).epsilon(2e-3));
}

TEST_CASE("SRVF of a unit-speed curve has unit norm everywhere") {
  const auto f = normalize_length(test::vector_curve(Grid::uniform(101), 2, [](double t) {
    return Eigen::Vector2d(std::cos(pi * t), std::sin(pi * t));
  }));
  const QCurve q = srvf(f);
  for (std::size_t i = 0; i < q.size(); ++i)
    CHECK(q.values.col(static_cast<Eigen::Index>(i)).norm() == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(squared_norm(q) == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("TSRVF of a constant-speed geodesic from the reference") {
  // Geodesic along the equator with speed 0.8 radians per unit time: every
  // transported velocity is the same vector of length 0.8.
  const Grid g = Grid::uniform(81);
  const auto f = test::sphere_curve(g, [](double t) {
    return Eigen::Vector3d(std::cos(0.8 * t), std::sin(0.8 * t), 0.0);
  });
  const Eigen::Vector3d ref(1, 0, 0);
  const QCurve q = tsrvf(f, ref);
  REQUIRE(q.reference);
  for (std::size_t i = 0; i < q.size(); ++i) {
    const Eigen::Vector3d v = q.values.col(static_cast<Eigen::Index>(i));
    CHECK(std::abs(v.dot(ref)) < 1e-9);
    CHECK(v(1) == doctest::Approx(std::sqrt(0.8)).epsilon(1e-3));
  }
  CHECK_THROWS_AS(tsrvf(f, Eigen::Vector3d(0, 0, 2)), Error);
  CHECK_THROWS_AS(tsrvf(f, Eigen::Vector3d(-1, 0, 0)), Error);
}

TEST_CASE("TSRVF vectors are tangent at the reference") {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Vector3d a = test::random_unit(rng), b = test::random_unit(rng);
    const auto f = test::sphere_curve(Grid::uniform(30), [&](double t) {
      return Eigen::Vector3d((1 - t) * a + t * b + 0.3 * std::sin(5 * t) * Eigen::Vector3d::UnitZ());
    });
    Eigen::Vector3d ref = (a + b).normalized();
    if (!std::isfinite(ref.norm()) || ref.norm() < 0.5)
      continue;
    bool antipodal = false;
    for (std::size_t i = 0; i < f.size(); ++i)
      antipodal |= f.point(i).dot(ref) < -0.99;
    if (antipodal)
      continue;
    const QCurve q = tsrvf(f, ref);
    for (std::size_t i = 0; i < q.size(); ++i)
      CHECK(std::abs(q.values.col(static_cast<Eigen::Index>(i)).dot(ref)) < 1e-9);
  }
}

TEST_CASE("default reference point") {
  const Grid g = Grid::uniform(3);
  std::vector<Trajectory> sample;
  sample.push_back(test::sphere_curve(g, [](double t) { return Eigen::Vector3d(1, t, 0); }));
  sample.push_back(test::sphere_curve(g, [](double t) { return Eigen::Vector3d(0, 1, t); }));
  const Eigen::Vector3d r = default_reference_point(sample);
  CHECK((r - Eigen::Vector3d(1, 1, 0).normalized()).norm() < 1e-14);
}

TEST_CASE("inverse of t^2 is sqrt(t)") {
  const Grid g = Grid::uniform(201);
  const Warping sq = test::warping_from(g, [](double t) { return t * t; });
  const Warping inv = warp_inverse(sq);
  double worst = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    worst = std::max(worst, std::abs(inv[i] - std::sqrt(g[i])));
  // Linear interpolation of t^2 near 0 limits the accuracy to about sqrt(h)/2.
  CHECK(worst < 0.04);
  double interior = 0.0;
  for (std::size_t i = 20; i < g.size(); ++i)
    interior = std::max(interior, std::abs(inv[i] - std::sqrt(g[i])));
  CHECK(interior < 1e-4);

  const Warping round = warp_compose(sq, inv);
  for (std::size_t i = 0; i < g.size(); ++i)
    CHECK(round[i] == doctest::Approx(g[i]).epsilon(1e-9));

  CHECK_THROWS_AS(warp_inverse(Warping(Grid::uniform(5), {0.0, 0.5, 0.5, 0.5, 1.0})), Error);
}

TEST_CASE("warp_apply composes exactly on piecewise-linear data") {
  const Grid g = Grid::uniform(11);
  const auto f = test::scalar_curve(g, [](double t) { return 2.0 * t + 1.0; });
  const Warping w = test::warping_from(g, [](double t) { return t * t; });
  const auto fw = warp_apply(f, w);
  for (std::size_t i = 0; i < g.size(); ++i)
    CHECK(fw.values()(0, static_cast<Eigen::Index>(i)) == doctest::Approx(2.0 * w[i] + 1.0));
}

TEST_CASE("composition is associative and has the identity as unit") {
  Rng rng(21);
  const Grid g = Grid::uniform(61);
  for (int trial = 0; trial < 20; ++trial) {
    const Warping a = test::warping_from(g, test::random_diffeo(rng));
    const Warping b = test::warping_from(g, test::random_diffeo(rng));
    const Warping c = test::warping_from(g, test::random_diffeo(rng));
    const Warping left = warp_compose(warp_compose(a, b), c);
    const Warping right = warp_compose(a, warp_compose(b, c));
    const Warping unit = warp_compose(a, Warping::identity(g));
    // Each composition re-interpolates linearly, so the two bracketings agree
    // only up to the interpolation error h^2 |gamma''| / 8.
    for (std::size_t i = 0; i < g.size(); ++i) {
      CHECK(std::abs(left[i] - right[i]) < 2e-3);
      CHECK(unit[i] == doctest::Approx(a[i]).epsilon(1e-15));
    }
  }
}

TEST_CASE("square-root slope of warpings") {
  const Grid g = Grid::uniform(201);
  const Warping sq = test::warping_from(g, [](double t) { return t * t; });
  const auto s = warping_srsf(sq);
  for (std::size_t i = 1; i < g.size(); ++i)
    CHECK(s[i] == doctest::Approx(std::sqrt(2.0 * g[i])).epsilon(1e-9));
  // Exact piecewise-linear integral; the continuous value is 2 sqrt2 / 3.
  CHECK(warping_sqrt_slope_integral(sq) == doctest::Approx(2.0 * std::sqrt(2.0) / 3.0).epsilon(1e-3));
  CHECK(warping_sqrt_slope_integral(Warping::identity(g)) == doctest::Approx(1.0).epsilon(1e-15));
}
