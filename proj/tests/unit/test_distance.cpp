#include "support.hpp"

#include <edepth/distance.hpp>

#include <doctest.h>

#include <cmath>

using namespace edepth;
using edepth::test::pi;

TEST_CASE("amplitude distance between t and 2t") {
  // q1 = 1, q2 = sqrt2; int sqrt(gamma') <= 1 makes the identity optimal.
  for (std::size_t n : {11, 30, 201}) {
    const auto f = test::scalar_curve(n, [](double t) { return t; });
    const auto g = test::scalar_curve(n, [](double t) { return 2 * t; });
    const ElasticDistances d = amplitude_distance_r1(f, g);
    CHECK(d.amplitude == doctest::Approx(std::sqrt(2.0) - 1.0).epsilon(1e-12));
    CHECK(d.phase == doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("phase distance of t^2") {
  const Grid g = Grid::uniform(201);
  const Warping sq = test::warping_from(g, [](double t) { return t * t; });
  CHECK(std::abs(phase_distance(sq) - std::acos(2.0 * std::sqrt(2.0) / 3.0)) < 1e-3);
  CHECK(phase_distance(Warping::identity(g)) == 0.0);
}

TEST_CASE("phase distance stays in [0, pi/2]") {
  Rng rng(17);
  const Grid g = Grid::uniform(50);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> v(g.size());
    for (auto& x : v)
      x = rng.uniform();
    std::sort(v.begin(), v.end());
    v.front() = 0.0;
    v.back() = 1.0;
    const double d = phase_distance(Warping(g, v));
    CHECK(d >= 0.0);
    CHECK(d <= pi / 2);
  }
  // A single jump: gamma = 0 until the last interval, then 1.
  std::vector<double> step(g.size(), 0.0);
  step.back() = 1.0;
  CHECK(phase_distance(Warping(g, step)) == doctest::Approx(std::acos(std::sqrt(1.0 / 49.0))));
}

TEST_CASE("self distances vanish") {
  Rng rng(3);
  const Grid g = Grid::uniform(30);
  for (int trial = 0; trial < 10; ++trial) {
    const auto f = test::scalar_curve(g, test::random_smooth(rng));
    CHECK(amplitude_distance_r1(f, f).amplitude < 1e-6);
    auto fx = test::random_smooth(rng), fy = test::random_smooth(rng), fz = test::random_smooth(rng);
    const auto c = test::vector_curve(g, 3, [&](double t) { return Eigen::Vector3d(fx(t), fy(t), fz(t)); });
    CHECK(amplitude_distance_rn(c, c).amplitude < 1e-6);
    const Eigen::Vector3d a = test::random_unit(rng);
    const auto s = test::sphere_curve(g, [&](double t) {
      return Eigen::Vector3d(a + 0.3 * Eigen::Vector3d(fx(t), fy(t), fz(t)) / 3.0);
    });
    CHECK(amplitude_distance_s2(s, s, s.point(0)).amplitude < 1e-6);
  }
}

TEST_CASE("translation invariance on R1 is exact") {
  // Dyadic values and a dyadic shift keep every sum exact, so the SRSFs and
  // hence the distances agree bit for bit.
  Rng rng(5);
  const Grid g = Grid::uniform(30);
  for (int trial = 0; trial < 10; ++trial) {
    auto fa = test::random_smooth(rng), fb = test::random_smooth(rng);
    auto dyadic = [](double x) { return std::ldexp(std::round(std::ldexp(x, 20)), -20); };
    const auto f = test::scalar_curve(g, [&](double t) { return dyadic(fa(t)); });
    const auto h = test::scalar_curve(g, [&](double t) { return dyadic(fb(t)); });
    const auto shifted = test::scalar_curve(g, [&](double t) { return dyadic(fb(t)) + 3.0; });
    const auto d0 = amplitude_distance_r1(f, h);
    const auto d1 = amplitude_distance_r1(f, shifted);
    CHECK(d0.amplitude == d1.amplitude);
    CHECK(d0.phase == d1.phase);
  }
}

TEST_CASE("rotation and scale invariance on Rn") {
  Rng rng(6);
  const Grid g = Grid::uniform(30);
  for (int dim : {2, 3}) {
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<std::function<double(double)>> fs, hs;
      for (int c = 0; c < dim; ++c) {
        fs.push_back(test::random_smooth(rng));
        hs.push_back(test::random_smooth(rng));
      }
      auto eval = [&](const auto& fn) {
        return test::vector_curve(g, dim, [&](double t) {
          Eigen::VectorXd v(dim);
          for (int c = 0; c < dim; ++c)
            v(c) = fn[static_cast<std::size_t>(c)](t);
          return v;
        });
      };
      const auto f = eval(fs), h = eval(hs);
      const Rotation o(test::random_rotation(rng, dim));
      const double scale = rng.uniform(0.2, 5.0);
      const Trajectory moved(g, scale * (o.matrix() * h.values()), h.tag());
      const double base = amplitude_distance_rn(f, h).amplitude;
      CHECK(std::abs(amplitude_distance_rn(f, moved).amplitude - base) < 1e-4);
      CHECK(base >= 0.0);
      CHECK(base <= pi);
    }
  }
}

TEST_CASE("warping a curve barely moves its amplitude distance") {
  const auto f_of = [](double t) { return std::sin(5 * pi * t) + 4 * t; };
  Rng rng(44);
  double previous = 1e9;
  for (std::size_t n : {30, 60, 201}) {
    const Grid g = Grid::uniform(n);
    double total = 0.0;
    const int draws = 20;
    for (int trial = 0; trial < draws; ++trial) {
      const auto gamma = test::random_diffeo(rng, 0.3);
      const auto f = test::scalar_curve(g, f_of);
      const auto fg = test::scalar_curve(g, [&](double t) { return f_of(gamma(t)); });
      const double da = amplitude_distance_r1(f, fg).amplitude;
      CHECK(da < 0.5);
      total += da;
    }
    // Lattice discretization error shrinks roughly linearly with the step.
    CHECK(total / draws < previous);
    previous = total / draws;
  }
}

TEST_CASE("S2 amplitude distance ignores reparameterization of a path") {
  const Grid g = Grid::uniform(60);
  const auto line = [](double s) { return Eigen::Vector3d(std::cos(s), std::sin(s), 0.2); };
  const auto f = test::sphere_curve(g, [&](double t) { return line(t); });
  const auto h = test::sphere_curve(g, [&](double t) { return line(t * t * 0.5 + 0.5 * t); });
  const Eigen::Vector3d ref = f.point(0);
  const auto far = test::sphere_curve(g, [&](double t) { return line(1.5 * t); });
  const double near = amplitude_distance_s2(f, h, ref).amplitude;
  CHECK(near < 0.05);
  CHECK(amplitude_distance_s2(f, far, ref).amplitude > 5 * near);
}

TEST_CASE("distance matrices match pairwise calls") {
  Rng rng(12);
  const Grid g = Grid::uniform(25);
  std::vector<Trajectory> sample;
  for (int i = 0; i < 7; ++i)
    sample.push_back(test::scalar_curve(g, test::random_smooth(rng)));
  const DistanceMatrices m = distance_matrices(sample);
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    CHECK(m.amplitude(ii, ii) == 0.0);
    CHECK(m.phase(ii, ii) == 0.0);
    for (std::size_t j = i + 1; j < sample.size(); ++j) {
      const auto jj = static_cast<Eigen::Index>(j);
      const ElasticDistances d = elastic_distances(sample[i], sample[j]);
      CHECK(m.amplitude(ii, jj) == d.amplitude);
      CHECK(m.phase(ii, jj) == d.phase);
      CHECK(m.amplitude(jj, ii) == d.amplitude);
      CHECK(m.phase(jj, ii) == d.phase);
    }
  }
}

TEST_CASE("distance matrices do not depend on the thread count") {
  Rng rng(13);
  const Grid g = Grid::uniform(30);
  std::vector<Trajectory> sample;
  for (int i = 0; i < 12; ++i)
    sample.push_back(test::scalar_curve(g, test::random_smooth(rng)));
  const DistanceMatrices one = distance_matrices(sample, {.threads = 1});
  for (unsigned threads : {2u, 3u, 8u}) {
    const DistanceMatrices many = distance_matrices(sample, {.threads = threads});
    CHECK(one.amplitude == many.amplitude);
    CHECK(one.phase == many.phase);
  }
}

TEST_CASE("S2 distance matrices use the mean starting point by default") {
  const Grid g = Grid::uniform(20);
  std::vector<Trajectory> sample;
  for (int i = 0; i < 4; ++i)
    sample.push_back(test::sphere_curve(g, [i](double t) {
      return Eigen::Vector3d(1.0, 0.3 * t * (i + 1), 0.1 * i * t * t);
    }));
  const DistanceMatrices dflt = distance_matrices(sample);
  const DistanceMatrices explicit_ref =
      distance_matrices(sample, {.threads = 1, .reference = default_reference_point(sample)});
  CHECK(dflt.amplitude == explicit_ref.amplitude);
}

TEST_CASE("distance matrices reject mixed samples") {
  std::vector<Trajectory> sample{test::scalar_curve(10, [](double t) { return t; }),
                                 test::scalar_curve(11, [](double t) { return t; })};
  CHECK_THROWS_AS(distance_matrices(sample), Error);
  CHECK_THROWS_AS(elastic_distances(test::sphere_curve(Grid::uniform(5), [](double t) {
                                      return Eigen::Vector3d(1, t, 0);
                                    }),
                                    test::sphere_curve(Grid::uniform(5), [](double t) {
                                      return Eigen::Vector3d(1, 0, t);
                                    })),
                  Error);
}
