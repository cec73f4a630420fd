#include "support.hpp"

#include <edepth/depth.hpp>

#include <doctest.h>

#include <algorithm>

using namespace edepth;

namespace {

// Symmetric random matrix with zero diagonal; `grid` > 0 rounds entries to
// multiples of 1/grid so that ties occur.
DistanceMatrices random_matrices(Rng& rng, Eigen::Index n, int grid = 0) {
  DistanceMatrices m{Eigen::MatrixXd::Zero(n, n), Eigen::MatrixXd::Zero(n, n)};
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) {
      double a = rng.uniform(0.0, 3.0), p = rng.uniform(0.0, 1.5);
      if (grid > 0) {
        a = std::round(a * grid) / grid;
        p = std::round(p * grid) / grid;
      }
      m.amplitude(i, j) = m.amplitude(j, i) = a;
      m.phase(i, j) = m.phase(j, i) = p;
    }
  return m;
}

// Sort-based median, independent of the nth_element implementation.
double sorted_median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

} // namespace

TEST_CASE("median") {
  CHECK(median({3.0}) == 3.0);
  CHECK(median({3.0, 1.0, 2.0}) == 2.0);
  CHECK(median({4.0, 1.0, 3.0, 2.0}) == 2.5);
  CHECK_THROWS_AS(median({}), Error);
  Rng rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> v(1 + rng() % 20);
    for (auto& x : v)
      x = std::round(rng.uniform(0, 5));
    CHECK(median(v) == sorted_median(v));
  }
}

TEST_CASE("outlyingness includes the zero self distance") {
  DistanceMatrices m{Eigen::MatrixXd::Zero(3, 3), Eigen::MatrixXd::Zero(3, 3)};
  m.amplitude << 0, 1, 4,
                 1, 0, 2,
                 4, 2, 0;
  m.phase << 0, 0.5, 0.5,
             0.5, 0, 0.1,
             0.5, 0.1, 0;
  const Outlyingness o = sample_outlyingness(m);
  CHECK(o.amplitude == std::vector<double>{1.0, 1.0, 2.0});
  CHECK(o.phase == std::vector<double>{0.5, 0.1, 0.1});
  const DepthValues d = elastic_depths(m);
  CHECK(d.amplitude == std::vector<double>{0.5, 0.5, 1.0 / 3.0});
  CHECK(d.phase[0] == 1.0 / 1.5);
  CHECK(deepest_index(d.amplitude) == 0);
  CHECK(deepest_index(d.phase) == 1);
}

TEST_CASE("identical trajectories all have depth one") {
  const DistanceMatrices m{Eigen::MatrixXd::Zero(5, 5), Eigen::MatrixXd::Zero(5, 5)};
  const DepthValues d = elastic_depths(m);
  for (double x : d.amplitude)
    CHECK(x == 1.0);
}

TEST_CASE("depth properties on random matrices") {
  Rng rng(77);
  for (int trial = 0; trial < 300; ++trial) {
    const auto n = static_cast<Eigen::Index>(2 + rng() % 30);
    const DistanceMatrices m = random_matrices(rng, n, trial % 2 ? 4 : 0);
    const DepthValues d = elastic_depths(m);
    for (std::size_t i = 0; i < d.amplitude.size(); ++i) {
      CHECK(d.amplitude[i] > 0.0);
      CHECK(d.amplitude[i] <= 1.0);
      CHECK(d.phase[i] > 0.0);
      CHECK(d.phase[i] <= 1.0);
      std::vector<double> row;
      for (Eigen::Index j = 0; j < n; ++j)
        row.push_back(m.amplitude(static_cast<Eigen::Index>(i), j));
      CHECK(d.outlyingness_amplitude[i] == sorted_median(row));
    }
    // The deepest trajectory minimizes the median distance to the sample.
    const std::size_t deepest = deepest_index(d.amplitude);
    const auto lowest = std::min_element(d.outlyingness_amplitude.begin(), d.outlyingness_amplitude.end());
    CHECK(d.outlyingness_amplitude[deepest] == *lowest);
    CHECK(deepest == static_cast<std::size_t>(lowest - d.outlyingness_amplitude.begin()));
    // Depth is a strictly decreasing function of outlyingness.
    for (std::size_t i = 0; i + 1 < d.amplitude.size(); ++i)
      CHECK((d.outlyingness_amplitude[i] < d.outlyingness_amplitude[i + 1]) ==
            (d.amplitude[i] > d.amplitude[i + 1]));
  }
}

TEST_CASE("depth rejects malformed input") {
  const DistanceMatrices one{Eigen::MatrixXd::Zero(1, 1), Eigen::MatrixXd::Zero(1, 1)};
  CHECK_THROWS_AS(elastic_depths(one), Error);
  const DistanceMatrices ragged{Eigen::MatrixXd::Zero(3, 3), Eigen::MatrixXd::Zero(2, 2)};
  CHECK_THROWS_AS(elastic_depths(ragged), Error);
  CHECK_THROWS_AS(deepest_index(std::vector<double>{}), Error);
}
