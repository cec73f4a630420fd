#pragma once

#include <edepth/alignment.hpp>
#include <edepth/geometry.hpp>
#include <edepth/transform.hpp>

#include <Eigen/Core>

#include <optional>
#include <span>
#include <vector>

namespace edepth {

struct ElasticDistances {
  double amplitude = 0.0;
  /// In [0, pi/2].
  double phase = 0.0;
  AlignmentResult alignment;
};

ElasticDistances amplitude_distance_r1(const Trajectory& f, const Trajectory& g);

/// Both inputs are length-normalized here, so scale never contributes.
ElasticDistances amplitude_distance_rn(const Trajectory& f, const Trajectory& g);

ElasticDistances amplitude_distance_s2(const Trajectory& f, const Trajectory& g,
                                       const Eigen::Vector3d& reference);

/// arccos(int_0^1 sqrt(gamma'(t)) dt): the Hilbert-sphere angle between the
/// square-root slope of gamma and that of the identity.
double phase_distance(const Warping& gamma);

struct DistanceOptions {
  /// Worker threads for the pair loop; 0 picks hardware concurrency.
  unsigned threads = 1;
  /// S2 only. Defaults to the normalized mean of the starting points.
  std::optional<Eigen::Vector3d> reference;
};

struct DistanceMatrices {
  Eigen::MatrixXd amplitude;
  Eigen::MatrixXd phase;
};

/// Pairwise amplitude and phase distances. Each unordered pair is aligned
/// once with the lower index as the first argument and mirrored. Self
/// distances are computed, checked against 1e-6 and then set to exactly 0.
DistanceMatrices distance_matrices(std::span<const Trajectory> sample,
                                   const DistanceOptions& options = {});

/// Dispatches on the tag of `f`. `reference` is required for S2 and ignored
/// otherwise.
ElasticDistances elastic_distances(const Trajectory& f, const Trajectory& g,
                                   const std::optional<Eigen::Vector3d>& reference = std::nullopt);

} // namespace edepth
