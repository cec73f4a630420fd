#pragma once

#include <edepth/distance.hpp>

#include <span>
#include <vector>

namespace edepth {

struct Outlyingness {
  std::vector<double> amplitude;
  std::vector<double> phase;
};

/// Sample elastic depths. depth[i] = 1 / (1 + outlyingness[i]), all in (0, 1].
struct DepthValues {
  std::vector<double> amplitude;
  std::vector<double> phase;
  std::vector<double> outlyingness_amplitude;
  std::vector<double> outlyingness_phase;
};

/// Median of the values; even-length input takes the midpoint of the two
/// central order statistics.
double median(std::vector<double> values);

/// Row medians of the distance matrices. The zero self-distance is part of
/// every row, so small samples are pulled toward zero outlyingness.
Outlyingness sample_outlyingness(const DistanceMatrices& matrices);

DepthValues elastic_depths(const DistanceMatrices& matrices);

/// Index of the deepest trajectory (first one on ties).
std::size_t deepest_index(std::span<const double> depths);

} // namespace edepth
