#include <edepth/depth.hpp>

#include <algorithm>

namespace edepth {

double median(std::vector<double> values) {
  if (values.empty())
    throw Error(ErrorCode::InvalidArgument, "median of an empty list");
  const std::size_t n = values.size();
  const std::size_t mid = n / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double upper = values[mid];
  if (n % 2 == 1)
    return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

Outlyingness sample_outlyingness(const DistanceMatrices& matrices) {
  const auto n = matrices.amplitude.rows();
  if (n < 2)
    throw Error(ErrorCode::InvalidArgument, "outlyingness needs at least two trajectories");
  if (matrices.amplitude.cols() != n || matrices.phase.rows() != n || matrices.phase.cols() != n)
    throw Error(ErrorCode::DimensionMismatch, "distance matrices must be square and equal-sized");

  Outlyingness out;
  out.amplitude.reserve(static_cast<std::size_t>(n));
  out.phase.reserve(static_cast<std::size_t>(n));
  std::vector<double> row(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j)
      row[static_cast<std::size_t>(j)] = matrices.amplitude(i, j);
    out.amplitude.push_back(median(row));
    for (Eigen::Index j = 0; j < n; ++j)
      row[static_cast<std::size_t>(j)] = matrices.phase(i, j);
    out.phase.push_back(median(row));
  }
  return out;
}

DepthValues elastic_depths(const DistanceMatrices& matrices) {
  Outlyingness o = sample_outlyingness(matrices);
  DepthValues d;
  auto invert = [](const std::vector<double>& xs) {
    std::vector<double> out(xs.size());
    std::transform(xs.begin(), xs.end(), out.begin(), [](double x) { return 1.0 / (1.0 + x); });
    return out;
  };
  d.amplitude = invert(o.amplitude);
  d.phase = invert(o.phase);
  d.outlyingness_amplitude = std::move(o.amplitude);
  d.outlyingness_phase = std::move(o.phase);
  return d;
}

std::size_t deepest_index(std::span<const double> depths) {
  if (depths.empty())
    throw Error(ErrorCode::InvalidArgument, "no depths given");
  return static_cast<std::size_t>(std::max_element(depths.begin(), depths.end()) - depths.begin());
}

} // namespace edepth
