#include <edepth/detect.hpp>

#include <algorithm>
#include <cmath>

namespace edepth {

void BoxplotConfig::validate() const {
  if (!(k > 0.0) || !std::isfinite(k))
    throw Error(ErrorCode::InvalidArgument, "boxplot multiplier k must be positive");
  if (p && !(*p > 0.0 && *p < 1.0))
    throw Error(ErrorCode::InvalidArgument, "threshold p must lie in (0, 1)");
}

const char* to_string(Channel channel) {
  return channel == Channel::Amplitude ? "amplitude" : "phase";
}

std::size_t BoxplotSummary::flag_count() const {
  return static_cast<std::size_t>(std::count(flags.begin(), flags.end(), true));
}

double empirical_quantile(std::vector<double> values, double level) {
  if (values.empty())
    throw Error(ErrorCode::InvalidArgument, "quantile of an empty list");
  if (!(level >= 0.0 && level <= 1.0))
    throw Error(ErrorCode::InvalidArgument, "quantile level must lie in [0, 1]");
  std::sort(values.begin(), values.end());
  const double pos = level * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

BoxplotSummary depth_boxplot(std::span<const double> depths, const BoxplotConfig& config) {
  config.validate();
  if (depths.size() < 2)
    throw Error(ErrorCode::InvalidArgument, "a depth boxplot needs at least two depths");
  BoxplotSummary s;
  s.center = *std::max_element(depths.begin(), depths.end());
  s.median = median(std::vector<double>(depths.begin(), depths.end()));
  s.iqr = s.center - s.median;
  s.whisker = s.median - config.k * s.iqr;
  s.flags.resize(depths.size());
  for (std::size_t i = 0; i < depths.size(); ++i)
    s.flags[i] = depths[i] < s.whisker;
  return s;
}

BoxplotSummary depth_boxplot_thresholded(std::span<const double> depths,
                                         const BoxplotConfig& config) {
  if (!config.p)
    throw Error(ErrorCode::InvalidArgument, "thresholded boxplot needs a threshold p");
  BoxplotSummary s = depth_boxplot(depths, config);
  const double q = empirical_quantile(std::vector<double>(depths.begin(), depths.end()), 1.0 - *config.p);
  s.quantile_cutoff = q;
  const double cut = std::min(s.whisker, q);
  for (std::size_t i = 0; i < depths.size(); ++i)
    s.flags[i] = depths[i] < cut;
  return s;
}

BoxplotSummary boxplot(std::span<const double> depths, const BoxplotConfig& config) {
  return config.p ? depth_boxplot_thresholded(depths, config) : depth_boxplot(depths, config);
}

OutlierReport report_from_depths(DepthValues depths, const BoxplotConfig& config, Channel channel) {
  OutlierReport r;
  r.channel = channel;
  r.config = config;
  r.amplitude = boxplot(depths.amplitude, config);
  r.phase = boxplot(depths.phase, config);
  r.depths = std::move(depths);
  return r;
}

OutlierReport detect(std::span<const Trajectory> sample, const BoxplotConfig& config,
                     Channel channel, const DistanceOptions& options) {
  config.validate();
  return report_from_depths(elastic_depths(distance_matrices(sample, options)), config, channel);
}

} // namespace edepth
