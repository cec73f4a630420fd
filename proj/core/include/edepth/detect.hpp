#pragma once

#include <edepth/depth.hpp>
#include <edepth/distance.hpp>

#include <optional>
#include <span>
#include <vector>

namespace edepth {

struct BoxplotConfig {
  /// IQR multiplier; the recommended default is 2.
  double k = 2.0;
  /// Threshold level in (0,1). When set, flags must also fall below the
  /// (1-p)-quantile of the depths.
  std::optional<double> p;

  void validate() const;
};

enum class Channel { Amplitude, Phase };

const char* to_string(Channel channel);

/// Numbers of one depth boxplot. `center` is the largest depth (the box's
/// drawn median line); `median` is the median of the depth values and is
/// what the whisker is built from.
struct BoxplotSummary {
  double center = 0.0;
  double median = 0.0;
  double iqr = 0.0;
  double whisker = 0.0;
  std::optional<double> quantile_cutoff;
  std::vector<bool> flags;

  std::size_t flag_count() const;
};

/// Type-7 empirical quantile (linear interpolation between order statistics).
double empirical_quantile(std::vector<double> values, double level);

/// iqr = max - median, whisker = median - k * iqr, flag depth < whisker.
/// `config.p` is ignored.
BoxplotSummary depth_boxplot(std::span<const double> depths, const BoxplotConfig& config);

/// As depth_boxplot, but flags only depths below min(whisker, q) with q the
/// (1-p)-quantile. Requires `config.p`.
BoxplotSummary depth_boxplot_thresholded(std::span<const double> depths,
                                         const BoxplotConfig& config);

/// Picks the thresholded variant when `config.p` is set.
BoxplotSummary boxplot(std::span<const double> depths, const BoxplotConfig& config);

struct OutlierReport {
  Channel channel = Channel::Amplitude;
  BoxplotConfig config;
  DepthValues depths;
  BoxplotSummary amplitude;
  BoxplotSummary phase;

  const BoxplotSummary& selected() const { return channel == Channel::Amplitude ? amplitude : phase; }
};

OutlierReport report_from_depths(DepthValues depths, const BoxplotConfig& config, Channel channel);

/// Full pipeline: distance matrices, depths, boxplots on both channels.
OutlierReport detect(std::span<const Trajectory> sample, const BoxplotConfig& config,
                     Channel channel, const DistanceOptions& options = {});

} // namespace edepth
