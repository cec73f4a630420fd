#pragma once

#include <edepth/depth.hpp>
#include <edepth/detect.hpp>
#include <edepth/simulate.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace edepth {

struct F1Breakdown {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;
  /// 2tp / (2tp + fn + fp); 0 when the denominator vanishes.
  double f1 = 0.0;
};

F1Breakdown f1_score(const std::vector<bool>& flags, const std::vector<bool>& labels);

/// Settings shared by all experiment drivers.
struct ExperimentOptions {
  std::size_t replications = 100;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::size_t grid_size = 30;
  double phase_noise_sigma = 0.1;
  double magnitude_outlier_fraction = 0.10;
};

/// Scenario seed of replication `rep`; replications never share a stream.
std::uint64_t replication_seed(std::uint64_t seed, std::size_t replication);

/// Phase for the phase-outlier model, amplitude otherwise.
Channel default_channel(ModelId model);

struct ReplicationDepths {
  std::size_t replication = 0;
  std::uint64_t seed = 0;
  DepthValues depths;
  std::vector<bool> shape_outlier;
};

/// Generates options.replications scenarios with the given class sizes and
/// returns their elastic depths.
std::vector<ReplicationDepths> simulate_depths(ModelId model, std::size_t n_inlier,
                                               std::size_t n_outlier,
                                               const ExperimentOptions& options);

/// Rank of depths[index] in ascending order (1 = lowest depth); ties get
/// the mid-rank.
double ascending_rank(const std::vector<double>& depths, std::size_t index);

/// Moment skewness m3 / m2^(3/2); 0 for constant input.
double sample_skewness(const std::vector<double>& values);

struct RankRecord {
  std::size_t replication = 0;
  std::uint64_t seed = 0;
  double amplitude_rank = 0.0;
  double phase_rank = 0.0;
};

struct F1Record {
  std::size_t replication = 0;
  std::uint64_t seed = 0;
  F1Breakdown score;
  double whisker = 0.0;
};

struct SweepRecord {
  std::size_t replication = 0;
  std::uint64_t seed = 0;
  /// One entry per k value.
  std::vector<double> tpr;
  std::vector<double> tnr;
};

/// Depths of a high-frequency population at two sampling rates.
struct UndersamplingDemo {
  std::size_t frequencies = 21;
  std::size_t functions = 10;
  std::size_t coarse_grid = 20;
  std::size_t fine_grid = 80;
  std::vector<double> coarse_skewness;
  std::vector<double> fine_skewness;
  double mean_coarse_skewness = 0.0;
  double mean_fine_skewness = 0.0;
};

enum class ExperimentKind { Rank, F1, KSweep };

std::string to_string(ExperimentKind kind);

struct ExperimentReport {
  ExperimentKind kind = ExperimentKind::Rank;
  ModelId model = ModelId::M1;
  std::size_t replications = 0;
  std::uint64_t seed = 0;
  Channel channel = Channel::Amplitude;
  BoxplotConfig config;

  std::vector<RankRecord> ranks;
  double mean_amplitude_rank = 0.0;
  double mean_phase_rank = 0.0;

  std::vector<F1Record> f1;
  double mean_f1 = 0.0;
  double f1_q1 = 0.0;
  double f1_median = 0.0;
  double f1_q3 = 0.0;

  std::vector<double> k_values;
  std::vector<SweepRecord> sweep;
  std::vector<double> mean_tpr;
  std::vector<double> mean_tnr;
  std::optional<UndersamplingDemo> undersampling;
};

/// 99 inliers and 1 outlier per replication; records the outlier's
/// ascending depth rank on both channels.
ExperimentReport rank_experiment(ModelId model, const ExperimentOptions& options);

/// 90 inliers and 10 outliers per replication, boxplot on the model's
/// default channel, F1 against the shape labels.
ExperimentReport f1_experiment(ModelId model, const BoxplotConfig& config,
                               const ExperimentOptions& options);
ExperimentReport f1_from_depths(ModelId model, const BoxplotConfig& config,
                                const std::vector<ReplicationDepths>& depths,
                                const ExperimentOptions& options);

/// k values 1.0, 1.25, ..., 3.0.
std::vector<double> default_k_values();

/// TPR and TNR per k on 90/10 scenarios, optionally followed by the
/// under-sampling demonstration.
ExperimentReport k_sensitivity_sweep(ModelId model, const std::vector<double>& k_values,
                                     const ExperimentOptions& options,
                                     bool with_undersampling = true);
ExperimentReport sweep_from_depths(ModelId model, const std::vector<double>& k_values,
                                   const std::vector<ReplicationDepths>& depths,
                                   const ExperimentOptions& options);

/// Random Fourier population: a shared curve with `frequencies` harmonics
/// plus per-function coefficient noise, sampled at both grid sizes in each
/// of `replications` rounds.
UndersamplingDemo undersampling_demo(std::size_t replications, std::uint64_t seed,
                                     unsigned threads = 1, std::size_t functions = 10,
                                     std::size_t frequencies = 21, std::size_t coarse_grid = 20,
                                     std::size_t fine_grid = 80);

/// One row per replication.
std::string report_csv(const ExperimentReport& report);
/// Summary with aggregates and the per-replication records.
std::string report_json(const ExperimentReport& report);

} // namespace edepth
