#pragma once

#include <edepth/geometry.hpp>
#include <edepth/random.hpp>
#include <edepth/transform.hpp>

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace edepth {

/// Gaussian process with squared-exponential covariance
/// k(x, x') = exp(-(x - x')^2 / r) plus `jitter` on the diagonal.
struct GpConfig {
  std::function<double(double)> mean = [](double) { return 0.0; };
  double covariance_scale = 0.5;
  double jitter = 1e-8;
};

/// Lower Cholesky factor of the GP covariance on `grid`. The jitter is raised
/// tenfold up to three times if the factorization fails.
Eigen::MatrixXd gp_cholesky(const Grid& grid, double covariance_scale, double jitter);

/// `count` independent paths; each consumes grid.size() normals from `rng`.
std::vector<Trajectory> sample_gp(const GpConfig& config, const Grid& grid, std::size_t count,
                                  Rng& rng);

/// Random warping from the exponential map at the identity's square-root
/// slope: tangent v = a1 sqrt2 sin(2 pi t) + a2 sqrt2 cos(2 pi t) with
/// a1, a2 ~ N(0, sigma^2) (sigma is a standard deviation). Integrated in
/// closed form, so gamma(1) = 1 up to rounding.
Warping random_warping(double sigma, const Grid& grid, Rng& rng);

enum class ModelId { M1 = 1, M2, M3, M4, M5, M6, M7, SinCos };

std::string to_string(ModelId model);
/// Accepts "1".."7" and "sincos".
std::optional<ModelId> parse_model_id(std::string_view text);

struct ScenarioSpec {
  ModelId model = ModelId::M1;
  std::size_t n_inlier = 90;
  std::size_t n_outlier = 10;
  std::size_t grid_size = 30;
  /// Compositional noise level; never applied to Model 7.
  double phase_noise_sigma = 0.1;
  /// Fraction of all curves shifted by +-10, chosen among shape inliers.
  double magnitude_outlier_fraction = 0.10;
  std::uint64_t seed = 0;
};

struct LabeledSample {
  std::vector<Trajectory> trajectories;
  std::vector<bool> shape_outlier;
  std::vector<bool> magnitude_outlier;
};

/// Substream names used by sample_scenario; each noise source draws only
/// from its own stream.
namespace streams {
inline constexpr std::string_view gp_inlier = "gp-inlier";
inline constexpr std::string_view gp_outlier = "gp-outlier";
inline constexpr std::string_view translation = "translation";
inline constexpr std::string_view jump = "jump";
inline constexpr std::string_view phase_outlier = "phase-outlier";
inline constexpr std::string_view phase_noise = "phase-noise";
inline constexpr std::string_view magnitude = "magnitude";
} // namespace streams

/// Inliers occupy indices [0, n_inlier), shape outliers the rest.
LabeledSample sample_scenario(const ScenarioSpec& spec);

/// Pure-phase scenario: GP paths around sin(2 pi t) (inliers) and
/// cos(2 pi t) (outliers), r = 0.5, no further contamination.
LabeledSample sincos_scenario(std::size_t n_inlier, std::size_t n_outlier, std::uint64_t seed,
                              std::size_t grid_size = 30);

/// Deterministic part of a model curve at time s. `jump_time` is used by
/// Model 6 outliers only.
double model_mean(ModelId model, bool outlier, double s, double jump_time = 0.5);

/// Covariance scale r of the model's GP for the given class.
double model_covariance_scale(ModelId model, bool outlier);

/// Whether the model adds a N(0,1) vertical translation to every curve.
bool model_has_translation(ModelId model);

} // namespace edepth
