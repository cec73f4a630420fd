#include <edepth/simulate.hpp>

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace edepth {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kMagnitudeShift = 10.0;
constexpr double kPhaseOutlierSigma = 6.0;

double interp_on_grid(const Grid& grid, const Eigen::VectorXd& ys, double x) {
  const auto pts = grid.points();
  x = std::clamp(x, 0.0, 1.0);
  auto it = std::upper_bound(pts.begin(), pts.end(), x);
  std::size_t k = it == pts.begin() ? 0 : static_cast<std::size_t>(it - pts.begin()) - 1;
  k = std::min(k, pts.size() - 2);
  const double w = (x - pts[k]) / (pts[k + 1] - pts[k]);
  const auto kk = static_cast<Eigen::Index>(k);
  return (1.0 - w) * ys(kk) + w * ys(kk + 1);
}

Eigen::VectorXd draw_path(const Eigen::MatrixXd& chol, Rng& rng) {
  Eigen::VectorXd z(chol.rows());
  for (Eigen::Index i = 0; i < z.size(); ++i)
    z(i) = rng.normal();
  return chol * z;
}

} // namespace

Eigen::MatrixXd gp_cholesky(const Grid& grid, double covariance_scale, double jitter) {
  if (!(covariance_scale > 0.0))
    throw Error(ErrorCode::InvalidArgument, "GP covariance scale r must be positive");
  if (!(jitter > 0.0))
    throw Error(ErrorCode::InvalidArgument, "GP jitter must be positive");
  const auto n = static_cast<Eigen::Index>(grid.size());
  Eigen::MatrixXd k(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const double d = grid[static_cast<std::size_t>(i)] - grid[static_cast<std::size_t>(j)];
      k(i, j) = std::exp(-d * d / covariance_scale);
    }
  double eps = jitter;
  for (int attempt = 0; attempt <= 3; ++attempt, eps *= 10.0) {
    Eigen::MatrixXd kj = k;
    kj.diagonal().array() += eps;
    Eigen::LLT<Eigen::MatrixXd> llt(kj);
    if (llt.info() == Eigen::Success)
      return llt.matrixL();
  }
  throw Error(ErrorCode::Factorization, "GP covariance is not positive definite even with jitter " +
                                            std::to_string(eps / 10.0));
}

std::vector<Trajectory> sample_gp(const GpConfig& config, const Grid& grid, std::size_t count,
                                  Rng& rng) {
  const Eigen::MatrixXd chol = gp_cholesky(grid, config.covariance_scale, config.jitter);
  std::vector<Trajectory> out;
  out.reserve(count);
  for (std::size_t c = 0; c < count; ++c) {
    Eigen::VectorXd e = draw_path(chol, rng);
    for (std::size_t i = 0; i < grid.size(); ++i)
      e(static_cast<Eigen::Index>(i)) += config.mean(grid[i]);
    out.emplace_back(grid, Eigen::MatrixXd(e.transpose()), ManifoldTag::r1());
  }
  return out;
}

Warping random_warping(double sigma, const Grid& grid, Rng& rng) {
  if (!(sigma >= 0.0))
    throw Error(ErrorCode::InvalidArgument, "warping sigma must be non-negative");
  const double a1 = sigma * rng.normal();
  const double a2 = sigma * rng.normal();
  const double norm = std::hypot(a1, a2);
  if (norm == 0.0)
    return Warping::identity(grid);

  // psi = cos|v| + sin|v| u with u = v/|v| unit in L2; gamma = cumulative
  // integral of psi^2, integrated term by term.
  const double b1 = a1 / norm;
  const double b2 = a2 / norm;
  const double c = std::cos(norm);
  const double s = std::sin(norm);
  auto cumulative = [&](double t) {
    const double w = 2.0 * kPi * t;
    const double int_u = std::numbers::sqrt2 * (b1 * (1.0 - std::cos(w)) + b2 * std::sin(w)) / (2.0 * kPi);
    const double int_u2 = 2.0 * (b1 * b1 * (t / 2.0 - std::sin(2.0 * w) / (8.0 * kPi)) +
                                 b2 * b2 * (t / 2.0 + std::sin(2.0 * w) / (8.0 * kPi)) +
                                 2.0 * b1 * b2 * (1.0 - std::cos(2.0 * w)) / (8.0 * kPi));
    return c * c * t + 2.0 * c * s * int_u + s * s * int_u2;
  };
  const double total = cumulative(1.0);
  std::vector<double> values(grid.size());
  double running = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    running = std::max(running, std::clamp(cumulative(grid[i]) / total, 0.0, 1.0));
    values[i] = running;
  }
  values.front() = 0.0;
  values.back() = 1.0;
  return Warping(grid, std::move(values));
}

std::string to_string(ModelId model) {
  if (model == ModelId::SinCos)
    return "sincos";
  return std::to_string(static_cast<int>(model));
}

std::optional<ModelId> parse_model_id(std::string_view text) {
  if (text == "sincos")
    return ModelId::SinCos;
  if (text.size() == 1 && text[0] >= '1' && text[0] <= '7')
    return static_cast<ModelId>(text[0] - '0');
  return std::nullopt;
}

double model_mean(ModelId model, bool outlier, double s, double jump_time) {
  const double wave = std::sin(5.0 * kPi * s);
  switch (model) {
  case ModelId::M1: return (outlier ? 4.0 : 1.0) * wave + 4.0 * s;
  case ModelId::M2: return (outlier ? 1.0 / 6.0 : 1.0) * wave + 4.0 * s;
  case ModelId::M3:
    return outlier ? 2.0 * s * s * s + s * s - 0.5 * s : s * s * s - 2.0 * s * s + 0.5 * s;
  case ModelId::M4: return wave + 4.0 * s;
  case ModelId::M5: return std::sin((outlier ? 12.0 : 2.0) * kPi * s) + 4.0 * s;
  case ModelId::M6:
    if (!outlier)
      return wave + 4.0 * s;
    return wave + (s < jump_time ? -2.0 : 3.0) + 4.0 * s;
  case ModelId::M7: return wave + 4.0 * s;
  case ModelId::SinCos: return outlier ? std::cos(2.0 * kPi * s) : std::sin(2.0 * kPi * s);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown model id");
}

double model_covariance_scale(ModelId model, bool outlier) {
  if (model == ModelId::M4)
    return outlier ? 2.0 : 50.0;
  return 0.5;
}

bool model_has_translation(ModelId model) {
  return model != ModelId::M3 && model != ModelId::SinCos;
}

LabeledSample sample_scenario(const ScenarioSpec& spec) {
  if (spec.model == ModelId::SinCos)
    return sincos_scenario(spec.n_inlier, spec.n_outlier, spec.seed, spec.grid_size);
  const int id = static_cast<int>(spec.model);
  if (id < 1 || id > 7)
    throw Error(ErrorCode::InvalidArgument, "model id must be 1..7");
  if (spec.grid_size < 3)
    throw Error(ErrorCode::InvalidArgument, "grid size must be at least 3");
  if (!(spec.phase_noise_sigma >= 0.0))
    throw Error(ErrorCode::InvalidArgument, "phase noise sigma must be non-negative");
  if (!(spec.magnitude_outlier_fraction >= 0.0 && spec.magnitude_outlier_fraction <= 1.0))
    throw Error(ErrorCode::InvalidArgument, "magnitude outlier fraction must lie in [0, 1]");

  const Grid grid = Grid::uniform(spec.grid_size);
  const Rng root(spec.seed);
  Rng gp_in = root.substream(streams::gp_inlier);
  Rng gp_out = root.substream(streams::gp_outlier);
  Rng translation = root.substream(streams::translation);
  Rng jump = root.substream(streams::jump);
  Rng phase_outlier = root.substream(streams::phase_outlier);
  Rng phase_noise = root.substream(streams::phase_noise);
  Rng magnitude = root.substream(streams::magnitude);

  const Eigen::MatrixXd chol_in = gp_cholesky(grid, model_covariance_scale(spec.model, false), 1e-8);
  const Eigen::MatrixXd chol_out = gp_cholesky(grid, model_covariance_scale(spec.model, true), 1e-8);
  const bool is_phase_model = spec.model == ModelId::M7;
  const double noise_sigma = is_phase_model ? 0.0 : spec.phase_noise_sigma;

  const std::size_t total = spec.n_inlier + spec.n_outlier;
  LabeledSample out;
  out.trajectories.reserve(total);
  out.shape_outlier.assign(total, false);
  out.magnitude_outlier.assign(total, false);

  for (std::size_t idx = 0; idx < total; ++idx) {
    const bool outlier = idx >= spec.n_inlier;
    out.shape_outlier[idx] = outlier;
    const Eigen::VectorXd e = draw_path(outlier ? chol_out : chol_in, outlier ? gp_out : gp_in);
    const double delta = model_has_translation(spec.model) ? translation.normal() : 0.0;
    const double jump_time =
        (spec.model == ModelId::M6 && outlier) ? jump.uniform(0.4, 0.6) : 0.5;

    // Time at which the curve is read: phase outliers are composed with a
    // large warp, everything else with the compositional noise warp.
    std::optional<Warping> warp;
    if (is_phase_model && outlier)
      warp = random_warping(kPhaseOutlierSigma, grid, phase_outlier);
    else if (noise_sigma > 0.0)
      warp = random_warping(noise_sigma, grid, phase_noise);

    Eigen::MatrixXd values(1, static_cast<Eigen::Index>(grid.size()));
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double s = warp ? (*warp)[i] : grid[i];
      const double base = is_phase_model ? model_mean(spec.model, false, s) // same shape, warped
                                         : model_mean(spec.model, outlier, s, jump_time);
      values(0, static_cast<Eigen::Index>(i)) = base + interp_on_grid(grid, e, s) + delta;
    }
    out.trajectories.emplace_back(grid, std::move(values), ManifoldTag::r1());
  }

  // magnitude contamination among shape inliers: partial Fisher-Yates pick
  const auto n_magnitude = static_cast<std::size_t>(
      std::llround(spec.magnitude_outlier_fraction * static_cast<double>(total)));
  std::vector<std::size_t> pool(spec.n_inlier);
  for (std::size_t i = 0; i < pool.size(); ++i)
    pool[i] = i;
  const std::size_t picks = std::min(n_magnitude, pool.size());
  for (std::size_t p = 0; p < picks; ++p) {
    const std::size_t remaining = pool.size() - p;
    const std::size_t r = p + static_cast<std::size_t>(magnitude() % remaining);
    std::swap(pool[p], pool[r]);
    const std::size_t idx = pool[p];
    const double shift = (magnitude() & 1U) ? kMagnitudeShift : -kMagnitudeShift;
    auto& traj = out.trajectories[idx];
    out.trajectories[idx] =
        Trajectory(traj.grid(), (traj.values().array() + shift).matrix(), traj.tag());
    out.magnitude_outlier[idx] = true;
  }
  return out;
}

LabeledSample sincos_scenario(std::size_t n_inlier, std::size_t n_outlier, std::uint64_t seed,
                              std::size_t grid_size) {
  const Grid grid = Grid::uniform(grid_size);
  const Rng root(seed);
  Rng gp_in = root.substream(streams::gp_inlier);
  Rng gp_out = root.substream(streams::gp_outlier);
  GpConfig in_cfg{[](double t) { return model_mean(ModelId::SinCos, false, t); }, 0.5, 1e-8};
  GpConfig out_cfg{[](double t) { return model_mean(ModelId::SinCos, true, t); }, 0.5, 1e-8};

  LabeledSample out;
  out.trajectories = sample_gp(in_cfg, grid, n_inlier, gp_in);
  auto outliers = sample_gp(out_cfg, grid, n_outlier, gp_out);
  out.trajectories.insert(out.trajectories.end(), outliers.begin(), outliers.end());
  out.shape_outlier.assign(n_inlier + n_outlier, false);
  std::fill(out.shape_outlier.begin() + static_cast<std::ptrdiff_t>(n_inlier), out.shape_outlier.end(), true);
  out.magnitude_outlier.assign(n_inlier + n_outlier, false);
  return out;
}

} // namespace edepth
