#include <edepth/distance.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

namespace edepth {

namespace {

double clamped_acos(double x) { return std::acos(std::clamp(x, -1.0, 1.0)); }

void require_same_grid(const Trajectory& f, const Trajectory& g) {
  if (!(f.tag() == g.tag()))
    throw Error(ErrorCode::InvalidArgument, "trajectories carry different manifold tags");
  if (!(f.grid() == g.grid()))
    throw Error(ErrorCode::GridMismatch, "trajectories must share one grid; resample first");
}

// Pre-transformed sample: distance_matrices builds each square-root curve
// once instead of once per pair.
struct Prepared {
  ManifoldTag tag;
  std::vector<QCurve> curves;
};

Prepared prepare(std::span<const Trajectory> sample, const std::optional<Eigen::Vector3d>& reference) {
  Prepared out{sample.front().tag(), {}};
  out.curves.reserve(sample.size());
  for (const auto& traj : sample) {
    switch (traj.tag().kind()) {
    case ManifoldTag::Kind::R1: out.curves.push_back(srsf(traj)); break;
    case ManifoldTag::Kind::Rn: out.curves.push_back(srvf(normalize_length(traj))); break;
    case ManifoldTag::Kind::S2: out.curves.push_back(tsrvf(traj, *reference)); break;
    }
  }
  return out;
}

ElasticDistances from_curves(const QCurve& q1, const QCurve& q2) {
  if (q1.kind == QKind::SRVF) {
    AlignmentResult aligned = align_q(q1, q2);
    const double inner =
        warped_inner_product(q1, rotate(q2, *aligned.rotation), aligned.warping);
    const double phase = phase_distance(aligned.warping);
    return {clamped_acos(inner), phase, std::move(aligned)};
  }
  AlignmentResult aligned = optimal_warping(q1, q2);
  const double amplitude = std::sqrt(std::max(0.0, aligned.residual_cost));
  const double phase = phase_distance(aligned.warping);
  return {amplitude, phase, std::move(aligned)};
}

} // namespace

ElasticDistances amplitude_distance_r1(const Trajectory& f, const Trajectory& g) {
  require_same_grid(f, g);
  if (f.tag().kind() != ManifoldTag::Kind::R1)
    throw Error(ErrorCode::InvalidArgument, "amplitude_distance_r1 expects R1 trajectories");
  return from_curves(srsf(f), srsf(g));
}

ElasticDistances amplitude_distance_rn(const Trajectory& f, const Trajectory& g) {
  require_same_grid(f, g);
  if (f.tag().kind() != ManifoldTag::Kind::Rn)
    throw Error(ErrorCode::InvalidArgument, "amplitude_distance_rn expects Rn trajectories");
  return from_curves(srvf(normalize_length(f)), srvf(normalize_length(g)));
}

ElasticDistances amplitude_distance_s2(const Trajectory& f, const Trajectory& g,
                                       const Eigen::Vector3d& reference) {
  require_same_grid(f, g);
  if (f.tag().kind() != ManifoldTag::Kind::S2)
    throw Error(ErrorCode::InvalidArgument, "amplitude_distance_s2 expects S2 trajectories");
  return from_curves(tsrvf(f, reference), tsrvf(g, reference));
}

double phase_distance(const Warping& gamma) {
  return clamped_acos(warping_sqrt_slope_integral(gamma));
}

ElasticDistances elastic_distances(const Trajectory& f, const Trajectory& g,
                                   const std::optional<Eigen::Vector3d>& reference) {
  switch (f.tag().kind()) {
  case ManifoldTag::Kind::R1: return amplitude_distance_r1(f, g);
  case ManifoldTag::Kind::Rn: return amplitude_distance_rn(f, g);
  case ManifoldTag::Kind::S2:
    if (!reference)
      throw Error(ErrorCode::InvalidArgument, "S2 distances need a reference point");
    return amplitude_distance_s2(f, g, *reference);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown manifold tag");
}

DistanceMatrices distance_matrices(std::span<const Trajectory> sample,
                                   const DistanceOptions& options) {
  const auto n = static_cast<Eigen::Index>(sample.size());
  DistanceMatrices out{Eigen::MatrixXd::Zero(n, n), Eigen::MatrixXd::Zero(n, n)};
  if (n == 0)
    return out;
  for (const auto& traj : sample) {
    if (!(traj.tag() == sample.front().tag()))
      throw Error(ErrorCode::InvalidArgument, "sample mixes manifold tags");
    if (!(traj.grid() == sample.front().grid()))
      throw Error(ErrorCode::GridMismatch, "sample trajectories must share one grid");
  }

  std::optional<Eigen::Vector3d> reference = options.reference;
  if (sample.front().tag().kind() == ManifoldTag::Kind::S2 && !reference)
    reference = default_reference_point(sample);
  const Prepared prepared = prepare(sample, reference);

  std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;
  pairs.reserve(static_cast<std::size_t>(n * (n + 1) / 2));
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j)
      pairs.emplace_back(i, j);

  // Every pair writes only its own two cells, so the result is independent
  // of scheduling.
  auto work = [&](std::size_t idx) {
    const auto [i, j] = pairs[idx];
    const ElasticDistances d = from_curves(prepared.curves[static_cast<std::size_t>(i)],
                                           prepared.curves[static_cast<std::size_t>(j)]);
    out.amplitude(i, j) = out.amplitude(j, i) = d.amplitude;
    out.phase(i, j) = out.phase(j, i) = d.phase;
  };
  auto finish = [&] {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (out.amplitude(i, i) > 1e-6 || out.phase(i, i) > 1e-6)
        throw Error(ErrorCode::InvalidArgument,
                    "self-distance of trajectory " + std::to_string(i) + " is not zero");
      out.amplitude(i, i) = 0.0;
      out.phase(i, i) = 0.0;
    }
    return out;
  };

  unsigned threads = options.threads == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                          : options.threads;
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, pairs.size())));
  if (threads <= 1) {
    for (std::size_t idx = 0; idx < pairs.size(); ++idx)
      work(idx);
    return finish();
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (std::size_t idx = next++; idx < pairs.size(); idx = next++) {
        try {
          work(idx);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure)
            failure = std::current_exception();
          next = pairs.size();
        }
      }
    });
  }
  pool.clear();
  if (failure)
    std::rethrow_exception(failure);
  return finish();
}

} // namespace edepth
