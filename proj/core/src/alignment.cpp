#include <edepth/alignment.hpp>

#include <Eigen/LU>
#include <Eigen/SVD>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

namespace edepth {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kMaxStep = 6;

std::vector<LatticeStep> make_default_stencil() {
  std::vector<LatticeStep> steps;
  for (int di = 1; di <= kMaxStep; ++di)
    for (int dj = 1; dj <= kMaxStep; ++dj)
      if (std::gcd(di, dj) == 1)
        steps.push_back({di, dj});
  return steps;
}

void require_common_uniform_grid(const QCurve& q1, const QCurve& q2) {
  if (!(q1.grid == q2.grid))
    throw Error(ErrorCode::GridMismatch,
                "curves live on different grids; resample both onto one uniform grid first");
  if (!q1.grid.is_uniform())
    throw Error(ErrorCode::GridMismatch,
                "registration needs a uniform grid; resample onto Grid::uniform(n) first");
  if (q1.dim() != q2.dim())
    throw Error(ErrorCode::DimensionMismatch, "curves have different dimensions");
  if (q1.kind != q2.kind)
    throw Error(ErrorCode::InvalidArgument, "curves have different square-root representations");
}

// Where the r-th node of a segment lands in the second curve, in node units
// relative to the segment's start: offset + weight.
struct SamplePoint {
  int offset;
  double weight;
};

struct StepTable {
  LatticeStep step;
  double sqrt_slope;
  std::vector<SamplePoint> samples; // r = 0 .. di
  // sqrt_slope * q2 interpolated at l + r dj/di, laid out [(r * n + l) * dim + c]
  std::vector<double> warped;
};

std::vector<StepTable> build_tables(std::span<const LatticeStep> stencil, const QCurve& q2) {
  const int n = static_cast<int>(q2.size());
  const int dim = q2.dim();
  const double* b = q2.values.data();
  std::vector<StepTable> tables;
  tables.reserve(stencil.size());
  for (const auto& s : stencil) {
    if (s.di < 1 || s.dj < 1)
      throw Error(ErrorCode::InvalidArgument, "lattice steps must advance both axes");
    StepTable t{s, std::sqrt(static_cast<double>(s.dj) / static_cast<double>(s.di)), {}, {}};
    for (int r = 0; r <= s.di; ++r) {
      const int num = r * s.dj;
      t.samples.push_back({num / s.di, static_cast<double>(num % s.di) / s.di});
    }
    t.warped.assign(static_cast<std::size_t>(s.di + 1) * n * dim, 0.0);
    for (int r = 0; r <= s.di; ++r) {
      const auto& sp = t.samples[static_cast<std::size_t>(r)];
      for (int l = 0; l + s.dj < n; ++l) {
        const double* b0 = b + static_cast<std::ptrdiff_t>(l + sp.offset) * dim;
        double* out = t.warped.data() + (static_cast<std::ptrdiff_t>(r) * n + l) * dim;
        for (int c = 0; c < dim; ++c)
          out[c] = sp.weight == 0.0 ? t.sqrt_slope * b0[c]
                                    : t.sqrt_slope * ((1.0 - sp.weight) * b0[c] + sp.weight * b0[c + dim]);
      }
    }
    tables.push_back(std::move(t));
  }
  return tables;
}

// Sum of squared residuals along one segment with trapezoid end weights, not
// yet multiplied by the grid step. Returns +inf as soon as the partial sum
// exceeds `bound`.
template <int D>
double segment_sum(const double* q1, int n, int dim, int k, int l, const StepTable& t, double bound) {
  const int d = D > 0 ? D : dim;
  const int di = t.step.di;
  const double* a = q1 + static_cast<std::ptrdiff_t>(k) * d;
  const double* p = t.warped.data() + static_cast<std::ptrdiff_t>(l) * d;
  const std::ptrdiff_t stride = static_cast<std::ptrdiff_t>(n) * d;
  auto residual = [d](const double* x, const double* y) {
    double e2 = 0.0;
    for (int c = 0; c < d; ++c) {
      const double e = x[c] - y[c];
      e2 += e * e;
    }
    return e2;
  };
  double acc = 0.5 * residual(a, p);
  for (int r = 1; r < di; ++r) {
    a += d;
    p += stride;
    acc += residual(a, p);
    if (acc > bound)
      return kInf;
  }
  acc += 0.5 * residual(a + d, p + stride);
  return acc > bound ? kInf : acc;
}

template <int D>
AlignmentResult run_dp(const QCurve& q1, const std::vector<StepTable>& tables) {
  const int n = static_cast<int>(q1.size());
  const int dim = q1.dim();
  const double h = 1.0 / static_cast<double>(n - 1);
  const double* a = q1.values.data();

  std::vector<double> cost(static_cast<std::size_t>(n) * n, kInf);
  std::vector<int> pred(static_cast<std::size_t>(n) * n, -1);
  auto at = [n](int i, int j) { return static_cast<std::size_t>(i) * n + j; };
  cost[at(0, 0)] = 0.0;

  for (int i = 1; i < n; ++i) {
    for (int j = 1; j < n; ++j) {
      double best = kInf;
      int best_step = -1;
      for (std::size_t s = 0; s < tables.size(); ++s) {
        const auto& t = tables[s];
        const int k = i - t.step.di;
        const int l = j - t.step.dj;
        if (k < 0 || l < 0)
          continue;
        const double prev = cost[at(k, l)];
        if (!(prev < best))
          continue;
        // slack keeps pruning strictly conservative under rounding
        const double bound = best == kInf ? kInf : (best - prev) / h * (1.0 + 1e-9) + 1e-300;
        const double seg = h * segment_sum<D>(a, n, dim, k, l, t, bound);
        const double total = prev + seg;
        if (total < best) {
          best = total;
          best_step = static_cast<int>(s);
        }
      }
      cost[at(i, j)] = best;
      pred[at(i, j)] = best_step;
    }
  }

  std::vector<LatticePoint> path{{n - 1, n - 1}};
  while (path.back().i != 0 || path.back().j != 0) {
    const auto& p = path.back();
    const int s = pred[at(p.i, p.j)];
    if (s < 0)
      throw Error(ErrorCode::InvalidArgument, "stencil cannot reach the lattice corner");
    const auto& st = tables[static_cast<std::size_t>(s)].step;
    path.push_back({p.i - st.di, p.j - st.dj});
  }
  std::reverse(path.begin(), path.end());

  const double residual = cost[at(n - 1, n - 1)];
  return AlignmentResult{warping_from_path(q1.grid, path), std::nullopt, residual, std::move(path),
                         {residual}, false};
}

// Per-interval evaluation of the warped second curve: the values at the left
// and right node of interval m, both scaled by sqrt of that interval's slope.
template <typename Fn>
void for_each_warped_interval(const QCurve& q1, const QCurve& q2, const Warping& gamma, Fn&& fn) {
  if (!(q1.grid == q2.grid) || !(gamma.grid() == q1.grid))
    throw Error(ErrorCode::GridMismatch, "curves and warping must share one grid");
  if (q1.dim() != q2.dim())
    throw Error(ErrorCode::DimensionMismatch, "curves have different dimensions");
  const auto pts = q1.grid.points();
  const auto n = pts.size();
  auto q2_at = [&](double x) -> Eigen::VectorXd {
    x = std::clamp(x, 0.0, 1.0);
    auto it = std::upper_bound(pts.begin(), pts.end(), x);
    std::size_t k = it == pts.begin() ? 0 : static_cast<std::size_t>(it - pts.begin()) - 1;
    k = std::min(k, n - 2);
    const double w = (x - pts[k]) / (pts[k + 1] - pts[k]);
    const auto kk = static_cast<Eigen::Index>(k);
    return (1.0 - w) * q2.values.col(kk) + w * q2.values.col(kk + 1);
  };
  for (std::size_t m = 0; m + 1 < n; ++m) {
    const double dt = pts[m + 1] - pts[m];
    const double root = std::sqrt(std::max(0.0, (gamma[m + 1] - gamma[m]) / dt));
    const Eigen::VectorXd left = root * q2_at(gamma[m]);
    const Eigen::VectorXd right = root * q2_at(gamma[m + 1]);
    fn(dt, static_cast<Eigen::Index>(m), left, right);
  }
}

} // namespace

std::span<const LatticeStep> default_stencil() {
  static const std::vector<LatticeStep> stencil = make_default_stencil();
  return stencil;
}

AlignmentResult optimal_warping(const QCurve& q1, const QCurve& q2,
                                std::span<const LatticeStep> stencil) {
  require_common_uniform_grid(q1, q2);
  const auto tables = build_tables(stencil, q2);
  switch (q1.dim()) {
  case 1: return run_dp<1>(q1, tables);
  case 2: return run_dp<2>(q1, tables);
  case 3: return run_dp<3>(q1, tables);
  default: return run_dp<0>(q1, tables);
  }
}

double lattice_segment_cost(const QCurve& q1, const QCurve& q2, LatticePoint from,
                            LatticePoint to) {
  require_common_uniform_grid(q1, q2);
  const LatticeStep step{to.i - from.i, to.j - from.j};
  const int n = static_cast<int>(q1.size());
  if (step.di < 1 || step.dj < 1 || from.i < 0 || from.j < 0 || to.i >= n || to.j >= n)
    throw Error(ErrorCode::InvalidArgument, "segment must move forward inside the lattice");
  const auto tables = build_tables(std::span<const LatticeStep>(&step, 1), q2);
  const double h = 1.0 / static_cast<double>(n - 1);
  const double* a = q1.values.data();
  switch (q1.dim()) {
  case 1: return h * segment_sum<1>(a, n, 1, from.i, from.j, tables[0], kInf);
  case 2: return h * segment_sum<2>(a, n, 2, from.i, from.j, tables[0], kInf);
  case 3: return h * segment_sum<3>(a, n, 3, from.i, from.j, tables[0], kInf);
  default: return h * segment_sum<0>(a, n, q1.dim(), from.i, from.j, tables[0], kInf);
  }
}

Warping warping_from_path(const Grid& grid, std::span<const LatticePoint> path) {
  const int n = static_cast<int>(grid.size());
  if (path.empty() || path.front() != LatticePoint{0, 0} || path.back() != LatticePoint{n - 1, n - 1})
    throw Error(ErrorCode::InvalidArgument, "lattice path must run from (0,0) to (N-1,N-1)");
  std::vector<double> values(grid.size());
  values[0] = 0.0;
  for (std::size_t s = 1; s < path.size(); ++s) {
    const auto [k, l] = path[s - 1];
    const auto [i, j] = path[s];
    if (i <= k || j <= l)
      throw Error(ErrorCode::InvalidArgument, "lattice path must be strictly increasing");
    const double tk = grid[static_cast<std::size_t>(k)];
    const double ti = grid[static_cast<std::size_t>(i)];
    const double gl = grid[static_cast<std::size_t>(l)];
    const double gj = grid[static_cast<std::size_t>(j)];
    for (int m = k + 1; m <= i; ++m) {
      const double tm = grid[static_cast<std::size_t>(m)];
      values[static_cast<std::size_t>(m)] = m == i ? gj : gl + (tm - tk) * (gj - gl) / (ti - tk);
    }
  }
  return Warping(grid, std::move(values));
}

double warped_cost(const QCurve& q1, const QCurve& q2, const Warping& gamma) {
  double acc = 0.0;
  for_each_warped_interval(q1, q2, gamma,
                           [&](double dt, Eigen::Index m, const Eigen::VectorXd& left,
                               const Eigen::VectorXd& right) {
                             acc += 0.5 * dt *
                                    ((q1.values.col(m) - left).squaredNorm() +
                                     (q1.values.col(m + 1) - right).squaredNorm());
                           });
  return acc;
}

double warped_inner_product(const QCurve& q1, const QCurve& q2, const Warping& gamma) {
  double acc = 0.0;
  for_each_warped_interval(q1, q2, gamma,
                           [&](double dt, Eigen::Index m, const Eigen::VectorXd& left,
                               const Eigen::VectorXd& right) {
                             acc += 0.5 * dt *
                                    (q1.values.col(m).dot(left) + q1.values.col(m + 1).dot(right));
                           });
  return acc;
}

Eigen::MatrixXd warped_cross_covariance(const QCurve& q1, const QCurve& q2, const Warping& gamma) {
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(q1.dim(), q2.dim());
  for_each_warped_interval(q1, q2, gamma,
                           [&](double dt, Eigen::Index m, const Eigen::VectorXd& left,
                               const Eigen::VectorXd& right) {
                             acc += 0.5 * dt *
                                    (q1.values.col(m) * left.transpose() +
                                     q1.values.col(m + 1) * right.transpose());
                           });
  return acc;
}

RotationFit rotation_from_cross_covariance(const Eigen::MatrixXd& cross) {
  const auto n = cross.rows();
  if (cross.cols() != n || n < 1)
    throw Error(ErrorCode::DimensionMismatch, "cross-covariance must be square");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double top = sv.size() > 0 ? sv(0) : 0.0;
  int vanishing = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) <= 1e-10 * std::max(top, 1e-300))
      ++vanishing;
  if (top < 1e-12 || vanishing >= 2)
    return {Rotation::identity(static_cast<int>(n)), true};

  const Eigen::MatrixXd& u = svd.matrixU();
  const Eigen::MatrixXd& v = svd.matrixV();
  Eigen::VectorXd diag = Eigen::VectorXd::Ones(n);
  diag(n - 1) = (u * v.transpose()).determinant() < 0.0 ? -1.0 : 1.0;
  Eigen::MatrixXd o = u * diag.asDiagonal() * v.transpose();
  // re-orthonormalize against accumulated rounding before the SO(n) check
  Eigen::JacobiSVD<Eigen::MatrixXd> polish(o, Eigen::ComputeFullU | Eigen::ComputeFullV);
  o = polish.matrixU() * polish.matrixV().transpose();
  return {Rotation(std::move(o)), false};
}

RotationFit optimal_rotation(const QCurve& q1, const QCurve& q2) {
  if (!(q1.grid == q2.grid))
    throw Error(ErrorCode::GridMismatch, "curves must share one grid");
  if (q1.dim() != q2.dim() || q1.dim() < 2)
    throw Error(ErrorCode::DimensionMismatch, "rotation fit needs equal dimensions n >= 2");
  return rotation_from_cross_covariance(
      warped_cross_covariance(q1, q2, Warping::identity(q1.grid)));
}

QCurve rotate(const QCurve& q, const Rotation& rotation) {
  if (rotation.dim() != q.dim())
    throw Error(ErrorCode::DimensionMismatch, "rotation dimension does not match curve");
  return QCurve{q.grid, rotation.matrix() * q.values, q.kind, q.reference};
}

AlignmentResult align_q(const QCurve& q1, const QCurve& q2, const AlignOptions& options) {
  if (q1.kind != QKind::SRVF)
    return optimal_warping(q1, q2);

  require_common_uniform_grid(q1, q2);
  const int n = q1.dim();
  Rotation rotation = Rotation::identity(n);
  Warping gamma = Warping::identity(q1.grid);
  double objective = warped_cost(q1, q2, gamma);

  std::optional<AlignmentResult> best;
  std::vector<double> history{objective};
  bool degenerate = false;
  for (int round = 0; round < options.max_rounds; ++round) {
    const RotationFit fit = rotation_from_cross_covariance(warped_cross_covariance(q1, q2, gamma));
    degenerate = fit.degenerate;
    if (!fit.degenerate)
      rotation = fit.rotation;
    AlignmentResult step = optimal_warping(q1, rotate(q2, rotation));
    const double previous = objective;
    if (best && !(step.residual_cost < previous))
      break;
    objective = step.residual_cost;
    history.push_back(objective);
    gamma = step.warping;
    step.rotation = rotation;
    best = std::move(step);
    if (previous - objective < options.relative_tolerance * std::max(previous, 1e-300))
      break;
  }
  best->objective_history = std::move(history);
  best->rotation_degenerate = degenerate;
  return std::move(*best);
}

AlignmentResult align_pair(const Trajectory& f, const Trajectory& g, const AlignOptions& options) {
  if (!(f.tag() == g.tag()))
    throw Error(ErrorCode::InvalidArgument, "trajectories carry different manifold tags");
  if (!(f.grid() == g.grid()))
    throw Error(ErrorCode::GridMismatch, "trajectories must share one grid; resample first");
  switch (f.tag().kind()) {
  case ManifoldTag::Kind::R1:
    return optimal_warping(srsf(f), srsf(g));
  case ManifoldTag::Kind::Rn:
    return align_q(srvf(normalize_length(f)), srvf(normalize_length(g)), options);
  case ManifoldTag::Kind::S2: {
    const std::array<Trajectory, 2> both{f, g};
    const Eigen::Vector3d c = options.reference ? *options.reference
                                                : default_reference_point(both);
    return optimal_warping(tsrvf(f, c), tsrvf(g, c));
  }
  }
  throw Error(ErrorCode::InvalidArgument, "unknown manifold tag");
}

} // namespace edepth
