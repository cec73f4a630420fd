#include <edepth/eval.hpp>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

namespace edepth {

namespace {

std::string number(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

double mean_of(const std::vector<double>& xs) {
  if (xs.empty())
    return 0.0;
  double sum = 0.0;
  for (double x : xs)
    sum += x;
  return sum / static_cast<double>(xs.size());
}

double rate(std::size_t hits, std::size_t total) {
  return total == 0 ? 1.0 : static_cast<double>(hits) / static_cast<double>(total);
}

const std::vector<double>& channel_depths(const DepthValues& d, Channel channel) {
  return channel == Channel::Amplitude ? d.amplitude : d.phase;
}

} // namespace

F1Breakdown f1_score(const std::vector<bool>& flags, const std::vector<bool>& labels) {
  if (flags.size() != labels.size())
    throw Error(ErrorCode::DimensionMismatch, "flags and labels differ in length");
  F1Breakdown out;
  for (std::size_t i = 0; i < flags.size(); ++i) {
    if (flags[i] && labels[i]) ++out.tp;
    else if (flags[i]) ++out.fp;
    else if (labels[i]) ++out.fn;
    else ++out.tn;
  }
  const std::size_t denom = 2 * out.tp + out.fn + out.fp;
  out.f1 = denom == 0 ? 0.0 : 2.0 * static_cast<double>(out.tp) / static_cast<double>(denom);
  return out;
}

std::uint64_t replication_seed(std::uint64_t seed, std::size_t replication) {
  return Rng(seed).substream("replication", replication)();
}

Channel default_channel(ModelId model) {
  return model == ModelId::M7 || model == ModelId::SinCos ? Channel::Phase : Channel::Amplitude;
}

std::vector<ReplicationDepths> simulate_depths(ModelId model, std::size_t n_inlier,
                                               std::size_t n_outlier,
                                               const ExperimentOptions& options) {
  std::vector<ReplicationDepths> out;
  out.reserve(options.replications);
  DistanceOptions dopt;
  dopt.threads = options.threads;
  for (std::size_t r = 0; r < options.replications; ++r) {
    ScenarioSpec spec;
    spec.model = model;
    spec.n_inlier = n_inlier;
    spec.n_outlier = n_outlier;
    spec.grid_size = options.grid_size;
    spec.phase_noise_sigma = options.phase_noise_sigma;
    spec.magnitude_outlier_fraction = options.magnitude_outlier_fraction;
    spec.seed = replication_seed(options.seed, r);
    LabeledSample sample = sample_scenario(spec);
    out.push_back({r, spec.seed, elastic_depths(distance_matrices(sample.trajectories, dopt)),
                   std::move(sample.shape_outlier)});
  }
  return out;
}

double ascending_rank(const std::vector<double>& depths, std::size_t index) {
  if (index >= depths.size())
    throw Error(ErrorCode::InvalidArgument, "rank index out of range");
  const double d = depths[index];
  std::size_t below = 0;
  std::size_t ties = 0;
  for (std::size_t i = 0; i < depths.size(); ++i) {
    if (i == index)
      continue;
    if (depths[i] < d) ++below;
    else if (depths[i] == d) ++ties;
  }
  return 1.0 + static_cast<double>(below) + 0.5 * static_cast<double>(ties);
}

double sample_skewness(const std::vector<double>& values) {
  if (values.size() < 2)
    return 0.0;
  const double m = mean_of(values);
  double m2 = 0.0;
  double m3 = 0.0;
  for (double x : values) {
    const double d = x - m;
    m2 += d * d;
    m3 += d * d * d;
  }
  const auto n = static_cast<double>(values.size());
  m2 /= n;
  m3 /= n;
  if (m2 <= 0.0)
    return 0.0;
  return m3 / std::pow(m2, 1.5);
}

std::string to_string(ExperimentKind kind) {
  switch (kind) {
  case ExperimentKind::Rank: return "rank";
  case ExperimentKind::F1: return "f1";
  case ExperimentKind::KSweep: return "ksweep";
  }
  return "unknown";
}

ExperimentReport rank_experiment(ModelId model, const ExperimentOptions& options) {
  ExperimentReport report;
  report.kind = ExperimentKind::Rank;
  report.model = model;
  report.replications = options.replications;
  report.seed = options.seed;
  report.channel = default_channel(model);
  std::vector<double> amp;
  std::vector<double> ph;
  for (const auto& rep : simulate_depths(model, 99, 1, options)) {
    const std::size_t outlier = rep.depths.amplitude.size() - 1;
    RankRecord rec{rep.replication, rep.seed, ascending_rank(rep.depths.amplitude, outlier),
                   ascending_rank(rep.depths.phase, outlier)};
    amp.push_back(rec.amplitude_rank);
    ph.push_back(rec.phase_rank);
    report.ranks.push_back(rec);
  }
  report.mean_amplitude_rank = mean_of(amp);
  report.mean_phase_rank = mean_of(ph);
  return report;
}

ExperimentReport f1_from_depths(ModelId model, const BoxplotConfig& config,
                                const std::vector<ReplicationDepths>& depths,
                                const ExperimentOptions& options) {
  config.validate();
  ExperimentReport report;
  report.kind = ExperimentKind::F1;
  report.model = model;
  report.replications = depths.size();
  report.seed = options.seed;
  report.channel = default_channel(model);
  report.config = config;
  std::vector<double> scores;
  for (const auto& rep : depths) {
    const BoxplotSummary box = boxplot(channel_depths(rep.depths, report.channel), config);
    F1Record rec{rep.replication, rep.seed, f1_score(box.flags, rep.shape_outlier), box.whisker};
    scores.push_back(rec.score.f1);
    report.f1.push_back(rec);
  }
  report.mean_f1 = mean_of(scores);
  if (!scores.empty()) {
    report.f1_q1 = empirical_quantile(scores, 0.25);
    report.f1_median = empirical_quantile(scores, 0.5);
    report.f1_q3 = empirical_quantile(scores, 0.75);
  }
  return report;
}

ExperimentReport f1_experiment(ModelId model, const BoxplotConfig& config,
                               const ExperimentOptions& options) {
  config.validate();
  return f1_from_depths(model, config, simulate_depths(model, 90, 10, options), options);
}

std::vector<double> default_k_values() {
  std::vector<double> ks;
  for (int i = 0; i <= 8; ++i)
    ks.push_back(1.0 + 0.25 * i);
  return ks;
}

ExperimentReport sweep_from_depths(ModelId model, const std::vector<double>& k_values,
                                   const std::vector<ReplicationDepths>& depths,
                                   const ExperimentOptions& options) {
  if (k_values.empty())
    throw Error(ErrorCode::InvalidArgument, "k sweep needs at least one k value");
  for (double k : k_values)
    BoxplotConfig{k, std::nullopt}.validate();
  ExperimentReport report;
  report.kind = ExperimentKind::KSweep;
  report.model = model;
  report.replications = depths.size();
  report.seed = options.seed;
  report.channel = default_channel(model);
  report.k_values = k_values;
  for (const auto& rep : depths) {
    SweepRecord rec{rep.replication, rep.seed, {}, {}};
    for (double k : k_values) {
      const BoxplotSummary box =
          depth_boxplot(channel_depths(rep.depths, report.channel), BoxplotConfig{k, std::nullopt});
      const F1Breakdown c = f1_score(box.flags, rep.shape_outlier);
      rec.tpr.push_back(rate(c.tp, c.tp + c.fn));
      rec.tnr.push_back(rate(c.tn, c.tn + c.fp));
    }
    report.sweep.push_back(std::move(rec));
  }
  for (std::size_t j = 0; j < k_values.size(); ++j) {
    std::vector<double> tpr;
    std::vector<double> tnr;
    for (const auto& rec : report.sweep) {
      tpr.push_back(rec.tpr[j]);
      tnr.push_back(rec.tnr[j]);
    }
    report.mean_tpr.push_back(mean_of(tpr));
    report.mean_tnr.push_back(mean_of(tnr));
  }
  return report;
}

ExperimentReport k_sensitivity_sweep(ModelId model, const std::vector<double>& k_values,
                                     const ExperimentOptions& options, bool with_undersampling) {
  if (k_values.empty())
    throw Error(ErrorCode::InvalidArgument, "k sweep needs at least one k value");
  ExperimentReport report =
      sweep_from_depths(model, k_values, simulate_depths(model, 90, 10, options), options);
  if (with_undersampling)
    report.undersampling = undersampling_demo(options.replications, options.seed, options.threads);
  return report;
}

UndersamplingDemo undersampling_demo(std::size_t replications, std::uint64_t seed, unsigned threads,
                                     std::size_t functions, std::size_t frequencies,
                                     std::size_t coarse_grid, std::size_t fine_grid) {
  if (functions < 2 || frequencies == 0)
    throw Error(ErrorCode::InvalidArgument, "under-sampling demo needs >= 2 functions and >= 1 frequency");
  UndersamplingDemo demo;
  demo.frequencies = frequencies;
  demo.functions = functions;
  demo.coarse_grid = coarse_grid;
  demo.fine_grid = fine_grid;
  const Grid coarse = Grid::uniform(coarse_grid);
  const Grid fine = Grid::uniform(fine_grid);
  DistanceOptions dopt;
  dopt.threads = threads;
  constexpr double kCoefficientNoise = 0.3;

  for (std::size_t r = 0; r < replications; ++r) {
    Rng rng = Rng(seed).substream("undersampling", r);
    std::vector<double> a(frequencies);
    std::vector<double> b(frequencies);
    for (std::size_t m = 0; m < frequencies; ++m) {
      a[m] = rng.normal();
      b[m] = rng.normal();
    }
    std::vector<std::vector<double>> ca(functions, std::vector<double>(frequencies));
    std::vector<std::vector<double>> cb = ca;
    for (std::size_t i = 0; i < functions; ++i)
      for (std::size_t m = 0; m < frequencies; ++m) {
        ca[i][m] = a[m] + kCoefficientNoise * rng.normal();
        cb[i][m] = b[m] + kCoefficientNoise * rng.normal();
      }
    auto sample_at = [&](const Grid& grid) {
      std::vector<Trajectory> out;
      for (std::size_t i = 0; i < functions; ++i) {
        Eigen::MatrixXd v = Eigen::MatrixXd::Zero(1, static_cast<Eigen::Index>(grid.size()));
        for (std::size_t k = 0; k < grid.size(); ++k)
          for (std::size_t m = 0; m < frequencies; ++m) {
            const double w = 2.0 * std::numbers::pi * static_cast<double>(m + 1) * grid[k];
            v(0, static_cast<Eigen::Index>(k)) += ca[i][m] * std::cos(w) + cb[i][m] * std::sin(w);
          }
        out.emplace_back(grid, std::move(v), ManifoldTag::r1());
      }
      return out;
    };
    const auto coarse_depths = elastic_depths(distance_matrices(sample_at(coarse), dopt));
    const auto fine_depths = elastic_depths(distance_matrices(sample_at(fine), dopt));
    demo.coarse_skewness.push_back(sample_skewness(coarse_depths.amplitude));
    demo.fine_skewness.push_back(sample_skewness(fine_depths.amplitude));
  }
  demo.mean_coarse_skewness = mean_of(demo.coarse_skewness);
  demo.mean_fine_skewness = mean_of(demo.fine_skewness);
  return demo;
}

std::string report_csv(const ExperimentReport& report) {
  std::ostringstream os;
  switch (report.kind) {
  case ExperimentKind::Rank:
    os << "replication,seed,amplitude_rank,phase_rank\n";
    for (const auto& r : report.ranks)
      os << r.replication << ',' << r.seed << ',' << number(r.amplitude_rank) << ','
         << number(r.phase_rank) << '\n';
    break;
  case ExperimentKind::F1:
    os << "replication,seed,tp,fp,fn,tn,f1,whisker\n";
    for (const auto& r : report.f1)
      os << r.replication << ',' << r.seed << ',' << r.score.tp << ',' << r.score.fp << ','
         << r.score.fn << ',' << r.score.tn << ',' << number(r.score.f1) << ','
         << number(r.whisker) << '\n';
    break;
  case ExperimentKind::KSweep:
    os << "replication,seed";
    for (double k : report.k_values)
      os << ",tpr_k" << number(k);
    for (double k : report.k_values)
      os << ",tnr_k" << number(k);
    os << '\n';
    for (const auto& r : report.sweep) {
      os << r.replication << ',' << r.seed;
      for (double x : r.tpr)
        os << ',' << number(x);
      for (double x : r.tnr)
        os << ',' << number(x);
      os << '\n';
    }
    break;
  }
  return os.str();
}

std::string report_json(const ExperimentReport& report) {
  using nlohmann::json;
  json j;
  j["experiment"] = to_string(report.kind);
  j["model"] = to_string(report.model);
  j["replications"] = report.replications;
  j["seed"] = report.seed;
  j["channel"] = to_string(report.channel);
  switch (report.kind) {
  case ExperimentKind::Rank: {
    j["mean_amplitude_rank"] = report.mean_amplitude_rank;
    j["mean_phase_rank"] = report.mean_phase_rank;
    json recs = json::array();
    for (const auto& r : report.ranks)
      recs.push_back({{"replication", r.replication}, {"seed", r.seed},
                      {"amplitude_rank", r.amplitude_rank}, {"phase_rank", r.phase_rank}});
    j["records"] = std::move(recs);
    break;
  }
  case ExperimentKind::F1: {
    j["k"] = report.config.k;
    j["p"] = report.config.p ? json(*report.config.p) : json(nullptr);
    j["mean_f1"] = report.mean_f1;
    j["f1_quartiles"] = {report.f1_q1, report.f1_median, report.f1_q3};
    json recs = json::array();
    for (const auto& r : report.f1)
      recs.push_back({{"replication", r.replication}, {"seed", r.seed}, {"tp", r.score.tp},
                      {"fp", r.score.fp}, {"fn", r.score.fn}, {"tn", r.score.tn},
                      {"f1", r.score.f1}, {"whisker", r.whisker}});
    j["records"] = std::move(recs);
    break;
  }
  case ExperimentKind::KSweep: {
    j["k_values"] = report.k_values;
    j["mean_tpr"] = report.mean_tpr;
    j["mean_tnr"] = report.mean_tnr;
    json recs = json::array();
    for (const auto& r : report.sweep)
      recs.push_back({{"replication", r.replication}, {"seed", r.seed}, {"tpr", r.tpr}, {"tnr", r.tnr}});
    j["records"] = std::move(recs);
    if (report.undersampling) {
      const auto& u = *report.undersampling;
      j["undersampling"] = {{"frequencies", u.frequencies},
                            {"functions", u.functions},
                            {"coarse_grid", u.coarse_grid},
                            {"fine_grid", u.fine_grid},
                            {"mean_coarse_skewness", u.mean_coarse_skewness},
                            {"mean_fine_skewness", u.mean_fine_skewness},
                            {"coarse_skewness", u.coarse_skewness},
                            {"fine_skewness", u.fine_skewness}};
    }
    break;
  }
  }
  return j.dump(2) + "\n";
}

} // namespace edepth
