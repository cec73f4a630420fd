#include "commands.hpp"

#include <edepth/depth.hpp>
#include <edepth/detect.hpp>
#include <edepth/eval.hpp>
#include <edepth/io.hpp>
#include <edepth/simulate.hpp>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#ifndef EDEPTH_VERSION
#define EDEPTH_VERSION "unknown"
#endif

namespace edepth::cli {

namespace {

struct Globals {
  unsigned threads = 1;
  bool quiet = false;
};

struct InputArgs {
  std::string path;
  bool tracks = false;
  std::size_t min_observations = 25;
  std::size_t track_grid = 50;
  std::vector<double> origin_box;
  std::vector<double> reference;
};

struct Loaded {
  std::vector<std::string> ids;
  std::vector<Trajectory> trajectories;
};

void add_input_options(CLI::App* cmd, InputArgs& in) {
  cmd->add_option("file", in.path, "Trajectory CSV (or storm track CSV with --tracks)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_flag("--tracks", in.tracks, "Read storm_id,timestamp,lat,lon records as S2 tracks");
  cmd->add_option("--min-observations", in.min_observations, "Drop tracks with fewer records")
      ->check(CLI::Range(3, 1000000));
  cmd->add_option("--track-grid", in.track_grid, "Uniform grid size for resampled tracks")
      ->check(CLI::Range(3, 100000));
  cmd->add_option("--origin-box", in.origin_box, "lat_min,lat_max,lon_min,lon_max filter on track origins")
      ->delimiter(',')
      ->expected(4);
  cmd->add_option("--reference-point", in.reference, "S2 reference point x,y,z")
      ->delimiter(',')
      ->expected(3);
}

Loaded load(const InputArgs& in, const Globals& g, std::ostream& err) {
  Loaded out;
  if (in.tracks) {
    HurricaneOptions opts;
    opts.min_observations = in.min_observations;
    opts.grid_size = in.track_grid;
    if (!in.origin_box.empty())
      opts.origin_box = BoundingBox{in.origin_box[0], in.origin_box[1], in.origin_box[2], in.origin_box[3]};
    auto tracks = parse_hurricane_tracks(in.path, opts);
    if (!g.quiet)
      for (const auto& n : tracks.notices)
        err << "notice: " << n << '\n';
    out.ids = std::move(tracks.storm_ids);
    out.trajectories = std::move(tracks.tracks);
  } else {
    auto set = parse_trajectory_csv(in.path);
    if (!g.quiet)
      for (const auto& w : set.warnings)
        err << "warning: " << w << '\n';
    out.ids = std::move(set.ids);
    out.trajectories = std::move(set.trajectories);
  }
  if (out.trajectories.size() < 2)
    throw Error(ErrorCode::InvalidArgument, "need at least two trajectories, found " +
                                                std::to_string(out.trajectories.size()));
  return out;
}

DistanceOptions distance_options(const InputArgs& in, const Globals& g) {
  DistanceOptions opts;
  opts.threads = g.threads;
  if (!in.reference.empty()) {
    Eigen::Vector3d c(in.reference[0], in.reference[1], in.reference[2]);
    if (!(c.norm() > 0.0))
      throw Error(ErrorCode::InvalidArgument, "reference point must be nonzero");
    opts.reference = c / c.norm();
  }
  return opts;
}

Channel parse_channel(const std::string& s) {
  return s == "phase" ? Channel::Phase : Channel::Amplitude;
}

// Writes to `path` when given, else to `out`.
void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file)
    throw Error(ErrorCode::InvalidArgument, "cannot write " + path);
  file << text;
}

std::vector<double> selected(const DepthValues& d, Channel c) {
  return c == Channel::Amplitude ? d.amplitude : d.phase;
}

} // namespace

unsigned default_threads() {
  if (const char* env = std::getenv("EDEPTH_THREADS")) {
    unsigned v = 0;
    const std::string_view s(env);
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec == std::errc() && res.ptr == s.data() + s.size() && v > 0)
      return v;
  }
  return 1;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Elastic depths and outlier detection for trajectories", "edepth"};
  app.require_subcommand(1);
  Globals g;
  g.threads = default_threads();
  app.add_option("--threads", g.threads, "Worker threads for pairwise alignment")
      ->check(CLI::Range(1u, 1024u));
  app.add_flag("--quiet", g.quiet, "Suppress warnings and notices");
  app.set_version_flag("--version", std::string("edepth ") + EDEPTH_VERSION);

  // depth
  InputArgs depth_in;
  std::string depth_channel;
  std::string depth_out;
  auto* depth = app.add_subcommand("depth", "Per-trajectory elastic depths as CSV");
  add_input_options(depth, depth_in);
  depth->add_option("--channel", depth_channel, "Report only this channel")
      ->check(CLI::IsMember({"amplitude", "phase"}));
  depth->add_option("--out", depth_out, "Output file (default stdout)");

  // detect
  InputArgs detect_in;
  std::string detect_channel = "amplitude";
  std::string detect_out;
  double detect_k = 2.0;
  std::optional<double> detect_p;
  auto* detect_cmd = app.add_subcommand("detect", "Depth boxplot outlier report as JSON");
  add_input_options(detect_cmd, detect_in);
  detect_cmd->add_option("--k", detect_k, "IQR multiplier")->check(CLI::PositiveNumber);
  detect_cmd->add_option("--p", detect_p, "Threshold level in (0,1)")
      ->check(CLI::Range(0.0, 1.0));
  detect_cmd->add_option("--channel", detect_channel, "Channel to flag on")
      ->check(CLI::IsMember({"amplitude", "phase"}));
  detect_cmd->add_option("--out", detect_out, "Output file (default stdout)");

  // simulate
  std::string sim_model;
  ScenarioSpec spec;
  bool no_phase_noise = false;
  bool no_magnitude = false;
  std::string sim_out;
  std::string sim_labels;
  auto* simulate = app.add_subcommand("simulate", "Generate a labeled synthetic sample");
  simulate->add_option("--model", sim_model, "1..7 or sincos")
      ->required()
      ->check(CLI::IsMember({"1", "2", "3", "4", "5", "6", "7", "sincos"}));
  simulate->add_option("--inliers", spec.n_inlier, "Number of main-model curves");
  simulate->add_option("--outliers", spec.n_outlier, "Number of contamination curves");
  simulate->add_option("--grid", spec.grid_size, "Grid points")->check(CLI::Range(3, 100000));
  simulate->add_option("--seed", spec.seed, "Random seed");
  simulate->add_flag("--no-phase-noise", no_phase_noise, "Skip the compositional warp noise");
  simulate->add_flag("--no-magnitude-outliers", no_magnitude, "Skip the +-10 shifts");
  simulate->add_option("--out", sim_out, "Trajectory CSV (default stdout)");
  simulate->add_option("--labels", sim_labels, "Labels CSV (default <out>.labels.csv when --out is set)");

  // bench
  std::string bench_kind;
  std::string bench_model = "1";
  ExperimentOptions bench_opts;
  std::vector<double> bench_k;
  std::optional<double> bench_p;
  std::string bench_csv;
  std::string bench_json;
  bool no_undersampling = false;
  bool bench_no_phase = false;
  bool bench_no_magnitude = false;
  auto* bench = app.add_subcommand("bench", "Seeded experiment reports");
  bench->add_option("experiment", bench_kind, "f1, rank or ksweep")
      ->required()
      ->check(CLI::IsMember({"f1", "rank", "ksweep"}));
  bench->add_option("--model", bench_model, "1..7 or sincos")
      ->check(CLI::IsMember({"1", "2", "3", "4", "5", "6", "7", "sincos"}));
  bench->add_option("--reps", bench_opts.replications, "Replications")->check(CLI::Range(1, 1000000));
  bench->add_option("--seed", bench_opts.seed, "Random seed");
  bench->add_option("--grid", bench_opts.grid_size, "Grid points")->check(CLI::Range(3, 100000));
  bench->add_option("--k", bench_k, "IQR multiplier (f1) or comma-separated sweep values (ksweep)")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  bench->add_option("--p", bench_p, "Threshold level for f1")->check(CLI::Range(0.0, 1.0));
  bench->add_option("--csv", bench_csv, "Per-replication CSV file");
  bench->add_option("--json", bench_json, "JSON summary file (default stdout)");
  bench->add_flag("--no-undersampling", no_undersampling, "Skip the sampling-rate demo in ksweep");
  bench->add_flag("--no-phase-noise", bench_no_phase, "Skip the compositional warp noise");
  bench->add_flag("--no-magnitude-outliers", bench_no_magnitude, "Skip the +-10 shifts");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (depth->parsed()) {
      const Loaded data = load(depth_in, g, err);
      const DepthValues d = elastic_depths(distance_matrices(data.trajectories, distance_options(depth_in, g)));
      std::ostringstream os;
      if (depth_channel.empty()) {
        os << "id,amplitude_depth,phase_depth\n";
        for (std::size_t i = 0; i < data.ids.size(); ++i)
          os << data.ids[i] << ',' << format_double(d.amplitude[i]) << ',' << format_double(d.phase[i]) << '\n';
      } else {
        const auto values = selected(d, parse_channel(depth_channel));
        os << "id," << depth_channel << "_depth\n";
        for (std::size_t i = 0; i < data.ids.size(); ++i)
          os << data.ids[i] << ',' << format_double(values[i]) << '\n';
      }
      emit(depth_out, os.str(), out);
    } else if (detect_cmd->parsed()) {
      const Loaded data = load(detect_in, g, err);
      BoxplotConfig config{detect_k, detect_p};
      config.validate();
      const OutlierReport report =
          detect(data.trajectories, config, parse_channel(detect_channel), distance_options(detect_in, g));
      const BoxplotSummary& box = report.selected();
      nlohmann::json j;
      j["channel"] = to_string(report.channel);
      j["k"] = config.k;
      j["p"] = config.p ? nlohmann::json(*config.p) : nlohmann::json(nullptr);
      j["center"] = box.center;
      j["median"] = box.median;
      j["iqr"] = box.iqr;
      j["whisker"] = box.whisker;
      j["quantile"] = box.quantile_cutoff ? nlohmann::json(*box.quantile_cutoff) : nlohmann::json(nullptr);
      nlohmann::json flagged = nlohmann::json::array();
      nlohmann::json rows = nlohmann::json::array();
      const auto depths = selected(report.depths, report.channel);
      for (std::size_t i = 0; i < data.ids.size(); ++i) {
        if (box.flags[i])
          flagged.push_back(data.ids[i]);
        rows.push_back({{"id", data.ids[i]},
                        {"depth", depths[i]},
                        {"amplitude_depth", report.depths.amplitude[i]},
                        {"phase_depth", report.depths.phase[i]},
                        {"flag", static_cast<bool>(box.flags[i])}});
      }
      j["flagged"] = std::move(flagged);
      j["trajectories"] = std::move(rows);
      emit(detect_out, j.dump(2) + "\n", out);
    } else if (simulate->parsed()) {
      spec.model = *parse_model_id(sim_model);
      if (no_phase_noise)
        spec.phase_noise_sigma = 0.0;
      if (no_magnitude)
        spec.magnitude_outlier_fraction = 0.0;
      const LabeledSample sample = sample_scenario(spec);
      if (sample.trajectories.empty())
        throw Error(ErrorCode::InvalidArgument, "scenario has no trajectories");
      std::ostringstream traj;
      write_trajectory_csv(traj, sample.trajectories);
      std::ostringstream labels;
      write_labels_csv(labels, sample);
      emit(sim_out, traj.str(), out);
      std::string labels_path = sim_labels;
      if (labels_path.empty() && !sim_out.empty())
        labels_path = sim_out + ".labels.csv";
      if (!labels_path.empty())
        emit(labels_path, labels.str(), out);
    } else if (bench->parsed()) {
      const ModelId model = *parse_model_id(bench_model);
      bench_opts.threads = g.threads;
      if (bench_no_phase)
        bench_opts.phase_noise_sigma = 0.0;
      if (bench_no_magnitude)
        bench_opts.magnitude_outlier_fraction = 0.0;
      ExperimentReport report;
      if (bench_kind == "rank") {
        report = rank_experiment(model, bench_opts);
      } else if (bench_kind == "f1") {
        if (bench_k.size() > 1)
          throw Error(ErrorCode::InvalidArgument, "f1 takes a single --k value");
        BoxplotConfig config{bench_k.empty() ? 1.8 : bench_k.front(), bench_p};
        report = f1_experiment(model, config, bench_opts);
      } else {
        report = k_sensitivity_sweep(model, bench_k.empty() ? default_k_values() : bench_k, bench_opts,
                                     !no_undersampling);
      }
      if (!bench_csv.empty())
        emit(bench_csv, report_csv(report), out);
      emit(bench_json, report_json(report), out);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

} // namespace edepth::cli
