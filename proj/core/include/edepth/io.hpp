#pragma once

#include <edepth/geometry.hpp>
#include <edepth/simulate.hpp>

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace edepth {

/// Trajectory CSV layout.
///
///   # manifold=R1|Rn|S2        optional; R1 or Rn is inferred otherwise
///   t,<grid values>            R1
///   t,dim,<grid values>        Rn / S2
///   <id>,<values>              R1: one row per trajectory
///   <id>,<d>,<values>          Rn / S2: rows d = 0..dim-1, consecutive
///
/// Lines starting with '#' are comments; blank lines are skipped.
struct TrajectorySet {
  ManifoldTag tag = ManifoldTag::r1();
  std::vector<std::string> ids;
  std::vector<Trajectory> trajectories;
  /// Non-fatal findings, such as renormalized S2 points.
  std::vector<std::string> warnings;
};

/// Errors carry `source:line:` prefixes. S2 points with |norm - 1| <= 1e-6
/// are accepted, up to 1e-3 renormalized with a warning, beyond that
/// rejected.
TrajectorySet read_trajectory_csv(std::istream& in, std::string_view source = "<input>");
TrajectorySet parse_trajectory_csv(const std::filesystem::path& path);

/// Shortest round-trip decimal formatting, so write-then-parse is bit-exact.
/// Ids default to 0, 1, 2, ...
void write_trajectory_csv(std::ostream& out, std::span<const Trajectory> trajectories,
                          std::span<const std::string> ids = {});

/// `id,shape_outlier,magnitude_outlier` with 0/1 entries.
void write_labels_csv(std::ostream& out, const LabeledSample& sample);

/// Shortest round-trip decimal form of x.
std::string format_double(double x);

struct BoundingBox {
  double lat_min = -90.0;
  double lat_max = 90.0;
  double lon_min = -180.0;
  double lon_max = 180.0;

  bool contains(double lat, double lon) const;
};

struct HurricaneOptions {
  std::size_t min_observations = 25;
  std::size_t grid_size = 50;
  /// Keeps only storms whose first observation lies inside the box.
  std::optional<BoundingBox> origin_box;
};

struct HurricaneTracks {
  std::vector<std::string> storm_ids;
  std::vector<Trajectory> tracks;
  std::vector<std::string> notices;
};

/// Unit vector (cos(lat)cos(lon), cos(lat)sin(lon), sin(lat)), degrees in.
Eigen::Vector3d lat_lon_to_unit(double lat_degrees, double lon_degrees);

/// Records `storm_id,timestamp,lat,lon` (an optional header row is
/// skipped). Timestamps are plain numbers or ISO dates "YYYY-MM-DD",
/// "YYYY-MM-DD HH:MM[:SS]" or with a 'T' separator. Each storm is sorted by
/// time, its duration mapped to [0,1], and slerp-resampled to a uniform grid.
/// Repeated timestamps keep the first record.
HurricaneTracks read_hurricane_tracks(std::istream& in, const HurricaneOptions& options = {},
                                      std::string_view source = "<input>");
HurricaneTracks parse_hurricane_tracks(const std::filesystem::path& path,
                                       const HurricaneOptions& options = {});

} // namespace edepth
