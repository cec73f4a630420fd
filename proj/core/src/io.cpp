#include <edepth/io.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

namespace edepth {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start)));
    if (comma == std::string_view::npos)
      break;
    start = comma + 1;
  }
  return cells;
}

std::optional<double> to_double(std::string_view s) {
  if (!s.empty() && s.front() == '+')
    s.remove_prefix(1);
  double x = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || s.empty())
    return std::nullopt;
  return x;
}

[[noreturn]] void fail(std::string_view source, std::size_t line, const std::string& what) {
  throw Error(ErrorCode::Parse, std::string(source) + ":" + std::to_string(line) + ": " + what);
}

double cell_double(std::string_view cell, std::string_view source, std::size_t line) {
  auto x = to_double(cell);
  if (!x || !std::isfinite(*x))
    fail(source, line, "expected a finite number, got '" + std::string(cell) + "'");
  return *x;
}

struct Line {
  std::size_t number;
  std::string text;
};

std::optional<long long> days_from_date(int y, unsigned m, unsigned d) {
  const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
  if (!ymd.ok())
    return std::nullopt;
  return std::chrono::sys_days(ymd).time_since_epoch().count();
}

// Seconds since the epoch for ISO dates, or the number itself.
std::optional<double> parse_timestamp(std::string_view s) {
  if (auto x = to_double(s))
    return std::isfinite(*x) ? x : std::nullopt;
  if (s.size() < 10 || s[4] != '-' || s[7] != '-')
    return std::nullopt;
  auto field = [&](std::size_t pos, std::size_t len) -> std::optional<int> {
    if (pos + len > s.size())
      return std::nullopt;
    int v = 0;
    auto res = std::from_chars(s.data() + pos, s.data() + pos + len, v);
    if (res.ec != std::errc() || res.ptr != s.data() + pos + len)
      return std::nullopt;
    return v;
  };
  auto y = field(0, 4), mo = field(5, 2), d = field(8, 2);
  if (!y || !mo || !d || *mo < 1 || *d < 1)
    return std::nullopt;
  auto days = days_from_date(*y, static_cast<unsigned>(*mo), static_cast<unsigned>(*d));
  if (!days)
    return std::nullopt;
  double seconds = static_cast<double>(*days) * 86400.0;
  if (s.size() == 10)
    return seconds;
  if ((s[10] != ' ' && s[10] != 'T') || s.size() < 16 || s[13] != ':')
    return std::nullopt;
  auto hh = field(11, 2), mm = field(14, 2);
  if (!hh || !mm || *hh > 23 || *mm > 59)
    return std::nullopt;
  int ss = 0;
  if (s.size() > 16) {
    auto sec = field(17, 2);
    if (s[16] != ':' || s.size() != 19 || !sec || *sec > 60)
      return std::nullopt;
    ss = *sec;
  }
  return seconds + *hh * 3600.0 + *mm * 60.0 + ss;
}

} // namespace

std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

TrajectorySet read_trajectory_csv(std::istream& in, std::string_view source) {
  std::optional<std::string> declared;
  std::vector<Line> lines;
  std::string text;
  for (std::size_t number = 1; std::getline(in, text); ++number) {
    const std::string_view t = trim(text);
    if (t.empty())
      continue;
    if (t.front() == '#') {
      std::string_view body = trim(t.substr(1));
      if (body.starts_with("manifold=")) {
        declared = std::string(trim(body.substr(9)));
        if (*declared != "R1" && *declared != "Rn" && *declared != "S2")
          fail(source, number, "unknown manifold '" + *declared + "' (expected R1, Rn or S2)");
      }
      continue;
    }
    lines.push_back({number, std::string(t)});
  }
  if (lines.empty())
    throw Error(ErrorCode::Parse, std::string(source) + ": no grid header row");

  const auto header = split(lines.front().text);
  const std::size_t header_line = lines.front().number;
  if (header.front() != "t")
    fail(source, header_line, "header row must start with 't'");
  const bool multi = header.size() > 1 && header[1] == "dim";
  const std::size_t offset = multi ? 2 : 1;
  std::vector<double> grid_points;
  for (std::size_t c = offset; c < header.size(); ++c)
    grid_points.push_back(cell_double(header[c], source, header_line));
  if (grid_points.size() < 3)
    fail(source, header_line, "grid needs at least 3 points");
  for (std::size_t i = 0; i < grid_points.size(); ++i) {
    if (grid_points[i] < 0.0 || grid_points[i] > 1.0)
      fail(source, header_line, "grid value " + format_double(grid_points[i]) + " outside [0, 1]");
    if (i > 0 && !(grid_points[i] > grid_points[i - 1]))
      fail(source, header_line, "grid is not strictly increasing at column " + std::to_string(i + offset + 1));
  }
  std::optional<Grid> grid;
  try {
    grid.emplace(grid_points);
  } catch (const Error& e) {
    fail(source, header_line, e.what());
  }
  const std::size_t n = grid->size();

  TrajectorySet out;
  if (declared == std::optional<std::string>("R1") && multi)
    fail(source, header_line, "R1 files take no dim column");
  if ((declared == std::optional<std::string>("Rn") || declared == std::optional<std::string>("S2")) && !multi)
    fail(source, header_line, "Rn and S2 files need a dim column");

  std::size_t row = 1;
  while (row < lines.size()) {
    const auto cells = split(lines[row].text);
    const std::size_t ln = lines[row].number;
    if (cells.size() != n + offset)
      fail(source, ln, "expected " + std::to_string(n + offset) + " fields, found " + std::to_string(cells.size()));
    const std::string id(cells[0]);
    if (id.empty())
      fail(source, ln, "empty trajectory id");
    if (!multi) {
      Eigen::MatrixXd v(1, static_cast<Eigen::Index>(n));
      for (std::size_t c = 0; c < n; ++c)
        v(0, static_cast<Eigen::Index>(c)) = cell_double(cells[c + 1], source, ln);
      out.ids.push_back(id);
      out.trajectories.emplace_back(*grid, std::move(v), ManifoldTag::r1());
      ++row;
      continue;
    }
    // dim rows for one id
    std::vector<std::vector<double>> comps;
    while (row < lines.size()) {
      const auto c2 = split(lines[row].text);
      const std::size_t l2 = lines[row].number;
      if (c2.size() != n + offset)
        fail(source, l2, "expected " + std::to_string(n + offset) + " fields, found " + std::to_string(c2.size()));
      if (c2[0] != id)
        break;
      const double d = cell_double(c2[1], source, l2);
      if (d != static_cast<double>(comps.size()))
        fail(source, l2, "component index " + std::string(c2[1]) + " out of order for id '" + id + "'");
      std::vector<double> vals(n);
      for (std::size_t c = 0; c < n; ++c)
        vals[c] = cell_double(c2[c + 2], source, l2);
      comps.push_back(std::move(vals));
      ++row;
    }
    const int dim = static_cast<int>(comps.size());
    const bool s2 = declared == std::optional<std::string>("S2");
    if (dim < 2)
      fail(source, ln, "id '" + id + "' has " + std::to_string(dim) + " component rows; multi-dimensional files need >= 2");
    if (s2 && dim != 3)
      fail(source, ln, "S2 id '" + id + "' needs 3 component rows");
    if (!out.trajectories.empty() && out.trajectories.front().dim() != dim)
      fail(source, ln, "id '" + id + "' has dimension " + std::to_string(dim) + ", earlier ids have " +
                           std::to_string(out.trajectories.front().dim()));
    Eigen::MatrixXd v(dim, static_cast<Eigen::Index>(n));
    for (int d = 0; d < dim; ++d)
      for (std::size_t c = 0; c < n; ++c)
        v(d, static_cast<Eigen::Index>(c)) = comps[static_cast<std::size_t>(d)][c];
    if (s2) {
      for (Eigen::Index c = 0; c < v.cols(); ++c) {
        const double norm = v.col(c).norm();
        const double dev = std::abs(norm - 1.0);
        if (dev > 1e-3)
          fail(source, ln, "id '" + id + "' point " + std::to_string(c) + " has norm " + format_double(norm) +
                               ", not on the unit sphere");
        if (dev > 1e-6)
          out.warnings.push_back(std::string(source) + ":" + std::to_string(ln) + ": id '" + id + "' point " +
                                 std::to_string(c) + " renormalized from norm " + format_double(norm));
        if (dev > 1e-12)
          v.col(c) /= norm;
      }
    }
    out.ids.push_back(id);
    out.trajectories.emplace_back(*grid, std::move(v), s2 ? ManifoldTag::s2() : ManifoldTag::rn(dim));
  }
  if (!out.trajectories.empty())
    out.tag = out.trajectories.front().tag();
  else if (declared == std::optional<std::string>("S2"))
    out.tag = ManifoldTag::s2();
  return out;
}

TrajectorySet parse_trajectory_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorCode::Parse, "cannot open " + path.string());
  return read_trajectory_csv(in, path.string());
}

void write_trajectory_csv(std::ostream& out, std::span<const Trajectory> trajectories,
                          std::span<const std::string> ids) {
  if (trajectories.empty())
    throw Error(ErrorCode::InvalidArgument, "nothing to write");
  if (!ids.empty() && ids.size() != trajectories.size())
    throw Error(ErrorCode::DimensionMismatch, "ids and trajectories differ in count");
  const auto& first = trajectories.front();
  for (const auto& t : trajectories) {
    if (!(t.tag() == first.tag()))
      throw Error(ErrorCode::InvalidArgument, "trajectories carry different manifold tags");
    if (!(t.grid() == first.grid()))
      throw Error(ErrorCode::GridMismatch, "trajectories must share one grid");
  }
  const bool multi = first.tag().kind() != ManifoldTag::Kind::R1;
  out << "# manifold=" << to_string(first.tag().kind()) << '\n';
  out << (multi ? "t,dim" : "t");
  for (double g : first.grid().points())
    out << ',' << format_double(g);
  out << '\n';
  for (std::size_t i = 0; i < trajectories.size(); ++i) {
    const std::string id = ids.empty() ? std::to_string(i) : ids[i];
    const auto& v = trajectories[i].values();
    for (Eigen::Index d = 0; d < v.rows(); ++d) {
      out << id;
      if (multi)
        out << ',' << d;
      for (Eigen::Index c = 0; c < v.cols(); ++c)
        out << ',' << format_double(v(d, c));
      out << '\n';
    }
  }
}

void write_labels_csv(std::ostream& out, const LabeledSample& sample) {
  out << "id,shape_outlier,magnitude_outlier\n";
  for (std::size_t i = 0; i < sample.trajectories.size(); ++i)
    out << i << ',' << (sample.shape_outlier[i] ? 1 : 0) << ',' << (sample.magnitude_outlier[i] ? 1 : 0)
        << '\n';
}

bool BoundingBox::contains(double lat, double lon) const {
  return lat >= lat_min && lat <= lat_max && lon >= lon_min && lon <= lon_max;
}

Eigen::Vector3d lat_lon_to_unit(double lat_degrees, double lon_degrees) {
  const double phi = lat_degrees * std::numbers::pi / 180.0;
  const double lam = lon_degrees * std::numbers::pi / 180.0;
  Eigen::Vector3d p(std::cos(phi) * std::cos(lam), std::cos(phi) * std::sin(lam), std::sin(phi));
  return p / p.norm();
}

HurricaneTracks read_hurricane_tracks(std::istream& in, const HurricaneOptions& options,
                                      std::string_view source) {
  if (options.grid_size < 3)
    throw Error(ErrorCode::InvalidArgument, "hurricane grid size must be at least 3");
  struct Obs {
    double time;
    double lat;
    double lon;
  };
  std::vector<std::string> order;
  std::map<std::string, std::vector<Obs>> storms;
  std::string text;
  bool first_row = true;
  for (std::size_t number = 1; std::getline(in, text); ++number) {
    const std::string_view t = trim(text);
    if (t.empty() || t.front() == '#')
      continue;
    const auto cells = split(t);
    if (cells.size() != 4)
      fail(source, number, "expected 4 fields (storm_id,timestamp,lat,lon), found " + std::to_string(cells.size()));
    if (first_row) {
      first_row = false;
      if (!to_double(cells[2]))
        continue;
    }
    const auto time = parse_timestamp(cells[1]);
    if (!time)
      fail(source, number, "unreadable timestamp '" + std::string(cells[1]) + "'");
    const double lat = cell_double(cells[2], source, number);
    const double lon = cell_double(cells[3], source, number);
    if (lat < -90.0 || lat > 90.0)
      fail(source, number, "latitude " + format_double(lat) + " outside [-90, 90]");
    if (lon < -180.0 || lon > 180.0)
      fail(source, number, "longitude " + format_double(lon) + " outside [-180, 180]");
    const std::string id(cells[0]);
    auto [it, inserted] = storms.try_emplace(id);
    if (inserted)
      order.push_back(id);
    it->second.push_back({*time, lat, lon});
  }

  HurricaneTracks out;
  const Grid target = Grid::uniform(options.grid_size);
  const std::size_t minimum = std::max<std::size_t>(options.min_observations, 3);
  for (const auto& id : order) {
    auto obs = storms[id];
    std::stable_sort(obs.begin(), obs.end(), [](const Obs& a, const Obs& b) { return a.time < b.time; });
    const std::size_t before = obs.size();
    obs.erase(std::unique(obs.begin(), obs.end(), [](const Obs& a, const Obs& b) { return a.time == b.time; }),
              obs.end());
    if (obs.size() != before)
      out.notices.push_back("storm " + id + ": dropped " + std::to_string(before - obs.size()) +
                            " record(s) with repeated timestamps");
    if (obs.size() < minimum) {
      out.notices.push_back("storm " + id + ": dropped, " + std::to_string(obs.size()) +
                            " observations (minimum " + std::to_string(minimum) + ")");
      continue;
    }
    if (options.origin_box && !options.origin_box->contains(obs.front().lat, obs.front().lon)) {
      out.notices.push_back("storm " + id + ": dropped, origin outside bounding box");
      continue;
    }
    const double t0 = obs.front().time;
    const double span = obs.back().time - t0;
    std::vector<double> times(obs.size());
    Eigen::MatrixXd pts(3, static_cast<Eigen::Index>(obs.size()));
    for (std::size_t i = 0; i < obs.size(); ++i) {
      times[i] = (obs[i].time - t0) / span;
      pts.col(static_cast<Eigen::Index>(i)) = lat_lon_to_unit(obs[i].lat, obs[i].lon);
    }
    times.front() = 0.0;
    times.back() = 1.0;
    try {
      const Trajectory raw(Grid(std::move(times)), std::move(pts), ManifoldTag::s2());
      out.tracks.push_back(resample(raw, target));
      out.storm_ids.push_back(id);
    } catch (const Error& e) {
      out.notices.push_back("storm " + id + ": dropped, " + e.what());
    }
  }
  return out;
}

HurricaneTracks parse_hurricane_tracks(const std::filesystem::path& path, const HurricaneOptions& options) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorCode::Parse, "cannot open " + path.string());
  return read_hurricane_tracks(in, options, path.string());
}

} // namespace edepth
