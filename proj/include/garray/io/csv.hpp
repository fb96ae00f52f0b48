#pragma once

/**
 * @file csv.hpp
 * @brief CSV tables: comma separated, '.' decimal, mandatory header row,
 * doubles in shortest round-trip scientific notation ("nan" for invalid).
 */

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "garray/analysis.hpp"
#include "garray/invariants.hpp"
#include "garray/kinematics.hpp"

namespace garray::io {

/// Malformed input file; the message names the source and line.
class ParseError : public ConfigError {
public:
  using ConfigError::ConfigError;
};

/// I/O failure (unreadable or unwritable path).
class IoError : public Error {
public:
  using Error::Error;
};

inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::scientific);
  if (ec != std::errc{}) throw Error("format_double: to_chars failed");
  return std::string(buf, ptr);
}

inline double parse_double(std::string_view s, const std::string& where) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  if (s == "nan" || s == "NaN") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const char* first = s.data();
  if (!s.empty() && s.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
    throw ParseError(where + ": not a number: '" + std::string(s) + "'");
  }
  return v;
}

inline std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> out;
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.emplace_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

/// Parsed numeric table with its header. Line numbers are 1-based and count the header.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

inline CsvTable read_csv(std::istream& in, const std::string& source, const std::vector<std::string>& expected_header) {
  CsvTable table;
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw ParseError(source + ":1: missing header row");
  ++line_no;
  table.header = split_csv_line(line);
  if (table.header != expected_header) {
    std::string want;
    for (const auto& h : expected_header) want += (want.empty() ? "" : ",") + h;
    throw ParseError(source + ":1: unexpected header, expected '" + want + "'");
  }
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto cells = split_csv_line(line);
    const std::string where = source + ":" + std::to_string(line_no);
    if (cells.size() != expected_header.size()) {
      throw ParseError(where + ": expected " + std::to_string(expected_header.size()) + " fields, got " +
                       std::to_string(cells.size()));
    }
    std::vector<double> row(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) row[c] = parse_double(cells[c], where + " column " + expected_header[c]);
    table.rows.push_back(std::move(row));
  }
  return table;
}

inline CsvTable read_csv_file(const std::string& path, const std::vector<std::string>& expected_header) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return read_csv(in, path, expected_header);
}

/// Recovers a uniform grid from a time column; rejects non-uniform sampling.
inline TimeGrid grid_from_times(const std::vector<double>& t, const std::string& source) {
  if (t.size() < 2) throw InsufficientDataError(source + ": need at least 2 samples");
  const double t0 = t.front();
  const double span = t.back() - t0;
  if (!(span > 0.0)) throw ParseError(source + ": time column must increase");
  double rate = static_cast<double>(t.size() - 1) / span;
  const double rounded = std::round(rate);
  if (rounded > 0.0 && std::abs(rate - rounded) <= 1e-9 * rate) rate = rounded;
  TimeGrid grid{rate, t.size(), t0};
  const double tol = 1e-6 / rate;
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (std::abs(t[k] - grid.time(k)) > tol) {
      throw ParseError(source + ":" + std::to_string(k + 2) + ": non-uniform sampling at t=" + format_double(t[k]));
    }
  }
  return grid;
}

// ---------------------------------------------------------------------------
// Track files

inline const std::vector<std::string>& track_header() {
  static const std::vector<std::string> h{"t", "px", "py", "pz", "vx", "vy", "vz", "ax", "ay", "az"};
  return h;
}

namespace detail {

inline void write_values(std::ostream& out, std::initializer_list<double> values) {
  bool first = true;
  for (double v : values) {
    if (!first) out << ',';
    out << format_double(v);
    first = false;
  }
}

inline void write_row(std::ostream& out, std::initializer_list<double> values) {
  write_values(out, values);
  out << '\n';
}

inline void write_header(std::ostream& out, const std::vector<std::string>& header) {
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
}

}  // namespace detail

inline void write_track_csv(std::ostream& out, const KinematicTrack& track) {
  track.validate();
  detail::write_header(out, track_header());
  for (std::size_t k = 0; k < track.size(); ++k) {
    const Vec3& p = track.position[k];
    const Vec3& v = track.velocity[k];
    const Vec3& a = track.acceleration[k];
    detail::write_row(out, {track.grid.time(k), p.x(), p.y(), p.z(), v.x(), v.y(), v.z(), a.x(), a.y(), a.z()});
  }
}

inline std::string track_csv(const KinematicTrack& track) {
  std::ostringstream os;
  write_track_csv(os, track);
  return os.str();
}

/// Reads a track file; the result has provenance ingested.
inline KinematicTrack read_track_csv(std::istream& in, const std::string& source) {
  const CsvTable table = read_csv(in, source, track_header());
  std::vector<double> t;
  t.reserve(table.rows.size());
  for (const auto& r : table.rows) t.push_back(r[0]);
  KinematicTrack track;
  track.grid = grid_from_times(t, source);
  track.provenance = Provenance::ingested;
  for (std::size_t k = 0; k < table.rows.size(); ++k) {
    const auto& r = table.rows[k];
    track.position.emplace_back(r[1], r[2], r[3]);
    track.velocity.emplace_back(r[4], r[5], r[6]);
    track.acceleration.emplace_back(r[7], r[8], r[9]);
    if (!track.position.back().allFinite() || !track.velocity.back().allFinite() ||
        !track.acceleration.back().allFinite()) {
      throw ParseError(source + ":" + std::to_string(k + 2) + ": non-finite kinematics");
    }
  }
  return track;
}

inline KinematicTrack read_track_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return read_track_csv(in, path);
}

// ---------------------------------------------------------------------------
// Per-sample distance tables

inline const std::vector<std::string>& figure11_header() {
  static const std::vector<std::string> h{"t",     "px",    "py",    "pz",      "speed",     "alpha",
                                          "q",     "d_truth", "d_eq1", "d_eq2", "d_eq3",     "d_eq5",
                                          "valid_eq1", "valid_eq2", "valid_eq3", "valid_eq5"};
  return h;
}

inline void write_figure11_csv(std::ostream& out, const Figure11Table& rows) {
  detail::write_header(out, figure11_header());
  for (const auto& r : rows) {
    detail::write_values(out, {r.t, r.position.x(), r.position.y(), r.position.z(), r.speed, r.alpha, r.q,
                               r.d_truth, r.d_eq1, r.d_eq2, r.d_eq3, r.d_eq5});
    out << ',' << int(r.valid_eq1) << ',' << int(r.valid_eq2) << ',' << int(r.valid_eq3) << ','
        << int(r.valid_eq5) << '\n';
  }
}

inline std::string figure11_csv(const Figure11Table& rows) {
  std::ostringstream os;
  write_figure11_csv(os, rows);
  return os.str();
}

inline Figure11Table read_figure11_csv(std::istream& in, const std::string& source) {
  const CsvTable table = read_csv(in, source, figure11_header());
  Figure11Table rows;
  rows.reserve(table.rows.size());
  for (std::size_t k = 0; k < table.rows.size(); ++k) {
    const auto& c = table.rows[k];
    Figure11Row r;
    r.t = c[0];
    r.position = Vec3(c[1], c[2], c[3]);
    r.speed = c[4];
    r.alpha = c[5];
    r.q = c[6];
    r.d_truth = c[7];
    r.d_eq1 = c[8];
    r.d_eq2 = c[9];
    r.d_eq3 = c[10];
    r.d_eq5 = c[11];
    bool* flags[] = {&r.valid_eq1, &r.valid_eq2, &r.valid_eq3, &r.valid_eq5};
    for (int f = 0; f < 4; ++f) {
      const double v = c[12 + f];
      if (v != 0.0 && v != 1.0) {
        throw ParseError(source + ":" + std::to_string(k + 2) + ": validity flag must be 0 or 1");
      }
      *flags[f] = v == 1.0;
    }
    rows.push_back(r);
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Slope output and generic vector inputs

inline const std::vector<std::string>& slope_header() {
  static const std::vector<std::string> h{"t",        "fx",       "fy",       "fz",       "nx", "ny", "nz",
                                          "balance_x", "balance_y", "balance_z", "slope_rad", "valid"};
  return h;
}

inline void write_slope_csv(std::ostream& out, const TimeGrid& grid, const InertialStream& inertial,
                            const SupportStream& support, const SlopeEstimate& slope) {
  detail::write_header(out, slope_header());
  for (std::size_t k = 0; k < grid.n_samples; ++k) {
    const Vec3& f = inertial.specific_force[k];
    const Vec3& n = support.surface_normal[k];
    const Vec3& b = slope.direction_of_balance[k];
    detail::write_values(out, {grid.time(k), f.x(), f.y(), f.z(), n.x(), n.y(), n.z(), b.x(), b.y(), b.z(),
                               slope.slope_angle[k]});
    out << ',' << int(slope.valid[k]) << '\n';
  }
}

/// Reads a t,x,y,z style file with the given column names.
inline std::pair<TimeGrid, Series3> read_vec3_csv(const std::string& path, const std::vector<std::string>& header) {
  const CsvTable table = read_csv_file(path, header);
  std::vector<double> t;
  Series3 values;
  for (const auto& r : table.rows) {
    t.push_back(r[0]);
    values.emplace_back(r[1], r[2], r[3]);
  }
  return {grid_from_times(t, path), values};
}

}  // namespace garray::io
