#pragma once

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "lcmanifold/dynamics.hpp"
#include "lcmanifold/errors.hpp"
#include "lcmanifold/integrate.hpp"
#include "lcmanifold/types.hpp"

namespace lcm {

/// Render a double with 17 significant digits, locale-independent
/// ('.' decimal separator always). 17 digits round-trip binary64 exactly.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view text, const std::string& context) {
  double v = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc{} || res.ptr != end)
    throw ConfigError("cannot parse number '" + std::string(text) + "' in " + context);
  return v;
}

/// Write-to-temp-then-rename so consumers never observe a partial file;
/// the temp file is removed if `fill` throws.
template <class Fill>
void write_file_atomic(const std::filesystem::path& path, Fill&& fill) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot open output file " + tmp.string());
    try {
      fill(out);
    } catch (...) {
      out.close();
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw;
    }
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw ConfigError("failed writing " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, path);
}

inline void write_csv_full3d(const std::filesystem::path& path,
                             const Trajectory<State3>& traj) {
  write_file_atomic(path, [&](std::ostream& out) {
    out << "t,x,y,z\n";
    for (std::size_t i = 0; i < traj.size(); ++i) {
      const State3& s = traj.states[i];
      out << format_double(traj.times[i]) << ',' << format_double(s.x) << ','
          << format_double(s.y) << ',' << format_double(s.z) << '\n';
    }
  });
}

inline void write_csv_polar(const std::filesystem::path& path, const PolarSeries& series) {
  write_file_atomic(path, [&](std::ostream& out) {
    out << "t,R,theta\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
      out << format_double(series.times[i]) << ',' << format_double(series.R[i]) << ','
          << format_double(series.theta[i]) << '\n';
    }
  });
}

namespace detail {

inline std::vector<std::string_view> split_csv_line(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return fields;
}

}  // namespace detail

/// Load a trajectory CSV as a polar series. A `t,R,theta` file is taken
/// verbatim; a `t,x,y,z` file is projected onto the plane and converted.
inline PolarSeries load_polar_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open trajectory file " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw InsufficientDataError("empty trajectory file");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  const bool polar = line == "t,R,theta";
  const bool cartesian = line == "t,x,y,z";
  if (!polar && !cartesian)
    throw ConfigError("unrecognized CSV header '" + line + "' in " + path.string());

  Trajectory<Vec2> planar;
  PolarSeries series;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = detail::split_csv_line(line);
    const std::string ctx = path.string() + ":" + std::to_string(row);
    if (polar) {
      if (fields.size() != 3) throw ConfigError("expected 3 columns in " + ctx);
      series.times.push_back(parse_double(fields[0], ctx));
      series.R.push_back(parse_double(fields[1], ctx));
      series.theta.push_back(parse_double(fields[2], ctx));
    } else {
      if (fields.size() != 4) throw ConfigError("expected 4 columns in " + ctx);
      planar.times.push_back(parse_double(fields[0], ctx));
      planar.states.push_back({parse_double(fields[1], ctx), parse_double(fields[2], ctx)});
    }
  }
  if (cartesian) series = to_polar(planar);
  for (std::size_t i = 1; i < series.size(); ++i)
    if (std::abs(series.theta[i] - series.theta[i - 1]) >= std::numbers::pi)
      throw InsufficientDataError(
          "trajectory is sampled too coarsely: angle jumps by >= pi between rows " +
          std::to_string(i) + " and " + std::to_string(i + 1));
  return series;
}

}  // namespace lcm
