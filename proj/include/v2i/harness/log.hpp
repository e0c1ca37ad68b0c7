/*
 * Copyright (C) 2026 The v2i-testbed Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License"); you may not
 * use this file except in compliance with the License. You may obtain a copy of
 * the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
 * WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
 * License for the specific language governing permissions and limitations under
 * the License.
 */

#pragma once

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "v2i/error.hpp"
#include "v2i/messages.hpp"

namespace v2i::harness {

// Algorithm state column. GLOSA uses the approaching state codes 1..4; RLVW
// reports kRlvwMonitoring while it is evaluating the warning.
inline constexpr int kStateInactive = 0; // no MAP, no lane match, or stop bar passed
inline constexpr int kRlvwMonitoring = 1;
inline constexpr int kStateStale = -2; // SPaT missing or older than the freshness window

struct LogRow {
  double t = 0.0;
  double d_int = -1.0; // m, -1 when no lane is matched
  double v_kmh = 0.0;
  int light = 3; // GREEN=1, YELLOW=2, RED=3
  int algo_state = kStateInactive;
  bool warn = false;
  double v_min = -1.0; // km/h
  double v_max = -1.0; // km/h
  double time_to_green = -1.0;

  friend bool operator==(const LogRow&, const LogRow&) = default;
};

struct TimeSeriesLog {
  std::vector<LogRow> rows;
  friend bool operator==(const TimeSeriesLog&, const TimeSeriesLog&) = default;
};

inline constexpr std::string_view kCsvHeader =
    "t,d_int,v_veh_kmh,light_state,algo_state,warn,v_min_kmh,v_max_kmh,time_to_green";

/// Shortest text that parses back to the same double.
inline std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s) {
  double x = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw ParseError("bad number '" + std::string(s) + "'");
  }
  return x;
}

inline int parse_int(std::string_view s) {
  int x = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw ParseError("bad integer '" + std::string(s) + "'");
  }
  return x;
}

inline std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline std::string csv_row(const LogRow& r) {
  std::string s;
  s += format_double(r.t) + ',' + format_double(r.d_int) + ',' + format_double(r.v_kmh) + ',';
  s += std::to_string(r.light) + ',' + std::to_string(r.algo_state) + ',' + (r.warn ? '1' : '0');
  s += ',' + format_double(r.v_min) + ',' + format_double(r.v_max) + ',' +
       format_double(r.time_to_green);
  return s;
}

inline std::string to_csv(const TimeSeriesLog& log) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& r : log.rows) out += csv_row(r) + '\n';
  return out;
}

inline TimeSeriesLog from_csv(std::string_view text) {
  TimeSeriesLog log;
  bool header = true;
  for (auto line : split(text, '\n')) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (header) {
      if (line != kCsvHeader) throw ParseError("unexpected CSV header");
      header = false;
      continue;
    }
    const auto f = split(line, ',');
    if (f.size() != 9) throw ParseError("CSV row needs 9 fields");
    LogRow r;
    r.t = parse_double(f[0]);
    r.d_int = parse_double(f[1]);
    r.v_kmh = parse_double(f[2]);
    r.light = parse_int(f[3]);
    r.algo_state = parse_int(f[4]);
    r.warn = parse_int(f[5]) != 0;
    r.v_min = parse_double(f[6]);
    r.v_max = parse_double(f[7]);
    r.time_to_green = parse_double(f[8]);
    log.rows.push_back(r);
  }
  if (header) throw ParseError("empty CSV");
  return log;
}

inline const char* light_color(int light) {
  switch (light) {
  case 1: return "green";
  case 2: return "yellow";
  case 3: return "red";
  }
  return "unknown";
}

/// Whitespace-separated columns for gnuplot-style tools, followed by one
/// band per contiguous light state ("# band <t_start> <t_end> <color>").
inline std::string to_plotdata(const TimeSeriesLog& log) {
  std::string out = "# t d_int v_veh_kmh light_state algo_state warn v_min_kmh v_max_kmh "
                    "time_to_green light_color\n";
  for (const auto& r : log.rows) {
    auto row = csv_row(r);
    for (auto& c : row) {
      if (c == ',') c = ' ';
    }
    out += row + ' ' + light_color(r.light) + '\n';
  }
  std::size_t i = 0;
  while (i < log.rows.size()) {
    std::size_t j = i;
    while (j + 1 < log.rows.size() && log.rows[j + 1].light == log.rows[i].light) ++j;
    out += "# band " + format_double(log.rows[i].t) + ' ' + format_double(log.rows[j].t) + ' ' +
           light_color(log.rows[i].light) + '\n';
    i = j + 1;
  }
  return out;
}

enum class ExportFormat { CSV, PLOTDATA };

inline void export_log(const TimeSeriesLog& log, ExportFormat fmt, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path + " for writing");
  f << (fmt == ExportFormat::CSV ? to_csv(log) : to_plotdata(log));
  if (!f) throw IoError("write to " + path + " failed");
}

inline std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

inline TimeSeriesLog import_csv(const std::string& path) { return from_csv(read_file(path)); }

// ---------------------------------------------------------------------------
// Event sequences: the ordered transitions a scenario is expected to show.

enum class Application { RLVW, GLOSA };

inline const char* to_string(Application a) { return a == Application::RLVW ? "RLVW" : "GLOSA"; }

inline Application application_from_string(std::string_view s) {
  if (s == "RLVW") return Application::RLVW;
  if (s == "GLOSA") return Application::GLOSA;
  throw ParseError("unknown application '" + std::string(s) + "'");
}

/// Events, one per line:
///   WARN_ON <light>        warning raised
///   WARN_OFF <light>       warning cleared
///   STATE <code> <light>   GLOSA approaching state entered
///   STOP <light>           vehicle came to rest before the stop bar
///   CROSS <light> MOVING|STOPPED   stop bar reached
/// Nothing after the crossing is reported.
inline std::vector<std::string> extract_events(const TimeSeriesLog& log, Application app) {
  std::vector<std::string> ev;
  const auto light = [](int code) { return std::string(to_string(light_from_code(code))); };
  bool warn = false;
  int state = kStateInactive;
  bool moving = false;
  bool approached = false;
  for (const auto& r : log.rows) {
    if (approached && r.d_int <= 0.0) {
      ev.push_back("CROSS " + light(r.light) + (r.v_kmh > 0.0 ? " MOVING" : " STOPPED"));
      break;
    }
    if (r.d_int > 0.0) approached = true;
    if (app == Application::RLVW) {
      if (r.warn != warn) ev.push_back((r.warn ? "WARN_ON " : "WARN_OFF ") + light(r.light));
    } else if (r.algo_state != state && r.algo_state >= 1 && r.algo_state <= 4) {
      ev.push_back("STATE " + std::to_string(r.algo_state) + ' ' + light(r.light));
    }
    warn = r.warn;
    if (r.algo_state >= 1) state = r.algo_state;
    if (r.v_kmh > 0.0) {
      moving = true;
    } else if (moving) {
      ev.push_back("STOP " + light(r.light));
      moving = false;
    }
  }
  return ev;
}

/// Reads an expectation file; '#' starts a comment, blank lines are ignored.
inline std::vector<std::string> parse_events(std::string_view text) {
  std::vector<std::string> ev;
  for (auto line : split(text, '\n')) {
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.remove_suffix(1);
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.front()))) line.remove_prefix(1);
    if (!line.empty()) ev.emplace_back(line);
  }
  return ev;
}

inline std::string format_events(const std::vector<std::string>& ev) {
  std::string out;
  for (const auto& e : ev) out += e + '\n';
  return out;
}

} // namespace v2i::harness
