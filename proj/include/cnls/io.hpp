#pragma once

// Persistence: profile and state CSVs, key=value energy reports, sweep tables.
// Floats carry 17 significant digits; files are written to a temporary and
// renamed into place.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cnls/beta_threshold.hpp"
#include "cnls/energy.hpp"
#include "cnls/error.hpp"
#include "cnls/radial_grid.hpp"

namespace cnls::io {

inline std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline void write_atomic(const std::filesystem::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw Error(ErrorCode::IoError, "cannot open " + tmp.string());
    os << content;
    os.flush();
    if (!os) throw Error(ErrorCode::IoError, "failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot rename " + tmp.string() + ": " + ec.message());
}

inline std::string profile_csv(const Profile& p) {
  std::string out = "r,u\n";
  for (std::size_t i = 0; i < p.size(); ++i) out += fmt(p.grid().r(i)) + "," + fmt(p[i]) + "\n";
  return out;
}

inline std::string state_csv(const State& s) {
  std::string out = "r,u,v\n";
  for (std::size_t i = 0; i < s.u.size(); ++i) {
    out += fmt(s.grid().r(i)) + "," + fmt(s.u[i]) + "," + fmt(s.v[i]) + "\n";
  }
  return out;
}

inline std::string report_text(const EnergyReport& r) {
  return "I=" + fmt(r.I) + "\nJ=" + fmt(r.J) + "\nK=" + fmt(r.K) + "\nW=" + fmt(r.W) + "\nnormH1_sq=" +
         fmt(r.normH1_sq) + "\nresidual_u=" + fmt(r.residual_u) + "\nresidual_v=" + fmt(r.residual_v) + "\n";
}

inline std::string sweep_csv(const SweepResult& s) {
  std::string out = "beta,m,kind,scalar_min,lhs_bound,beats\n";
  for (const auto& row : s.rows) {
    out += fmt(row.beta) + "," + fmt(row.m) + "," + (row.ok ? std::string(to_string(row.kind)) : "failed") + "," +
           fmt(row.scalar_min) + "," + fmt(row.lhs_bound) + "," + (row.beats ? "true" : "false") + "\n";
  }
  return out;
}

namespace detail {

inline std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  return parts;
}

inline double parse_double(const std::string& s, int line) {
  const char* begin = s.c_str();
  char* end = nullptr;
  const double x = std::strtod(begin, &end);
  while (end && (*end == ' ' || *end == '\r' || *end == '\t')) ++end;
  if (end == begin || (end && *end != '\0')) {
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": not a number: '" + s + "'");
  }
  return x;
}

}  // namespace detail

/// Parses an `r,u,v` table and checks that its nodes are those of grid.
inline State parse_state_csv(const std::string& text, const GridPtr& grid) {
  std::stringstream ss(text);
  std::string line;
  if (!std::getline(ss, line)) throw Error(ErrorCode::ParseError, "empty state file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "r,u,v") throw Error(ErrorCode::ParseError, "expected header 'r,u,v', got '" + line + "'");
  std::vector<double> u, v;
  int lineno = 1;
  while (std::getline(ss, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cols = detail::split(line, ',');
    if (cols.size() != 3) throw Error(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": expected 3 columns");
    const double r = detail::parse_double(cols[0], lineno);
    const std::size_t i = u.size();
    if (i >= grid->size() || std::fabs(r - grid->r(i)) > 1e-9 * (1.0 + grid->R())) {
      throw Error(ErrorCode::GridMismatch, "line " + std::to_string(lineno) + ": node does not match the configured grid");
    }
    u.push_back(detail::parse_double(cols[1], lineno));
    v.push_back(detail::parse_double(cols[2], lineno));
  }
  if (u.size() != grid->size()) {
    throw Error(ErrorCode::GridMismatch, "state has " + std::to_string(u.size()) + " nodes, grid has " +
                                             std::to_string(grid->size()));
  }
  return State(Profile(grid, std::move(u)), Profile(grid, std::move(v)));
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorCode::IoError, "cannot read " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace cnls::io
