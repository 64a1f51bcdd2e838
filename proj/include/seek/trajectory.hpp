#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <iterator>
#include <filesystem>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <fmt/format.h>

#include "seek/env.hpp"

namespace seek {

inline constexpr std::string_view kTrajectoryHeader =
    "step,x,y,heading,action,reward,c,c_f,s1,s2,l_front,l_right,l_back,l_left,distance";

inline std::string trajectory_csv(const std::vector<TrajectoryRow>& rows) {
  std::string out(kTrajectoryHeader);
  out += '\n';
  for (const auto& r : rows) {
    out += fmt::format("{},{:.6f},{:.6f},{:.6f},{},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f}\n",
                       r.step, r.pose.position.x, r.pose.position.y, r.pose.heading,
                       r.action ? action_name(*r.action) : std::string_view("none"), r.reward, r.c, r.c_f,
                       r.s1, r.s2, r.scan.front, r.scan.right, r.scan.back, r.scan.left, r.distance);
  }
  return out;
}

class TrajectoryParseError : public std::runtime_error {
 public:
  TrajectoryParseError(const std::string& origin, std::size_t line, const std::string& what)
      : std::runtime_error(fmt::format("{}:{}: {}", origin, line, what)), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

namespace detail {

inline std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

inline std::optional<double> to_double(std::string_view s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace detail

/// Parses a trajectory log. Line numbers in errors count the header as 1.
inline std::vector<TrajectoryRow> parse_trajectory(std::string_view text, const std::string& origin = "trajectory") {
  std::vector<TrajectoryRow> rows;
  std::size_t line_no = 0;
  bool header = false;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (!header) {
      if (line != kTrajectoryHeader) throw TrajectoryParseError(origin, line_no, "unexpected header");
      header = true;
      continue;
    }
    const auto cells = detail::split_csv(line);
    if (cells.size() != 15) throw TrajectoryParseError(origin, line_no, fmt::format("expected 15 fields, got {}", cells.size()));
    std::array<double, 15> v{};
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i == 4) continue;
      const auto d = detail::to_double(cells[i]);
      if (!d) throw TrajectoryParseError(origin, line_no, fmt::format("field {} is not a number", i + 1));
      v[i] = *d;
    }
    TrajectoryRow r;
    r.step = static_cast<int>(v[0]);
    r.pose = {{v[1], v[2]}, v[3]};
    if (cells[4] == "forward") r.action = Action::Forward;
    else if (cells[4] == "left") r.action = Action::Left;
    else if (cells[4] == "right") r.action = Action::Right;
    else if (cells[4] != "none") throw TrajectoryParseError(origin, line_no, "unknown action");
    r.reward = v[5];
    r.c = v[6];
    r.c_f = v[7];
    r.s1 = v[8];
    r.s2 = v[9];
    r.scan = {v[10], v[11], v[12], v[13]};
    r.distance = v[14];
    rows.push_back(r);
  }
  if (rows.empty()) throw TrajectoryParseError(origin, line_no, "trajectory log has no rows");
  return rows;
}

inline std::vector<TrajectoryRow> load_trajectory(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open: " + path.string());
  const std::string text{std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
  return parse_trajectory(text, path.string());
}

}  // namespace seek
