#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace seek {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
  friend constexpr bool operator==(Vec2, Vec2) = default;

  double norm() const { return std::hypot(x, y); }
};

inline double distance(Vec2 a, Vec2 b) { return (a - b).norm(); }

/// Wraps an angle into (-pi, pi].
inline double normalize_angle(double a) {
  double r = std::remainder(a, 2.0 * std::numbers::pi);
  if (r <= -std::numbers::pi) r += 2.0 * std::numbers::pi;
  return r;
}

struct Pose {
  Vec2 position;
  double heading = 0.0;  // radians, (-pi, pi]
};

/// Axis-aligned box obstacle.
struct Obstacle {
  Vec2 center;
  Vec2 half_extents;

  double min_x() const { return center.x - half_extents.x; }
  double max_x() const { return center.x + half_extents.x; }
  double min_y() const { return center.y - half_extents.y; }
  double max_y() const { return center.y + half_extents.y; }

  bool overlaps(const Obstacle& o) const {
    return min_x() < o.max_x() && o.min_x() < max_x() && min_y() < o.max_y() &&
           o.min_y() < max_y();
  }
};

/// Euclidean distance from a point to a box (0 when inside).
inline double distance_to_box(Vec2 p, const Obstacle& box) {
  const double dx = std::max({box.min_x() - p.x, 0.0, p.x - box.max_x()});
  const double dy = std::max({box.min_y() - p.y, 0.0, p.y - box.max_y()});
  return std::hypot(dx, dy);
}

/// Closed rectangular room [0, width] x [0, height]. Walls are obstacles for
/// both ranging and collision.
struct Arena {
  double width = 5.0;
  double height = 5.0;
  std::vector<Obstacle> obstacles;

  bool contains(Vec2 p) const {
    return p.x >= 0.0 && p.x <= width && p.y >= 0.0 && p.y <= height;
  }
  Vec2 center() const { return {0.5 * width, 0.5 * height}; }
};

/// Body-frame laser readings in meters.
struct LaserScan {
  double front = 0.0;
  double right = 0.0;
  double back = 0.0;
  double left = 0.0;
};

inline constexpr double kLaserMaxRange = 5.0;

namespace detail {

// Slab intersection of a ray with a box. Returns the entry distance, 0 when
// the origin is inside, or +inf when the ray misses.
inline double ray_box(Vec2 o, Vec2 d, const Obstacle& box) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  double t_near = -inf;
  double t_far = inf;
  const double lo[2] = {box.min_x(), box.min_y()};
  const double hi[2] = {box.max_x(), box.max_y()};
  const double org[2] = {o.x, o.y};
  const double dir[2] = {d.x, d.y};
  for (int axis = 0; axis < 2; ++axis) {
    if (dir[axis] == 0.0) {
      if (org[axis] < lo[axis] || org[axis] > hi[axis]) return inf;
      continue;
    }
    double t0 = (lo[axis] - org[axis]) / dir[axis];
    double t1 = (hi[axis] - org[axis]) / dir[axis];
    if (t0 > t1) std::swap(t0, t1);
    t_near = std::max(t_near, t0);
    t_far = std::min(t_far, t1);
  }
  if (t_near > t_far || t_far < 0.0) return inf;
  return std::max(t_near, 0.0);
}

// Distance along the ray to the room boundary, origin assumed inside.
inline double ray_walls(Vec2 o, Vec2 d, double width, double height) {
  double t = std::numeric_limits<double>::infinity();
  if (d.x > 0.0) t = std::min(t, (width - o.x) / d.x);
  if (d.x < 0.0) t = std::min(t, -o.x / d.x);
  if (d.y > 0.0) t = std::min(t, (height - o.y) / d.y);
  if (d.y < 0.0) t = std::min(t, -o.y / d.y);
  return t;
}

}  // namespace detail

/// Distance from origin along a unit direction to the nearest wall or
/// obstacle face, clamped to [0, max_range].
inline double raycast(Vec2 origin, Vec2 direction, const Arena& arena, double max_range) {
  if (!arena.contains(origin)) throw std::domain_error("raycast: origin outside arena");
  double t = detail::ray_walls(origin, direction, arena.width, arena.height);
  for (const auto& box : arena.obstacles) t = std::min(t, detail::ray_box(origin, direction, box));
  return std::clamp(t, 0.0, max_range);
}

/// Four rangers along body +x (front), -y (right), -x (back), +y (left).
inline LaserScan laser_scan(const Pose& pose, const Arena& arena,
                            double max_range = kLaserMaxRange) {
  const auto ray = [&](double angle) {
    return raycast(pose.position, {std::cos(angle), std::sin(angle)}, arena, max_range);
  };
  const double h = pose.heading;
  constexpr double half_pi = 0.5 * std::numbers::pi;
  return {ray(h), ray(h - half_pi), ray(h + std::numbers::pi), ray(h + half_pi)};
}

/// Unicycle update: rotate first, then translate along the new heading.
inline Pose step_kinematics(const Pose& pose, double forward_speed, double yaw_rate, double dt) {
  Pose next;
  next.heading = normalize_angle(pose.heading + yaw_rate * dt);
  if (forward_speed == 0.0) {
    next.position = pose.position;
  } else {
    const double step = forward_speed * dt;
    next.position = {pose.position.x + step * std::cos(next.heading),
                     pose.position.y + step * std::sin(next.heading)};
  }
  return next;
}

/// True when the robot disc touches a wall margin or any obstacle.
inline bool collision(const Pose& pose, const Arena& arena, double robot_radius) {
  const Vec2 p = pose.position;
  if (p.x < robot_radius || p.y < robot_radius || p.x > arena.width - robot_radius ||
      p.y > arena.height - robot_radius)
    return true;
  return std::any_of(arena.obstacles.begin(), arena.obstacles.end(),
                     [&](const Obstacle& box) { return distance_to_box(p, box) < robot_radius; });
}

}  // namespace seek
