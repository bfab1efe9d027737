#pragma once

#include <Eigen/Core>

#include <vector>

namespace roofforge {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;

/// Outline directions closer than this (radians, as lines) count as parallel.
inline constexpr double kParallelAngle = 1e-7;

inline double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

/// Unsigned angle between two lines through the origin, in [0, pi/2].
double line_angle(const Vec2& a, const Vec2& b);

double signed_area(const std::vector<Vec2>& poly);

double bbox_diagonal(const std::vector<Vec2>& pts);

/// Proper crossing of the open segments; touching or collinear overlap is not a crossing.
bool segments_cross(const Vec2& a0, const Vec2& a1, const Vec2& b0, const Vec2& b1);

/// Closed segments share at least one point.
bool segments_touch(const Vec2& a0, const Vec2& a1, const Vec2& b0, const Vec2& b1);

/// Intersection of the infinite lines (p, p + d) and (q, q + e); false if parallel.
bool line_intersection(const Vec2& p, const Vec2& d, const Vec2& q, const Vec2& e, Vec2& out);

bool point_in_polygon(const Vec2& p, const std::vector<Vec2>& poly);

/// No two non-adjacent edges touch and no adjacent edges overlap.
bool polygon_is_simple(const std::vector<Vec2>& poly);

}  // namespace roofforge
