#include "roofforge/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace roofforge {

double line_angle(const Vec2& a, const Vec2& b)
{
    return std::atan2(std::abs(cross2(a, b)), std::abs(a.dot(b)));
}

double signed_area(const std::vector<Vec2>& poly)
{
    double s = 0.0;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i)
        s += cross2(poly[i], poly[(i + 1) % n]);
    return 0.5 * s;
}

double bbox_diagonal(const std::vector<Vec2>& pts)
{
    if (pts.empty())
        return 0.0;
    Vec2 lo = pts.front(), hi = pts.front();
    for (const auto& p : pts) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    return (hi - lo).norm();
}

namespace {

int orient(const Vec2& a, const Vec2& b, const Vec2& c)
{
    const double v = cross2(b - a, c - a);
    const double scale = std::max({(b - a).squaredNorm(), (c - a).squaredNorm(), 1e-300});
    if (std::abs(v) <= 1e-14 * scale)
        return 0;
    return v > 0 ? 1 : -1;
}

bool on_segment(const Vec2& a, const Vec2& b, const Vec2& p)
{
    return p.x() >= std::min(a.x(), b.x()) - 1e-15 && p.x() <= std::max(a.x(), b.x()) + 1e-15 &&
           p.y() >= std::min(a.y(), b.y()) - 1e-15 && p.y() <= std::max(a.y(), b.y()) + 1e-15;
}

}  // namespace

bool segments_cross(const Vec2& a0, const Vec2& a1, const Vec2& b0, const Vec2& b1)
{
    const int o1 = orient(a0, a1, b0);
    const int o2 = orient(a0, a1, b1);
    const int o3 = orient(b0, b1, a0);
    const int o4 = orient(b0, b1, a1);
    return o1 * o2 < 0 && o3 * o4 < 0;
}

bool segments_touch(const Vec2& a0, const Vec2& a1, const Vec2& b0, const Vec2& b1)
{
    const int o1 = orient(a0, a1, b0);
    const int o2 = orient(a0, a1, b1);
    const int o3 = orient(b0, b1, a0);
    const int o4 = orient(b0, b1, a1);
    if (o1 * o2 < 0 && o3 * o4 < 0)
        return true;
    if (o1 == 0 && on_segment(a0, a1, b0))
        return true;
    if (o2 == 0 && on_segment(a0, a1, b1))
        return true;
    if (o3 == 0 && on_segment(b0, b1, a0))
        return true;
    if (o4 == 0 && on_segment(b0, b1, a1))
        return true;
    return false;
}

bool line_intersection(const Vec2& p, const Vec2& d, const Vec2& q, const Vec2& e, Vec2& out)
{
    const double den = cross2(d, e);
    if (std::abs(den) <= 1e-300)
        return false;
    const double t = cross2(q - p, e) / den;
    out = p + t * d;
    return true;
}

bool point_in_polygon(const Vec2& p, const std::vector<Vec2>& poly)
{
    bool inside = false;
    const std::size_t n = poly.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Vec2& a = poly[i];
        const Vec2& b = poly[j];
        if ((a.y() > p.y()) != (b.y() > p.y())) {
            const double x = a.x() + (p.y() - a.y()) * (b.x() - a.x()) / (b.y() - a.y());
            if (p.x() < x)
                inside = !inside;
        }
    }
    return inside;
}

bool polygon_is_simple(const std::vector<Vec2>& poly)
{
    const std::size_t n = poly.size();
    if (n < 3)
        return false;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& a0 = poly[i];
        const Vec2& a1 = poly[(i + 1) % n];
        if ((a1 - a0).squaredNorm() == 0.0)
            return false;
        for (std::size_t j = i + 1; j < n; ++j) {
            const Vec2& b0 = poly[j];
            const Vec2& b1 = poly[(j + 1) % n];
            const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
            if (adjacent) {
                // Adjacent edges may only share their common vertex.
                const Vec2 shared = (j == i + 1) ? a1 : a0;
                const Vec2 u = (j == i + 1) ? a0 : a1;
                const Vec2 w = (j == i + 1) ? b1 : b0;
                if (orient(shared, u, w) == 0 && (u - shared).dot(w - shared) > 0)
                    return false;
                continue;
            }
            if (segments_touch(a0, a1, b0, b1))
                return false;
        }
    }
    return true;
}

}  // namespace roofforge
