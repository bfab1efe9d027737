#pragma once

#include "roofforge/graph.hpp"

#include <cmath>
#include <optional>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

namespace fixtures {

using roofforge::DualGraph;
using roofforge::Embedding;
using roofforge::Face;
using roofforge::RoofGraph;
using roofforge::Vec2;
using roofforge::Vec3;
using roofforge::VertexKind;
using roofforge::VertexRecord;

/// Error code thrown by f, or nullopt when it returns normally.
template <class F>
std::optional<roofforge::ErrorCode> error_of(F&& f)
{
    try {
        f();
    } catch (const roofforge::Error& e) {
        return e.code();
    }
    return std::nullopt;
}

inline std::vector<VertexRecord> records(int n_outline, int n_roof)
{
    std::vector<VertexRecord> r(n_outline + n_roof);
    for (int i = 0; i < n_outline; ++i)
        r[i].kind = VertexKind::outline;
    return r;
}

/// 2x1 rectangle; ridge from (0.5,0.5) to (1.5,0.5).
inline RoofGraph hip_graph()
{
    return RoofGraph(records(4, 2), {{0, 1, 5, 4}, {1, 2, 5}, {2, 3, 4, 5}, {3, 0, 4}});
}

inline std::vector<Vec2> hip_xy(double ridge_y = 0.5, double left = 0.5, double right = 1.5)
{
    return {{0, 0}, {2, 0}, {2, 1}, {0, 1}, {left, ridge_y}, {right, ridge_y}};
}

inline Embedding hip_3d(double h = 0.5)
{
    return Embedding::spatial({{0, 0, 0}, {2, 0, 0}, {2, 1, 0}, {0, 1, 0}, {0.5, 0.5, h}, {1.5, 0.5, h}});
}

inline RoofGraph pyramid_graph()
{
    return RoofGraph(records(4, 1), {{0, 1, 4}, {1, 2, 4}, {2, 3, 4}, {3, 0, 4}});
}

inline std::vector<Vec2> pyramid_xy(double ax = 0.5, double ay = 0.5)
{
    return {{0, 0}, {1, 0}, {1, 1}, {0, 1}, {ax, ay}};
}

inline DualGraph make_dual(std::vector<Vec2> outline, const std::vector<std::pair<int, int>>& pairs,
                           std::vector<int> merge_map = {})
{
    DualGraph d;
    const int n = static_cast<int>(outline.size());
    d.outline = std::move(outline);
    d.adjacency = Eigen::MatrixXi::Zero(n, n);
    for (auto [i, j] : pairs) {
        d.adjacency(i, j) = 1;
        d.adjacency(j, i) = 1;
    }
    d.merge_map = std::move(merge_map);
    return d;
}

inline std::vector<std::pair<int, int>> ring(int n)
{
    std::vector<std::pair<int, int>> r;
    for (int i = 0; i < n; ++i)
        r.emplace_back(std::min(i, (i + 1) % n), std::max(i, (i + 1) % n));
    return r;
}

inline DualGraph hip_dual()
{
    auto r = ring(4);
    r.emplace_back(0, 2);
    return make_dual({{0, 0}, {2, 0}, {2, 1}, {0, 1}}, r);
}

inline DualGraph pyramid_dual()
{
    return make_dual({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, ring(4));
}

/// L-shape with a slanted inner edge: x = vertex 7, y1 = vertex 6 (concurrent), y2 = vertex 8 (parallel).
inline RoofGraph region_graph()
{
    // outline 0..5: (0,0) (2,0) (2,1.2) (1,1) (1,2) (0,2); roof: 6 = A, 7 = B, 8 = C
    return RoofGraph(records(6, 3), {{0, 1, 6, 7}, {1, 2, 6}, {2, 3, 7, 6}, {3, 4, 8, 7}, {4, 5, 8}, {5, 0, 7, 8}});
}

inline std::vector<Vec2> region_xy()
{
    // Ridge B-A passes through (-4, 0), where the bottom edge meets the slanted edge's line.
    const Vec2 b(0.5, 0.5);
    const Vec2 x(-4.0, 0.0);
    const Vec2 a = x + (b - x) * (1.6 - x.x()) / (b.x() - x.x());
    return {{0, 0}, {2, 0}, {2, 1.2}, {1, 1}, {1, 2}, {0, 2}, a, b, {0.5, 1.5}};
}

/// Hexagonal pavilion: corners c_i (grouped heights), mid-edge vertices m_i pushed outward (fixed zero),
/// roof vertices q_i behind each m_i and an apex. Outline order c_0 m_0 c_1 m_1 ...; q_i = 12 + i; apex = 18.
inline RoofGraph pavilion_graph()
{
    auto rec = records(12, 7);
    for (int i = 0; i < 6; ++i)
        rec[2 * i].height_group = roofforge::HeightGroup::group("corners");
    std::vector<Face> faces;
    for (int i = 0; i < 6; ++i) {
        const int c = 2 * i, m = 2 * i + 1, c1 = (2 * i + 2) % 12, q = 12 + i;
        faces.push_back({c, m, q, 18});
        faces.push_back({m, c1, 18, q});
    }
    return RoofGraph(rec, faces);
}

/// Corner heights are deliberately uneven so the group variance starts positive.
inline Embedding pavilion_user()
{
    std::vector<Vec3> pts(19, Vec3::Zero());
    const double corner_z[6] = {0.10, 0.25, 0.05, 0.30, 0.15, 0.20};
    for (int i = 0; i < 6; ++i) {
        const double a = std::numbers::pi / 3 * i;
        const double b = a + std::numbers::pi / 6;
        pts[2 * i] = Vec3(std::cos(a), std::sin(a), corner_z[i]);
        const double rm = std::cos(std::numbers::pi / 6) + 0.1;
        pts[2 * i + 1] = Vec3(rm * std::cos(b), rm * std::sin(b), 0.0);
        pts[12 + i] = Vec3(0.6 * std::cos(b), 0.6 * std::sin(b), 0.0);
    }
    return Embedding::spatial(pts);
}

}  // namespace fixtures
