#pragma once

#include "fixtures.hpp"

#include <numbers>
#include <tuple>

namespace fixtures {

struct NamedDual {
    std::string name;
    DualGraph dual;
};

inline std::vector<Vec2> regular_polygon(int n, double radius = 1.0)
{
    std::vector<Vec2> pts;
    for (int k = 0; k < n; ++k) {
        const double a = -std::numbers::pi / 2 + std::numbers::pi / n + 2 * std::numbers::pi * k / n;
        pts.emplace_back(radius * std::cos(a), radius * std::sin(a));
    }
    return pts;
}

inline std::vector<std::pair<int, int>> ring_plus(int n, std::vector<std::pair<int, int>> chords)
{
    auto r = ring(n);
    r.insert(r.end(), chords.begin(), chords.end());
    return r;
}

/// Dual-graph roofs: hips, pyramids, L/T/U/plus shapes, multi-ridge and merged outline edges.
inline std::vector<NamedDual> dual_corpus()
{
    std::vector<NamedDual> c;
    c.push_back({"pyramid_square", pyramid_dual()});
    c.push_back({"hip_2x1", hip_dual()});
    c.push_back({"hip_3x1", make_dual({{0, 0}, {3, 0}, {3, 1}, {0, 1}}, ring_plus(4, {{0, 2}}))});
    c.push_back({"hip_tall", make_dual({{0, 0}, {1, 0}, {1, 3}, {0, 3}}, ring_plus(4, {{1, 3}}))});
    c.push_back({"pyramid_pentagon", make_dual(regular_polygon(5), ring(5))});
    c.push_back({"pyramid_hexagon", make_dual(regular_polygon(6), ring(6))});
    c.push_back({"pyramid_octagon", make_dual(regular_polygon(8), ring(8))});
    c.push_back({"trapezoid_hip", make_dual({{0, 0}, {4, 0}, {3, 1.5}, {1, 1.5}}, ring_plus(4, {{0, 2}}))});
    c.push_back({"hexagon_hip",
                 make_dual({{0, 0}, {2, 0}, {3, 1}, {2, 2}, {0, 2}, {-1, 1}}, ring_plus(6, {{0, 3}}))});
    c.push_back({"l_shape",
                 make_dual({{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}}, ring_plus(6, {{0, 2}, {3, 5}}))});
    c.push_back({"l_shape_long", make_dual({{0, 0}, {3, 0}, {3, 1}, {1.5, 1}, {1.5, 2.5}, {0, 2.5}},
                                           ring_plus(6, {{0, 2}, {3, 5}, {2, 5}}))});
    c.push_back({"t_shape", make_dual({{1, 0}, {2, 0}, {2, 2}, {3, 2}, {3, 3}, {0, 3}, {0, 2}, {1, 2}},
                                      ring_plus(8, {{1, 7}, {2, 4}, {4, 6}}))});
    c.push_back({"u_shape", make_dual({{0, 0}, {3, 0}, {3, 2}, {2, 2}, {2, 1}, {1, 1}, {1, 2}, {0, 2}},
                                      ring_plus(8, {{0, 4}, {1, 3}, {5, 7}}))});
    c.push_back({"plus_shape",
                 make_dual({{1, 0}, {2, 0}, {2, 1}, {3, 1}, {3, 2}, {2, 2}, {2, 3}, {1, 3}, {1, 2}, {0, 2}, {0, 1}, {1, 1}},
                           ring_plus(12, {{1, 11}, {2, 4}, {5, 7}, {8, 10}}))});
    c.push_back({"multi_ridge", make_dual({{0, 0}, {2, -0.4}, {4, 0}, {4, 1}, {3.2, 1.4}, {0, 1}},
                                          ring_plus(6, {{0, 4}, {1, 4}, {1, 3}}))});
    // Merged faces: adjacency lives on representative rows.
    c.push_back({"hip_split_bottom", make_dual({{0, 0}, {1, 0}, {2, 0}, {2, 1}, {0, 1}},
                                               {{0, 2}, {2, 3}, {3, 4}, {0, 4}, {0, 3}}, {0, 0, 2, 3, 4})});
    c.push_back({"hip_split_both", make_dual({{0, 0}, {1, 0}, {2, 0}, {2, 1}, {1, 1}, {0, 1}},
                                             {{0, 2}, {2, 3}, {3, 5}, {0, 5}, {0, 3}}, {0, 0, 2, 3, 3, 5})});
    return c;
}

struct ProbabilityFixture {
    std::vector<Vec2> outline;
    Eigen::MatrixXd prob;
};

inline ProbabilityFixture with_probabilities(std::vector<Vec2> outline, double ring_p,
                                             const std::vector<std::tuple<int, int, double>>& chords)
{
    const int n = static_cast<int>(outline.size());
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
    for (auto [i, j] : ring(n))
        p(i, j) = p(j, i) = ring_p;
    for (auto [i, j, v] : chords)
        p(i, j) = p(j, i) = v;
    return {std::move(outline), std::move(p)};
}

/// Square with both diagonals predicted; (1, 3) is the more probable.
inline ProbabilityFixture type01_square()
{
    return with_probabilities({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, 0.95, {{0, 2, 0.6}, {1, 3, 0.7}});
}

/// L-shape whose pair (2, 4) straddles the notch.
inline ProbabilityFixture type02_l()
{
    return with_probabilities({{0, 0}, {3, 0}, {3, 1}, {1, 1}, {1, 2}, {0, 2}}, 0.95,
                              {{0, 2, 0.85}, {3, 5, 0.8}, {0, 3, 0.75}, {2, 4, 0.9}});
}

/// Regular octagon with two crossings far apart: (0, 2) x (1, 3) and (4, 6) x (5, 7).
inline ProbabilityFixture two_conflict_octagon()
{
    return with_probabilities(regular_polygon(8), 0.95, {{0, 2, 0.6}, {1, 3, 0.7}, {4, 6, 0.8}, {5, 7, 0.65}});
}

}  // namespace fixtures
