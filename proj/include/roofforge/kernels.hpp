#pragma once

#include "roofforge/energy.hpp"

#include <array>
#include <utility>
#include <vector>

namespace roofforge::kernels {

/// Loops with fewer items than this stay serial.
inline constexpr int kParallelMinItems = 16;

/// Per-face value and gradient of one planarity metric.
double face_value(const std::vector<Vec3>& pts, MetricKind kind, int* skipped);
std::vector<Vec3> face_gradient(const std::vector<Vec3>& pts, MetricKind kind);

/// Sum over faces with >= 4 vertices; gradient rows cover all of x.
EnergyValue planarity(const std::vector<Face>& faces, const std::vector<Vec3>& x, MetricKind kind,
                      bool with_gradient);
/// Sum of aesthetic terms; degenerate terms are skipped and listed in flagged.
EnergyValue aesthetic(const std::vector<AestheticTerm>& terms, const std::vector<Vec3>& x, bool with_gradient);
/// Pairs (a, b), a < b, of segments that cross properly.
std::vector<std::pair<int, int>> crossing_pairs(const std::vector<std::array<Vec2, 2>>& segments);

/// Serial versions with the same arithmetic and reduction order; results are bit-identical.
namespace reference {
EnergyValue planarity(const std::vector<Face>& faces, const std::vector<Vec3>& x, MetricKind kind,
                      bool with_gradient);
EnergyValue aesthetic(const std::vector<AestheticTerm>& terms, const std::vector<Vec3>& x, bool with_gradient);
std::vector<std::pair<int, int>> crossing_pairs(const std::vector<std::array<Vec2, 2>>& segments);
}  // namespace reference

}  // namespace roofforge::kernels
