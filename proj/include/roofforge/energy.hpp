#pragma once

#include "roofforge/graph.hpp"

#include <Eigen/Core>

#include <array>
#include <optional>
#include <string_view>
#include <vector>

namespace roofforge {

enum class MetricKind { smallest_eig, det, proj, diag, validity2d };

const char* metric_name(MetricKind kind);
std::optional<MetricKind> parse_metric(std::string_view name);

struct EnergyValue {
    double value = 0.0;
    /// One row per vertex (or per input value for variance_energy).
    Eigen::MatrixXd gradient;
    /// Items skipped or clamped as degenerate: diagonal pairs for diag, edge indices otherwise.
    std::vector<int> flagged;
};

/// Step used by every central finite-difference gradient in the library.
inline constexpr double kFiniteDifferenceStep = 1e-6;

double face_planarity_value(const std::vector<Vec3>& pts, MetricKind kind, int* skipped = nullptr);
EnergyValue face_planarity(const std::vector<Vec3>& pts, MetricKind kind);

/// Sum over faces with at least four vertices.
EnergyValue roof_planarity(const RoofGraph& graph, const Embedding& emb, MetricKind kind);

enum class AestheticKind { bisector, ridge };

/// One aesthetic term; vertex indices refer to the graph.
struct AestheticTerm {
    AestheticKind kind = AestheticKind::bisector;
    int edge = -1;  // index into graph.edges()
    int u = -1;     // bisector: the corner; ridge: first endpoint
    int w = -1;     // the other endpoint
    std::array<int, 4> outline{};  // bisector: p1, p2 (corner neighbours); ridge: q1a, q1b, q2a, q2b
};

std::vector<AestheticTerm> aesthetic_terms(const RoofGraph& graph, const Embedding& emb);
/// Returns -1 when an edge involved has zero length.
double aesthetic_term_value(const AestheticTerm& t, const std::vector<Vec3>& x);

/// Throws DegenerateEdge when any classified edge has zero length.
EnergyValue aesthetic_energy(const RoofGraph& graph, const Embedding& emb);

/// Gradient rows hold d/dx, d/dy of roof-edge endpoints; the outline is treated as fixed.
EnergyValue validity_energy_2d(const RoofGraph& graph, const Embedding& emb);

EnergyValue variance_energy(const std::vector<double>& z);

}  // namespace roofforge
