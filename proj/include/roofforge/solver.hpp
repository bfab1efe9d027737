#pragma once

#include "roofforge/energy.hpp"
#include "roofforge/graph.hpp"

#include <optional>
#include <string>
#include <vector>

namespace roofforge {

enum class SolveMode { primal, dual, variable_height };

const char* solve_mode_name(SolveMode mode);
std::optional<SolveMode> parse_solve_mode(std::string_view name);

struct SolveSpec {
    SolveMode mode = SolveMode::primal;
    /// Height of the fixed vertex; defaults to sqrt(outline area) / 2.
    std::optional<double> h;
    double lambda = 0.1;
    double gamma = 0.05;
    double eta = 1.0;
    double theta_deg = 3.0;
    MetricKind planarity_kind = MetricKind::smallest_eig;
    double tol_grad = 1e-12;
    double tol_energy = 1e-16;
    int max_iters = 2000;
    std::optional<int> fixed_vertex;
    /// Wall-clock cap in seconds; 0 disables.
    double time_limit = 0.0;

    /// Throws Error(InvalidSolveSpec) naming the violated invariant.
    void validate() const;
};

struct TraceEntry {
    int iteration = 0;
    double planarity = 0.0;  // value of the solve's planarity metric
    double total = 0.0;
    /// 0 for the regularized solve, 1 for the planarity-only polish.
    int stage = 0;
};

struct SolveResult {
    RoofGraph graph;
    Embedding embedding;
    std::vector<TraceEntry> energy_trace;
    bool converged = false;
    int iterations = 0;
    double wall_time = 0.0;
    /// Smallest-eigenvalue planarity of the returned embedding on the normalized problem.
    double planarity = 0.0;
    /// Value of spec.planarity_kind on the normalized problem.
    double metric_value = 0.0;
    int fixed_vertex = -1;
    double h = 0.0;
    std::string stop_reason;
};

/// Outline bounding-box normalization used by every solve: centre at the origin,
/// diagonal 1, heights scaled by the same factor.
struct Normalization {
    Vec2 center = Vec2::Zero();
    double scale = 1.0;

    static Normalization from_outline(const std::vector<Vec2>& outline);
    Vec3 to_unit(const Vec3& p) const;
    Vec3 from_unit(const Vec3& p) const;
};

Normalization normalization_for(const RoofGraph& graph, const Embedding& emb);

/// Smallest-eigenvalue planarity of emb after outline normalization.
double normalized_planarity(const RoofGraph& graph, const Embedding& emb,
                            MetricKind kind = MetricKind::smallest_eig);

/// sqrt(outline area) / 2.
double default_height(const std::vector<Vec2>& outline);

/// Roof vertex of maximum degree, smallest index on ties; -1 without roof vertices.
int default_fixed_vertex(const RoofGraph& graph);

struct PreprocessResult {
    std::vector<Vec2> points;
    double max_displacement = 0.0;
    /// Cluster id per outline edge.
    std::vector<int> clusters;
};

PreprocessResult preprocess_outline(const std::vector<Vec2>& outline, double theta_deg);

/// Replaces outline coordinates of emb with preprocessed ones; roof vertices are untouched.
Embedding preprocess_embedding(const RoofGraph& graph, const Embedding& emb, double theta_deg);

/// outline_xy[k] is the position of graph.outline()[k].
Embedding spectral_embed_2d(const RoofGraph& graph, const std::vector<Vec2>& outline_xy);

SolveResult optimize_primal(const RoofGraph& graph, const Embedding& user2d, const SolveSpec& spec);
SolveResult optimize_dual(const DualGraph& dual, const SolveSpec& spec);
/// Height groups come from the graph's vertex records; user z seeds grouped outline heights.
SolveResult optimize_variable_heights(const RoofGraph& graph, const Embedding& user, const SolveSpec& spec);

/// Throws InvalidInput2D or InconsistentSystem.
Embedding lift_2d_to_3d(const RoofGraph& graph, const Embedding& emb, double h,
                        std::optional<int> fixed_vertex = std::nullopt);

/// Minimizes planarity over the listed vertices only; everything else is copied bit-exactly.
/// Used by editing; spec supplies the metric, tolerances and iteration cap.
SolveResult optimize_subset(const RoofGraph& graph, const Embedding& emb3d, const std::vector<int>& free_vertices,
                            const SolveSpec& spec);

}  // namespace roofforge
