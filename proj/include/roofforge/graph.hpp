#pragma once

#include "roofforge/errors.hpp"
#include "roofforge/geometry.hpp"

#include <Eigen/Core>

#include <array>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace roofforge {

enum class VertexKind { outline, roof };

/// Height behaviour of a vertex in variable-height solves.
struct HeightGroup {
    enum class Kind { free, fixed_zero, group };
    Kind kind = Kind::fixed_zero;
    std::string label;  // set for Kind::group only

    static HeightGroup free() { return {Kind::free, {}}; }
    static HeightGroup fixed_zero() { return {Kind::fixed_zero, {}}; }
    static HeightGroup group(std::string name) { return {Kind::group, std::move(name)}; }
    bool operator==(const HeightGroup&) const = default;
};

/// Vertices are addressed by 0-based index; files use 1-based ids.
struct VertexRecord {
    VertexKind kind = VertexKind::roof;
    std::optional<HeightGroup> height_group;

    /// Outline vertices default to fixed zero, roof vertices are free.
    HeightGroup effective_group() const;
    bool operator==(const VertexRecord&) const = default;
};

using Face = std::vector<int>;

/// Undirected edge a < b. face_left holds a->b, face_right holds b->a.
struct EdgeInfo {
    int a = -1;
    int b = -1;
    int face_left = -1;
    int face_right = -1;
    int outline_index = -1;  // >= 0 for outline edges

    bool is_outline() const { return outline_index >= 0; }
    int face_count() const { return (face_left >= 0) + (face_right >= 0); }
};

class RoofGraph {
public:
    RoofGraph() = default;
    /// Validates topology; throws Error(InvalidGraph) with the violated invariant.
    RoofGraph(std::vector<VertexRecord> vertices, std::vector<Face> faces);

    int num_vertices() const { return static_cast<int>(vertices_.size()); }
    int num_faces() const { return static_cast<int>(faces_.size()); }
    const std::vector<VertexRecord>& vertices() const { return vertices_; }
    const std::vector<Face>& faces() const { return faces_; }
    bool is_outline(int v) const { return vertices_[v].kind == VertexKind::outline; }

    /// Outline cycle in face orientation, starting at the smallest outline index.
    const std::vector<int>& outline() const { return outline_; }
    int num_outline() const { return static_cast<int>(outline_.size()); }
    /// Outline edge k runs from outline()[k] to outline()[k + 1].
    std::array<int, 2> outline_edge(int k) const;
    int face_of_outline_edge(int k) const { return outline_face_[k]; }
    const std::vector<int>& face_outline_edges(int f) const { return face_outline_[f]; }
    /// Smallest outline edge index of face f, -1 when the face has none.
    int representative(int f) const;

    const std::vector<EdgeInfo>& edges() const { return edges_; }
    int find_edge(int a, int b) const;
    /// Indices into edges() of edges that are not outline edges.
    std::vector<int> roof_edges() const;
    const std::vector<int>& neighbors(int v) const { return neighbors_[v]; }
    std::vector<int> roof_vertices() const;

    bool operator==(const RoofGraph& o) const
    {
        return vertices_ == o.vertices_ && faces_ == o.faces_;
    }

private:
    std::vector<VertexRecord> vertices_;
    std::vector<Face> faces_;
    std::vector<int> outline_;
    std::vector<int> outline_face_;
    std::vector<std::vector<int>> face_outline_;
    std::vector<EdgeInfo> edges_;
    std::map<std::pair<int, int>, int> edge_lookup_;
    std::vector<std::vector<int>> neighbors_;
};

/// Coordinates per vertex; for dim == 2 the z component is ignored and kept 0.
struct Embedding {
    int dim = 2;
    std::vector<Vec3> coords;

    int size() const { return static_cast<int>(coords.size()); }
    Vec2 xy(int v) const { return coords[v].head<2>(); }
    std::vector<Vec2> all_xy() const;
    static Embedding planar(const std::vector<Vec2>& pts);
    static Embedding spatial(std::vector<Vec3> pts);
    bool operator==(const Embedding&) const = default;
};

Embedding project_xy(const Embedding& emb);

/// Reorients faces whose projected signed area is negative.
std::vector<Face> orient_faces_ccw(const std::vector<Face>& faces, const std::vector<Vec2>& xy);

struct DualGraph {
    std::vector<Vec2> outline;
    Eigen::MatrixXi adjacency;
    std::optional<Eigen::MatrixXd> probabilities;
    /// merge_map[k] is the representative (smallest) outline edge of edge k's face.
    /// Empty means every outline edge is its own face.
    std::vector<int> merge_map;

    int size() const { return static_cast<int>(outline.size()); }
    int face_of(int k) const { return merge_map.empty() ? k : merge_map[k]; }
    /// Throws Error(SchemaError) naming the violated invariant.
    void validate() const;
    bool operator==(const DualGraph& o) const;
};

/// Normalizes arbitrary face labels into representative form.
std::vector<int> normalize_merge_map(const std::vector<int>& labels);

/// Requires every face to own an outline edge; outline points come from emb.
DualGraph dual_from_primal(const RoofGraph& graph, const Embedding& emb);

struct PrimalRecovery {
    RoofGraph graph;
    /// Outline points plus a rough placement of roof vertices at dual-face centroids.
    Embedding layout;
};

/// Outline vertex k of the result is dual.outline[k]; roof vertices follow.
PrimalRecovery recover_primal(const DualGraph& dual);
RoofGraph primal_from_dual(const DualGraph& dual);

enum class ValidityCase { parallel, concurrent, endpoint, violated };
const char* validity_case_name(ValidityCase c);

struct EdgeValidity {
    int a = -1;
    int b = -1;
    ValidityCase kind = ValidityCase::violated;
    double residual = 0.0;
};

struct ValidityReport {
    std::vector<EdgeValidity> edges;
    double overall = 0.0;
    double tol = 0.0;
    bool valid() const { return overall <= tol; }
};

/// What a roof edge must satisfy for a valid 2D embedding: parallel to `value` (a direction),
/// or its supporting line passes through `value` (a point). Endpoint edges at their own
/// bisector corner carry no constraint.
struct EdgeRule {
    ValidityCase kind = ValidityCase::endpoint;
    Vec2 value = Vec2::Zero();
    bool constrains = true;
};

/// nullopt for outline edges and edges between faces sharing a representative.
std::optional<EdgeRule> edge_rule(const RoofGraph& graph, const Embedding& emb, const EdgeInfo& e);

ValidityReport check_validity_2d(const RoofGraph& graph, const Embedding& emb, double tol);

enum class EdgeClass { ridge, bisector, other };
const char* edge_class_name(EdgeClass c);

using EdgeKey = std::pair<int, int>;
inline EdgeKey edge_key(int a, int b) { return a < b ? EdgeKey{a, b} : EdgeKey{b, a}; }

/// Outline vertex on e shared by outline edges of its two faces, or -1.
int bisector_corner(const RoofGraph& graph, const EdgeInfo& e);

std::map<EdgeKey, EdgeClass> classify_roof_edges(const RoofGraph& graph, const Embedding& emb);

}  // namespace roofforge
