#pragma once

#include "roofforge/graph.hpp"
#include "roofforge/solver.hpp"

#include <array>
#include <optional>
#include <string_view>
#include <vector>

namespace roofforge {

enum class EditKind { move_vertex, move_edge, snap_edge, merge_faces, split_face, force_adjacent };

const char* edit_kind_name(EditKind k);
std::optional<EditKind> parse_edit_kind(std::string_view name);

/// Targets are 0-based indices. Only the fields relevant to `kind` are read:
///   move_vertex: vertex, delta        move_edge: edge, delta
///   snap_edge: edge                   merge_faces: faces
///   split_face: face, split           force_adjacent: faces
struct EditOp {
    EditKind kind = EditKind::move_vertex;
    int vertex = -1;
    std::array<int, 2> edge{-1, -1};
    std::array<int, 2> faces{-1, -1};
    int face = -1;
    Vec3 delta = Vec3::Zero();
    std::array<int, 2> split{-1, -1};

    bool operator==(const EditOp&) const = default;
};

struct EditResult {
    RoofGraph graph;
    Embedding embedding;
    /// Roof vertex whose position the user set, when the edit has one.
    std::optional<int> seed;
};

/// Throws InvalidTarget or WouldCreateDegenerateFace.
EditResult apply_edit(const RoofGraph& graph, const Embedding& emb, const EditOp& op);

struct AffectedRegion {
    std::vector<int> region;  // sorted roof vertex indices, seed excluded
    int seed = -1;
};

/// Propagates the 2D validity edge constraints outward from the seed. Throws InvalidTarget when
/// the seed is not a roof vertex and RegionIsAllRoofVertices when no local region restores validity.
AffectedRegion smallest_affected_region(const RoofGraph& graph, const Embedding& emb, int seed, double tol = 1e-6);

/// Minimizes planarity over the region's vertices; everything else, the seed included, is copied bit-exactly.
/// converged is set only when the whole roof ends below 1e-9.
SolveResult reoptimize_region(const RoofGraph& graph, const Embedding& emb3d, const AffectedRegion& region,
                              const SolveSpec& spec);

struct ReoptimizeOutcome {
    SolveResult result;
    AffectedRegion region;  // the region finally used
    int expansions = 0;     // one-ring growths after the detected region failed
    bool full_resolve = false;
};

/// Region detection, restricted solve, then one-ring growth until planar; falls back to a full solve
/// over every roof vertex.
ReoptimizeOutcome reoptimize_after_edit(const RoofGraph& graph, const Embedding& emb3d, int seed, const SolveSpec& spec);

/// Re-solves an applied edit: region re-optimization from the seed when there is one, otherwise a
/// full primal solve that keeps the default fixed vertex at its current height.
ReoptimizeOutcome reoptimize_edit(const EditResult& edit, const SolveSpec& spec);

/// Sequential editing state with snapshot undo/redo.
class EditSession {
public:
    EditSession(RoofGraph graph, Embedding embedding);

    const RoofGraph& graph() const { return graph_; }
    const Embedding& embedding() const { return embedding_; }

    EditResult apply(const EditOp& op);
    void replace(RoofGraph graph, Embedding embedding);
    /// Overwrites the current state without a journal entry (re-solve after an edit).
    void amend(RoofGraph graph, Embedding embedding);
    bool undo();
    bool redo();
    std::size_t undo_depth() const { return undo_.size(); }
    std::size_t redo_depth() const { return redo_.size(); }

private:
    struct Snapshot {
        RoofGraph graph;
        Embedding embedding;
    };
    void push_undo();

    RoofGraph graph_;
    Embedding embedding_;
    std::vector<Snapshot> undo_;
    std::vector<Snapshot> redo_;
};

}  // namespace roofforge
