#pragma once

#include "roofforge/adjacency.hpp"
#include "roofforge/editing.hpp"
#include "roofforge/graph.hpp"
#include "roofforge/solver.hpp"

#include <json.hpp>

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace roofforge {

using Json = nlohmann::json;

/// ParseError with the position of the offending character (1-based).
class ParseFailure : public Error {
public:
    ParseFailure(int line, int column, const std::string& message);
    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

Json parse_json(std::string_view text);
/// Throws SchemaError when the file cannot be read.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);
/// Indented, keys sorted with "format" first, scalar arrays on one line, trailing newline.
std::string pretty_json(const Json& j);

/// UI underlay: world = [a b; d e] * pixel + [c; f] for transform {a, b, c, d, e, f}.
struct ImageRef {
    std::string path;
    std::array<double, 6> transform{1, 0, 0, 0, 1, 0};
    bool operator==(const ImageRef&) const = default;
};

/// Contents of a roofgraph/1 file. The embedding is 3D iff the vertices carry z.
struct RoofGraphDocument {
    RoofGraph graph;
    Embedding embedding;
    std::optional<ImageRef> image;
    bool operator==(const RoofGraphDocument&) const = default;
};

/// Faces are reoriented counter-clockwise on load.
RoofGraphDocument roof_graph_from_json(const Json& j);
Json roof_graph_to_json(const RoofGraphDocument& doc);
RoofGraphDocument load_roof_graph(std::string_view text);
std::string save_roof_graph(const RoofGraphDocument& doc);

/// roofdual/1. Pair lists set adjacency; probability triples set probabilities and adjacency = (p > 0.5).
DualGraph dual_from_json(const Json& j);
Json dual_to_json(const DualGraph& dual);
DualGraph load_dual(std::string_view text);
std::string save_dual(const DualGraph& dual);

/// Ids in JSON are 1-based; EditOp holds 0-based indices.
EditOp edit_op_from_json(const Json& j);
Json edit_op_to_json(const EditOp& op);
/// Either a bare array of ops or {"format": "roofedits/1", "ops": [...]}.
std::vector<EditOp> load_edit_ops(std::string_view text);

/// Missing fields keep their defaults; fixed_vertex is a 1-based id. Validates the result.
SolveSpec solve_spec_from_json(const Json& j);
Json solve_spec_to_json(const SolveSpec& spec);

Json validity_report_to_json(const ValidityReport& report);
/// Scalars only; the embedding goes through roof_graph_to_json.
Json solve_summary_to_json(const SolveResult& result);
Json candidate_to_json(const AdjacencyCandidate& cand);
/// Candidate adjacency as a roofdual/1 document over the given outline.
DualGraph candidate_dual(const std::vector<Vec2>& outline, const AdjacencyCandidate& cand);

/// Error object written by the CLI and returned by the service.
Json error_to_json(const Error& e);

struct BuildingMesh {
    std::vector<Vec3> vertices;
    std::vector<Face> roof;
    std::vector<Face> facade;
    std::vector<Face> base;
};

struct ExportOptions {
    bool facades = true;
    /// Facade height relative to the roof's maximum height when the outline sits at z = 0.
    double facade_ratio = 0.3;
};

/// Throws NonPlanarInput unless emb is 3D with normalized planarity below 1e-9.
BuildingMesh build_mesh(const RoofGraph& graph, const Embedding& emb, const ExportOptions& opts = {});
std::string mesh_to_obj(const BuildingMesh& mesh);
std::string export_building(const RoofGraph& graph, const Embedding& emb, const ExportOptions& opts = {});

/// %.17g, so every double round-trips.
std::string format_double(double v);

}  // namespace roofforge
