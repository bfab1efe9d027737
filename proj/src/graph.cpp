#include "roofforge/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace roofforge {

namespace {

[[noreturn]] void invalid(const std::string& what)
{
    throw Error(ErrorCode::InvalidGraph, what);
}

}  // namespace

HeightGroup VertexRecord::effective_group() const
{
    if (height_group)
        return *height_group;
    return kind == VertexKind::outline ? HeightGroup::fixed_zero() : HeightGroup::free();
}

RoofGraph::RoofGraph(std::vector<VertexRecord> vertices, std::vector<Face> faces)
    : vertices_(std::move(vertices)), faces_(std::move(faces))
{
    const int n = num_vertices();
    std::map<std::pair<int, int>, int> directed;
    for (int f = 0; f < num_faces(); ++f) {
        const Face& face = faces_[f];
        if (face.size() < 3)
            invalid("face " + std::to_string(f) + " has fewer than 3 vertices");
        std::set<int> distinct(face.begin(), face.end());
        if (distinct.size() != face.size())
            invalid("face " + std::to_string(f) + " repeats a vertex");
        for (int v : face)
            if (v < 0 || v >= n)
                invalid("face " + std::to_string(f) + " references a missing vertex");
        for (std::size_t i = 0; i < face.size(); ++i) {
            const int a = face[i];
            const int b = face[(i + 1) % face.size()];
            if (!directed.emplace(std::make_pair(a, b), f).second)
                invalid("faces are not consistently oriented around edge (" + std::to_string(a) +
                        ", " + std::to_string(b) + ")");
        }
    }

    for (const auto& [ab, f] : directed) {
        const auto key = edge_key(ab.first, ab.second);
        auto it = edge_lookup_.find(key);
        if (it == edge_lookup_.end()) {
            it = edge_lookup_.emplace(key, 0).first;
        }
        (void)f;
    }
    edges_.reserve(edge_lookup_.size());
    for (auto& [key, idx] : edge_lookup_) {
        idx = static_cast<int>(edges_.size());
        EdgeInfo e;
        e.a = key.first;
        e.b = key.second;
        if (auto it = directed.find({e.a, e.b}); it != directed.end())
            e.face_left = it->second;
        if (auto it = directed.find({e.b, e.a}); it != directed.end())
            e.face_right = it->second;
        edges_.push_back(e);
    }

    neighbors_.assign(n, {});
    for (const auto& e : edges_) {
        neighbors_[e.a].push_back(e.b);
        neighbors_[e.b].push_back(e.a);
    }
    for (auto& nb : neighbors_)
        std::sort(nb.begin(), nb.end());
    for (int v = 0; v < n; ++v)
        if (neighbors_[v].empty())
            invalid("vertex " + std::to_string(v) + " is not used by any face");

    // Boundary half-edges must form the outline cycle.
    std::vector<int> next(n, -1);
    std::vector<int> incoming(n, 0);
    for (const auto& e : edges_) {
        if (e.face_count() != 1)
            continue;
        const int from = e.face_left >= 0 ? e.a : e.b;
        const int to = e.face_left >= 0 ? e.b : e.a;
        if (!is_outline(from) || !is_outline(to))
            invalid("boundary edge (" + std::to_string(e.a) + ", " + std::to_string(e.b) +
                    ") touches a roof vertex");
        if (next[from] >= 0)
            invalid("outline vertex " + std::to_string(from) + " has two boundary successors");
        next[from] = to;
        ++incoming[to];
    }
    int first = -1;
    int n_outline = 0;
    for (int v = 0; v < n; ++v) {
        if (!is_outline(v))
            continue;
        ++n_outline;
        if (next[v] < 0 || incoming[v] != 1)
            invalid("outline vertex " + std::to_string(v) + " is not on a simple boundary cycle");
        if (first < 0)
            first = v;
    }
    if (n_outline < 3)
        invalid("outline has fewer than 3 vertices");
    for (int v = first;;) {
        outline_.push_back(v);
        v = next[v];
        if (v == first)
            break;
        if (static_cast<int>(outline_.size()) > n_outline)
            invalid("outline is not a single cycle");
    }
    if (static_cast<int>(outline_.size()) != n_outline)
        invalid("outline vertices form more than one cycle");

    outline_face_.assign(n_outline, -1);
    face_outline_.assign(num_faces(), {});
    for (int k = 0; k < n_outline; ++k) {
        const auto [a, b] = outline_edge(k);
        EdgeInfo& e = edges_[edge_lookup_.at(edge_key(a, b))];
        e.outline_index = k;
        const int f = e.face_left >= 0 ? e.face_left : e.face_right;
        outline_face_[k] = f;
        face_outline_[f].push_back(k);
    }
}

std::array<int, 2> RoofGraph::outline_edge(int k) const
{
    const int n = num_outline();
    return {outline_[k], outline_[(k + 1) % n]};
}

int RoofGraph::representative(int f) const
{
    const auto& ks = face_outline_[f];
    return ks.empty() ? -1 : ks.front();
}

int RoofGraph::find_edge(int a, int b) const
{
    auto it = edge_lookup_.find(edge_key(a, b));
    return it == edge_lookup_.end() ? -1 : it->second;
}

std::vector<int> RoofGraph::roof_edges() const
{
    std::vector<int> out;
    for (int i = 0; i < static_cast<int>(edges_.size()); ++i)
        if (!edges_[i].is_outline())
            out.push_back(i);
    return out;
}

std::vector<int> RoofGraph::roof_vertices() const
{
    std::vector<int> out;
    for (int v = 0; v < num_vertices(); ++v)
        if (!is_outline(v))
            out.push_back(v);
    return out;
}

std::vector<Vec2> Embedding::all_xy() const
{
    std::vector<Vec2> out;
    out.reserve(coords.size());
    for (const auto& c : coords)
        out.push_back(c.head<2>());
    return out;
}

Embedding Embedding::planar(const std::vector<Vec2>& pts)
{
    Embedding e;
    e.dim = 2;
    e.coords.reserve(pts.size());
    for (const auto& p : pts)
        e.coords.emplace_back(p.x(), p.y(), 0.0);
    return e;
}

Embedding Embedding::spatial(std::vector<Vec3> pts)
{
    Embedding e;
    e.dim = 3;
    e.coords = std::move(pts);
    return e;
}

Embedding project_xy(const Embedding& emb)
{
    return Embedding::planar(emb.all_xy());
}

std::vector<Face> orient_faces_ccw(const std::vector<Face>& faces, const std::vector<Vec2>& xy)
{
    std::vector<Face> out = faces;
    for (auto& f : out) {
        std::vector<Vec2> poly;
        for (int v : f) {
            if (v < 0 || v >= static_cast<int>(xy.size()))
                return out;  // left for the graph constructor to reject
            poly.push_back(xy[v]);
        }
        if (signed_area(poly) < 0.0)
            std::reverse(f.begin(), f.end());
    }
    return out;
}

std::vector<int> normalize_merge_map(const std::vector<int>& labels)
{
    std::map<int, int> first;
    for (int k = 0; k < static_cast<int>(labels.size()); ++k)
        first.emplace(labels[k], k);
    std::vector<int> out(labels.size());
    for (int k = 0; k < static_cast<int>(labels.size()); ++k)
        out[k] = first.at(labels[k]);
    return out;
}

void DualGraph::validate() const
{
    const int n = size();
    auto fail = [](const std::string& what) { throw Error(ErrorCode::SchemaError, what); };
    if (n < 3)
        fail("outline needs at least 3 points");
    if (adjacency.rows() != n || adjacency.cols() != n)
        fail("adjacency must be n_O x n_O");
    for (const auto& p : outline)
        if (!p.allFinite())
            fail("outline point is not finite");
    for (int i = 0; i < n; ++i) {
        if (adjacency(i, i) != 0)
            fail("adjacency diagonal must be zero");
        for (int j = 0; j < n; ++j) {
            if (adjacency(i, j) != 0 && adjacency(i, j) != 1)
                fail("adjacency must be binary");
            if (adjacency(i, j) != adjacency(j, i))
                fail("adjacency must be symmetric");
        }
    }
    if (probabilities) {
        const auto& p = *probabilities;
        if (p.rows() != n || p.cols() != n)
            fail("probabilities must be n_O x n_O");
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (!(p(i, j) >= 0.0 && p(i, j) <= 1.0))
                    fail("probability outside [0, 1]");
                if (p(i, j) != p(j, i))
                    fail("probabilities must be symmetric");
                if (adjacency(i, j) == 1 && !(p(i, j) > 0.0))
                    fail("adjacent pair with zero probability");
            }
    }
    if (!merge_map.empty()) {
        if (static_cast<int>(merge_map.size()) != n)
            fail("merge_map must have one entry per outline edge");
        for (int k = 0; k < n; ++k) {
            const int r = merge_map[k];
            if (r < 0 || r > k || merge_map[r] != r)
                fail("merge_map entries must name the smallest edge of their face");
            if (r != k)
                for (int j = 0; j < n; ++j)
                    if (adjacency(k, j) != 0)
                        fail("merged outline edge " + std::to_string(k) + " has a non-zero adjacency row");
        }
    }
}

bool DualGraph::operator==(const DualGraph& o) const
{
    if (outline.size() != o.outline.size())
        return false;
    for (std::size_t i = 0; i < outline.size(); ++i)
        if (outline[i] != o.outline[i])
            return false;
    if (adjacency != o.adjacency || merge_map != o.merge_map)
        return false;
    if (probabilities.has_value() != o.probabilities.has_value())
        return false;
    return !probabilities || *probabilities == *o.probabilities;
}

DualGraph dual_from_primal(const RoofGraph& graph, const Embedding& emb)
{
    const int n = graph.num_outline();
    for (int f = 0; f < graph.num_faces(); ++f)
        if (graph.representative(f) < 0)
            throw Error(ErrorCode::FaceWithoutOutlineEdge,
                        "face " + std::to_string(f) + " has no outline edge");
    DualGraph d;
    for (int v : graph.outline())
        d.outline.push_back(emb.xy(v));
    d.adjacency = Eigen::MatrixXi::Zero(n, n);
    bool merged = false;
    std::vector<int> mm(n);
    for (int k = 0; k < n; ++k) {
        mm[k] = graph.representative(graph.face_of_outline_edge(k));
        merged = merged || mm[k] != k;
    }
    if (merged)
        d.merge_map = mm;
    for (const auto& e : graph.edges()) {
        if (e.is_outline() || e.face_count() != 2)
            continue;
        const int i = graph.representative(e.face_left);
        const int j = graph.representative(e.face_right);
        if (i != j) {
            d.adjacency(i, j) = 1;
            d.adjacency(j, i) = 1;
        }
    }
    return d;
}

const char* validity_case_name(ValidityCase c)
{
    switch (c) {
    case ValidityCase::parallel: return "parallel";
    case ValidityCase::concurrent: return "concurrent";
    case ValidityCase::endpoint: return "endpoint";
    case ValidityCase::violated: return "violated";
    }
    return "violated";
}

const char* edge_class_name(EdgeClass c)
{
    switch (c) {
    case EdgeClass::ridge: return "ridge";
    case EdgeClass::bisector: return "bisector";
    case EdgeClass::other: return "other";
    }
    return "other";
}

std::optional<EdgeRule> edge_rule(const RoofGraph& graph, const Embedding& emb, const EdgeInfo& e)
{
    if (e.is_outline() || e.face_count() != 2)
        return std::nullopt;
    const int k1 = graph.representative(e.face_left);
    const int k2 = graph.representative(e.face_right);
    if (k1 < 0 || k2 < 0 || k1 == k2)
        return std::nullopt;
    const int n = graph.num_outline();
    const auto [a1, b1] = graph.outline_edge(k1);
    const auto [a2, b2] = graph.outline_edge(k2);
    const Vec2 o1 = emb.xy(a1), d1 = emb.xy(b1) - o1;
    const Vec2 o2 = emb.xy(a2), d2 = emb.xy(b2) - o2;
    EdgeRule rule;
    if (line_angle(d1, d2) < kParallelAngle) {
        rule.kind = ValidityCase::parallel;
        rule.value = d1;
        return rule;
    }
    if (bisector_corner(graph, e) >= 0) {
        rule.kind = ValidityCase::endpoint;
        rule.constrains = false;
        return rule;
    }
    const bool shared = (k1 + 1) % n == k2 || (k2 + 1) % n == k1;
    if (shared) {
        rule.kind = ValidityCase::endpoint;
        rule.value = emb.xy((k1 + 1) % n == k2 ? b1 : b2);
    } else {
        rule.kind = ValidityCase::concurrent;
        line_intersection(o1, d1, o2, d2, rule.value);
    }
    return rule;
}

ValidityReport check_validity_2d(const RoofGraph& graph, const Embedding& emb, double tol)
{
    ValidityReport report;
    report.tol = tol;
    std::vector<Vec2> outline_pts;
    for (int v : graph.outline())
        outline_pts.push_back(emb.xy(v));
    const double diag = bbox_diagonal(outline_pts);

    for (const auto& e : graph.edges()) {
        const auto rule = edge_rule(graph, emb, e);
        if (!rule)
            continue;
        EdgeValidity rec;
        rec.a = e.a;
        rec.b = e.b;
        rec.kind = rule->kind;
        const Vec2 p = emb.xy(e.a);
        const Vec2 d = emb.xy(e.b) - p;
        if (d.norm() <= 1e-14 * diag)
            rec.residual = std::numeric_limits<double>::infinity();
        else if (rule->kind == ValidityCase::parallel)
            rec.residual = line_angle(d, rule->value);
        else if (rule->constrains)
            rec.residual = std::abs(cross2(d.normalized(), rule->value - p)) / diag;
        if (!(rec.residual <= tol))
            rec.kind = ValidityCase::violated;
        report.edges.push_back(rec);
    }
    for (const auto& r : report.edges)
        report.overall = std::max(report.overall, r.residual);
    return report;
}

int bisector_corner(const RoofGraph& graph, const EdgeInfo& e)
{
    if (e.face_count() != 2)
        return -1;
    const int n = graph.num_outline();
    for (int v : {e.a, e.b}) {
        if (!graph.is_outline(v))
            continue;
        // v must close an outline edge of one face and open one of the other.
        for (int k1 : graph.face_outline_edges(e.face_left))
            for (int k2 : graph.face_outline_edges(e.face_right)) {
                if ((k1 + 1) % n == k2 && graph.outline_edge(k1)[1] == v)
                    return v;
                if ((k2 + 1) % n == k1 && graph.outline_edge(k2)[1] == v)
                    return v;
            }
    }
    return -1;
}

std::map<EdgeKey, EdgeClass> classify_roof_edges(const RoofGraph& graph, const Embedding& emb)
{
    std::map<EdgeKey, EdgeClass> out;
    for (const auto& e : graph.edges()) {
        if (e.is_outline())
            continue;
        EdgeClass c = EdgeClass::other;
        if (e.face_count() == 2) {
            const int k1 = graph.representative(e.face_left);
            const int k2 = graph.representative(e.face_right);
            if (k1 >= 0 && k2 >= 0 && k1 != k2) {
                const auto [a1, b1] = graph.outline_edge(k1);
                const auto [a2, b2] = graph.outline_edge(k2);
                if (line_angle(emb.xy(b1) - emb.xy(a1), emb.xy(b2) - emb.xy(a2)) < kParallelAngle) {
                    c = EdgeClass::ridge;
                } else if (bisector_corner(graph, e) >= 0) {
                    c = EdgeClass::bisector;
                }
            }
        }
        out[{e.a, e.b}] = c;
    }
    return out;
}

}  // namespace roofforge
