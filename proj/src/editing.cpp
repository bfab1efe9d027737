#include "roofforge/editing.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <deque>
#include <set>

namespace roofforge {

const char* edit_kind_name(EditKind k)
{
    switch (k) {
    case EditKind::move_vertex: return "move_vertex";
    case EditKind::move_edge: return "move_edge";
    case EditKind::snap_edge: return "snap_edge";
    case EditKind::merge_faces: return "merge_faces";
    case EditKind::split_face: return "split_face";
    case EditKind::force_adjacent: return "force_adjacent";
    }
    return "move_vertex";
}

std::optional<EditKind> parse_edit_kind(std::string_view name)
{
    for (auto k : {EditKind::move_vertex, EditKind::move_edge, EditKind::snap_edge, EditKind::merge_faces,
                   EditKind::split_face, EditKind::force_adjacent})
        if (name == edit_kind_name(k))
            return k;
    return std::nullopt;
}

namespace {

[[noreturn]] void bad_target(const std::string& what)
{
    throw Error(ErrorCode::InvalidTarget, what);
}

RoofGraph rebuild(std::vector<VertexRecord> vertices, std::vector<Face> faces)
{
    try {
        return RoofGraph(std::move(vertices), std::move(faces));
    } catch (const Error& e) {
        if (e.code() != ErrorCode::InvalidGraph)
            throw;
        bad_target(std::string("edit would break the roof graph: ") + e.what());
    }
}

void check_vertex(const RoofGraph& g, int v)
{
    if (v < 0 || v >= g.num_vertices())
        bad_target("vertex " + std::to_string(v) + " does not exist");
}

void check_face(const RoofGraph& g, int f)
{
    if (f < 0 || f >= g.num_faces())
        bad_target("face " + std::to_string(f) + " does not exist");
}

const EdgeInfo& check_edge(const RoofGraph& g, const std::array<int, 2>& e)
{
    check_vertex(g, e[0]);
    check_vertex(g, e[1]);
    const int idx = g.find_edge(e[0], e[1]);
    if (idx < 0)
        bad_target("edge (" + std::to_string(e[0]) + ", " + std::to_string(e[1]) + ") does not exist");
    return g.edges()[idx];
}

void translate(Embedding& emb, int v, const Vec3& delta)
{
    emb.coords[v].x() += delta.x();
    emb.coords[v].y() += delta.y();
    if (emb.dim == 3)
        emb.coords[v].z() += delta.z();
}

int position(const Face& f, int v)
{
    return static_cast<int>(std::find(f.begin(), f.end(), v) - f.begin());
}

Face rotate_to(const Face& f, int v)
{
    Face out(f.begin() + position(f, v), f.end());
    out.insert(out.end(), f.begin(), f.begin() + position(f, v));
    return out;
}

EditResult snap_edge(const RoofGraph& g, const Embedding& emb, const EditOp& op)
{
    const EdgeInfo& e = check_edge(g, op.edge);
    if (e.face_count() != 2 || g.is_outline(e.a) || g.is_outline(e.b))
        bad_target("snap_edge needs a roof edge between two roof vertices");
    const int keep = e.a;  // a < b
    const int drop = e.b;
    std::vector<Face> faces;
    for (const Face& f : g.faces()) {
        Face merged;
        for (int v : f) {
            const int w = v == drop ? keep : v;
            if (merged.empty() || merged.back() != w)
                merged.push_back(w);
        }
        while (merged.size() > 1 && merged.front() == merged.back())
            merged.pop_back();
        if (merged.size() < 3)
            throw Error(ErrorCode::WouldCreateDegenerateFace, "snapping the edge leaves a face with fewer than 3 vertices");
        for (int& v : merged)
            if (v > drop)
                --v;
        faces.push_back(std::move(merged));
    }
    std::vector<VertexRecord> vertices = g.vertices();
    vertices.erase(vertices.begin() + drop);
    Embedding out = emb;
    out.coords[keep] = 0.5 * (emb.coords[keep] + emb.coords[drop]);
    out.coords.erase(out.coords.begin() + drop);
    return {rebuild(std::move(vertices), std::move(faces)), std::move(out), keep};
}

EditResult merge_faces(const RoofGraph& g, const Embedding& emb, const EditOp& op)
{
    const auto [f1, f2] = op.faces;
    check_face(g, f1);
    check_face(g, f2);
    if (f1 == f2)
        bad_target("merge_faces needs two different faces");
    const EdgeInfo* shared = nullptr;
    int count = 0;
    for (const auto& e : g.edges())
        if ((e.face_left == f1 && e.face_right == f2) || (e.face_left == f2 && e.face_right == f1)) {
            shared = &e;
            ++count;
        }
    if (count != 1)
        bad_target("merge_faces needs faces sharing exactly one edge (they share " + std::to_string(count) + ")");
    // face_left runs a -> b, face_right runs b -> a.
    const Face left = rotate_to(g.faces()[shared->face_left], shared->b);
    const Face right = rotate_to(g.faces()[shared->face_right], shared->a);
    Face merged = left;
    merged.insert(merged.end(), right.begin() + 1, right.end() - 1);
    std::vector<Face> faces = g.faces();
    faces[std::min(f1, f2)] = merged;
    faces.erase(faces.begin() + std::max(f1, f2));
    return {rebuild(g.vertices(), std::move(faces)), emb, std::nullopt};
}

EditResult split_face(const RoofGraph& g, const Embedding& emb, const EditOp& op)
{
    check_face(g, op.face);
    const Face& f = g.faces()[op.face];
    const int n = static_cast<int>(f.size());
    int i = position(f, op.split[0]);
    int j = position(f, op.split[1]);
    if (i == n || j == n || i == j)
        bad_target("split vertices must be two distinct vertices of the face");
    if (i > j)
        std::swap(i, j);
    if (j - i == 1 || (i == 0 && j == n - 1))
        bad_target("split vertices are adjacent in the face");
    if (g.find_edge(f[i], f[j]) >= 0)
        bad_target("split vertices are already joined by an edge");
    const Face a(f.begin() + i, f.begin() + j + 1);
    Face b(f.begin() + j, f.end());
    b.insert(b.end(), f.begin(), f.begin() + i + 1);
    std::vector<Face> faces = g.faces();
    faces[op.face] = a;
    faces.push_back(b);
    return {rebuild(g.vertices(), std::move(faces)), emb, std::nullopt};
}

/// Edge flip: the edge p-q between faces g and h is replaced by one between fa and fb.
EditResult force_adjacent(const RoofGraph& g, const Embedding& emb, const EditOp& op)
{
    const auto [fa, fb] = op.faces;
    check_face(g, fa);
    check_face(g, fb);
    if (fa == fb)
        bad_target("force_adjacent needs two different faces");
    for (const auto& e : g.edges())
        if ((e.face_left == fa && e.face_right == fb) || (e.face_left == fb && e.face_right == fa))
            bad_target("faces are already adjacent");

    auto contains = [&](int f, int v) { return position(g.faces()[f], v) < static_cast<int>(g.faces()[f].size()); };
    std::optional<Error> degenerate;
    for (const auto& e : g.edges()) {
        if (e.face_count() != 2 || g.is_outline(e.a) || g.is_outline(e.b))
            continue;
        if (e.face_left == fa || e.face_left == fb || e.face_right == fa || e.face_right == fb)
            continue;
        for (const auto& [p, q] : {std::pair{e.a, e.b}, std::pair{e.b, e.a}}) {
            if (!contains(fa, p) || !contains(fb, q) || contains(fa, q) || contains(fb, p))
                continue;
            // gf holds p -> q, hf holds q -> p.
            const int gf = p == e.a ? e.face_left : e.face_right;
            const int hf = p == e.a ? e.face_right : e.face_left;
            if (g.faces()[gf].size() < 4 || g.faces()[hf].size() < 4) {
                degenerate = Error(ErrorCode::WouldCreateDegenerateFace,
                                   "flipping the edge leaves a triangle with two vertices");
                continue;
            }
            std::vector<Face> faces = g.faces();
            Face& A = faces[fa];
            A.insert(A.begin() + position(A, p), q);
            Face& B = faces[fb];
            B.insert(B.begin() + position(B, q), p);
            faces[gf].erase(faces[gf].begin() + position(faces[gf], q));
            faces[hf].erase(faces[hf].begin() + position(faces[hf], p));
            RoofGraph out;
            try {
                out = RoofGraph(g.vertices(), faces);
            } catch (const Error&) {
                continue;
            }
            // Quarter turn about the midpoint at half length; p ends on g's side.
            Embedding moved = emb;
            const Vec2 P = emb.xy(p), Q = emb.xy(q);
            const Vec2 mid = 0.5 * (P + Q);
            const Vec2 d = Q - P;
            const Vec2 left(-d.y(), d.x());
            moved.coords[p].head<2>() = mid + 0.25 * left;
            moved.coords[q].head<2>() = mid - 0.25 * left;
            return {std::move(out), std::move(moved), std::nullopt};
        }
    }
    if (degenerate)
        throw *degenerate;
    bad_target("no roof edge can be flipped to make the faces adjacent");
}

}  // namespace

EditResult apply_edit(const RoofGraph& graph, const Embedding& emb, const EditOp& op)
{
    if (emb.size() != graph.num_vertices())
        bad_target("embedding does not match the graph");
    if (!op.delta.allFinite())
        bad_target("delta must be finite");
    switch (op.kind) {
    case EditKind::move_vertex: {
        check_vertex(graph, op.vertex);
        Embedding out = emb;
        translate(out, op.vertex, op.delta);
        std::optional<int> seed;
        if (!graph.is_outline(op.vertex))
            seed = op.vertex;
        return {graph, std::move(out), seed};
    }
    case EditKind::move_edge: {
        check_edge(graph, op.edge);
        Embedding out = emb;
        translate(out, op.edge[0], op.delta);
        translate(out, op.edge[1], op.delta);
        return {graph, std::move(out), std::nullopt};
    }
    case EditKind::snap_edge: return snap_edge(graph, emb, op);
    case EditKind::merge_faces: return merge_faces(graph, emb, op);
    case EditKind::split_face: return split_face(graph, emb, op);
    case EditKind::force_adjacent: return force_adjacent(graph, emb, op);
    }
    bad_target("unknown edit kind");
}

namespace {

double rule_residual(const EdgeRule& rule, const Vec2& a, const Vec2& b, double diag)
{
    const Vec2 d = b - a;
    if (d.norm() <= 1e-14 * diag)
        return std::numeric_limits<double>::infinity();
    if (rule.kind == ValidityCase::parallel)
        return line_angle(d, rule.value);
    if (!rule.constrains)
        return 0.0;
    return std::abs(cross2(d.normalized(), rule.value - a)) / diag;
}

}  // namespace

AffectedRegion smallest_affected_region(const RoofGraph& graph, const Embedding& emb, int seed, double tol)
{
    if (seed < 0 || seed >= graph.num_vertices() || graph.is_outline(seed))
        bad_target("the seed must be a roof vertex");
    const int n = graph.num_vertices();
    std::vector<Vec2> outline_pts;
    for (int v : graph.outline())
        outline_pts.push_back(emb.xy(v));
    const double diag = bbox_diagonal(outline_pts);

    // Rules only depend on outline positions, which an interior move never changes.
    std::vector<std::optional<EdgeRule>> rules;
    for (const auto& e : graph.edges())
        rules.push_back(edge_rule(graph, emb, e));

    std::vector<Vec2> pos = emb.all_xy();
    std::vector<char> fixed(n, 0);
    for (int v = 0; v < n; ++v)
        fixed[v] = graph.is_outline(v);
    fixed[seed] = 1;
    std::set<int> region;

    // Least-squares point on the lines imposed by fixed neighbours, nudged toward the old spot.
    auto place = [&](int w) {
        const double eps = 1e-12;
        Eigen::Matrix2d M = eps * Eigen::Matrix2d::Identity();
        Vec2 rhs = eps * pos[w];
        for (int k : graph.neighbors(w)) {
            if (!fixed[k])
                continue;
            const auto& rule = rules[graph.find_edge(w, k)];
            if (!rule || (!rule->constrains && rule->kind != ValidityCase::parallel))
                continue;
            const Vec2 dir = rule->kind == ValidityCase::parallel ? rule->value : rule->value - pos[k];
            if (dir.norm() <= 1e-14 * diag)
                continue;
            const Vec2 nrm = Vec2(-dir.y(), dir.x()).normalized();
            M += nrm * nrm.transpose();
            rhs += nrm * nrm.dot(pos[k]);
        }
        pos[w] = M.ldlt().solve(rhs);
    };

    std::deque<int> queue{seed};
    while (!queue.empty()) {
        const int u = queue.front();
        queue.pop_front();
        for (int w : graph.neighbors(u)) {
            if (fixed[w])
                continue;
            const auto& rule = rules[graph.find_edge(u, w)];
            if (!rule || rule_residual(*rule, pos[u], pos[w], diag) <= tol)
                continue;
            region.insert(w);
            fixed[w] = 1;
            place(w);
            queue.push_back(w);
        }
    }

    // Every constraint among the settled vertices must now hold.
    for (std::size_t i = 0; i < graph.edges().size(); ++i) {
        const auto& e = graph.edges()[i];
        const bool touched = e.a == seed || e.b == seed || region.count(e.a) || region.count(e.b);
        if (!touched || !rules[i] || !fixed[e.a] || !fixed[e.b])
            continue;
        if (rule_residual(*rules[i], pos[e.a], pos[e.b], diag) > tol)
            throw Error(ErrorCode::RegionIsAllRoofVertices,
                        "no local region restores edge (" + std::to_string(e.a) + ", " + std::to_string(e.b) + ")");
    }
    return {std::vector<int>(region.begin(), region.end()), seed};
}

SolveResult reoptimize_region(const RoofGraph& graph, const Embedding& emb3d, const AffectedRegion& region,
                              const SolveSpec& spec)
{
    for (int v : region.region)
        if (v < 0 || v >= graph.num_vertices() || graph.is_outline(v) || v == region.seed)
            bad_target("region must list roof vertices other than the seed");
    SolveResult r = optimize_subset(graph, emb3d, region.region, spec);
    r.converged = r.converged && r.planarity < 1e-9;
    return r;
}

ReoptimizeOutcome reoptimize_after_edit(const RoofGraph& graph, const Embedding& emb3d, int seed,
                                        const SolveSpec& spec)
{
    ReoptimizeOutcome out;
    const std::vector<int> roof = graph.roof_vertices();
    try {
        out.region = smallest_affected_region(graph, project_xy(emb3d), seed);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::RegionIsAllRoofVertices)
            throw;
        out.region.seed = seed;
        for (int v : roof)
            if (v != seed)
                out.region.region.push_back(v);
    }
    for (;;) {
        out.result = reoptimize_region(graph, emb3d, out.region, spec);
        if (out.result.converged)
            return out;
        std::set<int> grown(out.region.region.begin(), out.region.region.end());
        std::vector<int> ring = out.region.region;
        ring.push_back(seed);
        for (int v : ring)
            for (int u : graph.neighbors(v))
                if (!graph.is_outline(u) && u != seed)
                    grown.insert(u);
        if (grown.size() == out.region.region.size())
            break;
        out.region.region.assign(grown.begin(), grown.end());
        ++out.expansions;
    }
    // Full solve from the current layout, keeping the seed's height.
    SolveSpec full = spec;
    full.fixed_vertex = seed;
    if (emb3d.coords[seed].z() > 0.0)
        full.h = emb3d.coords[seed].z();
    out.result = optimize_primal(graph, project_xy(emb3d), full);
    out.full_resolve = true;
    return out;
}

ReoptimizeOutcome reoptimize_edit(const EditResult& edit, const SolveSpec& spec)
{
    if (edit.seed)
        return reoptimize_after_edit(edit.graph, edit.embedding, *edit.seed, spec);
    ReoptimizeOutcome out;
    SolveSpec full = spec;
    const int fixed = default_fixed_vertex(edit.graph);
    full.fixed_vertex = fixed;
    if (fixed >= 0 && edit.embedding.dim == 3 && edit.embedding.coords[fixed].z() > 0.0)
        full.h = edit.embedding.coords[fixed].z();
    out.result = optimize_primal(edit.graph, project_xy(edit.embedding), full);
    out.full_resolve = true;
    return out;
}

EditSession::EditSession(RoofGraph graph, Embedding embedding)
    : graph_(std::move(graph)), embedding_(std::move(embedding))
{
    if (embedding_.size() != graph_.num_vertices())
        bad_target("embedding does not match the graph");
}

void EditSession::push_undo()
{
    undo_.push_back({graph_, embedding_});
    redo_.clear();
}

EditResult EditSession::apply(const EditOp& op)
{
    EditResult r = apply_edit(graph_, embedding_, op);
    push_undo();
    graph_ = r.graph;
    embedding_ = r.embedding;
    return r;
}

void EditSession::replace(RoofGraph graph, Embedding embedding)
{
    push_undo();
    graph_ = std::move(graph);
    embedding_ = std::move(embedding);
}

void EditSession::amend(RoofGraph graph, Embedding embedding)
{
    graph_ = std::move(graph);
    embedding_ = std::move(embedding);
}

bool EditSession::undo()
{
    if (undo_.empty())
        return false;
    redo_.push_back({graph_, embedding_});
    graph_ = std::move(undo_.back().graph);
    embedding_ = std::move(undo_.back().embedding);
    undo_.pop_back();
    return true;
}

bool EditSession::redo()
{
    if (redo_.empty())
        return false;
    undo_.push_back({graph_, embedding_});
    graph_ = std::move(redo_.back().graph);
    embedding_ = std::move(redo_.back().embedding);
    redo_.pop_back();
    return true;
}

}  // namespace roofforge
