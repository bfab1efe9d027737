#include "roofforge/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace roofforge {

namespace {

[[noreturn]] void schema(const std::string& what) { throw Error(ErrorCode::SchemaError, what); }

void require_object(const Json& j, const std::string& what, std::initializer_list<const char*> allowed)
{
    if (!j.is_object())
        schema(what + " must be an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        const bool ok = std::any_of(allowed.begin(), allowed.end(),
                                    [&](const char* k) { return it.key() == k; });
        if (!ok)
            schema("unknown field '" + it.key() + "' in " + what);
    }
}

const Json& field(const Json& j, const char* key, const std::string& what)
{
    auto it = j.find(key);
    if (it == j.end())
        schema(what + " is missing '" + key + "'");
    return *it;
}

double number(const Json& j, const std::string& what)
{
    if (!j.is_number())
        schema(what + " must be a number");
    const double v = j.get<double>();
    if (!std::isfinite(v))
        schema(what + " must be finite");
    return v;
}

long long integer(const Json& j, const std::string& what)
{
    if (!j.is_number_integer())
        schema(what + " must be an integer");
    return j.get<long long>();
}

/// 1-based id in [1, n] to a 0-based index.
int index_of(const Json& j, int n, const std::string& what)
{
    const long long id = integer(j, what);
    if (id < 1 || id > n)
        schema(what + " " + std::to_string(id) + " out of range");
    return static_cast<int>(id - 1);
}

Vec2 point2(const Json& j, const std::string& what)
{
    if (!j.is_array() || j.size() != 2)
        schema(what + " must be [x, y]");
    return {number(j[0], what), number(j[1], what)};
}

std::array<int, 2> id_pair(const Json& j, int n, const std::string& what)
{
    if (!j.is_array() || j.size() != 2)
        schema(what + " must be a pair of ids");
    return {index_of(j[0], n, what), index_of(j[1], n, what)};
}

void check_format(const Json& j, const char* tag)
{
    const Json& f = field(j, "format", tag);
    if (!f.is_string() || f.get<std::string>() != tag)
        schema(std::string("format must be '") + tag + "'");
}

Json height_group_to_json(const HeightGroup& g)
{
    switch (g.kind) {
    case HeightGroup::Kind::free:
        return "free";
    case HeightGroup::Kind::fixed_zero:
        return "fixed_zero";
    case HeightGroup::Kind::group:
        return Json{{"group", g.label}};
    }
    return nullptr;
}

HeightGroup height_group_from_json(const Json& j)
{
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "free")
            return HeightGroup::free();
        if (s == "fixed_zero")
            return HeightGroup::fixed_zero();
        schema("height_group must be 'free', 'fixed_zero' or {\"group\": label}");
    }
    require_object(j, "height_group", {"group"});
    const Json& label = field(j, "group", "height_group");
    if (!label.is_string() || label.get<std::string>().empty())
        schema("height_group label must be a non-empty string");
    return HeightGroup::group(label.get<std::string>());
}

Json pair_json(int a, int b) { return Json::array({a + 1, b + 1}); }

bool is_flat(const Json& j)
{
    return std::none_of(j.begin(), j.end(), [](const Json& e) { return e.is_structured(); });
}

// Scalar arrays stay on one line; "format" leads every object.
void pretty(const Json& j, int indent, std::string& out)
{
    const std::string pad(indent + 2, ' ');
    if (j.is_array()) {
        if (j.empty() || is_flat(j)) {
            out += j.dump();
            return;
        }
        out += "[\n";
        for (std::size_t k = 0; k < j.size(); ++k) {
            out += pad;
            pretty(j[k], indent + 2, out);
            out += k + 1 < j.size() ? ",\n" : "\n";
        }
        out += std::string(indent, ' ') + "]";
    } else if (j.is_object() && !j.empty()) {
        std::vector<std::string> keys;
        for (auto it = j.begin(); it != j.end(); ++it)
            keys.push_back(it.key());
        std::stable_partition(keys.begin(), keys.end(), [](const std::string& k) { return k == "format"; });
        out += "{\n";
        for (std::size_t k = 0; k < keys.size(); ++k) {
            out += pad + Json(keys[k]).dump() + ": ";
            pretty(j[keys[k]], indent + 2, out);
            out += k + 1 < keys.size() ? ",\n" : "\n";
        }
        out += std::string(indent, ' ') + "}";
    } else {
        out += j.dump();
    }
}

}  // namespace

std::string pretty_json(const Json& j)
{
    std::string out;
    pretty(j, 0, out);
    return out + "\n";
}

ParseFailure::ParseFailure(int line, int column, const std::string& message)
    : Error(ErrorCode::ParseError,
            "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
      line_(line), column_(column)
{
}

Json parse_json(std::string_view text)
{
    try {
        return Json::parse(text.begin(), text.end());
    } catch (const Json::parse_error& e) {
        // e.byte is the 1-based offset of the character that failed.
        const std::size_t end = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
        int line = 1;
        int column = 1;
        for (std::size_t i = 0; i < end; ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        std::string msg = e.what();
        if (auto pos = msg.find("syntax error"); pos != std::string::npos)
            msg = msg.substr(pos);
        throw ParseFailure(line, column, msg);
    }
}

std::string read_text_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        schema("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        schema("cannot write '" + path + "'");
    out << text;
    if (!out)
        schema("failed writing '" + path + "'");
}

RoofGraphDocument roof_graph_from_json(const Json& j)
{
    require_object(j, "roofgraph", {"format", "vertices", "faces", "image"});
    check_format(j, "roofgraph/1");

    const Json& verts = field(j, "vertices", "roofgraph");
    if (!verts.is_array() || verts.empty())
        schema("vertices must be a non-empty array");
    const int n = static_cast<int>(verts.size());
    std::vector<VertexRecord> records(n);
    std::vector<Vec3> coords(n, Vec3::Zero());
    std::vector<bool> seen(n, false);
    int with_z = 0;
    for (const Json& v : verts) {
        require_object(v, "vertex", {"id", "xy", "kind", "z", "height_group"});
        if (!v.contains("id"))
            schema("vertex is missing 'id'");
        const int i = index_of(v["id"], n, "vertex id");
        if (seen[i])
            schema("duplicate vertex id " + std::to_string(i + 1));
        seen[i] = true;
        const std::string where = "vertex " + std::to_string(i + 1);
        coords[i].head<2>() = point2(field(v, "xy", where), where + " xy");
        const Json& kind = field(v, "kind", where);
        if (kind == "outline")
            records[i].kind = VertexKind::outline;
        else if (kind == "roof")
            records[i].kind = VertexKind::roof;
        else
            schema(where + " kind must be 'outline' or 'roof'");
        if (v.contains("z")) {
            coords[i].z() = number(v["z"], where + " z");
            ++with_z;
        }
        if (v.contains("height_group"))
            records[i].height_group = height_group_from_json(v["height_group"]);
    }
    if (with_z != 0 && with_z != n)
        schema("z must be given for every vertex or for none");

    const Json& faces_j = field(j, "faces", "roofgraph");
    if (!faces_j.is_array())
        schema("faces must be an array");
    std::vector<Face> faces;
    for (const Json& f : faces_j) {
        if (!f.is_array())
            schema("face must be an array of vertex ids");
        Face face;
        for (const Json& id : f) {
            const long long raw = integer(id, "face vertex id");
            if (raw < 1 || raw > n)
                schema("face references missing vertex id " + std::to_string(raw));
            face.push_back(static_cast<int>(raw - 1));
        }
        faces.push_back(std::move(face));
    }

    RoofGraphDocument doc;
    std::vector<Vec2> xy(n);
    for (int i = 0; i < n; ++i)
        xy[i] = coords[i].head<2>();
    doc.graph = RoofGraph(std::move(records), orient_faces_ccw(faces, xy));
    doc.embedding = with_z ? Embedding::spatial(std::move(coords)) : Embedding::planar(xy);

    if (j.contains("image")) {
        const Json& im = j["image"];
        require_object(im, "image", {"path", "transform"});
        const Json& path = field(im, "path", "image");
        if (!path.is_string())
            schema("image path must be a string");
        ImageRef ref;
        ref.path = path.get<std::string>();
        if (im.contains("transform")) {
            const Json& t = im["transform"];
            if (!t.is_array() || t.size() != 6)
                schema("image transform must have 6 numbers");
            for (int k = 0; k < 6; ++k)
                ref.transform[k] = number(t[k], "image transform");
        }
        doc.image = ref;
    }
    return doc;
}

Json roof_graph_to_json(const RoofGraphDocument& doc)
{
    const RoofGraph& g = doc.graph;
    const Embedding& e = doc.embedding;
    if (e.size() != g.num_vertices())
        schema("embedding does not match the graph");
    Json verts = Json::array();
    for (int i = 0; i < g.num_vertices(); ++i) {
        Json v;
        v["id"] = i + 1;
        v["kind"] = g.is_outline(i) ? "outline" : "roof";
        v["xy"] = Json::array({e.coords[i].x(), e.coords[i].y()});
        if (e.dim == 3)
            v["z"] = e.coords[i].z();
        if (g.vertices()[i].height_group)
            v["height_group"] = height_group_to_json(*g.vertices()[i].height_group);
        verts.push_back(std::move(v));
    }
    Json faces = Json::array();
    for (const Face& f : g.faces()) {
        Json ids = Json::array();
        for (int v : f)
            ids.push_back(v + 1);
        faces.push_back(std::move(ids));
    }
    Json j{{"format", "roofgraph/1"}, {"vertices", std::move(verts)}, {"faces", std::move(faces)}};
    if (doc.image)
        j["image"] = Json{{"path", doc.image->path}, {"transform", doc.image->transform}};
    return j;
}

RoofGraphDocument load_roof_graph(std::string_view text) { return roof_graph_from_json(parse_json(text)); }
std::string save_roof_graph(const RoofGraphDocument& doc) { return pretty_json(roof_graph_to_json(doc)); }

DualGraph dual_from_json(const Json& j)
{
    require_object(j, "roofdual", {"format", "outline", "adjacency", "merge_map"});
    check_format(j, "roofdual/1");

    const Json& outline = field(j, "outline", "roofdual");
    if (!outline.is_array())
        schema("outline must be an array of points");
    DualGraph d;
    for (const Json& p : outline)
        d.outline.push_back(point2(p, "outline point"));
    const int n = d.size();
    if (n < 3)
        schema("outline needs at least 3 points");

    const Json& adj = field(j, "adjacency", "roofdual");
    if (!adj.is_array())
        schema("adjacency must be an array");
    d.adjacency = Eigen::MatrixXi::Zero(n, n);
    std::size_t width = 0;
    std::set<std::pair<int, int>> seen;
    for (const Json& e : adj) {
        if (!e.is_array() || (e.size() != 2 && e.size() != 3))
            schema("adjacency entries must be [i, j] or [i, j, p]");
        if (width == 0)
            width = e.size();
        else if (e.size() != width)
            schema("adjacency mixes pairs and probability triples");
        const int a = index_of(e[0], n, "adjacency index");
        const int b = index_of(e[1], n, "adjacency index");
        if (a == b)
            schema("adjacency entry joins edge " + std::to_string(a + 1) + " to itself");
        if (!seen.insert(edge_key(a, b)).second)
            schema("duplicate adjacency entry (" + std::to_string(a + 1) + ", " + std::to_string(b + 1) + ")");
        if (width == 3) {
            if (!d.probabilities)
                d.probabilities = Eigen::MatrixXd::Zero(n, n);
            const double p = number(e[2], "probability");
            if (!(p >= 0.0 && p <= 1.0))
                schema("probability " + format_double(p) + " outside [0, 1]");
            (*d.probabilities)(a, b) = (*d.probabilities)(b, a) = p;
            d.adjacency(a, b) = d.adjacency(b, a) = p > 0.5 ? 1 : 0;
        } else {
            d.adjacency(a, b) = d.adjacency(b, a) = 1;
        }
    }

    if (j.contains("merge_map")) {
        const Json& mm = j["merge_map"];
        if (!mm.is_array() || static_cast<int>(mm.size()) != n)
            schema("merge_map must have one entry per outline edge");
        std::vector<int> labels;
        for (const Json& v : mm)
            labels.push_back(index_of(v, n, "merge_map entry"));
        d.merge_map = normalize_merge_map(labels);
    }
    d.validate();
    return d;
}

Json dual_to_json(const DualGraph& d)
{
    const int n = d.size();
    Json outline = Json::array();
    for (const Vec2& p : d.outline)
        outline.push_back(Json::array({p.x(), p.y()}));
    Json adj = Json::array();
    for (int i = 0; i < n; ++i)
        for (int k = i + 1; k < n; ++k) {
            if (d.probabilities) {
                const double p = (*d.probabilities)(i, k);
                if (p > 0.0)
                    adj.push_back(Json::array({i + 1, k + 1, p}));
            } else if (d.adjacency(i, k)) {
                adj.push_back(pair_json(i, k));
            }
        }
    Json j{{"format", "roofdual/1"}, {"outline", std::move(outline)}, {"adjacency", std::move(adj)}};
    if (!d.merge_map.empty()) {
        Json mm = Json::array();
        for (int r : d.merge_map)
            mm.push_back(r + 1);
        j["merge_map"] = std::move(mm);
    }
    return j;
}

DualGraph load_dual(std::string_view text) { return dual_from_json(parse_json(text)); }
std::string save_dual(const DualGraph& dual) { return pretty_json(dual_to_json(dual)); }

EditOp edit_op_from_json(const Json& j)
{
    require_object(j, "edit op", {"kind", "vertex", "edge", "faces", "face", "delta", "split"});
    const Json& kind = field(j, "kind", "edit op");
    if (!kind.is_string())
        schema("edit kind must be a string");
    auto k = parse_edit_kind(kind.get<std::string>());
    if (!k)
        schema("unknown edit kind '" + kind.get<std::string>() + "'");
    EditOp op;
    op.kind = *k;
    // Ids are range-checked against the graph by apply_edit; here only their shape is.
    constexpr int any = 1 << 30;
    auto take = [&](std::initializer_list<const char*> used) {
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (it.key() == "kind")
                continue;
            if (std::none_of(used.begin(), used.end(), [&](const char* u) { return it.key() == u; }))
                schema("field '" + it.key() + "' is not used by " + kind.get<std::string>());
        }
        for (const char* u : used)
            field(j, u, kind.get<std::string>());
    };
    auto delta = [&] {
        const Json& d = j["delta"];
        if (!d.is_array() || (d.size() != 2 && d.size() != 3))
            schema("delta must be [dx, dy] or [dx, dy, dz]");
        for (std::size_t c = 0; c < d.size(); ++c)
            op.delta[c] = number(d[c], "delta");
    };
    switch (op.kind) {
    case EditKind::move_vertex:
        take({"vertex", "delta"});
        op.vertex = index_of(j["vertex"], any, "vertex");
        delta();
        break;
    case EditKind::move_edge:
        take({"edge", "delta"});
        op.edge = id_pair(j["edge"], any, "edge");
        delta();
        break;
    case EditKind::snap_edge:
        take({"edge"});
        op.edge = id_pair(j["edge"], any, "edge");
        break;
    case EditKind::merge_faces:
    case EditKind::force_adjacent:
        take({"faces"});
        op.faces = id_pair(j["faces"], any, "faces");
        break;
    case EditKind::split_face:
        take({"face", "split"});
        op.face = index_of(j["face"], any, "face");
        op.split = id_pair(j["split"], any, "split");
        break;
    }
    return op;
}

Json edit_op_to_json(const EditOp& op)
{
    Json j{{"kind", edit_kind_name(op.kind)}};
    auto delta = [&] { j["delta"] = Json::array({op.delta.x(), op.delta.y(), op.delta.z()}); };
    switch (op.kind) {
    case EditKind::move_vertex:
        j["vertex"] = op.vertex + 1;
        delta();
        break;
    case EditKind::move_edge:
        j["edge"] = pair_json(op.edge[0], op.edge[1]);
        delta();
        break;
    case EditKind::snap_edge:
        j["edge"] = pair_json(op.edge[0], op.edge[1]);
        break;
    case EditKind::merge_faces:
    case EditKind::force_adjacent:
        j["faces"] = pair_json(op.faces[0], op.faces[1]);
        break;
    case EditKind::split_face:
        j["face"] = op.face + 1;
        j["split"] = pair_json(op.split[0], op.split[1]);
        break;
    }
    return j;
}

std::vector<EditOp> load_edit_ops(std::string_view text)
{
    Json j = parse_json(text);
    const Json* ops = &j;
    if (j.is_object()) {
        require_object(j, "edit ops", {"format", "ops"});
        check_format(j, "roofedits/1");
        ops = &field(j, "ops", "edit ops");
    }
    if (!ops->is_array())
        schema("edit ops must be an array");
    std::vector<EditOp> out;
    for (const Json& op : *ops)
        out.push_back(edit_op_from_json(op));
    return out;
}

SolveSpec solve_spec_from_json(const Json& j)
{
    require_object(j, "solve spec",
                   {"mode", "h", "lambda", "gamma", "eta", "theta_deg", "planarity_kind", "tol_grad", "tol_energy",
                    "max_iters", "fixed_vertex", "time_limit"});
    SolveSpec s;
    if (j.contains("mode")) {
        auto m = j["mode"].is_string() ? parse_solve_mode(j["mode"].get<std::string>()) : std::nullopt;
        if (!m)
            schema("mode must be 'primal', 'dual' or 'variable_height'");
        s.mode = *m;
    }
    if (j.contains("h") && !j["h"].is_null())
        s.h = number(j["h"], "h");
    auto num = [&](const char* key, double& dst) {
        if (j.contains(key))
            dst = number(j[key], key);
    };
    num("lambda", s.lambda);
    num("gamma", s.gamma);
    num("eta", s.eta);
    num("theta_deg", s.theta_deg);
    num("tol_grad", s.tol_grad);
    num("tol_energy", s.tol_energy);
    num("time_limit", s.time_limit);
    if (j.contains("planarity_kind")) {
        auto k = j["planarity_kind"].is_string() ? parse_metric(j["planarity_kind"].get<std::string>())
                                                 : std::nullopt;
        if (!k)
            schema("unknown planarity_kind");
        s.planarity_kind = *k;
    }
    if (j.contains("max_iters")) {
        const long long it = integer(j["max_iters"], "max_iters");
        s.max_iters = static_cast<int>(std::clamp<long long>(it, -1, 1 << 30));
    }
    if (j.contains("fixed_vertex") && !j["fixed_vertex"].is_null()) {
        const long long id = integer(j["fixed_vertex"], "fixed_vertex");
        s.fixed_vertex = static_cast<int>(std::clamp<long long>(id, -1, 1 << 30)) - 1;
    }
    s.validate();
    return s;
}

Json solve_spec_to_json(const SolveSpec& s)
{
    Json j{{"mode", solve_mode_name(s.mode)},
           {"lambda", s.lambda},
           {"gamma", s.gamma},
           {"eta", s.eta},
           {"theta_deg", s.theta_deg},
           {"planarity_kind", metric_name(s.planarity_kind)},
           {"tol_grad", s.tol_grad},
           {"tol_energy", s.tol_energy},
           {"max_iters", s.max_iters},
           {"time_limit", s.time_limit}};
    if (s.h)
        j["h"] = *s.h;
    if (s.fixed_vertex)
        j["fixed_vertex"] = *s.fixed_vertex + 1;
    return j;
}

Json validity_report_to_json(const ValidityReport& r)
{
    Json edges = Json::array();
    for (const EdgeValidity& e : r.edges) {
        Json ej{{"edge", pair_json(e.a, e.b)}, {"case", validity_case_name(e.kind)}};
        ej["residual"] = std::isfinite(e.residual) ? Json(e.residual) : Json("inf");
        edges.push_back(std::move(ej));
    }
    Json j{{"valid", r.valid()}, {"tol", r.tol}, {"edges", std::move(edges)}};
    j["overall"] = std::isfinite(r.overall) ? Json(r.overall) : Json("inf");
    return j;
}

Json solve_summary_to_json(const SolveResult& r)
{
    Json j{{"converged", r.converged},
           {"iterations", r.iterations},
           {"planarity", r.planarity},
           {"metric_value", r.metric_value},
           {"h", r.h},
           {"stop_reason", r.stop_reason}};
    j["fixed_vertex"] = r.fixed_vertex >= 0 ? Json(r.fixed_vertex + 1) : Json(nullptr);
    return j;
}

Json candidate_to_json(const AdjacencyCandidate& c)
{
    Json pairs = Json::array();
    for (int i = 0; i < c.adjacency.rows(); ++i)
        for (int k = i + 1; k < c.adjacency.cols(); ++k)
            if (c.adjacency(i, k))
                pairs.push_back(pair_json(i, k));
    Json prov = Json::array();
    for (const ResolvedConflict& rc : c.provenance) {
        Json p{{"kind", rc.kind == ResolvedConflict::Kind::exterior ? "exterior" : "crossing"},
               {"dropped", pair_json(rc.dropped.first, rc.dropped.second)}};
        if (rc.kind == ResolvedConflict::Kind::crossing)
            p["kept"] = pair_json(rc.kept.first, rc.kept.second);
        prov.push_back(std::move(p));
    }
    return Json{{"adjacency", std::move(pairs)}, {"score", c.score}, {"provenance", std::move(prov)}};
}

DualGraph candidate_dual(const std::vector<Vec2>& outline, const AdjacencyCandidate& cand)
{
    DualGraph d;
    d.outline = outline;
    d.adjacency = cand.adjacency;
    return d;
}

Json error_to_json(const Error& e)
{
    Json j{{"error", e.name()}, {"message", e.what()}};
    if (auto* pf = dynamic_cast<const ParseFailure*>(&e)) {
        j["line"] = pf->line();
        j["column"] = pf->column();
    }
    return j;
}

BuildingMesh build_mesh(const RoofGraph& graph, const Embedding& emb, const ExportOptions& opts)
{
    if (emb.dim != 3 || emb.size() != graph.num_vertices())
        throw Error(ErrorCode::NonPlanarInput, "export needs a 3D embedding of the graph");
    const double err = normalized_planarity(graph, emb);
    if (!(err < 1e-9))
        throw Error(ErrorCode::NonPlanarInput, "roof planarity " + format_double(err) + " is not below 1e-9");

    const std::vector<int>& outline = graph.outline();
    const int n = graph.num_vertices();
    const int m = graph.num_outline();
    bool flat_outline = true;
    double top = 0.0;
    for (int v : outline)
        flat_outline = flat_outline && emb.coords[v].z() == 0.0;
    for (const Vec3& p : emb.coords)
        top = std::max(top, p.z());
    const double lift = opts.facades && flat_outline ? opts.facade_ratio * top : 0.0;

    BuildingMesh mesh;
    mesh.vertices = emb.coords;
    for (Vec3& p : mesh.vertices)
        p.z() += lift;
    mesh.roof = graph.faces();
    if (!opts.facades)
        return mesh;

    for (int v : outline)
        mesh.vertices.emplace_back(emb.coords[v].x(), emb.coords[v].y(), 0.0);
    // Outline runs counter-clockwise seen from above, so each facade is wound
    // bottom-a, bottom-b, top-b, top-a to face outward.
    for (int k = 0; k < m; ++k) {
        const int a = outline[k];
        const int b = outline[(k + 1) % m];
        Face f;
        if (mesh.vertices[a].z() != 0.0)
            f.push_back(n + k);
        if (mesh.vertices[b].z() != 0.0)
            f.push_back(n + (k + 1) % m);
        f.push_back(b);
        f.push_back(a);
        if (f.size() >= 3)
            mesh.facade.push_back(std::move(f));
    }
    Face base;
    for (int k = m - 1; k >= 0; --k)
        base.push_back(n + k);
    mesh.base.push_back(std::move(base));
    return mesh;
}

std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string mesh_to_obj(const BuildingMesh& mesh)
{
    std::string out = "# roofforge building, z up\n";
    for (const Vec3& p : mesh.vertices)
        out += "v " + format_double(p.x()) + " " + format_double(p.y()) + " " + format_double(p.z()) + "\n";
    auto group = [&](const char* name, const std::vector<Face>& faces) {
        if (faces.empty())
            return;
        out += std::string("g ") + name + "\n";
        for (const Face& f : faces) {
            out += "f";
            for (int v : f)
                out += " " + std::to_string(v + 1);
            out += "\n";
        }
    };
    group("roof", mesh.roof);
    group("facade", mesh.facade);
    group("base", mesh.base);
    return out;
}

std::string export_building(const RoofGraph& graph, const Embedding& emb, const ExportOptions& opts)
{
    return mesh_to_obj(build_mesh(graph, emb, opts));
}

}  // namespace roofforge
