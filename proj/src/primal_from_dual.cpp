#include "roofforge/graph.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace roofforge {

namespace {

struct Dart {
    int from;
    int to;
};

[[noreturn]] void non_realizable(const std::string& what)
{
    throw Error(ErrorCode::NonRealizableAdjacency, what);
}

Vec2 midpoint(const DualGraph& d, int k)
{
    return 0.5 * (d.outline[k] + d.outline[(k + 1) % d.size()]);
}

std::string crossing_pairs(const DualGraph& dual, const std::vector<std::pair<int, int>>& chords)
{
    std::ostringstream os;
    int found = 0;
    for (std::size_t a = 0; a < chords.size(); ++a)
        for (std::size_t b = a + 1; b < chords.size(); ++b) {
            const auto [i, j] = chords[a];
            const auto [k, l] = chords[b];
            if (i == k || i == l || j == k || j == l)
                continue;
            if (segments_cross(midpoint(dual, i), midpoint(dual, j), midpoint(dual, k),
                               midpoint(dual, l))) {
                os << (found++ ? ", " : "") << "(" << i << "," << j << ")x(" << k << "," << l << ")";
            }
        }
    return found ? "crossing adjacencies: " + os.str() : "adjacency has no planar realization";
}

}  // namespace

PrimalRecovery recover_primal(const DualGraph& dual)
{
    dual.validate();
    const int n = dual.size();

    std::vector<int> reps;
    std::map<int, int> node_of_rep;
    for (int k = 0; k < n; ++k)
        if (dual.face_of(k) == k) {
            node_of_rep[k] = static_cast<int>(reps.size());
            reps.push_back(k);
        }
    const int m = static_cast<int>(reps.size());
    const int f0 = m;
    std::vector<std::vector<int>> ports(m);
    for (int k = 0; k < n; ++k)
        ports[node_of_rep.at(dual.face_of(k))].push_back(k);

    std::vector<Dart> darts;
    auto add_edge = [&](int u, int v) {
        darts.push_back({u, v});
        darts.push_back({v, u});
        return static_cast<int>(darts.size()) - 2;
    };
    std::vector<int> port_edge(n);
    for (int k = 0; k < n; ++k)
        port_edge[k] = add_edge(f0, node_of_rep.at(dual.face_of(k)));
    std::vector<std::pair<int, int>> chords;
    for (int i : reps)
        for (int j : reps)
            if (i < j && dual.adjacency(i, j) == 1) {
                chords.emplace_back(i, j);
                add_edge(node_of_rep.at(i), node_of_rep.at(j));
            }

    // Counter-clockwise rotation system with nodes on the outline cycle.
    std::vector<std::vector<int>> rot(m + 1);
    for (int k = n - 1; k >= 0; --k)
        rot[f0].push_back(port_edge[k]);
    for (int u = 0; u < m; ++u) {
        const int origin = ports[u].front();
        auto offset = [&](int k) { return ((k - origin) % n + n) % n; };
        std::vector<std::pair<int, int>> keyed;
        for (int k : ports[u])
            keyed.emplace_back(offset(k), port_edge[k] + 1);
        for (int d = 2 * n; d < static_cast<int>(darts.size()); ++d) {
            if (darts[d].from != u)
                continue;
            int best = n;
            for (int k : ports[darts[d].to])
                best = std::min(best, offset(k));
            keyed.emplace_back(best, d);
        }
        std::sort(keyed.begin(), keyed.end());
        for (const auto& [key, d] : keyed)
            rot[u].push_back(d);
    }
    std::vector<int> rot_pos(darts.size(), -1);
    for (const auto& r : rot)
        for (int i = 0; i < static_cast<int>(r.size()); ++i)
            rot_pos[r[i]] = i;

    auto next_dart = [&](int d) {
        const int t = d ^ 1;
        const auto& r = rot[darts[t].from];
        const int deg = static_cast<int>(r.size());
        return r[(rot_pos[t] - 1 + deg) % deg];
    };

    std::vector<int> face_of_dart(darts.size(), -1);
    std::vector<std::vector<int>> dual_faces;
    for (int d0 = 0; d0 < static_cast<int>(darts.size()); ++d0) {
        if (face_of_dart[d0] >= 0)
            continue;
        const int id = static_cast<int>(dual_faces.size());
        dual_faces.emplace_back();
        for (int d = d0; face_of_dart[d] < 0; d = next_dart(d)) {
            face_of_dart[d] = id;
            dual_faces.back().push_back(d);
        }
    }

    const int v_count = m + 1;
    const int e_count = static_cast<int>(darts.size()) / 2;
    const int f_count = static_cast<int>(dual_faces.size());
    if (v_count - e_count + f_count != 2)
        non_realizable(crossing_pairs(dual, chords));

    // Outline vertex k sits left of the outside dart through port k.
    std::vector<int> primal_of_face(f_count, -1);
    for (int k = 0; k < n; ++k) {
        const int f = face_of_dart[port_edge[k]];
        if (primal_of_face[f] >= 0)
            non_realizable("outline vertices " + std::to_string(primal_of_face[f]) + " and " +
                           std::to_string(k) + " collapse into one corner");
        primal_of_face[f] = k;
    }
    for (int f = 0; f < f_count; ++f) {
        int touches = 0;
        for (int d : dual_faces[f])
            touches += darts[d].from == f0;
        if (touches > 1)
            non_realizable(crossing_pairs(dual, chords));
    }
    int next_id = n;
    for (int f = 0; f < f_count; ++f)
        if (primal_of_face[f] < 0)
            primal_of_face[f] = next_id++;

    std::vector<VertexRecord> records(next_id);
    for (int v = 0; v < n; ++v)
        records[v].kind = VertexKind::outline;

    std::vector<Face> faces;
    for (int u = 0; u < m; ++u) {
        Face face;
        for (int d : rot[u])
            face.push_back(primal_of_face[face_of_dart[d]]);
        faces.push_back(face);
    }

    std::vector<Vec2> node_pos(m, Vec2::Zero());
    for (int u = 0; u < m; ++u) {
        for (int k : ports[u])
            node_pos[u] += midpoint(dual, k);
        node_pos[u] /= static_cast<double>(ports[u].size());
    }
    std::vector<Vec2> layout(next_id, Vec2::Zero());
    for (int k = 0; k < n; ++k)
        layout[k] = dual.outline[k];
    for (int f = 0; f < f_count; ++f) {
        const int v = primal_of_face[f];
        if (v < n)
            continue;
        for (int d : dual_faces[f])
            layout[v] += node_pos[darts[d].from];
        layout[v] /= static_cast<double>(dual_faces[f].size());
    }

    PrimalRecovery out;
    try {
        out.graph = RoofGraph(std::move(records), std::move(faces));
    } catch (const Error& e) {
        non_realizable(std::string("recovered faces are not a roof graph: ") + e.what());
    }
    out.layout = Embedding::planar(layout);

    const DualGraph back = dual_from_primal(out.graph, out.layout);
    if (back.adjacency != dual.adjacency)
        non_realizable(crossing_pairs(dual, chords));
    return out;
}

RoofGraph primal_from_dual(const DualGraph& dual)
{
    return recover_primal(dual).graph;
}

}  // namespace roofforge
