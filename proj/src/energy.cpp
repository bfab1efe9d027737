#include "roofforge/energy.hpp"

#include "roofforge/kernels.hpp"

#include <cmath>
#include <limits>

namespace roofforge {

const char* metric_name(MetricKind kind)
{
    switch (kind) {
    case MetricKind::smallest_eig: return "smallest_eig";
    case MetricKind::det: return "det";
    case MetricKind::proj: return "proj";
    case MetricKind::diag: return "diag";
    case MetricKind::validity2d: return "validity2d";
    }
    return "smallest_eig";
}

std::optional<MetricKind> parse_metric(std::string_view name)
{
    for (auto k : {MetricKind::smallest_eig, MetricKind::det, MetricKind::proj, MetricKind::diag,
                   MetricKind::validity2d})
        if (name == metric_name(k))
            return k;
    return std::nullopt;
}

namespace {

void require_points(const std::vector<Vec3>& pts, MetricKind kind)
{
    const std::size_t need = kind == MetricKind::diag ? 4 : 3;
    if (pts.size() < need)
        throw Error(ErrorCode::TooFewPoints, std::string(metric_name(kind)) + " needs at least " +
                                                 std::to_string(need) + " points");
}

Eigen::MatrixXd rows(const std::vector<Vec3>& g)
{
    Eigen::MatrixXd m(static_cast<Eigen::Index>(g.size()), 3);
    for (std::size_t i = 0; i < g.size(); ++i)
        m.row(static_cast<Eigen::Index>(i)) = g[i].transpose();
    return m;
}

std::vector<Vec2> outline_points(const RoofGraph& graph, const Embedding& emb)
{
    std::vector<Vec2> pts;
    for (int v : graph.outline())
        pts.push_back(emb.xy(v));
    return pts;
}

}  // namespace

double face_planarity_value(const std::vector<Vec3>& pts, MetricKind kind, int* skipped)
{
    require_points(pts, kind);
    return kernels::face_value(pts, kind, skipped);
}

EnergyValue face_planarity(const std::vector<Vec3>& pts, MetricKind kind)
{
    require_points(pts, kind);
    EnergyValue out;
    int skipped = 0;
    out.value = kernels::face_value(pts, kind, &skipped);
    out.gradient = rows(kernels::face_gradient(pts, kind));
    for (int i = 0; i < skipped; ++i)
        out.flagged.push_back(i);
    return out;
}

EnergyValue roof_planarity(const RoofGraph& graph, const Embedding& emb, MetricKind kind)
{
    if (kind == MetricKind::validity2d)
        throw Error(ErrorCode::InvalidSolveSpec, "validity2d is a 2D energy");
    return kernels::planarity(graph.faces(), emb.coords, kind, true);
}

std::vector<AestheticTerm> aesthetic_terms(const RoofGraph& graph, const Embedding& emb)
{
    const auto classes = classify_roof_edges(graph, emb);
    const int n = graph.num_outline();
    std::vector<AestheticTerm> terms;
    for (int i = 0; i < static_cast<int>(graph.edges().size()); ++i) {
        const EdgeInfo& e = graph.edges()[i];
        if (e.is_outline())
            continue;
        const EdgeClass c = classes.at({e.a, e.b});
        AestheticTerm t;
        t.edge = i;
        if (c == EdgeClass::bisector) {
            const int corner = bisector_corner(graph, e);
            t.kind = AestheticKind::bisector;
            t.u = corner;
            t.w = e.a == corner ? e.b : e.a;
            // The outline edges entering and leaving the corner.
            for (int k = 0; k < n; ++k) {
                const auto [a, b] = graph.outline_edge(k);
                if (b == corner)
                    t.outline[0] = a;
                if (a == corner)
                    t.outline[1] = b;
            }
            terms.push_back(t);
        } else if (c == EdgeClass::ridge) {
            t.kind = AestheticKind::ridge;
            t.u = e.a;
            t.w = e.b;
            const auto q1 = graph.outline_edge(graph.representative(e.face_left));
            const auto q2 = graph.outline_edge(graph.representative(e.face_right));
            t.outline = {q1[0], q1[1], q2[0], q2[1]};
            terms.push_back(t);
        }
    }
    return terms;
}

double aesthetic_term_value(const AestheticTerm& t, const std::vector<Vec3>& x)
{
    if (t.kind == AestheticKind::bisector) {
        const Vec3 e = x[t.w] - x[t.u];
        const Vec3 e1 = x[t.outline[0]] - x[t.u];
        const Vec3 e2 = x[t.outline[1]] - x[t.u];
        if (e.norm() == 0.0 || e1.norm() == 0.0 || e2.norm() == 0.0)
            return -1.0;
        const Vec3 eh = e.normalized();
        const double d = eh.dot(e1.normalized()) - eh.dot(e2.normalized());
        return d * d;
    }
    const Vec2 a = x[t.u].head<2>();
    const Vec2 b = x[t.w].head<2>();
    if ((b - a).norm() == 0.0)
        return -1.0;
    const Vec2 mid = 0.5 * (a + b);
    auto dist = [&](int p, int q) {
        const Vec2 o = x[p].head<2>();
        const Vec2 d = x[q].head<2>() - o;
        return std::abs(cross2(d, mid - o)) / d.norm();
    };
    const double r = dist(t.outline[0], t.outline[1]) - dist(t.outline[2], t.outline[3]);
    return r * r;
}

EnergyValue aesthetic_energy(const RoofGraph& graph, const Embedding& emb)
{
    const auto terms = aesthetic_terms(graph, emb);
    EnergyValue out = kernels::aesthetic(terms, emb.coords, true);
    if (!out.flagged.empty()) {
        const EdgeInfo& e = graph.edges()[terms[out.flagged.front()].edge];
        throw Error(ErrorCode::DegenerateEdge,
                    "edge (" + std::to_string(e.a) + ", " + std::to_string(e.b) + ") has zero length");
    }
    return out;
}

namespace {

/// vad of one roof edge, or -1 when a roof vertex sits on the intersection point.
double vad(const RoofGraph& graph, const EdgeInfo& e, const std::vector<Vec3>& x, double diag)
{
    const int n = graph.num_outline();
    const int k1 = graph.representative(e.face_left);
    const int k2 = graph.representative(e.face_right);
    const auto [a1, b1] = graph.outline_edge(k1);
    const auto [a2, b2] = graph.outline_edge(k2);
    const Vec2 o1 = x[a1].head<2>(), d1 = x[b1].head<2>() - o1;
    const Vec2 o2 = x[a2].head<2>(), d2 = x[b2].head<2>() - o2;
    const Vec2 p = x[e.a].head<2>(), q = x[e.b].head<2>();
    if (line_angle(d1, d2) < kParallelAngle) {
        const Vec2 d = q - p;
        if (d.norm() == 0.0)
            return -1.0;
        const double c = d.normalized().dot(d1.normalized());
        return 1.0 - c * c;
    }
    if (bisector_corner(graph, e) >= 0)
        return 0.0;
    Vec2 xi;
    if ((k1 + 1) % n == k2)
        xi = x[b1].head<2>();
    else if ((k2 + 1) % n == k1)
        xi = x[b2].head<2>();
    else
        line_intersection(o1, d1, o2, d2, xi);
    const Vec2 u1 = p - xi, u2 = q - xi;
    if (u1.norm() <= 1e-14 * diag || u2.norm() <= 1e-14 * diag)
        return -1.0;
    const double c = u1.normalized().dot(u2.normalized());
    return 1.0 - c * c;
}

}  // namespace

EnergyValue validity_energy_2d(const RoofGraph& graph, const Embedding& emb)
{
    const double diag = bbox_diagonal(outline_points(graph, emb));
    std::vector<Vec3> x = emb.coords;
    for (auto& p : x)
        p.z() = 0.0;
    EnergyValue out;
    out.gradient = Eigen::MatrixXd::Zero(emb.size(), 2);
    const double h = kFiniteDifferenceStep;
    for (int i = 0; i < static_cast<int>(graph.edges().size()); ++i) {
        const EdgeInfo& e = graph.edges()[i];
        if (e.is_outline() || e.face_count() != 2)
            continue;
        const int k1 = graph.representative(e.face_left);
        const int k2 = graph.representative(e.face_right);
        if (k1 < 0 || k2 < 0 || k1 == k2)
            continue;
        const double v = vad(graph, e, x, diag);
        if (v < 0.0) {
            out.value += 1.0;
            out.flagged.push_back(i);
            continue;
        }
        out.value += v;
        for (int vi : {e.a, e.b})
            for (int c = 0; c < 2; ++c) {
                const double x0 = x[vi][c];
                x[vi][c] = x0 + h;
                const double fp = vad(graph, e, x, diag);
                x[vi][c] = x0 - h;
                const double fm = vad(graph, e, x, diag);
                x[vi][c] = x0;
                if (fp >= 0.0 && fm >= 0.0)
                    out.gradient(vi, c) += (fp - fm) / (2.0 * h);
            }
    }
    return out;
}

EnergyValue variance_energy(const std::vector<double>& z)
{
    if (z.empty())
        throw Error(ErrorCode::TooFewPoints, "variance needs at least one value");
    const double m = static_cast<double>(z.size());
    double mean = 0.0;
    for (double v : z)
        mean += v;
    mean /= m;
    EnergyValue out;
    out.gradient = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(z.size()), 1);
    for (std::size_t i = 0; i < z.size(); ++i) {
        const double d = z[i] - mean;
        out.value += d * d;
        out.gradient(static_cast<Eigen::Index>(i), 0) = 2.0 * d / m;
    }
    out.value /= m;
    return out;
}

}  // namespace roofforge
