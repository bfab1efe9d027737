#include "roofforge/kernels.hpp"

#include "roofforge/sym3.hpp"

#include <Eigen/Geometry>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>

namespace roofforge::kernels {

namespace {

struct Centered {
    Vec3 mean = Vec3::Zero();
    Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
};

Centered covariance(const std::vector<Vec3>& pts)
{
    Centered c;
    const double m = static_cast<double>(pts.size());
    for (const auto& p : pts)
        c.mean += p;
    c.mean /= m;
    for (const auto& p : pts) {
        const Vec3 d = p - c.mean;
        c.cov += d * d.transpose();
    }
    c.cov /= m;
    return c;
}

double smallest_eig_value(const std::vector<Vec3>& pts, Vec3* normal, Vec3* mean)
{
    const Centered c = covariance(pts);
    const Vec3 v = sym3_eigen(c.cov).smallest_vec;
    double s = 0.0;
    for (const auto& p : pts) {
        const double t = v.dot(p - c.mean);
        s += t * t;
    }
    if (normal)
        *normal = v;
    if (mean)
        *mean = c.mean;
    return s / static_cast<double>(pts.size());
}

double proj_value(const std::vector<Vec3>& pts)
{
    const std::size_t m = pts.size();
    const Vec3& a = pts.front();
    const Vec3& b = pts[m / 2];
    const Vec3& c = pts.back();
    Vec3 n = (b - a).cross(c - a);
    Vec3 lo = pts.front(), hi = pts.front();
    for (const auto& p : pts) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    Vec3 origin = a;
    if (0.5 * n.norm() < 1e-12 * (hi - lo).squaredNorm()) {
        smallest_eig_value(pts, &n, &origin);
    }
    n.normalize();
    double s = 0.0;
    for (const auto& p : pts)
        s += std::abs(n.dot(p - origin));
    return s;
}

double diag_value(const std::vector<Vec3>& pts, int* skipped)
{
    const std::size_t m = pts.size();
    double s = 0.0;
    for (std::size_t j = 0; j + 3 < m; ++j) {
        const Vec3 u = pts[j + 2] - pts[j];
        const Vec3 w = pts[j + 3] - pts[j + 1];
        const Vec3 c = u.cross(w);
        const double cn = c.norm();
        if (cn <= 1e-12 * u.norm() * w.norm()) {
            if (skipped)
                ++*skipped;
            continue;
        }
        s += std::abs((pts[j + 1] - pts[j]).dot(c)) / cn;
    }
    return s;
}

std::vector<Vec3> central_difference(const std::vector<Vec3>& pts, MetricKind kind)
{
    std::vector<Vec3> g(pts.size(), Vec3::Zero());
    std::vector<Vec3> work = pts;
    const double h = kFiniteDifferenceStep;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (int c = 0; c < 3; ++c) {
            const double x0 = work[i][c];
            work[i][c] = x0 + h;
            const double fp = face_value(work, kind, nullptr);
            work[i][c] = x0 - h;
            const double fm = face_value(work, kind, nullptr);
            work[i][c] = x0;
            g[i][c] = (fp - fm) / (2.0 * h);
        }
    return g;
}

struct Item {
    double value = 0.0;
    bool flagged = false;
    std::vector<std::pair<int, Vec3>> grad;
};

Item planarity_item(const Face& face, const std::vector<Vec3>& x, MetricKind kind, bool with_gradient)
{
    Item it;
    if (face.size() < 4)
        return it;
    std::vector<Vec3> pts;
    pts.reserve(face.size());
    for (int v : face)
        pts.push_back(x[v]);
    int skipped = 0;
    it.value = face_value(pts, kind, &skipped);
    it.flagged = skipped > 0;
    if (with_gradient) {
        const auto g = face_gradient(pts, kind);
        for (std::size_t i = 0; i < face.size(); ++i)
            it.grad.emplace_back(face[i], g[i]);
    }
    return it;
}

Item aesthetic_item(const AestheticTerm& t, const std::vector<Vec3>& x, bool with_gradient)
{
    Item it;
    const double v = aesthetic_term_value(t, x);
    if (v < 0.0) {
        it.flagged = true;
        return it;
    }
    it.value = v;
    if (!with_gradient)
        return it;
    std::vector<int> vars = {t.u, t.w};
    if (t.kind == AestheticKind::bisector) {
        vars.push_back(t.outline[0]);
        vars.push_back(t.outline[1]);
    } else {
        vars.insert(vars.end(), t.outline.begin(), t.outline.end());
    }
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    std::vector<Vec3> work = x;
    const double h = kFiniteDifferenceStep;
    for (int vi : vars) {
        Vec3 g = Vec3::Zero();
        for (int c = 0; c < 3; ++c) {
            const double x0 = work[vi][c];
            work[vi][c] = x0 + h;
            const double fp = aesthetic_term_value(t, work);
            work[vi][c] = x0 - h;
            const double fm = aesthetic_term_value(t, work);
            work[vi][c] = x0;
            if (fp >= 0.0 && fm >= 0.0)
                g[c] = (fp - fm) / (2.0 * h);
        }
        it.grad.emplace_back(vi, g);
    }
    return it;
}

EnergyValue reduce(const std::vector<Item>& items, std::size_t n_vertices, bool with_gradient)
{
    EnergyValue out;
    if (with_gradient)
        out.gradient = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n_vertices), 3);
    for (std::size_t i = 0; i < items.size(); ++i) {
        out.value += items[i].value;
        if (items[i].flagged)
            out.flagged.push_back(static_cast<int>(i));
        for (const auto& [v, g] : items[i].grad)
            out.gradient.row(v) += g.transpose();
    }
    return out;
}

bool crosses(const std::vector<std::array<Vec2, 2>>& s, std::size_t a, std::size_t b)
{
    return segments_cross(s[a][0], s[a][1], s[b][0], s[b][1]);
}

}  // namespace

double face_value(const std::vector<Vec3>& pts, MetricKind kind, int* skipped)
{
    // Three points always span a plane.
    if (pts.size() == 3 && (kind == MetricKind::smallest_eig || kind == MetricKind::det))
        return 0.0;
    switch (kind) {
    case MetricKind::smallest_eig:
        return smallest_eig_value(pts, nullptr, nullptr);
    case MetricKind::det:
        return std::max(0.0, covariance(pts).cov.determinant());
    case MetricKind::proj:
        return proj_value(pts);
    case MetricKind::diag:
        return diag_value(pts, skipped);
    case MetricKind::validity2d:
        break;
    }
    throw Error(ErrorCode::InvalidSolveSpec, "validity2d is not a per-face planarity metric");
}

std::vector<Vec3> face_gradient(const std::vector<Vec3>& pts, MetricKind kind)
{
    if (pts.size() == 3 && kind == MetricKind::det)
        return std::vector<Vec3>(3, Vec3::Zero());
    if (kind != MetricKind::smallest_eig)
        return central_difference(pts, kind);
    if (pts.size() == 3)
        return std::vector<Vec3>(3, Vec3::Zero());
    Vec3 v, mean;
    smallest_eig_value(pts, &v, &mean);
    const double scale = 2.0 / static_cast<double>(pts.size());
    std::vector<Vec3> g;
    g.reserve(pts.size());
    for (const auto& p : pts)
        g.push_back(scale * v.dot(p - mean) * v);
    return g;
}

EnergyValue planarity(const std::vector<Face>& faces, const std::vector<Vec3>& x, MetricKind kind,
                      bool with_gradient)
{
    const int n = static_cast<int>(faces.size());
    std::vector<Item> items(faces.size());
#pragma omp parallel for schedule(dynamic, 4) if (n >= kParallelMinItems)
    for (int f = 0; f < n; ++f)
        items[f] = planarity_item(faces[f], x, kind, with_gradient);
    return reduce(items, x.size(), with_gradient);
}

EnergyValue aesthetic(const std::vector<AestheticTerm>& terms, const std::vector<Vec3>& x, bool with_gradient)
{
    const int n = static_cast<int>(terms.size());
    std::vector<Item> items(terms.size());
#pragma omp parallel for schedule(dynamic, 4) if (n >= kParallelMinItems)
    for (int t = 0; t < n; ++t)
        items[t] = aesthetic_item(terms[t], x, with_gradient);
    return reduce(items, x.size(), with_gradient);
}

std::vector<std::pair<int, int>> crossing_pairs(const std::vector<std::array<Vec2, 2>>& segments)
{
    const int n = static_cast<int>(segments.size());
    std::vector<std::vector<int>> hits(segments.size());
#pragma omp parallel for schedule(dynamic, 8) if (n >= kParallelMinItems)
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            if (crosses(segments, a, b))
                hits[a].push_back(b);
    std::vector<std::pair<int, int>> out;
    for (int a = 0; a < n; ++a)
        for (int b : hits[a])
            out.emplace_back(a, b);
    return out;
}

namespace reference {

EnergyValue planarity(const std::vector<Face>& faces, const std::vector<Vec3>& x, MetricKind kind,
                      bool with_gradient)
{
    std::vector<Item> items;
    items.reserve(faces.size());
    for (const auto& f : faces)
        items.push_back(planarity_item(f, x, kind, with_gradient));
    return reduce(items, x.size(), with_gradient);
}

EnergyValue aesthetic(const std::vector<AestheticTerm>& terms, const std::vector<Vec3>& x, bool with_gradient)
{
    std::vector<Item> items;
    items.reserve(terms.size());
    for (const auto& t : terms)
        items.push_back(aesthetic_item(t, x, with_gradient));
    return reduce(items, x.size(), with_gradient);
}

std::vector<std::pair<int, int>> crossing_pairs(const std::vector<std::array<Vec2, 2>>& segments)
{
    std::vector<std::pair<int, int>> out;
    for (std::size_t a = 0; a < segments.size(); ++a)
        for (std::size_t b = a + 1; b < segments.size(); ++b)
            if (crosses(segments, a, b))
                out.emplace_back(static_cast<int>(a), static_cast<int>(b));
    return out;
}

}  // namespace reference

}  // namespace roofforge::kernels
