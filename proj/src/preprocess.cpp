#include "roofforge/solver.hpp"

#include <Eigen/QR>

#include <cmath>
#include <numbers>
#include <numeric>

namespace roofforge {

namespace {

int find_root(std::vector<int>& parent, int i)
{
    while (parent[i] != i)
        i = parent[i] = parent[parent[i]];
    return i;
}

}  // namespace

PreprocessResult preprocess_outline(const std::vector<Vec2>& outline, double theta_deg)
{
    const int n = static_cast<int>(outline.size());
    if (n < 3)
        throw Error(ErrorCode::SelfIntersectingOutline, "outline needs at least 3 vertices");
    if (!polygon_is_simple(outline))
        throw Error(ErrorCode::SelfIntersectingOutline, "outline is not a simple polygon");

    std::vector<Vec2> dir(n);
    for (int k = 0; k < n; ++k)
        dir[k] = outline[(k + 1) % n] - outline[k];

    // Single-linkage clustering of line directions.
    const double theta = theta_deg * std::numbers::pi / 180.0;
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (line_angle(dir[i], dir[j]) < theta)
                parent[find_root(parent, i)] = find_root(parent, j);

    PreprocessResult res;
    res.clusters.assign(n, -1);
    std::vector<int> root_id(n, -1);
    int n_clusters = 0;
    for (int k = 0; k < n; ++k) {
        const int r = find_root(parent, k);
        if (root_id[r] < 0)
            root_id[r] = n_clusters++;
        res.clusters[k] = root_id[r];
    }

    // Length-weighted mean of doubled angles, so opposite directions agree.
    std::vector<Vec2> acc(n_clusters, Vec2::Zero());
    for (int k = 0; k < n; ++k) {
        const double phi = std::atan2(dir[k].y(), dir[k].x());
        acc[res.clusters[k]] += dir[k].norm() * Vec2(std::cos(2.0 * phi), std::sin(2.0 * phi));
    }
    std::vector<Vec2> normal(n_clusters);
    for (int c = 0; c < n_clusters; ++c) {
        const double phi = 0.5 * std::atan2(acc[c].y(), acc[c].x());
        normal[c] = Vec2(-std::sin(phi), std::cos(phi));
    }

    bool aligned = true;
    for (int k = 0; k < n && aligned; ++k)
        aligned = std::abs(normal[res.clusters[k]].dot(dir[k])) <= 1e-12 * dir[k].norm();
    if (aligned) {
        res.points = outline;
        return res;
    }

    // Least-norm displacement d with n_c . ((p + d)_{k+1} - (p + d)_k) = 0.
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, 2 * n);
    Eigen::VectorXd b(n);
    for (int k = 0; k < n; ++k) {
        const Vec2& nc = normal[res.clusters[k]];
        const int k1 = (k + 1) % n;
        A.block<1, 2>(k, 2 * k1) += nc.transpose();
        A.block<1, 2>(k, 2 * k) -= nc.transpose();
        b[k] = -nc.dot(dir[k]);
    }
    const Eigen::VectorXd d = A.completeOrthogonalDecomposition().solve(b);
    res.points.resize(n);
    for (int k = 0; k < n; ++k) {
        const Vec2 dk(d[2 * k], d[2 * k + 1]);
        res.points[k] = outline[k] + dk;
        res.max_displacement = std::max(res.max_displacement, dk.norm());
    }
    for (int k = 0; k < n; ++k)
        if ((res.points[(k + 1) % n] - res.points[k]).norm() <= 1e-12 * bbox_diagonal(outline))
            throw Error(ErrorCode::SelfIntersectingOutline, "preprocessing collapsed outline edge " + std::to_string(k));
    if (!polygon_is_simple(res.points))
        throw Error(ErrorCode::SelfIntersectingOutline, "preprocessed outline is not simple");
    return res;
}

Embedding preprocess_embedding(const RoofGraph& graph, const Embedding& emb, double theta_deg)
{
    std::vector<Vec2> pts;
    for (int v : graph.outline())
        pts.push_back(emb.xy(v));
    const PreprocessResult res = preprocess_outline(pts, theta_deg);
    Embedding out = emb;
    for (int k = 0; k < graph.num_outline(); ++k) {
        Vec3& c = out.coords[graph.outline()[k]];
        c.x() = res.points[k].x();
        c.y() = res.points[k].y();
    }
    return out;
}

}  // namespace roofforge
