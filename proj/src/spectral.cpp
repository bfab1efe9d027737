#include "roofforge/solver.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <deque>

namespace roofforge {

Embedding spectral_embed_2d(const RoofGraph& graph, const std::vector<Vec2>& outline_xy)
{
    if (static_cast<int>(outline_xy.size()) != graph.num_outline())
        throw Error(ErrorCode::InvalidGraph, "outline coordinate count does not match the graph");
    const int n = graph.num_vertices();
    Embedding emb;
    emb.dim = 2;
    emb.coords.assign(n, Vec3::Zero());
    for (int k = 0; k < graph.num_outline(); ++k)
        emb.coords[graph.outline()[k]] = Vec3(outline_xy[k].x(), outline_xy[k].y(), 0.0);

    const std::vector<int> roof = graph.roof_vertices();
    if (roof.empty())
        return emb;
    std::vector<int> slot(n, -1);
    for (std::size_t i = 0; i < roof.size(); ++i)
        slot[roof[i]] = static_cast<int>(i);

    // Every roof component must touch the outline, otherwise L_RR is singular.
    std::vector<char> reached(n, 0);
    std::deque<int> queue;
    for (int v = 0; v < n; ++v)
        if (graph.is_outline(v)) {
            reached[v] = 1;
            queue.push_back(v);
        }
    while (!queue.empty()) {
        const int v = queue.front();
        queue.pop_front();
        for (int u : graph.neighbors(v))
            if (!reached[u] && !graph.is_outline(u)) {
                reached[u] = 1;
                queue.push_back(u);
            }
    }
    for (int v : roof)
        if (!reached[v])
            throw Error(ErrorCode::SingularSystem,
                        "roof vertex " + std::to_string(v) + " is in a component without outline vertices");

    const auto m = static_cast<Eigen::Index>(roof.size());
    std::vector<Eigen::Triplet<double>> trips;
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(m, 2);
    for (int v : roof) {
        const int i = slot[v];
        trips.emplace_back(i, i, static_cast<double>(graph.neighbors(v).size()));
        for (int u : graph.neighbors(v)) {
            if (graph.is_outline(u))
                rhs.row(i) += emb.xy(u).transpose();
            else
                trips.emplace_back(i, slot[u], -1.0);
        }
    }
    Eigen::SparseMatrix<double> L(m, m);
    L.setFromTriplets(trips.begin(), trips.end());
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(L);
    if (solver.info() != Eigen::Success)
        throw Error(ErrorCode::SingularSystem, "Laplacian factorization failed");
    const Eigen::MatrixXd X = solver.solve(rhs);
    const double residual = (L * X - rhs).norm() / std::max(rhs.norm(), 1e-300);
    if (solver.info() != Eigen::Success || !X.allFinite() || residual > 1e-10)
        throw Error(ErrorCode::SingularSystem, "Laplacian solve failed");
    for (int v : roof)
        emb.coords[v] = Vec3(X(slot[v], 0), X(slot[v], 1), 0.0);
    return emb;
}

}  // namespace roofforge
