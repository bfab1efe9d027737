#include "roofforge/solver.hpp"

#include <Eigen/QR>

namespace roofforge {

Embedding lift_2d_to_3d(const RoofGraph& graph, const Embedding& emb, double h, std::optional<int> fixed_vertex)
{
    if (emb.size() != graph.num_vertices())
        throw Error(ErrorCode::InvalidInput2D, "embedding does not cover every vertex");
    if (!std::isfinite(h))
        throw Error(ErrorCode::InvalidSolveSpec, "h must be finite");
    const ValidityReport report = check_validity_2d(graph, emb, 1e-6);
    if (!report.valid())
        throw Error(ErrorCode::InvalidInput2D,
                    "2D embedding fails the validity check (residual " + std::to_string(report.overall) + ")");

    const int fixed = fixed_vertex ? *fixed_vertex : default_fixed_vertex(graph);
    Embedding out;
    out.dim = 3;
    out.coords.resize(graph.num_vertices());
    for (int v = 0; v < graph.num_vertices(); ++v)
        out.coords[v] = Vec3(emb.coords[v].x(), emb.coords[v].y(), 0.0);
    if (fixed < 0)
        return out;
    if (fixed >= graph.num_vertices() || graph.is_outline(fixed))
        throw Error(ErrorCode::InvalidSolveSpec, "fixed_vertex must be a roof vertex");

    const Normalization norm = normalization_for(graph, emb);
    std::vector<int> zslot(graph.num_vertices(), -1);
    int n_unknown = 3 * graph.num_faces();
    for (int v : graph.roof_vertices())
        if (v != fixed)
            zslot[v] = n_unknown++;
    int n_rows = 0;
    for (const auto& f : graph.faces())
        n_rows += static_cast<int>(f.size());

    // a_f x_i + b_f y_i + c_f - z_i = 0 with known heights moved to the right.
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n_rows, n_unknown);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n_rows);
    const double hu = h / norm.scale;
    int row = 0;
    for (int f = 0; f < graph.num_faces(); ++f)
        for (int v : graph.faces()[f]) {
            const Vec3 p = norm.to_unit(out.coords[v]);
            A(row, 3 * f) = p.x();
            A(row, 3 * f + 1) = p.y();
            A(row, 3 * f + 2) = 1.0;
            if (zslot[v] >= 0)
                A(row, zslot[v]) = -1.0;
            else if (v == fixed)
                b[row] = hu;
            ++row;
        }
    const Eigen::VectorXd u = A.completeOrthogonalDecomposition().solve(b);
    const double residual = (A * u - b).norm();
    if (!u.allFinite() || residual > 1e-6 * std::max(1.0, b.norm()))
        throw Error(ErrorCode::InconsistentSystem,
                    "lifting residual " + std::to_string(residual) + " exceeds 1e-6");
    for (int v : graph.roof_vertices())
        out.coords[v].z() = v == fixed ? h : u[zslot[v]] * norm.scale;
    return out;
}

}  // namespace roofforge
