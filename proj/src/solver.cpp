#include "roofforge/solver.hpp"

#include "roofforge/kernels.hpp"
#include "roofforge/lbfgs.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>

namespace roofforge {

const char* solve_mode_name(SolveMode mode)
{
    switch (mode) {
    case SolveMode::primal: return "primal";
    case SolveMode::dual: return "dual";
    case SolveMode::variable_height: return "variable_height";
    }
    return "primal";
}

std::optional<SolveMode> parse_solve_mode(std::string_view name)
{
    for (auto m : {SolveMode::primal, SolveMode::dual, SolveMode::variable_height})
        if (name == solve_mode_name(m))
            return m;
    return std::nullopt;
}

void SolveSpec::validate() const
{
    auto fail = [](const std::string& what) { throw Error(ErrorCode::InvalidSolveSpec, what); };
    if (h && !(std::isfinite(*h) && *h > 0.0))
        fail("h > 0");
    if (!(std::isfinite(lambda) && lambda >= 0.0))
        fail("lambda >= 0");
    if (!(std::isfinite(gamma) && gamma >= 0.0))
        fail("gamma >= 0");
    if (!(std::isfinite(eta) && eta >= 0.0))
        fail("eta >= 0");
    if (!(std::isfinite(theta_deg) && theta_deg >= 0.0 && theta_deg < 90.0))
        fail("0 <= theta_deg < 90");
    if (!(tol_grad >= 0.0) || !(tol_energy >= 0.0))
        fail("tolerances >= 0");
    if (max_iters < 1)
        fail("max_iters >= 1");
    if (!(time_limit >= 0.0))
        fail("time_limit >= 0");
}

Normalization Normalization::from_outline(const std::vector<Vec2>& outline)
{
    Normalization n;
    Vec2 lo = outline.front(), hi = outline.front();
    for (const auto& p : outline) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    n.center = 0.5 * (lo + hi);
    n.scale = (hi - lo).norm();
    if (!(n.scale > 0.0))
        n.scale = 1.0;
    return n;
}

Vec3 Normalization::to_unit(const Vec3& p) const
{
    return Vec3((p.x() - center.x()) / scale, (p.y() - center.y()) / scale, p.z() / scale);
}

Vec3 Normalization::from_unit(const Vec3& p) const
{
    return Vec3(p.x() * scale + center.x(), p.y() * scale + center.y(), p.z() * scale);
}

namespace {

std::vector<Vec2> outline_of(const RoofGraph& graph, const Embedding& emb)
{
    std::vector<Vec2> pts;
    for (int v : graph.outline())
        pts.push_back(emb.xy(v));
    return pts;
}

}  // namespace

Normalization normalization_for(const RoofGraph& graph, const Embedding& emb)
{
    return Normalization::from_outline(outline_of(graph, emb));
}

double normalized_planarity(const RoofGraph& graph, const Embedding& emb, MetricKind kind)
{
    const Normalization n = normalization_for(graph, emb);
    std::vector<Vec3> x;
    x.reserve(emb.coords.size());
    for (const auto& p : emb.coords)
        x.push_back(n.to_unit(p));
    return kernels::planarity(graph.faces(), x, kind, false).value;
}

double default_height(const std::vector<Vec2>& outline)
{
    return 0.5 * std::sqrt(std::abs(signed_area(outline)));
}

int default_fixed_vertex(const RoofGraph& graph)
{
    int best = -1;
    for (int v : graph.roof_vertices())
        if (best < 0 || graph.neighbors(v).size() > graph.neighbors(best).size())
            best = v;
    return best;
}

namespace {

/// Optimization problem on normalized coordinates.
struct Problem {
    const RoofGraph* graph = nullptr;
    std::vector<Vec3> x0;
    std::vector<std::array<int, 3>> var;
    int n_vars = 0;
    MetricKind kind = MetricKind::smallest_eig;
    double lambda = 0.0;
    std::vector<std::pair<int, Vec2>> anchors;
    double gamma = 0.0;
    std::vector<AestheticTerm> terms;
    double eta = 0.0;
    std::vector<std::vector<int>> groups;

    void free_coord(int v, int c)
    {
        if (var[v][c] < 0)
            var[v][c] = n_vars++;
    }

    Eigen::VectorXd initial() const
    {
        Eigen::VectorXd v(n_vars);
        for (std::size_t i = 0; i < var.size(); ++i)
            for (int c = 0; c < 3; ++c)
                if (var[i][c] >= 0)
                    v[var[i][c]] = x0[i][c];
        return v;
    }

    std::vector<Vec3> scatter(const Eigen::VectorXd& v) const
    {
        std::vector<Vec3> x = x0;
        for (std::size_t i = 0; i < var.size(); ++i)
            for (int c = 0; c < 3; ++c)
                if (var[i][c] >= 0)
                    x[i][c] = v[var[i][c]];
        return x;
    }

    double planarity_of(const std::vector<Vec3>& x) const
    {
        if (kind == MetricKind::validity2d)
            return validity_energy_2d(*graph, Embedding::planar(to_xy(x))).value;
        return kernels::planarity(graph->faces(), x, kind, false).value;
    }

    static std::vector<Vec2> to_xy(const std::vector<Vec3>& x)
    {
        std::vector<Vec2> out;
        out.reserve(x.size());
        for (const auto& p : x)
            out.push_back(p.head<2>());
        return out;
    }

    double evaluate(const Eigen::VectorXd& v, Eigen::VectorXd& g) const
    {
        const std::vector<Vec3> x = scatter(v);
        Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(x.size()), 3);
        double total = 0.0;
        if (kind == MetricKind::validity2d) {
            const EnergyValue e = validity_energy_2d(*graph, Embedding::planar(to_xy(x)));
            total += e.value;
            grad.leftCols(2) += e.gradient;
        } else {
            const EnergyValue e = kernels::planarity(graph->faces(), x, kind, true);
            total += e.value;
            grad += e.gradient;
        }
        if (lambda > 0.0)
            for (const auto& [vi, target] : anchors) {
                const Vec2 d = x[vi].head<2>() - target;
                total += lambda * d.squaredNorm();
                grad.row(vi).head<2>() += 2.0 * lambda * d.transpose();
            }
        if (gamma > 0.0 && !terms.empty()) {
            const EnergyValue e = kernels::aesthetic(terms, x, true);
            total += gamma * e.value;
            grad += gamma * e.gradient;
        }
        if (eta > 0.0)
            for (const auto& grp : groups) {
                std::vector<double> z;
                for (int vi : grp)
                    z.push_back(x[vi].z());
                const EnergyValue e = variance_energy(z);
                total += eta * e.value;
                for (std::size_t i = 0; i < grp.size(); ++i)
                    grad(grp[i], 2) += eta * e.gradient(static_cast<Eigen::Index>(i), 0);
            }
        g.setZero(n_vars);
        for (std::size_t i = 0; i < var.size(); ++i)
            for (int c = 0; c < 3; ++c)
                if (var[i][c] >= 0)
                    g[var[i][c]] = grad(static_cast<Eigen::Index>(i), c);
        return total;
    }

    bool regularized() const
    {
        return (lambda > 0.0 && !anchors.empty()) || (gamma > 0.0 && !terms.empty()) ||
               (eta > 0.0 && !groups.empty());
    }
};

struct RunOutcome {
    Eigen::VectorXd v;
    std::vector<TraceEntry> trace;
    int iterations = 0;
    bool converged = false;
    std::string reason;
};

RunOutcome run_stages(const Problem& problem, const SolveSpec& spec)
{
    const auto start = std::chrono::steady_clock::now();
    RunOutcome out;
    out.v = problem.initial();
    Problem stages[2] = {problem, problem};
    stages[1].lambda = 0.0;
    stages[1].gamma = 0.0;
    stages[1].eta = 0.0;
    const int n_stages = problem.regularized() ? 2 : 1;
    if (n_stages == 1)
        stages[0] = stages[1];

    for (int s = 0; s < n_stages; ++s) {
        const Problem& p = stages[s];
        Objective fg = [&p](const Eigen::VectorXd& v, Eigen::VectorXd& g) { return p.evaluate(v, g); };
        Eigen::VectorXd g(p.n_vars);
        const double f0 = p.evaluate(out.v, g);
        const int base = out.iterations;
        out.trace.push_back({base, p.planarity_of(p.scatter(out.v)), f0, s});
        LbfgsOptions opt;
        opt.tol_grad = spec.tol_grad;
        opt.tol_energy = spec.tol_energy;
        opt.max_iters = spec.max_iters;
        if (spec.time_limit > 0.0) {
            const double used = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            opt.time_limit = std::max(1e-3, spec.time_limit - used);
        }
        const auto report = minimize_lbfgs(fg, out.v, opt, [&](int it, const Eigen::VectorXd& v, double f) {
            out.trace.push_back({base + it, p.planarity_of(p.scatter(v)), f, s});
        });
        out.iterations = base + report.iterations;
        out.converged = report.converged();
        out.reason = lbfgs_status_name(report.status);
        spdlog::debug("stage {}: {} iterations, f = {:.3e}, |g|inf = {:.3e}, stop = {}", s, report.iterations,
                      report.f, report.grad_inf, out.reason);
        if (report.status == LbfgsStatus::time_limit)
            break;
    }
    return out;
}

/// Builds the output: variable coordinates are denormalized, fixed ones copied from `fixed`.
Embedding assemble(const Problem& p, const Eigen::VectorXd& v, const Normalization& norm,
                   const std::vector<Vec3>& fixed)
{
    const std::vector<Vec3> x = p.scatter(v);
    Embedding out;
    out.dim = 3;
    out.coords = fixed;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const Vec3 world = norm.from_unit(x[i]);
        for (int c = 0; c < 3; ++c)
            if (p.var[i][c] >= 0)
                out.coords[i][c] = world[c];
    }
    return out;
}

void finish(SolveResult& r, const RoofGraph& graph, MetricKind kind,
            std::chrono::steady_clock::time_point start)
{
    r.planarity = normalized_planarity(graph, r.embedding, MetricKind::smallest_eig);
    r.metric_value = kind == MetricKind::validity2d
                         ? validity_energy_2d(graph, project_xy(r.embedding)).value
                         : normalized_planarity(graph, r.embedding, kind);
    r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

int choose_fixed(const RoofGraph& graph, const SolveSpec& spec)
{
    if (spec.fixed_vertex) {
        const int v = *spec.fixed_vertex;
        if (v < 0 || v >= graph.num_vertices() || graph.is_outline(v))
            throw Error(ErrorCode::InvalidSolveSpec, "fixed_vertex must be a roof vertex");
        return v;
    }
    const int v = default_fixed_vertex(graph);
    if (v < 0)
        throw Error(ErrorCode::DegenerateGraph, "graph has no roof vertices");
    return v;
}

void check_embedding(const RoofGraph& graph, const Embedding& emb)
{
    if (emb.size() != graph.num_vertices())
        throw Error(ErrorCode::InvalidGraph, "embedding does not cover every vertex");
    for (const auto& p : emb.coords)
        if (!p.allFinite())
            throw Error(ErrorCode::InvalidGraph, "embedding has non-finite coordinates");
}

/// Shared body of the primal and variable-height modes.
SolveResult solve_heights(const RoofGraph& graph, const Embedding& user, const SolveSpec& spec, bool variable)
{
    const auto start = std::chrono::steady_clock::now();
    spec.validate();
    check_embedding(graph, user);
    const int fixed = choose_fixed(graph, spec);
    const std::vector<Vec2> outline = outline_of(graph, user);
    const double h = spec.h ? *spec.h : default_height(outline);
    const Normalization norm = Normalization::from_outline(outline);

    Problem p;
    p.graph = &graph;
    p.kind = spec.planarity_kind;
    p.var.assign(graph.num_vertices(), {-1, -1, -1});
    std::vector<Vec3> fixed_world(graph.num_vertices());
    for (int v = 0; v < graph.num_vertices(); ++v) {
        Vec3 w(user.coords[v].x(), user.coords[v].y(), 0.0);
        if (!graph.is_outline(v))
            w.z() = h;
        else if (variable && user.dim == 3 &&
                 graph.vertices()[v].effective_group().kind != HeightGroup::Kind::fixed_zero)
            w.z() = user.coords[v].z();
        fixed_world[v] = w;
        p.x0.push_back(norm.to_unit(w));
    }
    p.x0[fixed].z() = h / norm.scale;

    const bool two_d = spec.planarity_kind == MetricKind::validity2d;
    if (two_d && variable)
        throw Error(ErrorCode::InvalidSolveSpec, "validity2d is only available in primal mode");
    for (int v : graph.roof_vertices()) {
        p.free_coord(v, 0);
        p.free_coord(v, 1);
        if (!two_d && v != fixed)
            p.free_coord(v, 2);
        p.anchors.emplace_back(v, p.x0[v].head<2>());
    }
    p.lambda = spec.lambda;

    if (variable) {
        bool anchored = false;
        std::map<std::string, std::vector<int>> groups;
        for (int v : graph.outline()) {
            const HeightGroup hg = graph.vertices()[v].effective_group();
            if (hg.kind == HeightGroup::Kind::fixed_zero) {
                anchored = true;
                continue;
            }
            p.free_coord(v, 2);
            if (hg.kind == HeightGroup::Kind::group)
                groups[hg.label].push_back(v);
        }
        if (!anchored)
            throw Error(ErrorCode::AllHeightsFree, "no outline vertex is fixed at zero height");
        for (auto& [label, members] : groups)
            p.groups.push_back(members);
        p.eta = spec.eta;
    }

    const RunOutcome run = run_stages(p, spec);
    SolveResult r;
    r.graph = graph;
    r.fixed_vertex = fixed;
    r.h = h;
    r.energy_trace = run.trace;
    r.iterations = run.iterations;
    r.converged = run.converged;
    r.stop_reason = run.reason;
    if (two_d) {
        Embedding flat = assemble(p, run.v, norm, fixed_world);
        try {
            r.embedding = lift_2d_to_3d(graph, project_xy(flat), h, fixed);
        } catch (const Error&) {
            r.embedding = flat;
            r.converged = false;
            r.stop_reason = "validity not reached";
        }
    } else {
        r.embedding = assemble(p, run.v, norm, fixed_world);
    }
    r.embedding.coords[fixed].z() = h;
    finish(r, graph, spec.planarity_kind, start);
    return r;
}

}  // namespace

SolveResult optimize_primal(const RoofGraph& graph, const Embedding& user2d, const SolveSpec& spec)
{
    return solve_heights(graph, user2d, spec, false);
}

SolveResult optimize_variable_heights(const RoofGraph& graph, const Embedding& user, const SolveSpec& spec)
{
    return solve_heights(graph, user, spec, true);
}

SolveResult optimize_dual(const DualGraph& dual, const SolveSpec& spec)
{
    const auto start = std::chrono::steady_clock::now();
    spec.validate();
    if (spec.planarity_kind == MetricKind::validity2d)
        throw Error(ErrorCode::InvalidSolveSpec, "validity2d is only available in primal mode");
    const RoofGraph graph = primal_from_dual(dual);
    const int fixed = choose_fixed(graph, spec);
    const double h = spec.h ? *spec.h : default_height(dual.outline);
    const Embedding init = spectral_embed_2d(graph, dual.outline);
    const Normalization norm = Normalization::from_outline(dual.outline);

    Problem p;
    p.graph = &graph;
    p.kind = spec.planarity_kind;
    p.var.assign(graph.num_vertices(), {-1, -1, -1});
    std::vector<Vec3> fixed_world(graph.num_vertices());
    for (int v = 0; v < graph.num_vertices(); ++v) {
        fixed_world[v] = Vec3(init.coords[v].x(), init.coords[v].y(), graph.is_outline(v) ? 0.0 : h);
        p.x0.push_back(norm.to_unit(fixed_world[v]));
    }
    p.x0[fixed].z() = h / norm.scale;
    for (int v : graph.roof_vertices()) {
        p.free_coord(v, 0);
        p.free_coord(v, 1);
        if (v != fixed)
            p.free_coord(v, 2);
    }
    p.gamma = spec.gamma;
    p.terms = aesthetic_terms(graph, init);

    const RunOutcome run = run_stages(p, spec);
    SolveResult r;
    r.graph = graph;
    r.fixed_vertex = fixed;
    r.h = h;
    r.energy_trace = run.trace;
    r.iterations = run.iterations;
    r.converged = run.converged;
    r.stop_reason = run.reason;
    r.embedding = assemble(p, run.v, norm, fixed_world);
    r.embedding.coords[fixed].z() = h;
    finish(r, graph, spec.planarity_kind, start);
    return r;
}

SolveResult optimize_subset(const RoofGraph& graph, const Embedding& emb3d, const std::vector<int>& free_vertices,
                            const SolveSpec& spec)
{
    const auto start = std::chrono::steady_clock::now();
    spec.validate();
    check_embedding(graph, emb3d);
    if (spec.planarity_kind == MetricKind::validity2d)
        throw Error(ErrorCode::InvalidSolveSpec, "restricted solves need a 3D planarity metric");
    const Normalization norm = normalization_for(graph, emb3d);
    Problem p;
    p.graph = &graph;
    p.kind = spec.planarity_kind;
    p.var.assign(graph.num_vertices(), {-1, -1, -1});
    for (const auto& c : emb3d.coords)
        p.x0.push_back(norm.to_unit(c));
    for (int v : free_vertices) {
        if (v < 0 || v >= graph.num_vertices() || graph.is_outline(v))
            throw Error(ErrorCode::InvalidTarget, "only roof vertices can be re-optimized");
        for (int c = 0; c < 3; ++c)
            p.free_coord(v, c);
    }
    const RunOutcome run = run_stages(p, spec);
    SolveResult r;
    r.graph = graph;
    r.energy_trace = run.trace;
    r.iterations = run.iterations;
    r.converged = run.converged;
    r.stop_reason = run.reason;
    r.embedding = assemble(p, run.v, norm, emb3d.coords);
    r.embedding.dim = 3;
    finish(r, graph, spec.planarity_kind, start);
    return r;
}

}  // namespace roofforge
