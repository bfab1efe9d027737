#include "corpus.hpp"
#include "fixtures.hpp"

#include "roofforge/kernels.hpp"
#include "roofforge/solver.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace roofforge;
using namespace fixtures;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

double population_variance(const std::vector<double>& z)
{
    double mean = 0.0;
    for (double v : z)
        mean += v;
    mean /= static_cast<double>(z.size());
    double var = 0.0;
    for (double v : z)
        var += (v - mean) * (v - mean);
    return var / static_cast<double>(z.size());
}

void expect_monotone(const SolveResult& r)
{
    ASSERT_FALSE(r.energy_trace.empty());
    for (std::size_t i = 1; i < r.energy_trace.size(); ++i) {
        const auto& a = r.energy_trace[i - 1];
        const auto& b = r.energy_trace[i];
        if (a.stage == b.stage)
            EXPECT_LE(b.total, a.total + 1e-14) << "entry " << i;
    }
}

void expect_outline_unchanged(const RoofGraph& g, const Embedding& before, const Embedding& after)
{
    for (int v : g.outline()) {
        EXPECT_EQ(after.coords[v].x(), before.coords[v].x());
        EXPECT_EQ(after.coords[v].y(), before.coords[v].y());
        EXPECT_EQ(after.coords[v].z(), 0.0);
    }
}

}  // namespace

TEST(SolveSpec, RejectsBadValues)
{
    SolveSpec s;
    s.h = 0.0;
    EXPECT_EQ(error_of([&] { s.validate(); }), ErrorCode::InvalidSolveSpec);
    s = SolveSpec{};
    s.lambda = -1.0;
    EXPECT_EQ(error_of([&] { s.validate(); }), ErrorCode::InvalidSolveSpec);
    s = SolveSpec{};
    s.max_iters = 0;
    EXPECT_EQ(error_of([&] { s.validate(); }), ErrorCode::InvalidSolveSpec);
    s = SolveSpec{};
    s.fixed_vertex = 0;  // outline vertex
    EXPECT_EQ(error_of([&] { optimize_primal(hip_graph(), Embedding::planar(hip_xy()), s); }),
              ErrorCode::InvalidSolveSpec);
}

TEST(SolveDefaults, HeightAndFixedVertex)
{
    EXPECT_DOUBLE_EQ(default_height({{0, 0}, {2, 0}, {2, 1}, {0, 1}}), std::sqrt(2.0) / 2.0);
    // Both ridge vertices have degree 3; the smaller index wins.
    EXPECT_EQ(default_fixed_vertex(hip_graph()), 4);
    EXPECT_EQ(default_fixed_vertex(region_graph()), 7);
}

TEST(Normalization, RoundTripsAndUnitDiagonal)
{
    const Normalization n = Normalization::from_outline({{1, 1}, {4, 1}, {4, 5}, {1, 5}});
    EXPECT_DOUBLE_EQ(n.scale, 5.0);
    const Vec3 p(2, 3, 0.7);
    EXPECT_NEAR((n.from_unit(n.to_unit(p)) - p).norm(), 0.0, 1e-15);
    EXPECT_DOUBLE_EQ(n.to_unit(Vec3(4, 5, 0)).head<2>().norm(), 0.5);
}

TEST(OptimizePrimal, ExactHipStaysPut)
{
    SolveSpec spec;
    spec.lambda = 0.1;
    const auto user = Embedding::planar(hip_xy());
    const SolveResult r = optimize_primal(hip_graph(), user, spec);
    EXPECT_TRUE(r.converged);
    EXPECT_LT(r.planarity, 1e-9);
    for (int v : r.graph.roof_vertices())
        EXPECT_LT((r.embedding.xy(v) - user.xy(v)).norm(), 1e-6);
    expect_outline_unchanged(r.graph, user, r.embedding);
}

TEST(OptimizePrimal, FixedHeightIsBitExact)
{
    SolveSpec spec;
    spec.h = 0.7310000000000001;
    const SolveResult r = optimize_primal(region_graph(), Embedding::planar(region_xy()), spec);
    EXPECT_EQ(r.embedding.coords[r.fixed_vertex].z(), *spec.h);
    EXPECT_EQ(r.h, *spec.h);
}

TEST(OptimizePrimal, PerturbedHipTraceDecreasesToPlanar)
{
    // Tilted ridge: not a valid 2D embedding, so the solve has work to do.
    auto xy = hip_xy(0.5, 0.4, 1.65);
    xy[5].y() = 0.58;
    const auto tilted = Embedding::planar(xy);
    const SolveResult r = optimize_primal(hip_graph(), tilted, SolveSpec{});
    EXPECT_TRUE(r.converged) << r.stop_reason;
    EXPECT_GT(r.iterations, 0);
    EXPECT_LT(r.planarity, 1e-9);
    EXPECT_LT(r.energy_trace.back().planarity, 1e-9);
    expect_monotone(r);
    // Strict decrease on accepted steps.
    for (std::size_t i = 1; i < r.energy_trace.size(); ++i)
        if (r.energy_trace[i].stage == r.energy_trace[i - 1].stage)
            EXPECT_LT(r.energy_trace[i].total, r.energy_trace[i - 1].total);
    expect_outline_unchanged(r.graph, tilted, r.embedding);
    EXPECT_TRUE(check_validity_2d(r.graph, project_xy(r.embedding), 1e-6).valid());
}

TEST(OptimizePrimal, ReportedPlanarityMatchesRecomputation)
{
    auto xy = region_xy();
    xy[6].y() += 0.05;
    const SolveResult r = optimize_primal(region_graph(), Embedding::planar(xy), SolveSpec{});
    EXPECT_EQ(r.planarity, normalized_planarity(r.graph, r.embedding));
    EXPECT_NEAR(r.energy_trace.back().planarity, r.planarity, 1e-12);
}

TEST(OptimizePrimal, AlternativeMetricsReachPlanar)
{
    auto xy = hip_xy(0.5, 0.4, 1.65);
    xy[5].y() = 0.58;
    for (MetricKind k : {MetricKind::det, MetricKind::proj, MetricKind::diag}) {
        SolveSpec spec;
        spec.planarity_kind = k;
        const SolveResult r = optimize_primal(hip_graph(), Embedding::planar(xy), spec);
        EXPECT_LT(r.metric_value, k == MetricKind::diag ? 1e-6 : 1e-9) << metric_name(k);
    }
}

TEST(OptimizePrimal, ValidityMetricLiftsToPlanar)
{
    auto xy = hip_xy(0.5, 0.4, 1.65);
    xy[5].y() = 0.58;
    SolveSpec spec;
    spec.planarity_kind = MetricKind::validity2d;
    const SolveResult r = optimize_primal(hip_graph(), Embedding::planar(xy), spec);
    EXPECT_TRUE(r.converged) << r.stop_reason;
    EXPECT_LT(r.planarity, 1e-10);
    EXPECT_TRUE(check_validity_2d(r.graph, project_xy(r.embedding), 1e-6).valid());
}

TEST(OptimizeDual, HipRidgeOnMidline)
{
    SolveSpec spec;
    spec.gamma = 0.05;
    const SolveResult r = optimize_dual(hip_dual(), spec);
    EXPECT_TRUE(r.converged);
    EXPECT_LT(r.planarity, 1e-9);
    for (int v : r.graph.roof_vertices())
        EXPECT_NEAR(r.embedding.coords[v].y(), 0.5, 1e-4);
}

TEST(OptimizeDual, TrapezoidRidgeOnMidline)
{
    // Symmetric about x = 2 only; the ridge must sit half way between the parallel edges.
    const auto corpus = dual_corpus();
    const auto& d = std::find_if(corpus.begin(), corpus.end(), [](auto& n) { return n.name == "trapezoid_hip"; })->dual;
    const SolveResult r = optimize_dual(d, SolveSpec{});
    EXPECT_LT(r.planarity, 1e-9);
    const auto roof = r.graph.roof_vertices();
    EXPECT_NEAR(r.embedding.coords[roof[0]].y(), 0.75, 1e-4);
    EXPECT_NEAR(r.embedding.coords[roof[0]].x() + r.embedding.coords[roof[1]].x(), 4.0, 1e-4);
}

TEST(OptimizeDual, PyramidApexOverCentre)
{
    const SolveResult r = optimize_dual(pyramid_dual(), SolveSpec{});
    const int apex = r.graph.roof_vertices().front();
    EXPECT_NEAR(r.embedding.coords[apex].x(), 0.5, 1e-4);
    EXPECT_NEAR(r.embedding.coords[apex].y(), 0.5, 1e-4);
    EXPECT_EQ(r.embedding.coords[apex].z(), r.h);
}

TEST(OptimizeDual, CorpusConvergesValidAndKeepsOutline)
{
    for (const auto& [name, dual] : dual_corpus()) {
        const SolveResult r = optimize_dual(dual, SolveSpec{});
        EXPECT_TRUE(r.converged) << name;
        EXPECT_LT(r.planarity, 1e-9) << name;
        EXPECT_LT(r.wall_time, 5.0) << name;
        for (int k = 0; k < r.graph.num_outline(); ++k) {
            const Vec3& p = r.embedding.coords[r.graph.outline()[k]];
            EXPECT_EQ(p.x(), dual.outline[k].x()) << name;
            EXPECT_EQ(p.y(), dual.outline[k].y()) << name;
            EXPECT_EQ(p.z(), 0.0) << name;
        }
        EXPECT_EQ(r.embedding.coords[r.fixed_vertex].z(), r.h) << name;
        const Embedding flat = project_xy(r.embedding);
        EXPECT_TRUE(check_validity_2d(r.graph, flat, 1e-6).valid()) << name;
        const Embedding lifted = lift_2d_to_3d(r.graph, flat, r.h, r.fixed_vertex);
        EXPECT_LT(normalized_planarity(r.graph, lifted), 1e-10) << name;
        EXPECT_EQ(project_xy(lifted), flat) << name;
        expect_monotone(r);
    }
}

TEST(OptimizeDual, Deterministic)
{
    const auto corpus = dual_corpus();
    for (const auto& nd : {corpus[10], corpus[14]}) {
        const SolveResult a = optimize_dual(nd.dual, SolveSpec{});
        const SolveResult b = optimize_dual(nd.dual, SolveSpec{});
        EXPECT_EQ(a.embedding, b.embedding) << nd.name;
        EXPECT_EQ(a.iterations, b.iterations) << nd.name;
    }
}

TEST(OptimizeDual, NonRealizablePropagates)
{
    const auto d = make_dual({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, ring_plus(4, {{0, 2}, {1, 3}}));
    EXPECT_EQ(error_of([&] { optimize_dual(d, SolveSpec{}); }), ErrorCode::NonRealizableAdjacency);
}

TEST(SpectralEmbed, SingleApexAtCentre)
{
    const Embedding e = spectral_embed_2d(pyramid_graph(), {{0, 0}, {1, 0}, {1, 1}, {0, 1}});
    EXPECT_NEAR(e.coords[4].x(), 0.5, 1e-15);
    EXPECT_NEAR(e.coords[4].y(), 0.5, 1e-15);
}

TEST(SpectralEmbed, HipMatchesDenseSolve)
{
    const RoofGraph g = hip_graph();
    const std::vector<Vec2> outline = {{0, 0}, {2, 0}, {2, 1}, {0, 1}};
    const Embedding e = spectral_embed_2d(g, outline);
    // 4 ~ {0, 3, 5}, 5 ~ {1, 2, 4}: [3 -1; -1 3] X = [b4; b5], solved by Cramer's rule.
    const Vec2 b4 = outline[0] + outline[3];
    const Vec2 b5 = outline[1] + outline[2];
    const Vec2 x4 = (3.0 * b4 + b5) / 8.0;
    const Vec2 x5 = (b4 + 3.0 * b5) / 8.0;
    EXPECT_NEAR((e.xy(4) - x4).norm(), 0.0, 1e-14);
    EXPECT_NEAR((e.xy(5) - x5).norm(), 0.0, 1e-14);
}

TEST(SpectralEmbed, CorpusMeanOfNeighboursAndInside)
{
    for (const auto& [name, dual] : dual_corpus()) {
        const RoofGraph g = primal_from_dual(dual);
        const Embedding e = spectral_embed_2d(g, dual.outline);
        for (int v : g.roof_vertices()) {
            Vec2 mean = Vec2::Zero();
            for (int u : g.neighbors(v))
                mean += e.xy(u);
            mean /= static_cast<double>(g.neighbors(v).size());
            EXPECT_LT((mean - e.xy(v)).norm(), 1e-10) << name;
            EXPECT_TRUE(point_in_polygon(e.xy(v), dual.outline)) << name;
        }
        for (int ei : g.roof_edges()) {
            const auto& re = g.edges()[ei];
            for (int k = 0; k < g.num_outline(); ++k) {
                const auto oe = g.outline_edge(k);
                EXPECT_FALSE(segments_cross(e.xy(re.a), e.xy(re.b), e.xy(oe[0]), e.xy(oe[1]))) << name;
            }
        }
    }
}

TEST(Preprocess, AxisAlignedRectangleUnchanged)
{
    const std::vector<Vec2> rect = {{0, 0}, {2, 0}, {2, 1}, {0, 1}};
    const PreprocessResult r = preprocess_outline(rect, 3.0);
    EXPECT_EQ(r.points, rect);
    EXPECT_EQ(r.max_displacement, 0.0);
}

TEST(Preprocess, RotatedEdgeBecomesParallel)
{
    const double a = 1.0 * kDeg;
    const std::vector<Vec2> in = {{0, 0}, {2, 0}, {2 + std::sin(a), std::cos(a)}, {0, 1}};
    const PreprocessResult r = preprocess_outline(in, 3.0);
    const auto& p = r.points;
    EXPECT_LT(line_angle(p[1] - p[0], p[3] - p[2]), 1e-10);
    EXPECT_LT(line_angle(p[2] - p[1], p[0] - p[3]), 1e-10);
    double max_disp = 0.0;
    for (int k = 0; k < 4; ++k)
        max_disp = std::max(max_disp, (p[k] - in[k]).norm());
    EXPECT_DOUBLE_EQ(r.max_displacement, max_disp);
    EXPECT_GT(max_disp, 0.0);
    EXPECT_LT(max_disp, 0.02);
}

TEST(Preprocess, NoisyLSnapsToTwoClusters)
{
    // L outline with every edge rotated by +-0.5 degrees about its start point.
    const std::vector<Vec2> ideal = {{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}};
    const double jitter[6] = {0.5, -0.5, 0.5, 0.4, -0.5, 0.3};
    std::vector<Vec2> in(6);
    in[0] = ideal[0];
    for (int k = 0; k < 5; ++k) {
        const Vec2 d = ideal[k + 1] - ideal[k];
        const double t = jitter[k] * kDeg;
        in[k + 1] = in[k] + Vec2(std::cos(t) * d.x() - std::sin(t) * d.y(), std::sin(t) * d.x() + std::cos(t) * d.y());
    }
    const PreprocessResult r = preprocess_outline(in, 3.0);
    // Oracle: horizontal edges are even, vertical edges odd.
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
            EXPECT_EQ(r.clusters[i] == r.clusters[j], i % 2 == j % 2);
    const auto& p = r.points;
    for (int i = 0; i < 6; ++i)
        for (int j = i + 2; j < 6; j += 2)
            EXPECT_LT(line_angle(p[(i + 1) % 6] - p[i], p[(j + 1) % 6] - p[j]), 1e-10);
    EXPECT_TRUE(polygon_is_simple(p));
}

TEST(Preprocess, SelfIntersectingRejected)
{
    EXPECT_EQ(error_of([] { preprocess_outline({{0, 0}, {1, 1}, {1, 0}, {0, 1}}, 3.0); }),
              ErrorCode::SelfIntersectingOutline);
}

TEST(Preprocess, EmbeddingKeepsRoofVertices)
{
    auto xy = hip_xy();
    xy[2].x() = 2.01;
    const Embedding out = preprocess_embedding(hip_graph(), Embedding::planar(xy), 3.0);
    EXPECT_EQ(out.coords[4], Embedding::planar(xy).coords[4]);
    EXPECT_LT(line_angle(out.xy(2) - out.xy(1), out.xy(0) - out.xy(3)), 1e-10);
}

TEST(Lift, HipRidgeAtHeight)
{
    const Embedding e = lift_2d_to_3d(hip_graph(), Embedding::planar(hip_xy()), 1.0);
    EXPECT_EQ(e.coords[4].z(), 1.0);
    // Oracle: both trapezoids share the ridge line, so the other ridge end sits at the same height.
    EXPECT_NEAR(e.coords[5].z(), 1.0, 1e-12);
    for (int v = 0; v < 4; ++v)
        EXPECT_EQ(e.coords[v].z(), 0.0);
    EXPECT_LT(normalized_planarity(hip_graph(), e), 1e-10);
}

TEST(Lift, FlatInterior)
{
    const Embedding e = lift_2d_to_3d(hip_graph(), Embedding::planar(hip_xy()), 0.0);
    for (const auto& p : e.coords)
        EXPECT_NEAR(p.z(), 0.0, 1e-15);
    EXPECT_EQ(normalized_planarity(hip_graph(), e), 0.0);
}

TEST(Lift, PyramidApex)
{
    const Embedding e = lift_2d_to_3d(pyramid_graph(), Embedding::planar(pyramid_xy(0.3, 0.6)), 2.0);
    EXPECT_EQ(e.coords[4].z(), 2.0);
    EXPECT_EQ(normalized_planarity(pyramid_graph(), e), 0.0);
}

TEST(Lift, InvalidInputRejected)
{
    auto xy = hip_xy();
    xy[5].y() = 0.6;
    EXPECT_EQ(error_of([&] { lift_2d_to_3d(hip_graph(), Embedding::planar(xy), 1.0); }), ErrorCode::InvalidInput2D);
}

TEST(Lift, RegionFixtureIsConsistent)
{
    const Embedding e = lift_2d_to_3d(region_graph(), Embedding::planar(region_xy()), 1.0);
    EXPECT_LT(normalized_planarity(region_graph(), e), 1e-10);
    EXPECT_EQ(project_xy(e), Embedding::planar(region_xy()));
}

TEST(VariableHeights, AllFixedZeroMatchesPrimal)
{
    auto xy = region_xy();
    xy[6].y() += 0.05;
    const Embedding user = Embedding::planar(xy);
    const SolveResult a = optimize_primal(region_graph(), user, SolveSpec{});
    const SolveResult b = optimize_variable_heights(region_graph(), user, SolveSpec{});
    EXPECT_EQ(a.embedding, b.embedding);
}

TEST(VariableHeights, NoAnchorRejected)
{
    auto rec = records(4, 2);
    for (int i = 0; i < 4; ++i)
        rec[i].height_group = HeightGroup::free();
    const RoofGraph g(rec, hip_graph().faces());
    EXPECT_EQ(error_of([&] { optimize_variable_heights(g, Embedding::planar(hip_xy()), SolveSpec{}); }),
              ErrorCode::AllHeightsFree);
}

TEST(VariableHeights, SymmetricPairEqualises)
{
    auto rec = records(4, 2);
    rec[1].height_group = HeightGroup::group("east");
    rec[2].height_group = HeightGroup::group("east");
    const RoofGraph g(rec, hip_graph().faces());
    Embedding user = hip_3d(0.5);
    user.coords[1].z() = 0.1;
    user.coords[2].z() = 0.3;
    SolveSpec spec;
    spec.eta = 1.0;
    const SolveResult r = optimize_variable_heights(g, user, spec);
    EXPECT_LT(r.planarity, 1e-9);
    EXPECT_NEAR(r.embedding.coords[1].z(), r.embedding.coords[2].z(), 1e-6);
    EXPECT_EQ(r.embedding.coords[1].x(), 2.0);
    EXPECT_EQ(r.embedding.coords[0].z(), 0.0);
}

TEST(VariableHeights, PavilionVarianceShrinksWithEta)
{
    const RoofGraph g = pavilion_graph();
    const Embedding user = pavilion_user();
    auto corner_variance = [](const Embedding& e) {
        std::vector<double> z;
        for (int i = 0; i < 6; ++i)
            z.push_back(e.coords[2 * i].z());
        return population_variance(z);
    };
    SolveSpec with, without;
    with.eta = 1.0;
    without.eta = 0.0;
    const SolveResult a = optimize_variable_heights(g, user, with);
    const SolveResult b = optimize_variable_heights(g, user, without);
    EXPECT_LT(a.planarity, 1e-9);
    EXPECT_LT(b.planarity, 1e-9);
    EXPECT_LT(corner_variance(a.embedding), corner_variance(b.embedding));
    for (int i = 0; i < 6; ++i)
        EXPECT_EQ(a.embedding.coords[2 * i + 1].z(), 0.0);
}

TEST(OptimizeSubset, FrozenCoordinatesBitIdentical)
{
    Embedding e = lift_2d_to_3d(region_graph(), Embedding::planar(region_xy()), 1.0);
    e.coords[6].x() += 0.05;
    e.coords[8].y() -= 0.04;
    SolveSpec spec;
    const SolveResult r = optimize_subset(region_graph(), e, {6, 8}, spec);
    EXPECT_LT(r.planarity, 1e-9);
    for (int v : {0, 1, 2, 3, 4, 5, 7})
        EXPECT_EQ(r.embedding.coords[v], e.coords[v]);
}
