#include "corpus.hpp"
#include "fixtures.hpp"

#include "roofforge/editing.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <random>

using namespace roofforge;
using namespace fixtures;

namespace {

EditOp move(int v, Vec3 d)
{
    EditOp op;
    op.kind = EditKind::move_vertex;
    op.vertex = v;
    op.delta = d;
    return op;
}

EditOp with_faces(EditKind k, int a, int b)
{
    EditOp op;
    op.kind = k;
    op.faces = {a, b};
    return op;
}

EditOp with_edge(EditKind k, int a, int b)
{
    EditOp op;
    op.kind = k;
    op.edge = {a, b};
    return op;
}

/// Same cycle up to rotation.
bool same_cycle(const Face& a, const Face& b)
{
    if (a.size() != b.size())
        return false;
    for (std::size_t s = 0; s < a.size(); ++s) {
        bool ok = true;
        for (std::size_t i = 0; i < a.size() && ok; ++i)
            ok = a[(i + s) % a.size()] == b[i];
        if (ok)
            return true;
    }
    return false;
}

Embedding region_3d()
{
    return lift_2d_to_3d(region_graph(), Embedding::planar(region_xy()), 1.0);
}

}  // namespace

TEST(ApplyEdit, SnapHipRidgeGivesPyramid)
{
    const auto r = apply_edit(hip_graph(), hip_3d(0.5), with_edge(EditKind::snap_edge, 4, 5));
    EXPECT_EQ(r.graph, pyramid_graph());
    EXPECT_EQ(r.embedding.coords.size(), 5u);
    EXPECT_EQ(r.embedding.coords[4], Vec3(1.0, 0.5, 0.5));
    EXPECT_EQ(r.seed, 4);
}

TEST(ApplyEdit, SnapCommutesWithDualEdit)
{
    const auto r = apply_edit(hip_graph(), Embedding::planar(hip_xy()), with_edge(EditKind::snap_edge, 4, 5));
    DualGraph edited = hip_dual();
    edited.adjacency(0, 2) = edited.adjacency(2, 0) = 0;
    EXPECT_EQ(dual_from_primal(r.graph, r.embedding), edited);
}

TEST(ApplyEdit, SnapRejectsOutlineAndDegenerate)
{
    EXPECT_EQ(error_of([] { apply_edit(hip_graph(), hip_3d(), with_edge(EditKind::snap_edge, 0, 4)); }),
              ErrorCode::InvalidTarget);
    // Interior triangle {2, 3, 4} would collapse.
    const RoofGraph g(records(3, 2), {{0, 1, 4, 3}, {1, 2, 4}, {2, 0, 3}, {2, 3, 4}});
    const Embedding e = Embedding::planar({{0, 0}, {2, 0}, {1, 2}, {0.8, 0.6}, {1.2, 0.6}});
    EXPECT_EQ(error_of([&] { apply_edit(g, e, with_edge(EditKind::snap_edge, 3, 4)); }),
              ErrorCode::WouldCreateDegenerateFace);
}

TEST(ApplyEdit, MergeHipTrapezoidAndTriangle)
{
    const auto r = apply_edit(hip_graph(), Embedding::planar(hip_xy()), with_faces(EditKind::merge_faces, 0, 1));
    std::multiset<std::size_t> sizes;
    for (const auto& f : r.graph.faces())
        sizes.insert(f.size());
    EXPECT_EQ(sizes, (std::multiset<std::size_t>{5, 4, 3}));
    EXPECT_TRUE(same_cycle(r.graph.faces()[0], {5, 4, 0, 1, 2}));
    // Oracle: faces {e0, e1}, {e2}, {e3}; the pair (e0, e1) is no longer a dual edge.
    const DualGraph d = dual_from_primal(r.graph, r.embedding);
    EXPECT_EQ(d.merge_map, (std::vector<int>{0, 0, 2, 3}));
    Eigen::MatrixXi expected = Eigen::MatrixXi::Zero(4, 4);
    for (auto [i, j] : {std::pair{0, 2}, {0, 3}, {2, 3}})
        expected(i, j) = expected(j, i) = 1;
    EXPECT_EQ(d.adjacency, expected);
}

TEST(ApplyEdit, MergeNeedsOneSharedEdge)
{
    EXPECT_EQ(error_of([] { apply_edit(hip_graph(), hip_3d(), with_faces(EditKind::merge_faces, 1, 3)); }),
              ErrorCode::InvalidTarget);
}

TEST(ApplyEdit, ZeroMoveIsIdentity)
{
    const auto r = apply_edit(hip_graph(), hip_3d(), move(4, Vec3::Zero()));
    EXPECT_EQ(r.graph, hip_graph());
    EXPECT_EQ(r.embedding, hip_3d());
}

TEST(ApplyEdit, MovesTranslateOnly)
{
    const auto r = apply_edit(hip_graph(), hip_3d(), move(5, Vec3(0.1, -0.2, 0.3)));
    EXPECT_EQ(r.embedding.coords[5], hip_3d().coords[5] + Vec3(0.1, -0.2, 0.3));
    EditOp op = with_edge(EditKind::move_edge, 4, 5);
    op.delta = Vec3(0, 0.1, 0);
    const auto e = apply_edit(hip_graph(), hip_3d(), op);
    EXPECT_EQ(e.embedding.coords[4].y(), 0.6);
    EXPECT_EQ(e.embedding.coords[5].y(), 0.6);
    EXPECT_EQ(e.embedding.coords[0], hip_3d().coords[0]);
    EXPECT_EQ(error_of([] { apply_edit(hip_graph(), hip_3d(), move(9, Vec3::Zero())); }), ErrorCode::InvalidTarget);
    EXPECT_EQ(error_of([] { apply_edit(hip_graph(), hip_3d(), move(4, Vec3(NAN, 0, 0))); }),
              ErrorCode::InvalidTarget);
}

TEST(ApplyEdit, SplitThenMergeRestores)
{
    EditOp split;
    split.kind = EditKind::split_face;
    split.face = 0;
    split.split = {0, 5};
    const auto s = apply_edit(hip_graph(), hip_3d(), split);
    ASSERT_EQ(s.graph.num_faces(), 5);
    EXPECT_TRUE(same_cycle(s.graph.faces()[0], {0, 1, 5}));
    EXPECT_TRUE(same_cycle(s.graph.faces()[4], {5, 4, 0}));
    const auto m = apply_edit(s.graph, s.embedding, with_faces(EditKind::merge_faces, 0, 4));
    EXPECT_TRUE(same_cycle(m.graph.faces()[0], hip_graph().faces()[0]));
    split.split = {0, 1};
    EXPECT_EQ(error_of([&] { apply_edit(hip_graph(), hip_3d(), split); }), ErrorCode::InvalidTarget);
}

TEST(ApplyEdit, ForceAdjacentFlipsRidge)
{
    const auto r = apply_edit(hip_graph(), Embedding::planar(hip_xy()), with_faces(EditKind::force_adjacent, 1, 3));
    EXPECT_TRUE(same_cycle(r.graph.faces()[0], {0, 1, 5}));
    EXPECT_TRUE(same_cycle(r.graph.faces()[1], {1, 2, 4, 5}));
    EXPECT_TRUE(same_cycle(r.graph.faces()[2], {2, 3, 4}));
    EXPECT_TRUE(same_cycle(r.graph.faces()[3], {3, 0, 5, 4}));
    DualGraph expected = hip_dual();
    expected.adjacency(0, 2) = expected.adjacency(2, 0) = 0;
    expected.adjacency(1, 3) = expected.adjacency(3, 1) = 1;
    EXPECT_EQ(dual_from_primal(r.graph, r.embedding), expected);
    EXPECT_EQ(r.embedding.xy(5), Vec2(1.0, 0.25));
    EXPECT_EQ(r.embedding.xy(4), Vec2(1.0, 0.75));
}

TEST(ApplyEdit, ForceAdjacentRejections)
{
    EXPECT_EQ(error_of([] { apply_edit(hip_graph(), hip_3d(), with_faces(EditKind::force_adjacent, 0, 1)); }),
              ErrorCode::InvalidTarget);
    const Embedding e = Embedding::planar(pyramid_xy());
    EXPECT_EQ(error_of([&] { apply_edit(pyramid_graph(), e, with_faces(EditKind::force_adjacent, 0, 2)); }),
              ErrorCode::InvalidTarget);
}

TEST(ApplyEdit, RandomOpsKeepGraphInvariants)
{
    std::mt19937 rng(7);
    int applied = 0;
    for (const auto& [name, dual] : dual_corpus()) {
        const auto rec = recover_primal(dual);
        const Embedding start = spectral_embed_2d(rec.graph, dual.outline);
        for (int trial = 0; trial < 40; ++trial) {
            const RoofGraph& g = rec.graph;
            std::uniform_int_distribution<int> kind(0, 5), vert(0, g.num_vertices() - 1), face(0, g.num_faces() - 1);
            EditOp op;
            op.kind = static_cast<EditKind>(kind(rng));
            op.vertex = vert(rng);
            const auto& e = g.edges()[std::uniform_int_distribution<int>(0, (int)g.edges().size() - 1)(rng)];
            op.edge = {e.a, e.b};
            op.faces = {face(rng), face(rng)};
            op.face = op.faces[0];
            const Face& f = g.faces()[op.face];
            op.split = {f[0], f[f.size() / 2]};
            op.delta = Vec3(0.01, -0.02, 0.0);
            try {
                const EditResult r = apply_edit(g, start, op);
                ++applied;
                // Rebuilding revalidates every topology invariant.
                EXPECT_NO_THROW(RoofGraph(r.graph.vertices(), r.graph.faces())) << name;
                EXPECT_EQ(r.embedding.size(), r.graph.num_vertices()) << name;
                EXPECT_EQ(r.graph.num_outline(), g.num_outline()) << name;
            } catch (const Error& err) {
                EXPECT_TRUE(err.code() == ErrorCode::InvalidTarget ||
                            err.code() == ErrorCode::WouldCreateDegenerateFace)
                    << name << ": " << err.what();
            }
        }
    }
    EXPECT_GT(applied, 100);
}

TEST(AffectedRegion, SlantedLIsY1Y2)
{
    // x = 7 moves; y1 = 6 is held by concurrency, y2 = 8 by parallelism.
    auto xy = region_xy();
    xy[7] += Vec2(0.1, -0.1);
    const AffectedRegion r = smallest_affected_region(region_graph(), Embedding::planar(xy), 7);
    EXPECT_EQ(r.region, (std::vector<int>{6, 8}));
    EXPECT_EQ(r.seed, 7);
}

TEST(AffectedRegion, PyramidApexIsEmpty)
{
    const AffectedRegion r = smallest_affected_region(pyramid_graph(), Embedding::planar(pyramid_xy(0.3, 0.7)), 4);
    EXPECT_TRUE(r.region.empty());
}

TEST(AffectedRegion, HipRidgeEnd)
{
    const AffectedRegion unmoved = smallest_affected_region(hip_graph(), Embedding::planar(hip_xy(0.5, 0.5, 1.5)), 4);
    EXPECT_TRUE(unmoved.region.empty());
    // Across the ridge: the partner must follow to stay parallel to the long sides.
    auto xy = hip_xy();
    xy[4].y() = 0.6;
    EXPECT_EQ(smallest_affected_region(hip_graph(), Embedding::planar(xy), 4).region, (std::vector<int>{5}));
    // Along the ridge nothing else is forced.
    xy = hip_xy(0.5, 0.3, 1.5);
    EXPECT_TRUE(smallest_affected_region(hip_graph(), Embedding::planar(xy), 4).region.empty());
}

TEST(AffectedRegion, SeedMustBeRoofVertex)
{
    EXPECT_EQ(error_of([] { smallest_affected_region(hip_graph(), Embedding::planar(hip_xy()), 0); }),
              ErrorCode::InvalidTarget);
}

TEST(Reoptimize, SlantedLRestoresPlanarityLocally)
{
    const Embedding before = region_3d();
    const auto edited = apply_edit(region_graph(), before, move(7, Vec3(0.1, -0.1, 0.0)));
    const AffectedRegion region = smallest_affected_region(edited.graph, project_xy(edited.embedding), 7);
    const SolveResult r = reoptimize_region(edited.graph, edited.embedding, region, SolveSpec{});
    EXPECT_TRUE(r.converged);
    EXPECT_LT(r.planarity, 1e-9);
    for (int v = 0; v < edited.graph.num_vertices(); ++v)
        if (v != 6 && v != 8)
            EXPECT_EQ(r.embedding.coords[v], edited.embedding.coords[v]) << v;
    EXPECT_TRUE(check_validity_2d(r.graph, project_xy(r.embedding), 1e-6).valid());
}

TEST(Reoptimize, EmptyRegionIsIdentity)
{
    const Embedding e = region_3d();
    const SolveResult r = reoptimize_region(region_graph(), e, AffectedRegion{{}, 7}, SolveSpec{});
    EXPECT_EQ(r.embedding, e);
}

TEST(Reoptimize, AllRoofVerticesMatchesPrimal)
{
    const Embedding e = region_3d();
    const SolveResult restricted = reoptimize_region(region_graph(), e, AffectedRegion{{6, 7, 8}, -1}, SolveSpec{});
    SolveSpec spec;
    spec.h = 1.0;
    spec.fixed_vertex = 7;
    const SolveResult full = optimize_primal(region_graph(), project_xy(e), spec);
    for (int v = 0; v < 9; ++v)
        EXPECT_LT((restricted.embedding.coords[v] - full.embedding.coords[v]).norm(), 1e-6) << v;
}

TEST(Reoptimize, AfterEditUsesDetectedRegion)
{
    const auto edited = apply_edit(region_graph(), region_3d(), move(7, Vec3(0.1, -0.1, 0.0)));
    const ReoptimizeOutcome out = reoptimize_after_edit(edited.graph, edited.embedding, 7, SolveSpec{});
    EXPECT_EQ(out.region.region, (std::vector<int>{6, 8}));
    EXPECT_EQ(out.expansions, 0);
    EXPECT_FALSE(out.full_resolve);
    EXPECT_LT(out.result.planarity, 1e-9);
}

TEST(Reoptimize, AfterEditEscalatesWhenRegionTooSmall)
{
    // Lifting the seed makes the hip non-planar although the 2D layout stays valid.
    const auto edited = apply_edit(hip_graph(), hip_3d(0.5), move(4, Vec3(0, 0, 0.2)));
    const ReoptimizeOutcome out = reoptimize_after_edit(edited.graph, edited.embedding, 4, SolveSpec{});
    EXPECT_TRUE(out.region.region == std::vector<int>{5});
    EXPECT_EQ(out.expansions, 1);
    EXPECT_LT(out.result.planarity, 1e-9);
    EXPECT_EQ(out.result.embedding.coords[4], edited.embedding.coords[4]);
}

TEST(EditSession, UndoRestoresExactState)
{
    EditSession s(hip_graph(), hip_3d());
    s.apply(move(4, Vec3(0.1, 0.05, 0)));
    s.apply(with_edge(EditKind::snap_edge, 4, 5));
    EXPECT_EQ(s.graph(), pyramid_graph());
    EXPECT_TRUE(s.undo());
    EXPECT_EQ(s.graph(), hip_graph());
    EXPECT_TRUE(s.undo());
    EXPECT_EQ(s.embedding(), hip_3d());
    EXPECT_FALSE(s.undo());
    EXPECT_TRUE(s.redo());
    EXPECT_EQ(s.embedding().coords[4], hip_3d().coords[4] + Vec3(0.1, 0.05, 0));
    s.apply(move(5, Vec3(0, 0.01, 0)));
    EXPECT_EQ(s.redo_depth(), 0u);
    EXPECT_FALSE(s.redo());
}
