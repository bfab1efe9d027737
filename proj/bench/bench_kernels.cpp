// Parallel kernels against their serial references, plus whole solves on the fixture corpus.

#include "roofforge/io.hpp"
#include "roofforge/kernels.hpp"

#include <benchmark/benchmark.h>

#include <filesystem>
#include <random>

using namespace roofforge;

namespace {

struct QuadGrid {
    std::vector<Face> faces;
    std::vector<Vec3> x;
};

/// n x n quads on a jittered height field; no face is planar.
QuadGrid quad_grid(int n)
{
    QuadGrid g;
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> jitter(-0.05, 0.05);
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i)
            g.x.emplace_back(i + jitter(rng), j + jitter(rng), jitter(rng));
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const int v = j * (n + 1) + i;
            g.faces.push_back({v, v + 1, v + n + 2, v + n + 1});
        }
    return g;
}

std::vector<std::array<Vec2, 2>> random_segments(int n)
{
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<std::array<Vec2, 2>> s(n);
    for (auto& seg : s)
        seg = {Vec2(u(rng), u(rng)), Vec2(u(rng), u(rng))};
    return s;
}

template <bool Parallel>
void BM_Planarity(benchmark::State& state)
{
    const auto g = quad_grid(static_cast<int>(state.range(0)));
    const auto kind = static_cast<MetricKind>(state.range(1));
    for (auto _ : state) {
        auto e = Parallel ? kernels::planarity(g.faces, g.x, kind, true)
                          : kernels::reference::planarity(g.faces, g.x, kind, true);
        benchmark::DoNotOptimize(e.gradient.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(g.faces.size()));
    state.SetLabel(metric_name(kind));
}

template <bool Parallel>
void BM_Crossings(benchmark::State& state)
{
    const auto segs = random_segments(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        auto c = Parallel ? kernels::crossing_pairs(segs) : kernels::reference::crossing_pairs(segs);
        benchmark::DoNotOptimize(c.size());
    }
}

void planarity_args(benchmark::internal::Benchmark* b)
{
    for (int n : {16, 64, 256})
        for (int k = 0; k < 4; ++k)
            b->Args({n, k});
}

void BM_OptimizeDualCorpus(benchmark::State& state, std::string path)
{
    const DualGraph dual = load_dual(read_text_file(path));
    double err = 0.0;
    for (auto _ : state) {
        SolveResult r = optimize_dual(dual, SolveSpec{});
        benchmark::DoNotOptimize(r.iterations);
        err = r.planarity;
    }
    state.SetLabel("err " + format_double(err));
}

}  // namespace

BENCHMARK(BM_Planarity<true>)->Name("planarity/parallel")->Apply(planarity_args);
BENCHMARK(BM_Planarity<false>)->Name("planarity/reference")->Apply(planarity_args);
BENCHMARK(BM_Crossings<true>)->Name("crossings/parallel")->Arg(64)->Arg(512)->Arg(2048);
BENCHMARK(BM_Crossings<false>)->Name("crossings/reference")->Arg(64)->Arg(512)->Arg(2048);

int main(int argc, char** argv)
{
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(ROOFFORGE_DUAL_FIXTURES))
        files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files)
        benchmark::RegisterBenchmark(("optimize_dual/" + f.stem().string()).c_str(), BM_OptimizeDualCorpus,
                                     f.string())
            ->Unit(benchmark::kMillisecond);
    benchmark::Initialize(&argc, argv);
    if (benchmark::ReportUnrecognizedArguments(argc, argv))
        return 1;
    benchmark::RunSpecifiedBenchmarks();
    benchmark::Shutdown();
    return 0;
}
