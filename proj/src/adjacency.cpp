#include "roofforge/adjacency.hpp"

#include "roofforge/errors.hpp"
#include "roofforge/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>

namespace roofforge {

namespace {

std::vector<Vec2> midpoints(const std::vector<Vec2>& outline)
{
    const std::size_t n = outline.size();
    std::vector<Vec2> c(n);
    for (std::size_t k = 0; k < n; ++k)
        c[k] = 0.5 * (outline[k] + outline[(k + 1) % n]);
    return c;
}

/// CCW angle from a to b in [0, 2pi).
double ccw_angle(const Vec2& a, const Vec2& b)
{
    double t = std::atan2(cross2(a, b), a.dot(b));
    if (t < 0.0)
        t += 2.0 * std::numbers::pi;
    return t;
}

void check_input(const std::vector<Vec2>& outline, const Eigen::MatrixXd& prob)
{
    const auto n = static_cast<Eigen::Index>(outline.size());
    if (n < 3)
        throw Error(ErrorCode::SchemaError, "outline needs at least 3 points");
    if (prob.rows() != n || prob.cols() != n)
        throw Error(ErrorCode::SchemaError, "probabilities must be n_O x n_O");
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            if (!(prob(i, j) >= 0.0 && prob(i, j) <= 1.0) || prob(i, j) != prob(j, i))
                throw Error(ErrorCode::SchemaError, "probabilities must be symmetric and in [0, 1]");
}

struct Resolver {
    std::vector<Vec2> centers;
    const Eigen::MatrixXd& prob;

    std::vector<EdgePair> pairs(const Eigen::MatrixXi& a) const
    {
        std::vector<EdgePair> out;
        for (int i = 0; i < a.rows(); ++i)
            for (int j = i + 1; j < a.cols(); ++j)
                if (a(i, j))
                    out.emplace_back(i, j);
        return out;
    }

    /// Next conflict to resolve: highest max-probability first, then by index.
    std::optional<std::pair<EdgePair, EdgePair>> next_conflict(const Eigen::MatrixXi& a) const
    {
        const auto ps = pairs(a);
        std::vector<std::array<Vec2, 2>> segs;
        for (auto [i, j] : ps)
            segs.push_back({centers[i], centers[j]});
        std::optional<std::pair<EdgePair, EdgePair>> best;
        double best_p = -1.0;
        for (auto [s, t] : kernels::crossing_pairs(segs)) {
            const double p = std::max(prob(ps[s].first, ps[s].second), prob(ps[t].first, ps[t].second));
            if (p > best_p) {
                best_p = p;
                best = std::make_pair(ps[s], ps[t]);
            }
        }
        return best;
    }

    /// Higher probability wins; exact ties keep the lexicographically smaller pair.
    std::pair<EdgePair, EdgePair> winner_loser(const EdgePair& e, const EdgePair& f) const
    {
        const double pe = prob(e.first, e.second);
        const double pf = prob(f.first, f.second);
        if (pe > pf || (pe == pf && e < f))
            return {e, f};
        return {f, e};
    }

    double score(const Eigen::MatrixXi& a) const
    {
        double s = 0.0;
        for (auto [i, j] : pairs(a))
            s += std::log(prob(i, j));
        return s;
    }

    /// Thresholded matrix with exterior pairs removed.
    AdjacencyCandidate start(const std::vector<Vec2>& outline, double threshold) const
    {
        const auto n = static_cast<int>(outline.size());
        AdjacencyCandidate c;
        c.adjacency = Eigen::MatrixXi::Zero(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (prob(i, j) > threshold)
                    c.adjacency(i, j) = c.adjacency(j, i) = 1;
        if (c.adjacency.sum() == 0)
            throw Error(ErrorCode::EmptyAdjacency, "no face pair has probability above the threshold");
        for (auto [i, j] : pairs(c.adjacency))
            if (!exterior_test(outline, i, j) || !exterior_test(outline, j, i)) {
                c.adjacency(i, j) = c.adjacency(j, i) = 0;
                c.provenance.push_back({ResolvedConflict::Kind::exterior, {i, j}, {-1, -1}});
            }
        return c;
    }
};

void drop(AdjacencyCandidate& c, const EdgePair& kept, const EdgePair& dropped)
{
    c.adjacency(dropped.first, dropped.second) = c.adjacency(dropped.second, dropped.first) = 0;
    c.provenance.push_back({ResolvedConflict::Kind::crossing, dropped, kept});
}

}  // namespace

bool exterior_test(const std::vector<Vec2>& outline, int i, int j)
{
    const int n = static_cast<int>(outline.size());
    if ((i + 1) % n == j || (j + 1) % n == i)
        return true;
    const auto c = midpoints(outline);
    const Vec2 next = c[(i + 1) % n] - c[i];
    const Vec2 prev = c[(i + n - 1) % n] - c[i];
    const Vec2 v = c[j] - c[i];
    // The interior wedge sweeps counter-clockwise from next to prev on a CCW outline,
    // and from prev to next on a clockwise one.
    const bool ccw = signed_area(outline) > 0.0;
    const Vec2& from = ccw ? next : prev;
    const Vec2& to = ccw ? prev : next;
    return ccw_angle(from, v) <= ccw_angle(from, to);
}

AdjacencyCandidate resolve_greedy(const std::vector<Vec2>& outline, const Eigen::MatrixXd& prob, double threshold)
{
    check_input(outline, prob);
    const Resolver r{midpoints(outline), prob};
    AdjacencyCandidate c = r.start(outline, threshold);
    while (auto conflict = r.next_conflict(c.adjacency)) {
        const auto [keep, lose] = r.winner_loser(conflict->first, conflict->second);
        drop(c, keep, lose);
    }
    c.score = r.score(c.adjacency);
    return c;
}

SamplingResult resolve_sampling(const std::vector<Vec2>& outline, const Eigen::MatrixXd& prob, double threshold,
                                int max_candidates)
{
    check_input(outline, prob);
    if (max_candidates < 1)
        throw Error(ErrorCode::SchemaError, "max_candidates must be >= 1");
    const Resolver r{midpoints(outline), prob};
    SamplingResult result;
    std::vector<AdjacencyCandidate> stack{r.start(outline, threshold)};
    std::map<std::vector<int>, AdjacencyCandidate> unique;
    int branches = 0;
    while (!stack.empty()) {
        AdjacencyCandidate c = std::move(stack.back());
        stack.pop_back();
        const auto conflict = r.next_conflict(c.adjacency);
        if (!conflict) {
            std::vector<int> key(c.adjacency.data(), c.adjacency.data() + c.adjacency.size());
            c.score = r.score(c.adjacency);
            unique.emplace(std::move(key), std::move(c));
            continue;
        }
        if (++branches > kMaxSamplingBranches) {
            result.truncated = true;
            break;
        }
        const auto [keep, lose] = r.winner_loser(conflict->first, conflict->second);
        AdjacencyCandidate other = c;
        drop(other, lose, keep);
        drop(c, keep, lose);
        stack.push_back(std::move(other));
        stack.push_back(std::move(c));  // greedy branch explored first
    }
    for (const auto& [key, c] : unique)
        result.candidates.push_back(c);
    std::stable_sort(result.candidates.begin(), result.candidates.end(),
                     [](const auto& a, const auto& b) { return a.score > b.score; });
    if (static_cast<int>(result.candidates.size()) > max_candidates) {
        result.candidates.resize(max_candidates);
        // Keep the greedy resolution even when it does not score in the top slice.
        const AdjacencyCandidate greedy = resolve_greedy(outline, prob, threshold);
        const bool present = std::any_of(result.candidates.begin(), result.candidates.end(),
                                         [&](const auto& c) { return c.adjacency == greedy.adjacency; });
        const auto it = unique.find(
            std::vector<int>(greedy.adjacency.data(), greedy.adjacency.data() + greedy.adjacency.size()));
        if (!present && it != unique.end())
            result.candidates.back() = it->second;
    }
    return result;
}

}  // namespace roofforge
