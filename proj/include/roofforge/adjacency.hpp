#pragma once

#include "roofforge/geometry.hpp"

#include <Eigen/Core>

#include <utility>
#include <vector>

namespace roofforge {

/// Dual nodes sit at outline-edge midpoints; adjacency is indexed by outline edge.
using EdgePair = std::pair<int, int>;

struct ResolvedConflict {
    enum class Kind { exterior, crossing };
    Kind kind = Kind::crossing;
    EdgePair dropped;
    EdgePair kept;  // unused for exterior removals
};

struct AdjacencyCandidate {
    Eigen::MatrixXi adjacency;
    /// Sum of log probabilities of the kept pairs.
    double score = 0.0;
    std::vector<ResolvedConflict> provenance;
};

struct SamplingResult {
    std::vector<AdjacencyCandidate> candidates;  // descending score
    bool truncated = false;                      // branch cap reached
};

constexpr int kMaxSamplingBranches = 1 << 16;

/// True when the segment from edge i's midpoint toward edge j's midpoint leaves into the interior
/// wedge at edge i. Works for either orientation; consecutive edges are always interior.
bool exterior_test(const std::vector<Vec2>& outline, int i, int j);

/// Thresholds (p > threshold), drops exterior pairs, then resolves crossings by keeping the more
/// probable pair. Throws EmptyAdjacency when nothing survives the threshold.
AdjacencyCandidate resolve_greedy(const std::vector<Vec2>& outline, const Eigen::MatrixXd& prob,
                                  double threshold = 0.5);

/// Branches on every crossing instead; the greedy result is always among the candidates.
SamplingResult resolve_sampling(const std::vector<Vec2>& outline, const Eigen::MatrixXd& prob, double threshold = 0.5,
                                int max_candidates = 16);

}  // namespace roofforge
