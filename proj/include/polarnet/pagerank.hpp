#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "polarnet/graph.hpp"

namespace polarnet {

struct PageRankConfig {
    double damping = 0.85;           // c: probability of following an out-edge
    double tolerance = 1e-10;        // L1 norm of successive difference
    std::uint32_t max_iterations = 1000;
    bool weighted = false;           // split mass by edge weight instead of uniformly
};

struct PageRankVector {
    std::vector<double> scores;      // indexed like the graph; sums to 1
    std::uint32_t iterations = 0;
    bool converged = false;
};

/// Power iteration for PR(i) = c * sum_{j->i} PR(j)/d_j + (1-c)/n starting from
/// the uniform vector. d_j is the unweighted out-degree unless cfg.weighted;
/// dangling-node mass is redistributed uniformly over all nodes each step.
/// Non-convergence within max_iterations returns converged=false, not an error.
PageRankVector pagerank(const DirectedGraph& g, const PageRankConfig& cfg = {});

struct RankedNode {
    std::string node_id;
    double score;
};

/// Top-k by score, descending; ties broken by ascending node id. The `within`
/// overload filters to the given nodes but keeps their full-graph scores.
std::vector<RankedNode> rank_nodes(const DirectedGraph& g, const PageRankVector& pr, std::size_t k);
std::vector<RankedNode> rank_nodes(const DirectedGraph& g, const PageRankVector& pr,
                                   std::span<const NodeIndex> within, std::size_t k);

struct ConsensusClustering;

/// Subgraph of edges whose endpoints lie in two different labeled clusters;
/// only endpoints of surviving edges are kept. Edges touching unassigned nodes
/// are dropped unless include_unassigned, which treats the unassigned set as
/// one extra pseudo-cluster (unassigned-to-unassigned edges still drop). No
/// inter-cluster edges yields an empty graph; the caller decides how to warn.
DirectedGraph weak_ties_subgraph(const DirectedGraph& g, const ConsensusClustering& cc,
                                 bool include_unassigned = false);

}  // namespace polarnet
