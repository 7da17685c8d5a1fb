#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "polarnet/community.hpp"
#include "polarnet/graph.hpp"
#include "polarnet/pagerank.hpp"
#include "polarnet/topology.hpp"

namespace polarnet {

/// Cluster-to-cluster edge weight totals. Rows are labeled clusters in anchor
/// order; columns gain a trailing unassigned column when requested. Each
/// normalized row sums to 1 over the emitted columns, or is all zero.
struct InteractionMatrix {
    std::vector<std::string> row_labels;
    std::vector<std::string> column_labels;
    std::vector<std::vector<Weight>> raw;
    std::vector<std::vector<double>> normalized;
    std::vector<std::string> warnings;  // all-zero rows
};

InteractionMatrix interaction_matrix(const DirectedGraph& g, const ConsensusClustering& cc,
                                     bool include_unassigned = false);

/// Structural metrics of one labeled cluster's intra-network. Absent optionals
/// mean the metric is undefined for that cluster (they serialize as empty CSV
/// fields, never as zeros).
struct ClusterProfile {
    std::string label;
    std::size_t node_count = 0;  // consensus membership, edge-less members included
    std::size_t edge_count = 0;  // directed intra-cluster edges
    std::optional<double> gini_in;
    std::optional<double> centralization_in;
    std::optional<double> clustering;
    std::optional<double> apl_paper_literal;
    std::optional<double> apl_reachable_only;
    std::optional<std::uint32_t> k_max;
    std::optional<double> k_avg;
    std::optional<double> k_std;
};

/// One profile per labeled cluster, ordered by descending size then label.
std::vector<ClusterProfile> cluster_profiles(const DirectedGraph& g,
                                             const ConsensusClustering& cc);

struct TopNodesRow {
    std::string label;
    std::uint32_t rank;  // 1-based within the cluster
    std::string node_id;
    double pagerank;     // full-graph score
};

/// Top-k members of every cluster by full-graph PageRank; clusters ordered by
/// descending size then label.
std::vector<TopNodesRow> top_nodes_report(const DirectedGraph& g, const ConsensusClustering& cc,
                                          const PageRankVector& pr, std::size_t k = 5);

/// (size, count) histogram of one partition's community sizes, ascending size.
std::vector<std::pair<std::size_t, std::size_t>> cluster_size_distribution(const Partition& p);

/// Induced subgraph on the center plus all of its in- and out-neighbors.
/// Unknown center raises InputError.
DirectedGraph ego_network(const DirectedGraph& g, const std::string& center);

}  // namespace polarnet
