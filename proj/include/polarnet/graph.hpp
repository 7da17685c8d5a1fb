#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace polarnet {

using NodeIndex = std::uint32_t;
using Weight = std::int64_t;

/// One aggregated interaction: `weight` events from `source` to `target`.
struct WeightedEdge {
    std::string source;
    std::string target;
    Weight weight = 1;
};

struct Arc {
    NodeIndex to;
    Weight weight;
};

/// Weighted simple directed graph. Node ids are opaque case-sensitive strings;
/// indices are assigned in ascending byte order of the ids, so a graph built
/// from the same edge multiset always has the same layout regardless of input
/// row order. Immutable after construction; safe for shared concurrent reads.
class DirectedGraph {
public:
    DirectedGraph() = default;

    /// Assembles a graph from a node id list and index-based edges. `ids` must
    /// be unique; edges must not repeat a (source,target) pair or be loops.
    /// Nodes without edges are kept.
    static DirectedGraph from_parts(std::vector<std::string> ids,
                                    std::vector<std::tuple<NodeIndex, NodeIndex, Weight>> edges);

    std::size_t node_count() const { return ids_.size(); }
    std::size_t edge_count() const { return edge_count_; }
    bool empty() const { return ids_.empty(); }

    /// m: sum of all edge weights.
    Weight total_weight() const { return total_weight_; }

    const std::string& id(NodeIndex v) const { return ids_[v]; }
    const std::vector<std::string>& ids() const { return ids_; }
    std::optional<NodeIndex> find(std::string_view id) const;

    std::span<const Arc> out(NodeIndex v) const { return {out_[v].data(), out_[v].size()}; }
    std::span<const Arc> in(NodeIndex v) const { return {in_[v].data(), in_[v].size()}; }

    std::size_t out_degree(NodeIndex v) const { return out_[v].size(); }
    std::size_t in_degree(NodeIndex v) const { return in_[v].size(); }
    Weight weighted_out_degree(NodeIndex v) const { return weighted_out_[v]; }
    Weight weighted_in_degree(NodeIndex v) const { return weighted_in_[v]; }

    /// Edge list with string ids, sorted by (source,target).
    std::vector<WeightedEdge> to_edges() const;

private:
    std::vector<std::string> ids_;
    std::unordered_map<std::string, NodeIndex> index_;
    std::vector<std::vector<Arc>> out_;
    std::vector<std::vector<Arc>> in_;
    std::vector<Weight> weighted_out_;
    std::vector<Weight> weighted_in_;
    Weight total_weight_ = 0;
    std::size_t edge_count_ = 0;
};

/// Symmetric companion of a DirectedGraph: weight(i,j) = w(i->j) + w(j->i).
/// Self-loops only appear in aggregated graphs; a loop of weight w contributes
/// 2w to its node's degree and to the graph's weight sum the usual once.
class UndirectedGraph {
public:
    UndirectedGraph() = default;

    /// `pairs` are (u,v,w) with u != v, no duplicates across orientations;
    /// `loops[v]` may be zero.
    static UndirectedGraph from_parts(std::size_t n,
                                      std::vector<std::tuple<NodeIndex, NodeIndex, Weight>> pairs,
                                      std::vector<Weight> loops = {});

    std::size_t node_count() const { return adj_.size(); }

    /// m: sum of pair weights plus loop weights.
    Weight total_weight() const { return total_weight_; }

    /// Incident non-loop arcs; each pair appears in both endpoints' lists.
    std::span<const Arc> neighbors(NodeIndex v) const { return {adj_[v].data(), adj_[v].size()}; }

    Weight loop(NodeIndex v) const { return loops_[v]; }

    /// k_v = 2*loop(v) + sum of incident pair weights.
    Weight degree(NodeIndex v) const { return degree_[v]; }

private:
    std::vector<std::vector<Arc>> adj_;
    std::vector<Weight> loops_;
    std::vector<Weight> degree_;
    Weight total_weight_ = 0;
};

/// Parses a `source,target[,weight]` CSV. The header row is mandatory and
/// decides whether a weight column is expected. Events for the same ordered
/// pair are summed; self-loops are dropped; output is sorted by (source,target).
/// Malformed rows (column count, empty id, weight < 1) raise InputError with
/// the record number.
struct ParsedLog {
    std::vector<WeightedEdge> edges;   // aggregated, loop-free, sorted
    std::uint64_t event_count = 0;     // sum of accepted row weights, loops excluded
    std::uint64_t self_loop_events = 0;
    bool has_weight_column = false;
};
ParsedLog parse_interaction_log(std::istream& in);

/// Aggregates duplicates, drops self-loops, drops edges below min_weight and
/// removes nodes left without edges. An empty result is returned, not raised.
DirectedGraph build_graph(const std::vector<WeightedEdge>& edges, Weight min_weight = 3);

/// Largest weakly connected component (direction ignored); ties go to the
/// component holding the lexicographically smallest node id.
DirectedGraph giant_component(const DirectedGraph& g);

/// Subgraph induced on `node_ids`. Member nodes are kept even if they lose all
/// their edges. Unknown ids raise InputError listing them.
DirectedGraph induced_subgraph(const DirectedGraph& g, const std::vector<std::string>& node_ids);
DirectedGraph induced_subgraph(const DirectedGraph& g, std::span<const NodeIndex> nodes);

UndirectedGraph undirected_view(const DirectedGraph& g);

/// Writes `source,target,weight` sorted by (source,target).
void write_edge_csv(std::ostream& out, const DirectedGraph& g);
void write_edge_csv(std::ostream& out, const std::vector<WeightedEdge>& edges);

}  // namespace polarnet
