#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "polarnet/graph.hpp"
#include "polarnet/pagerank.hpp"

namespace polarnet {

/// Community assignment over node indices. Community ids are contiguous from 0,
/// renumbered by first appearance in node-index order, so two assignments that
/// induce the same grouping compare equal.
class Partition {
public:
    Partition() = default;
    explicit Partition(std::vector<std::uint32_t> raw_assignment);

    static Partition singletons(std::size_t n);

    std::size_t node_count() const { return assignment_.size(); }
    std::uint32_t community_count() const { return community_count_; }
    std::uint32_t community_of(NodeIndex v) const { return assignment_[v]; }
    const std::vector<std::uint32_t>& assignment() const { return assignment_; }

    /// Member lists per community, node indices ascending.
    std::vector<std::vector<NodeIndex>> members() const;

    bool operator==(const Partition& other) const { return assignment_ == other.assignment_; }

private:
    std::vector<std::uint32_t> assignment_;
    std::uint32_t community_count_ = 0;
};

/// Q = (1/2m) * sum_ij [A_ij - k_i k_j / 2m] delta(c_i, c_j) over the symmetric
/// view with weighted degrees; a self-loop of weight w counts as A_ii = 2w.
/// Throws "no edges" when m = 0.
double modularity(const UndirectedGraph& g, const Partition& p);
double modularity(const DirectedGraph& g, const Partition& p);

/// Phase-1 bookkeeping: per-community intra weight (double-counted) and total
/// incident degree. A node must be remove()d before evaluating or inserting.
class LouvainState {
public:
    static constexpr std::uint32_t kNoCommunity = 0xFFFFFFFFu;

    LouvainState(const UndirectedGraph& g, const Partition& p);

    Weight two_m() const { return two_m_; }
    std::uint32_t community_count() const { return static_cast<std::uint32_t>(total_.size()); }
    std::uint32_t community_of(NodeIndex v) const { return community_[v]; }
    Weight community_internal(std::uint32_t c) const { return internal_[c]; }
    Weight community_total(std::uint32_t c) const { return total_[c]; }
    Weight node_degree(NodeIndex v) const { return g_->degree(v); }

    void remove(NodeIndex v);
    void insert(NodeIndex v, std::uint32_t c);

    /// Gain of inserting removed node v into community c:
    ///   [(S_in + k_in)/2m - ((S_tot + k)/2m)^2] - [S_in/2m - (S_tot/2m)^2 - (k/2m)^2]
    /// with k_in counted like the adjacency rows it joins (both directions).
    /// Equals the exact modularity change of the insertion.
    double delta_modularity(NodeIndex v, std::uint32_t c) const;

    /// Q of the current bookkeeping (removed nodes contribute nothing).
    double modularity() const;

private:
    double insertion_gain(Weight k_in_doubled, std::uint32_t c, Weight k) const;
    Weight weight_to(NodeIndex v, std::uint32_t c) const;

    const UndirectedGraph* g_ = nullptr;
    std::vector<std::uint32_t> community_;
    std::vector<Weight> internal_;  // double-counted intra weight per community
    std::vector<Weight> total_;     // summed member degrees per community
    Weight two_m_ = 0;
};

/// Modularity after each phase-1 sweep and after each aggregation, in order.
/// The whole sequence is non-decreasing.
struct LouvainTrace {
    std::vector<double> after_sweep;
    std::vector<double> after_level;
};

/// Two-phase greedy modularity optimization: seeded random sweep order, best
/// positive-gain move per node with ties to the lowest community id, then
/// aggregation; repeats until no move improves. Deterministic given (g, seed).
Partition louvain(const UndirectedGraph& g, std::uint64_t seed, LouvainTrace* trace = nullptr);
Partition louvain(const DirectedGraph& g, std::uint64_t seed, LouvainTrace* trace = nullptr);

/// One node per community; the self-loop carries the intra-community weight
/// counted once, inter-community weights are summed. Preserves total weight
/// and modularity of the identity partition.
UndirectedGraph aggregate(const UndirectedGraph& g, const Partition& p);
UndirectedGraph aggregate(const DirectedGraph& g, const Partition& p);

inline constexpr const char* kUnassignedLabel = "__unassigned__";

/// Labeled anchor accounts, one entry per cluster label, in file order.
struct AnchorSet {
    struct Entry {
        std::string label;
        std::vector<std::string> node_ids;  // file order, deduplicated
    };
    std::vector<Entry> entries;
};

/// Reads `label,node_id` CSV; rows with the same label accumulate. The
/// reserved label "__unassigned__" is rejected. Ids absent from any particular
/// graph are tolerated here and reported when clustering runs.
AnchorSet read_anchors_csv(std::istream& in);

struct ConsensusParams {
    std::uint32_t n_runs = 100;
    double epsilon = 0.05;
    std::uint64_t master_seed = 0;
    std::uint32_t workers = 1;
};

/// Ensemble result: per-node winning label (or -1) and the fraction of runs
/// the node spent under that label. Assigned nodes satisfy stability >= 1-eps.
struct ConsensusClustering {
    std::vector<std::string> labels;       // anchor order
    std::vector<std::int32_t> assignment;  // label index per node, -1 unassigned
    std::vector<double> stability;         // winning-label vote share per node
    ConsensusParams params;
    std::vector<std::string> warnings;

    /// Member node indices per label, ascending.
    std::vector<std::vector<NodeIndex>> cluster_members() const;
};

/// For each anchor label, the community holding its highest-PageRank present
/// anchor (-1 when none is present). When two labels claim one community the
/// higher claiming score wins and the loser stays unmatched for this run;
/// score ties fall to the earlier label, anchor ties to the smaller node id.
std::vector<std::int32_t> match_clusters(const Partition& p, const DirectedGraph& g,
                                         const AnchorSet& anchors, const PageRankVector& pr);

/// Runs louvain n_runs times with seeds derived from master_seed, labels each
/// partition via match_clusters, and keeps node-to-label assignments that
/// recur in at least ceil((1-eps)*N) runs. Votes merge by run index, so the
/// result is byte-identical for any worker count.
ConsensusClustering consensus_cluster(const DirectedGraph& g, const AnchorSet& anchors,
                                      const ConsensusParams& params, const PageRankVector& pr);
ConsensusClustering consensus_cluster(const DirectedGraph& g, const AnchorSet& anchors,
                                      const ConsensusParams& params = {});

/// `node_id,label,stability` rows sorted by (label, node_id); unassigned nodes
/// carry the reserved label.
void write_clusters_csv(std::ostream& out, const DirectedGraph& g, const ConsensusClustering& cc);

/// Inverse of write_clusters_csv, tolerant of a missing stability column.
/// Unknown node ids raise InputError listing them; graph nodes missing from
/// the file become unassigned with a warning.
ConsensusClustering read_clusters_csv(std::istream& in, const DirectedGraph& g);

}  // namespace polarnet
