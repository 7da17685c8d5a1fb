#include "polarnet/pagerank.hpp"

#include <algorithm>
#include <cmath>

#include "polarnet/community.hpp"
#include "polarnet/errors.hpp"

namespace polarnet {

PageRankVector pagerank(const DirectedGraph& g, const PageRankConfig& cfg) {
    if (g.empty()) throw Error("empty graph");
    if (!(cfg.damping > 0.0 && cfg.damping < 1.0)) throw Error("damping must be in (0, 1)");
    if (!(cfg.tolerance > 0.0)) throw Error("tolerance must be positive");
    if (cfg.max_iterations < 1) throw Error("max_iterations must be >= 1");

    const std::size_t n = g.node_count();
    const double c = cfg.damping;
    const double inv_n = 1.0 / static_cast<double>(n);

    PageRankVector result;
    result.scores.assign(n, inv_n);
    std::vector<double> next(n, 0.0);

    for (std::uint32_t iter = 1; iter <= cfg.max_iterations; ++iter) {
        double dangling = 0.0;
        for (NodeIndex v = 0; v < n; ++v) {
            if (g.out_degree(v) == 0) dangling += result.scores[v];
        }
        const double base = (1.0 - c) * inv_n + c * dangling * inv_n;

        for (NodeIndex v = 0; v < n; ++v) {
            double incoming = 0.0;
            for (const Arc& a : g.in(v)) {
                const NodeIndex j = a.to;
                if (cfg.weighted) {
                    incoming += result.scores[j] * static_cast<double>(a.weight) /
                                static_cast<double>(g.weighted_out_degree(j));
                } else {
                    incoming += result.scores[j] / static_cast<double>(g.out_degree(j));
                }
            }
            next[v] = base + c * incoming;
        }

        double delta = 0.0;
        for (NodeIndex v = 0; v < n; ++v) delta += std::abs(next[v] - result.scores[v]);
        result.scores.swap(next);
        result.iterations = iter;
        if (delta < cfg.tolerance) {
            result.converged = true;
            break;
        }
    }
    return result;
}

std::vector<RankedNode> rank_nodes(const DirectedGraph& g, const PageRankVector& pr,
                                   std::span<const NodeIndex> within, std::size_t k) {
    if (pr.scores.size() != g.node_count()) throw Error("pagerank does not cover the graph");

    std::vector<NodeIndex> order(within.begin(), within.end());
    std::sort(order.begin(), order.end(), [&](NodeIndex a, NodeIndex b) {
        if (pr.scores[a] != pr.scores[b]) return pr.scores[a] > pr.scores[b];
        return g.id(a) < g.id(b);
    });
    if (order.size() > k) order.resize(k);

    std::vector<RankedNode> ranked;
    ranked.reserve(order.size());
    for (const NodeIndex v : order) ranked.push_back({g.id(v), pr.scores[v]});
    return ranked;
}

std::vector<RankedNode> rank_nodes(const DirectedGraph& g, const PageRankVector& pr,
                                   std::size_t k) {
    std::vector<NodeIndex> all(g.node_count());
    for (NodeIndex v = 0; v < g.node_count(); ++v) all[v] = v;
    return rank_nodes(g, pr, all, k);
}

DirectedGraph weak_ties_subgraph(const DirectedGraph& g, const ConsensusClustering& cc,
                                 bool include_unassigned) {
    if (cc.assignment.size() != g.node_count()) throw Error("clustering does not cover the graph");

    std::vector<WeightedEdge> kept;
    for (NodeIndex u = 0; u < g.node_count(); ++u) {
        const std::int32_t lu = cc.assignment[u];
        for (const Arc& a : g.out(u)) {
            const std::int32_t lv = cc.assignment[a.to];
            if (lu == lv) continue;
            if (!include_unassigned && (lu < 0 || lv < 0)) continue;
            kept.push_back({g.id(u), g.id(a.to), a.weight});
        }
    }
    return build_graph(kept, 1);
}

}  // namespace polarnet
