#include "polarnet/report.hpp"

#include <algorithm>
#include <map>

#include "polarnet/errors.hpp"

namespace polarnet {

InteractionMatrix interaction_matrix(const DirectedGraph& g, const ConsensusClustering& cc,
                                     bool include_unassigned) {
    if (cc.assignment.size() != g.node_count()) throw Error("clustering does not cover the graph");

    const std::size_t rows = cc.labels.size();
    const std::size_t cols = rows + (include_unassigned ? 1 : 0);

    InteractionMatrix matrix;
    matrix.row_labels = cc.labels;
    matrix.column_labels = cc.labels;
    if (include_unassigned) matrix.column_labels.emplace_back(kUnassignedLabel);
    matrix.raw.assign(rows, std::vector<Weight>(cols, 0));
    matrix.normalized.assign(rows, std::vector<double>(cols, 0.0));

    for (NodeIndex u = 0; u < g.node_count(); ++u) {
        const std::int32_t lu = cc.assignment[u];
        if (lu < 0) continue;
        for (const Arc& a : g.out(u)) {
            const std::int32_t lv = cc.assignment[a.to];
            if (lv >= 0) {
                matrix.raw[lu][lv] += a.weight;
            } else if (include_unassigned) {
                matrix.raw[lu][rows] += a.weight;
            }
        }
    }

    for (std::size_t i = 0; i < rows; ++i) {
        Weight row_total = 0;
        for (const Weight w : matrix.raw[i]) row_total += w;
        if (row_total == 0) {
            matrix.warnings.push_back("cluster '" + cc.labels[i] + "' row is all zeros");
            continue;
        }
        for (std::size_t j = 0; j < cols; ++j) {
            matrix.normalized[i][j] =
                static_cast<double>(matrix.raw[i][j]) / static_cast<double>(row_total);
        }
    }
    return matrix;
}

namespace {

std::vector<std::size_t> clusters_by_size(const ConsensusClustering& cc,
                                          const std::vector<std::vector<NodeIndex>>& members) {
    std::vector<std::size_t> order(cc.labels.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (members[a].size() != members[b].size()) return members[a].size() > members[b].size();
        return cc.labels[a] < cc.labels[b];
    });
    return order;
}

}  // namespace

std::vector<ClusterProfile> cluster_profiles(const DirectedGraph& g,
                                             const ConsensusClustering& cc) {
    if (cc.assignment.size() != g.node_count()) throw Error("clustering does not cover the graph");

    const auto members = cc.cluster_members();
    std::vector<ClusterProfile> profiles;
    profiles.reserve(cc.labels.size());
    for (const std::size_t l : clusters_by_size(cc, members)) {
        ClusterProfile profile;
        profile.label = cc.labels[l];
        profile.node_count = members[l].size();

        const DirectedGraph intra = induced_subgraph(g, std::span<const NodeIndex>(members[l]));
        profile.edge_count = intra.edge_count();
        if (intra.node_count() > 0) {
            std::vector<double> in_degrees(intra.node_count());
            for (NodeIndex v = 0; v < intra.node_count(); ++v) {
                in_degrees[v] = static_cast<double>(intra.in_degree(v));
            }
            try {
                profile.gini_in = gini(in_degrees);
            } catch (const Error&) {
            }
            try {
                profile.centralization_in = in_degree_centralization(intra);
            } catch (const Error&) {
            }
            profile.clustering = clustering_coefficient(intra).average;
            try {
                profile.apl_paper_literal = average_path_length(intra, AplMode::paper_literal);
            } catch (const Error&) {
            }
            try {
                profile.apl_reachable_only = average_path_length(intra, AplMode::reachable_only);
            } catch (const Error&) {
            }
            const CoreDecomposition core = k_core_decomposition(intra);
            profile.k_max = core.k_max;
            profile.k_avg = core.k_avg;
            profile.k_std = core.k_std;
        }
        profiles.push_back(std::move(profile));
    }
    return profiles;
}

std::vector<TopNodesRow> top_nodes_report(const DirectedGraph& g, const ConsensusClustering& cc,
                                          const PageRankVector& pr, std::size_t k) {
    if (cc.assignment.size() != g.node_count()) throw Error("clustering does not cover the graph");

    const auto members = cc.cluster_members();
    std::vector<TopNodesRow> rows;
    for (const std::size_t l : clusters_by_size(cc, members)) {
        const auto ranked = rank_nodes(g, pr, std::span<const NodeIndex>(members[l]), k);
        for (std::size_t i = 0; i < ranked.size(); ++i) {
            rows.push_back({cc.labels[l], static_cast<std::uint32_t>(i + 1), ranked[i].node_id,
                            ranked[i].score});
        }
    }
    return rows;
}

std::vector<std::pair<std::size_t, std::size_t>> cluster_size_distribution(const Partition& p) {
    std::map<std::size_t, std::size_t> histogram;
    for (const auto& community : p.members()) histogram[community.size()]++;
    return {histogram.begin(), histogram.end()};
}

DirectedGraph ego_network(const DirectedGraph& g, const std::string& center) {
    const auto v = g.find(center);
    if (!v) throw InputError("unknown node id: '" + center + "'");

    std::vector<NodeIndex> nodes;
    nodes.push_back(*v);
    for (const Arc& a : g.out(*v)) nodes.push_back(a.to);
    for (const Arc& a : g.in(*v)) nodes.push_back(a.to);
    return induced_subgraph(g, std::span<const NodeIndex>(nodes));
}

}  // namespace polarnet
