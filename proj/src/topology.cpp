#include "polarnet/topology.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "polarnet/errors.hpp"

namespace polarnet {

namespace {

// Sorted distinct neighbor lists ignoring direction, weights and loops.
std::vector<std::vector<NodeIndex>> simple_neighbors(const DirectedGraph& g) {
    const std::size_t n = g.node_count();
    std::vector<std::vector<NodeIndex>> adj(n);
    for (NodeIndex v = 0; v < n; ++v) {
        auto& list = adj[v];
        for (const Arc& a : g.out(v)) list.push_back(a.to);
        for (const Arc& a : g.in(v)) list.push_back(a.to);
        std::sort(list.begin(), list.end());
        list.erase(std::unique(list.begin(), list.end()), list.end());
    }
    return adj;
}

void check_values(std::span<const double> values) {
    double total = 0.0;
    for (const double v : values) {
        if (!(v >= 0.0)) throw Error("negative value");
        total += v;
    }
    if (values.empty() || total <= 0.0) throw Error("zero total");
}

}  // namespace

DegreeDistribution in_degree_distribution(const DirectedGraph& g, bool weighted) {
    const std::size_t n = g.node_count();
    DegreeDistribution dist;
    dist.degrees.resize(n);
    for (NodeIndex v = 0; v < n; ++v) {
        dist.degrees[v] =
            weighted ? g.weighted_in_degree(v) : static_cast<Weight>(g.in_degree(v));
    }
    if (n == 0) return dist;

    std::vector<Weight> sorted = dist.degrees;
    std::sort(sorted.begin(), sorted.end());
    // One pass over the sorted degrees; nodes at or past position i have
    // degree >= sorted[i], so P(K >= k) falls out of the start offset.
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i + 1;
        while (j < n && sorted[j] == sorted[i]) ++j;
        dist.bins.push_back({sorted[i], j - i,
                             static_cast<double>(j - i) / static_cast<double>(n),
                             static_cast<double>(n - i) / static_cast<double>(n)});
        i = j;
    }
    return dist;
}

double in_degree_centralization(const DirectedGraph& g) {
    const std::size_t n = g.node_count();
    if (n < 3) throw Error("degenerate graph");
    Weight max_deg = 0;
    Weight sum_deg = 0;
    for (NodeIndex v = 0; v < n; ++v) {
        const auto deg = static_cast<Weight>(g.in_degree(v));
        max_deg = std::max(max_deg, deg);
        sum_deg += deg;
    }
    const Weight numerator = static_cast<Weight>(n) * max_deg - sum_deg;
    const Weight denominator = static_cast<Weight>(n - 1) * static_cast<Weight>(n - 1);
    return static_cast<double>(numerator) / static_cast<double>(denominator);
}

double gini(std::span<const double> values) {
    check_values(values);
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());

    const std::size_t n = sorted.size();
    double running = 0.0;
    double trapezoids = 0.0;  // sum over i of S_{i-1} + S_i
    for (const double v : sorted) {
        trapezoids += running;
        running += v;
        trapezoids += running;
    }
    return 1.0 - trapezoids / (static_cast<double>(n) * running);
}

LorenzCurve lorenz_points(std::span<const double> values) {
    check_values(values);
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());

    const std::size_t n = sorted.size();
    const double total = std::accumulate(sorted.begin(), sorted.end(), 0.0);
    LorenzCurve curve;
    curve.x.reserve(n + 1);
    curve.y.reserve(n + 1);
    curve.x.push_back(0.0);
    curve.y.push_back(0.0);
    double running = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        running += sorted[i];
        curve.x.push_back(static_cast<double>(i + 1) / static_cast<double>(n));
        curve.y.push_back(running / total);
    }
    return curve;
}

ClusteringResult clustering_coefficient(const DirectedGraph& g) {
    const std::size_t n = g.node_count();
    ClusteringResult result;
    result.per_node.assign(n, 0.0);
    if (n == 0) return result;

    const auto adj = simple_neighbors(g);
    std::vector<std::uint32_t> mark(n, 0);
    std::uint32_t stamp = 0;
    for (NodeIndex v = 0; v < n; ++v) {
        const std::size_t k = adj[v].size();
        if (k < 2) continue;
        ++stamp;
        for (const NodeIndex u : adj[v]) mark[u] = stamp;
        std::size_t links = 0;
        for (const NodeIndex u : adj[v]) {
            for (const NodeIndex w : adj[u]) {
                if (w > u && mark[w] == stamp) ++links;
            }
        }
        result.per_node[v] = 2.0 * static_cast<double>(links) /
                             (static_cast<double>(k) * static_cast<double>(k - 1));
    }
    double sum = 0.0;
    for (const double value : result.per_node) sum += value;
    result.average = sum / static_cast<double>(n);
    return result;
}

double average_path_length(const DirectedGraph& g, AplMode mode) {
    const std::size_t n = g.node_count();
    if (n < 2) throw Error("degenerate graph");

    std::int64_t distance_sum = 0;
    std::int64_t reachable_pairs = 0;
    std::vector<std::int64_t> dist(n);
    std::vector<NodeIndex> queue(n);
    for (NodeIndex source = 0; source < n; ++source) {
        std::fill(dist.begin(), dist.end(), -1);
        dist[source] = 0;
        queue[0] = source;
        std::size_t head = 0;
        std::size_t tail = 1;
        while (head < tail) {
            const NodeIndex v = queue[head++];
            for (const Arc& a : g.out(v)) {
                if (dist[a.to] < 0) {
                    dist[a.to] = dist[v] + 1;
                    queue[tail++] = a.to;
                }
            }
        }
        for (NodeIndex v = 0; v < n; ++v) {
            if (v == source || dist[v] < 0) continue;
            distance_sum += dist[v];
            ++reachable_pairs;
        }
    }

    if (mode == AplMode::paper_literal) {
        const auto ordered_pairs = static_cast<std::int64_t>(n) * static_cast<std::int64_t>(n - 1);
        return static_cast<double>(distance_sum) / static_cast<double>(ordered_pairs);
    }
    if (reachable_pairs == 0) throw Error("no reachable pairs");
    return static_cast<double>(distance_sum) / static_cast<double>(reachable_pairs);
}

CoreDecomposition k_core_decomposition(const DirectedGraph& g) {
    const std::size_t n = g.node_count();
    CoreDecomposition core;
    core.k_index.assign(n, 0);
    if (n == 0) return core;

    const auto adj = simple_neighbors(g);
    std::vector<std::uint32_t> degree(n);
    std::uint32_t max_degree = 0;
    for (NodeIndex v = 0; v < n; ++v) {
        degree[v] = static_cast<std::uint32_t>(adj[v].size());
        max_degree = std::max(max_degree, degree[v]);
    }

    // Bucket peeling: vert holds nodes sorted by current degree, bin[d] is the
    // start of degree-d nodes, pos inverts vert.
    std::vector<std::size_t> bin(max_degree + 2, 0);
    for (NodeIndex v = 0; v < n; ++v) bin[degree[v] + 1]++;
    for (std::size_t d = 1; d < bin.size(); ++d) bin[d] += bin[d - 1];
    std::vector<NodeIndex> vert(n);
    std::vector<std::size_t> pos(n);
    {
        std::vector<std::size_t> fill = bin;
        for (NodeIndex v = 0; v < n; ++v) {
            pos[v] = fill[degree[v]]++;
            vert[pos[v]] = v;
        }
    }

    for (std::size_t i = 0; i < n; ++i) {
        const NodeIndex v = vert[i];
        core.k_index[v] = degree[v];
        for (const NodeIndex u : adj[v]) {
            if (degree[u] <= degree[v]) continue;
            const std::size_t first = bin[degree[u]];
            const NodeIndex displaced = vert[first];
            if (displaced != u) {
                std::swap(vert[pos[u]], vert[first]);
                std::swap(pos[u], pos[displaced]);
            }
            bin[degree[u]]++;
            degree[u]--;
        }
    }

    std::int64_t sum = 0;
    std::int64_t sum_sq = 0;
    for (const std::uint32_t k : core.k_index) {
        core.k_max = std::max(core.k_max, k);
        sum += k;
        sum_sq += static_cast<std::int64_t>(k) * k;
    }
    const auto count = static_cast<std::int64_t>(n);
    core.k_avg = static_cast<double>(sum) / static_cast<double>(count);
    const std::int64_t variance_numerator = count * sum_sq - sum * sum;
    core.k_std = std::sqrt(static_cast<double>(variance_numerator)) / static_cast<double>(count);

    std::vector<std::size_t> shell(core.k_max + 1, 0);
    for (const std::uint32_t k : core.k_index) shell[k]++;
    for (std::uint32_t k = 0; k <= core.k_max; ++k) {
        if (shell[k] > 0) core.shell_counts.emplace_back(k, shell[k]);
    }
    return core;
}

}  // namespace polarnet
