#include "support/fixtures.hpp"

#include <cstdio>

namespace polarnet::testing {

std::string node_name(const std::string& prefix, std::size_t i, int width) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%0*zu", width, i);
    return prefix + buf;
}

DirectedGraph make_graph(const std::vector<WeightedEdge>& edges) {
    return build_graph(edges, 1);
}

std::vector<WeightedEdge> two_triangles() {
    return {
        {"a", "b", 3}, {"b", "c", 3}, {"c", "a", 3},
        {"d", "e", 3}, {"e", "f", 3}, {"f", "d", 3},
    };
}

std::vector<WeightedEdge> two_triangles_with_bridge(Weight bridge_weight) {
    auto edges = two_triangles();
    edges.push_back({"a", "d", bridge_weight});
    return edges;
}

std::vector<WeightedEdge> triangle_with_pendant() {
    return {{"a", "b", 1}, {"b", "c", 1}, {"c", "a", 1}, {"d", "a", 1}};
}

std::vector<WeightedEdge> bidirectional_star(std::size_t leaves) {
    std::vector<WeightedEdge> edges;
    for (std::size_t i = 1; i <= leaves; ++i) {
        const std::string leaf = "l" + std::to_string(i);
        edges.push_back({"c", leaf, 1});
        edges.push_back({leaf, "c", 1});
    }
    return edges;
}

std::vector<WeightedEdge> in_star(std::size_t leaves) {
    std::vector<WeightedEdge> edges;
    for (std::size_t i = 1; i <= leaves; ++i) {
        edges.push_back({node_name("s", i), "hub", 1});
    }
    return edges;
}

std::vector<WeightedEdge> directed_cycle(std::size_t n) {
    std::vector<WeightedEdge> edges;
    for (std::size_t i = 0; i < n; ++i) {
        edges.push_back({node_name("v", i), node_name("v", (i + 1) % n), 1});
    }
    return edges;
}

std::vector<WeightedEdge> directed_path(std::size_t n) {
    std::vector<WeightedEdge> edges;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        edges.push_back({node_name("v", i), node_name("v", i + 1), 1});
    }
    return edges;
}

std::vector<WeightedEdge> clique(const std::string& prefix, std::size_t n, Weight w) {
    std::vector<WeightedEdge> edges;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            edges.push_back({node_name(prefix, i), node_name(prefix, j), w});
        }
    }
    return edges;
}

std::vector<WeightedEdge> two_cliques_with_bridge(std::size_t q, Weight intra) {
    auto edges = clique("p", q, intra);
    auto right = clique("q", q, intra);
    edges.insert(edges.end(), right.begin(), right.end());
    edges.push_back({node_name("p", 0), node_name("q", 0), 1});
    return edges;
}

std::vector<WeightedEdge> planted_clique_ring(std::size_t k, std::size_t q, int bridges,
                                              Weight w) {
    std::vector<WeightedEdge> edges;
    const auto member = [&](std::size_t group, std::size_t i) {
        return node_name("g" + std::to_string(group) + "n", i, 3);
    };
    for (std::size_t g = 0; g < k; ++g) {
        for (std::size_t i = 0; i < q; ++i) {
            for (std::size_t j = i + 1; j < q; ++j) {
                edges.push_back({member(g, i), member(g, j), w});
            }
        }
    }
    for (std::size_t g = 0; g < k; ++g) {
        const std::size_t next = (g + 1) % k;
        for (int b = 0; b < bridges; ++b) {
            edges.push_back({member(g, static_cast<std::size_t>(b)),
                             member(next, static_cast<std::size_t>(b)), w});
        }
    }
    return edges;
}

std::vector<WeightedEdge> random_digraph(Rng& rng, std::size_t n, double p, Weight wmin,
                                         Weight wmax) {
    // Threshold comparison on the raw 64-bit draw keeps the generator
    // platform-deterministic without floating-point rounding concerns.
    const auto threshold = static_cast<std::uint64_t>(
        p * 18446744073709551615.0);  // p * (2^64 - 1)
    const std::uint64_t span = static_cast<std::uint64_t>(wmax - wmin) + 1;
    std::vector<WeightedEdge> edges;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            if (rng.next() <= threshold) {
                const Weight w = wmin + static_cast<Weight>(rng.bounded(span));
                edges.push_back({node_name("n", i, 2), node_name("n", j, 2), w});
            }
        }
    }
    return edges;
}

std::vector<WeightedEdge> random_digraph_nonempty(Rng& rng, std::size_t n, double p, Weight wmin,
                                                  Weight wmax) {
    for (;;) {
        auto edges = random_digraph(rng, n, p, wmin, wmax);
        if (!edges.empty()) return edges;
    }
}

}  // namespace polarnet::testing
