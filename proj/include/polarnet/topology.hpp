#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "polarnet/graph.hpp"

namespace polarnet {

struct DegreeDistribution {
    struct Bin {
        Weight k;
        std::size_t count;
        double fraction;    // count / n
        double cumulative;  // P(K >= k)
    };
    std::vector<Bin> bins;        // observed in-degrees, ascending
    std::vector<Weight> degrees;  // per node
};

/// Unweighted mode counts in-edges; weighted mode sums their weights.
DegreeDistribution in_degree_distribution(const DirectedGraph& g, bool weighted = false);

/// Freeman centralization of unweighted in-degrees against the directed star:
/// sum_i (k*_in - k_in(i)) / (n-1)^2. Requires n >= 3 ("degenerate graph").
double in_degree_centralization(const DirectedGraph& g);

/// Trapezoidal Gini over the empirical Lorenz curve of the ascending-sorted
/// values; identical to the pairwise mean-absolute-difference form without
/// small-sample correction. Values must be non-negative with a positive total
/// ("zero total" otherwise).
double gini(std::span<const double> values);

struct LorenzCurve {
    std::vector<double> x;  // i/n, i = 0..n
    std::vector<double> y;  // cumulative share of the sorted values
};

/// n+1 points from (0,0) to (1,1); trapezoid integration reproduces gini().
LorenzCurve lorenz_points(std::span<const double> values);

struct ClusteringResult {
    double average = 0.0;          // sum of per_node / n
    std::vector<double> per_node;  // 2 * links(N_i) / (k_i (k_i - 1)); 0 when k_i < 2
};

/// Direction and weights ignored (simple symmetric view).
ClusteringResult clustering_coefficient(const DirectedGraph& g);

enum class AplMode {
    paper_literal,   // unreachable pairs count as distance 0, divide by n(n-1)
    reachable_only,  // divide by the number of reachable ordered pairs
};

/// Mean directed shortest-path length over ordered pairs; n >= 2 required
/// ("degenerate graph"). reachable_only with no reachable pair throws
/// "no reachable pairs"; paper_literal yields 0 instead.
double average_path_length(const DirectedGraph& g, AplMode mode = AplMode::paper_literal);

struct CoreDecomposition {
    std::vector<std::uint32_t> k_index;  // deepest core containing each node
    std::uint32_t k_max = 0;
    double k_avg = 0.0;
    double k_std = 0.0;  // population standard deviation
    std::vector<std::pair<std::uint32_t, std::size_t>> shell_counts;  // (k, nodes), ascending k
};

/// Bucket peeling on the simple symmetric view (direction and weights ignored).
CoreDecomposition k_core_decomposition(const DirectedGraph& g);

}  // namespace polarnet
