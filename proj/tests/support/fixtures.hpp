#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "polarnet/graph.hpp"
#include "polarnet/rng.hpp"

namespace polarnet::testing {

/// Zero-padded id so lexicographic order equals numeric order.
std::string node_name(const std::string& prefix, std::size_t i, int width = 4);

/// Graph with every listed edge kept (min weight 1).
DirectedGraph make_graph(const std::vector<WeightedEdge>& edges);

/// a->b->c->a and d->e->f->d, weight 3 each.
std::vector<WeightedEdge> two_triangles();

/// two_triangles() plus a->d of the given weight.
std::vector<WeightedEdge> two_triangles_with_bridge(Weight bridge_weight = 3);

/// a->b, b->c, c->a, d->a, unit weights.
std::vector<WeightedEdge> triangle_with_pendant();

/// Center "c" and `leaves` leaves "l1".., one edge each way, unit weights.
std::vector<WeightedEdge> bidirectional_star(std::size_t leaves);

/// `leaves` edges pointing at center "hub", unit weights.
std::vector<WeightedEdge> in_star(std::size_t leaves);

/// v0 -> v1 -> ... -> v(n-1) -> v0, unit weights.
std::vector<WeightedEdge> directed_cycle(std::size_t n);

/// v0 -> v1 -> ... -> v(n-1), unit weights.
std::vector<WeightedEdge> directed_path(std::size_t n);

/// One directed edge per unordered pair (lower id -> higher id).
std::vector<WeightedEdge> clique(const std::string& prefix, std::size_t n, Weight w = 1);

/// Two size-q cliques joined by a single unit edge from the first clique's
/// first node to the second's.
std::vector<WeightedEdge> two_cliques_with_bridge(std::size_t q, Weight intra = 1);

/// `k` size-q cliques arranged in a ring; each consecutive pair is joined by
/// `bridges` distinct edges. All weights `w`.
std::vector<WeightedEdge> planted_clique_ring(std::size_t k, std::size_t q, int bridges,
                                              Weight w = 3);

/// Erdos-Renyi style digraph: every ordered pair (u,v), u != v, gets an edge
/// with probability about p (deterministic given rng state); weights uniform
/// in [wmin, wmax]. May return an empty list for tiny n*p.
std::vector<WeightedEdge> random_digraph(Rng& rng, std::size_t n, double p, Weight wmin = 1,
                                         Weight wmax = 3);

/// Like random_digraph but retried until the graph has at least one edge.
std::vector<WeightedEdge> random_digraph_nonempty(Rng& rng, std::size_t n, double p,
                                                  Weight wmin = 1, Weight wmax = 3);

}  // namespace polarnet::testing
