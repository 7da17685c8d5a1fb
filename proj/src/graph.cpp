#include "polarnet/graph.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>
#include <tuple>

#include "polarnet/csv.hpp"
#include "polarnet/errors.hpp"

namespace polarnet {

namespace {

using IndexEdge = std::tuple<NodeIndex, NodeIndex, Weight>;

Weight parse_weight(const std::string& text, std::size_t record) {
    Weight value = 0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
        throw InputError("record " + std::to_string(record) + ": invalid weight '" + text + "'");
    }
    if (value < 1) {
        throw InputError("record " + std::to_string(record) + ": weight must be positive, got " +
                         text);
    }
    return value;
}

// Sorts (u,v,w) triples and sums duplicates of the same (u,v).
void aggregate_index_edges(std::vector<IndexEdge>& edges) {
    std::sort(edges.begin(), edges.end(), [](const IndexEdge& a, const IndexEdge& b) {
        return std::tie(std::get<0>(a), std::get<1>(a)) < std::tie(std::get<0>(b), std::get<1>(b));
    });
    std::size_t out = 0;
    for (std::size_t i = 0; i < edges.size();) {
        std::size_t j = i + 1;
        Weight sum = std::get<2>(edges[i]);
        while (j < edges.size() && std::get<0>(edges[j]) == std::get<0>(edges[i]) &&
               std::get<1>(edges[j]) == std::get<1>(edges[i])) {
            sum += std::get<2>(edges[j]);
            ++j;
        }
        edges[out++] = {std::get<0>(edges[i]), std::get<1>(edges[i]), sum};
        i = j;
    }
    edges.resize(out);
}

std::vector<std::string> sorted_unique_ids(const std::vector<WeightedEdge>& edges) {
    std::vector<std::string> ids;
    ids.reserve(edges.size() * 2);
    for (const auto& e : edges) {
        ids.push_back(e.source);
        ids.push_back(e.target);
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return ids;
}

}  // namespace

DirectedGraph DirectedGraph::from_parts(std::vector<std::string> ids,
                                        std::vector<IndexEdge> edges) {
    DirectedGraph g;
    g.ids_ = std::move(ids);
    const std::size_t n = g.ids_.size();
    g.index_.reserve(n);
    for (NodeIndex v = 0; v < n; ++v) g.index_.emplace(g.ids_[v], v);
    g.out_.resize(n);
    g.in_.resize(n);
    g.weighted_out_.assign(n, 0);
    g.weighted_in_.assign(n, 0);

    std::sort(edges.begin(), edges.end());
    for (const auto& [u, v, w] : edges) {
        g.out_[u].push_back({v, w});
        g.in_[v].push_back({u, w});
        g.weighted_out_[u] += w;
        g.weighted_in_[v] += w;
        g.total_weight_ += w;
    }
    for (auto& arcs : g.in_) {
        std::sort(arcs.begin(), arcs.end(),
                  [](const Arc& a, const Arc& b) { return a.to < b.to; });
    }
    g.edge_count_ = edges.size();
    return g;
}

std::optional<NodeIndex> DirectedGraph::find(std::string_view id) const {
    const auto it = index_.find(std::string(id));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::vector<WeightedEdge> DirectedGraph::to_edges() const {
    std::vector<WeightedEdge> edges;
    edges.reserve(edge_count_);
    for (NodeIndex u = 0; u < node_count(); ++u) {
        for (const Arc& a : out_[u]) {
            edges.push_back({ids_[u], ids_[a.to], a.weight});
        }
    }
    // out_ is ordered by target index == target id order, sources ascending
    return edges;
}

ParsedLog parse_interaction_log(std::istream& in) {
    csv::Reader reader(in);
    const auto header = reader.next();
    if (!header) throw InputError("empty input: header row required");

    const auto& h = header->fields;
    bool weighted = false;
    if (h.size() == 2 && h[0] == "source" && h[1] == "target") {
        weighted = false;
    } else if (h.size() == 3 && h[0] == "source" && h[1] == "target" && h[2] == "weight") {
        weighted = true;
    } else {
        throw InputError("record 1: header must be 'source,target' or 'source,target,weight'");
    }

    ParsedLog log;
    log.has_weight_column = weighted;
    const std::size_t expected = weighted ? 3 : 2;
    std::vector<WeightedEdge> raw;
    while (auto row = reader.next()) {
        if (row->fields.size() != expected) {
            throw InputError("record " + std::to_string(row->record_number) + ": expected " +
                             std::to_string(expected) + " fields, got " +
                             std::to_string(row->fields.size()));
        }
        const std::string& source = row->fields[0];
        const std::string& target = row->fields[1];
        if (source.empty() || target.empty()) {
            throw InputError("record " + std::to_string(row->record_number) + ": empty node id");
        }
        const Weight w = weighted ? parse_weight(row->fields[2], row->record_number) : 1;
        if (source == target) {
            log.self_loop_events += static_cast<std::uint64_t>(w);
            continue;
        }
        log.event_count += static_cast<std::uint64_t>(w);
        raw.push_back({source, target, w});
    }

    // Aggregate on interned indices, then map back to ids.
    auto ids = sorted_unique_ids(raw);
    std::unordered_map<std::string_view, NodeIndex> lookup;
    lookup.reserve(ids.size());
    for (NodeIndex v = 0; v < ids.size(); ++v) lookup.emplace(ids[v], v);
    std::vector<IndexEdge> indexed;
    indexed.reserve(raw.size());
    for (const auto& e : raw) {
        indexed.emplace_back(lookup.at(e.source), lookup.at(e.target), e.weight);
    }
    aggregate_index_edges(indexed);
    log.edges.reserve(indexed.size());
    for (const auto& [u, v, w] : indexed) {
        log.edges.push_back({ids[u], ids[v], w});
    }
    return log;
}

DirectedGraph build_graph(const std::vector<WeightedEdge>& edges, Weight min_weight) {
    if (min_weight < 1) throw Error("min_weight must be >= 1");

    auto all_ids = sorted_unique_ids(edges);
    std::unordered_map<std::string_view, NodeIndex> lookup;
    lookup.reserve(all_ids.size());
    for (NodeIndex v = 0; v < all_ids.size(); ++v) lookup.emplace(all_ids[v], v);

    std::vector<IndexEdge> indexed;
    indexed.reserve(edges.size());
    for (const auto& e : edges) {
        if (e.weight < 1) throw Error("edge weight must be positive");
        if (e.source == e.target) continue;  // loops go before thresholding
        indexed.emplace_back(lookup.at(e.source), lookup.at(e.target), e.weight);
    }
    aggregate_index_edges(indexed);
    std::erase_if(indexed, [min_weight](const IndexEdge& e) { return std::get<2>(e) < min_weight; });

    // Compact to the nodes that still carry an edge; id order is preserved.
    std::vector<NodeIndex> remap(all_ids.size(), 0);
    for (const auto& [u, v, w] : indexed) {
        remap[u] = 1;
        remap[v] = 1;
    }
    std::vector<std::string> kept_ids;
    NodeIndex next = 0;
    for (NodeIndex v = 0; v < all_ids.size(); ++v) {
        if (remap[v]) {
            remap[v] = next++;
            kept_ids.push_back(std::move(all_ids[v]));
        }
    }
    for (auto& [u, v, w] : indexed) {
        u = remap[u];
        v = remap[v];
    }
    return DirectedGraph::from_parts(std::move(kept_ids), std::move(indexed));
}

DirectedGraph giant_component(const DirectedGraph& g) {
    if (g.empty()) throw Error("empty graph");
    const std::size_t n = g.node_count();
    std::vector<std::uint32_t> component(n, UINT32_MAX);
    std::uint32_t components = 0;
    std::vector<NodeIndex> stack;
    for (NodeIndex start = 0; start < n; ++start) {
        if (component[start] != UINT32_MAX) continue;
        const std::uint32_t c = components++;
        component[start] = c;
        stack.push_back(start);
        while (!stack.empty()) {
            const NodeIndex v = stack.back();
            stack.pop_back();
            for (const Arc& a : g.out(v)) {
                if (component[a.to] == UINT32_MAX) {
                    component[a.to] = c;
                    stack.push_back(a.to);
                }
            }
            for (const Arc& a : g.in(v)) {
                if (component[a.to] == UINT32_MAX) {
                    component[a.to] = c;
                    stack.push_back(a.to);
                }
            }
        }
    }

    std::vector<std::size_t> size(components, 0);
    for (const auto c : component) size[c]++;
    // Components are discovered in ascending smallest-member order, so the
    // first maximal one wins ties by smallest id.
    std::uint32_t best = 0;
    for (std::uint32_t c = 1; c < components; ++c) {
        if (size[c] > size[best]) best = c;
    }

    std::vector<NodeIndex> members;
    members.reserve(size[best]);
    for (NodeIndex v = 0; v < n; ++v) {
        if (component[v] == best) members.push_back(v);
    }
    return induced_subgraph(g, members);
}

DirectedGraph induced_subgraph(const DirectedGraph& g, std::span<const NodeIndex> nodes) {
    std::vector<NodeIndex> sorted(nodes.begin(), nodes.end());
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

    std::vector<NodeIndex> remap(g.node_count(), UINT32_MAX);
    std::vector<std::string> ids;
    ids.reserve(sorted.size());
    for (NodeIndex i = 0; i < sorted.size(); ++i) {
        remap[sorted[i]] = i;
        ids.push_back(g.id(sorted[i]));
    }
    std::vector<IndexEdge> edges;
    for (const NodeIndex u : sorted) {
        for (const Arc& a : g.out(u)) {
            if (remap[a.to] != UINT32_MAX) {
                edges.emplace_back(remap[u], remap[a.to], a.weight);
            }
        }
    }
    return DirectedGraph::from_parts(std::move(ids), std::move(edges));
}

DirectedGraph induced_subgraph(const DirectedGraph& g, const std::vector<std::string>& node_ids) {
    std::vector<NodeIndex> nodes;
    nodes.reserve(node_ids.size());
    std::string unknown;
    for (const auto& id : node_ids) {
        if (const auto v = g.find(id)) {
            nodes.push_back(*v);
        } else {
            if (!unknown.empty()) unknown += ", ";
            unknown += id;
        }
    }
    if (!unknown.empty()) throw InputError("unknown node ids: " + unknown);
    return induced_subgraph(g, nodes);
}

UndirectedGraph UndirectedGraph::from_parts(std::size_t n, std::vector<IndexEdge> pairs,
                                            std::vector<Weight> loops) {
    UndirectedGraph g;
    g.adj_.resize(n);
    g.loops_ = std::move(loops);
    g.loops_.resize(n, 0);
    g.degree_.assign(n, 0);
    for (const auto& [u, v, w] : pairs) {
        g.adj_[u].push_back({v, w});
        g.adj_[v].push_back({u, w});
        g.degree_[u] += w;
        g.degree_[v] += w;
        g.total_weight_ += w;
    }
    for (NodeIndex v = 0; v < n; ++v) {
        g.degree_[v] += 2 * g.loops_[v];
        g.total_weight_ += g.loops_[v];
        std::sort(g.adj_[v].begin(), g.adj_[v].end(),
                  [](const Arc& a, const Arc& b) { return a.to < b.to; });
    }
    return g;
}

UndirectedGraph undirected_view(const DirectedGraph& g) {
    std::vector<IndexEdge> pairs;
    pairs.reserve(g.edge_count());
    for (NodeIndex u = 0; u < g.node_count(); ++u) {
        for (const Arc& a : g.out(u)) {
            const NodeIndex lo = std::min(u, a.to);
            const NodeIndex hi = std::max(u, a.to);
            pairs.emplace_back(lo, hi, a.weight);
        }
    }
    aggregate_index_edges(pairs);
    return UndirectedGraph::from_parts(g.node_count(), std::move(pairs));
}

void write_edge_csv(std::ostream& out, const std::vector<WeightedEdge>& edges) {
    const std::string header[] = {"source", "target", "weight"};
    csv::write_row(out, header);
    for (const auto& e : edges) {
        const std::string row[] = {e.source, e.target, std::to_string(e.weight)};
        csv::write_row(out, row);
    }
}

void write_edge_csv(std::ostream& out, const DirectedGraph& g) {
    auto edges = g.to_edges();
    std::sort(edges.begin(), edges.end(), [](const WeightedEdge& a, const WeightedEdge& b) {
        return std::tie(a.source, a.target) < std::tie(b.source, b.target);
    });
    write_edge_csv(out, edges);
}

}  // namespace polarnet
