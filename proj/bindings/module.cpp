#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <cstdint>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "polarnet/community.hpp"
#include "polarnet/errors.hpp"
#include "polarnet/graph.hpp"
#include "polarnet/pagerank.hpp"
#include "polarnet/report.hpp"
#include "polarnet/topology.hpp"

namespace py = pybind11;

namespace {

using polarnet::AnchorSet;
using polarnet::AplMode;
using polarnet::ConsensusClustering;
using polarnet::ConsensusParams;
using polarnet::DirectedGraph;
using polarnet::NodeIndex;
using polarnet::PageRankConfig;
using polarnet::PageRankVector;
using polarnet::Partition;
using polarnet::Weight;
using polarnet::WeightedEdge;

using EdgeTuple = std::tuple<std::string, std::string, Weight>;

std::vector<WeightedEdge> to_edges(const std::vector<EdgeTuple>& rows) {
    std::vector<WeightedEdge> edges;
    edges.reserve(rows.size());
    for (const auto& [source, target, weight] : rows) edges.push_back({source, target, weight});
    return edges;
}

std::vector<EdgeTuple> from_edges(const std::vector<WeightedEdge>& edges) {
    std::vector<EdgeTuple> rows;
    rows.reserve(edges.size());
    for (const WeightedEdge& e : edges) rows.emplace_back(e.source, e.target, e.weight);
    return rows;
}

NodeIndex index_of(const DirectedGraph& g, const std::string& id) {
    if (const auto v = g.find(id)) return *v;
    throw polarnet::InputError("unknown node id: '" + id + "'");
}

Partition partition_from_dict(const DirectedGraph& g, const py::dict& communities) {
    std::vector<std::uint32_t> assignment(g.node_count());
    for (NodeIndex v = 0; v < g.node_count(); ++v) {
        const py::str key(g.id(v));
        if (!communities.contains(key)) {
            throw polarnet::InputError("partition does not cover node '" + g.id(v) + "'");
        }
        assignment[v] = communities[key].cast<std::uint32_t>();
    }
    return Partition(std::move(assignment));
}

AnchorSet anchors_from_pairs(
    const std::vector<std::pair<std::string, std::vector<std::string>>>& entries) {
    AnchorSet anchors;
    for (const auto& [label, ids] : entries) {
        if (label.empty() || label == polarnet::kUnassignedLabel) {
            throw polarnet::InputError("invalid anchor label '" + label + "'");
        }
        AnchorSet::Entry* entry = nullptr;
        for (auto& existing : anchors.entries) {
            if (existing.label == label) entry = &existing;
        }
        if (!entry) {
            anchors.entries.push_back({label, {}});
            entry = &anchors.entries.back();
        }
        for (const std::string& id : ids) {
            if (id.empty()) throw polarnet::InputError("empty anchor node id");
            auto& known = entry->node_ids;
            if (std::find(known.begin(), known.end(), id) == known.end()) known.push_back(id);
        }
    }
    return anchors;
}

AplMode apl_mode_from_string(const std::string& mode) {
    if (mode == "paper-literal") return AplMode::paper_literal;
    if (mode == "reachable-only") return AplMode::reachable_only;
    throw polarnet::InputError("unknown mode '" + mode + "' (use paper-literal or reachable-only)");
}

py::dict scores_dict(const DirectedGraph& g, const std::vector<double>& scores) {
    py::dict out;
    for (NodeIndex v = 0; v < g.node_count(); ++v) out[py::str(g.id(v))] = scores[v];
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Weighted directed interaction networks: consensus communities, PageRank and "
              "structural metrics";

    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const polarnet::InputError& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        } catch (const polarnet::Error& e) {
            PyErr_SetString(PyExc_RuntimeError, e.what());
        }
    });

    py::class_<DirectedGraph>(m, "Graph")
        .def_property_readonly("node_count", &DirectedGraph::node_count)
        .def_property_readonly("edge_count", &DirectedGraph::edge_count)
        .def_property_readonly("total_weight", &DirectedGraph::total_weight)
        .def("nodes", [](const DirectedGraph& g) { return g.ids(); })
        .def("edges", [](const DirectedGraph& g) { return from_edges(g.to_edges()); })
        .def("has_node",
             [](const DirectedGraph& g, const std::string& id) { return g.find(id).has_value(); })
        .def("in_degree",
             [](const DirectedGraph& g, const std::string& id) {
                 return g.in_degree(index_of(g, id));
             })
        .def("out_degree",
             [](const DirectedGraph& g, const std::string& id) {
                 return g.out_degree(index_of(g, id));
             })
        .def("weighted_in_degree",
             [](const DirectedGraph& g, const std::string& id) {
                 return g.weighted_in_degree(index_of(g, id));
             })
        .def("weighted_out_degree",
             [](const DirectedGraph& g, const std::string& id) {
                 return g.weighted_out_degree(index_of(g, id));
             })
        .def("__repr__", [](const DirectedGraph& g) {
            return "<Graph nodes=" + std::to_string(g.node_count()) +
                   " edges=" + std::to_string(g.edge_count()) + ">";
        });

    m.def(
        "parse_log",
        [](const std::string& text) {
            std::istringstream in(text);
            const polarnet::ParsedLog parsed = polarnet::parse_interaction_log(in);
            py::dict out;
            out["edges"] = from_edges(parsed.edges);
            out["events"] = parsed.event_count;
            out["self_loop_events"] = parsed.self_loop_events;
            out["has_weight_column"] = parsed.has_weight_column;
            return out;
        },
        py::arg("text"),
        "Parse interaction CSV text (header `source,target[,weight]`) into aggregated edges.");

    m.def(
        "build_graph",
        [](const std::vector<EdgeTuple>& edges, Weight min_weight) {
            return polarnet::build_graph(to_edges(edges), min_weight);
        },
        py::arg("edges"), py::arg("min_weight") = 3,
        "Aggregate (source, target, weight) triples into a graph, dropping self-loops and "
        "edges below min_weight.");

    m.def(
        "giant_component", [](const DirectedGraph& g) { return polarnet::giant_component(g); },
        py::arg("graph"));

    m.def(
        "induced_subgraph",
        [](const DirectedGraph& g, const std::vector<std::string>& ids) {
            return polarnet::induced_subgraph(g, ids);
        },
        py::arg("graph"), py::arg("nodes"));

    m.def(
        "ego_network",
        [](const DirectedGraph& g, const std::string& center) {
            return polarnet::ego_network(g, center);
        },
        py::arg("graph"), py::arg("center"));

    m.def(
        "louvain",
        [](const DirectedGraph& g, std::uint64_t seed) {
            const Partition p = polarnet::louvain(g, seed);
            py::dict out;
            for (NodeIndex v = 0; v < g.node_count(); ++v) {
                out[py::str(g.id(v))] = p.community_of(v);
            }
            return out;
        },
        py::arg("graph"), py::arg("seed") = 0,
        "One seeded community-detection run; returns {node_id: community}.");

    m.def(
        "modularity",
        [](const DirectedGraph& g, const py::dict& communities) {
            return polarnet::modularity(g, partition_from_dict(g, communities));
        },
        py::arg("graph"), py::arg("communities"));

    m.def(
        "pagerank",
        [](const DirectedGraph& g, double damping, double tolerance,
           std::uint32_t max_iterations, bool weighted) {
            PageRankConfig cfg;
            cfg.damping = damping;
            cfg.tolerance = tolerance;
            cfg.max_iterations = max_iterations;
            cfg.weighted = weighted;
            const PageRankVector pr = polarnet::pagerank(g, cfg);
            py::dict out;
            out["scores"] = scores_dict(g, pr.scores);
            out["iterations"] = pr.iterations;
            out["converged"] = pr.converged;
            return out;
        },
        py::arg("graph"), py::arg("damping") = 0.85, py::arg("tolerance") = 1e-10,
        py::arg("max_iterations") = 1000, py::arg("weighted") = false);

    m.def(
        "consensus",
        [](const DirectedGraph& g,
           const std::vector<std::pair<std::string, std::vector<std::string>>>& anchors,
           std::uint32_t runs, double epsilon, std::uint64_t seed, std::uint32_t workers) {
            ConsensusParams params;
            params.n_runs = runs;
            params.epsilon = epsilon;
            params.master_seed = seed;
            params.workers = workers;
            const ConsensusClustering cc =
                polarnet::consensus_cluster(g, anchors_from_pairs(anchors), params);
            py::dict assignment;
            py::dict stability;
            for (NodeIndex v = 0; v < g.node_count(); ++v) {
                const py::str key(g.id(v));
                const std::int32_t label = cc.assignment[v];
                assignment[key] = label >= 0 ? py::cast(cc.labels[label]) : py::none();
                stability[key] = cc.stability[v];
            }
            py::dict out;
            out["labels"] = cc.labels;
            out["assignment"] = assignment;
            out["stability"] = stability;
            out["warnings"] = cc.warnings;
            return out;
        },
        py::arg("graph"), py::arg("anchors"), py::arg("runs") = 100, py::arg("epsilon") = 0.05,
        py::arg("seed") = 0, py::arg("workers") = 1,
        "Ensemble clustering: anchors is [(label, [node ids])]; nodes keep a label only when "
        "it recurs in at least ceil((1-epsilon)*runs) of the runs.");

    m.def(
        "gini", [](const std::vector<double>& values) { return polarnet::gini(values); },
        py::arg("values"));

    m.def(
        "lorenz",
        [](const std::vector<double>& values) {
            const polarnet::LorenzCurve curve = polarnet::lorenz_points(values);
            return std::make_pair(curve.x, curve.y);
        },
        py::arg("values"));

    m.def(
        "in_degree_centralization",
        [](const DirectedGraph& g) { return polarnet::in_degree_centralization(g); },
        py::arg("graph"));

    m.def(
        "clustering_coefficient",
        [](const DirectedGraph& g) {
            const polarnet::ClusteringResult r = polarnet::clustering_coefficient(g);
            py::dict out;
            out["average"] = r.average;
            out["per_node"] = scores_dict(g, r.per_node);
            return out;
        },
        py::arg("graph"));

    m.def(
        "average_path_length",
        [](const DirectedGraph& g, const std::string& mode) {
            return polarnet::average_path_length(g, apl_mode_from_string(mode));
        },
        py::arg("graph"), py::arg("mode") = "paper-literal");

    m.def(
        "k_core",
        [](const DirectedGraph& g) {
            const polarnet::CoreDecomposition core = polarnet::k_core_decomposition(g);
            py::dict k_index;
            for (NodeIndex v = 0; v < g.node_count(); ++v) {
                k_index[py::str(g.id(v))] = core.k_index[v];
            }
            py::dict out;
            out["k_index"] = k_index;
            out["k_max"] = core.k_max;
            out["k_avg"] = core.k_avg;
            out["k_std"] = core.k_std;
            out["shells"] = core.shell_counts;
            return out;
        },
        py::arg("graph"));

    m.def(
        "in_degree_distribution",
        [](const DirectedGraph& g, bool weighted) {
            const polarnet::DegreeDistribution dist = polarnet::in_degree_distribution(g, weighted);
            std::vector<std::tuple<Weight, std::size_t, double, double>> bins;
            bins.reserve(dist.bins.size());
            for (const auto& b : dist.bins) bins.emplace_back(b.k, b.count, b.fraction, b.cumulative);
            return bins;
        },
        py::arg("graph"), py::arg("weighted") = false,
        "Ascending (k, count, fraction, cumulative) bins of the in-degree distribution.");
}
