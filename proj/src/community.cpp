#include "polarnet/community.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numeric>
#include <optional>
#include <ostream>
#include <thread>
#include <tuple>

#include "polarnet/csv.hpp"
#include "polarnet/errors.hpp"
#include "polarnet/rng.hpp"

namespace polarnet {

namespace {

// Net gain below this is treated as no improvement; keeps float noise from
// feeding endless move cycles.
constexpr double kMinGain = 1e-14;

}  // namespace

Partition::Partition(std::vector<std::uint32_t> raw_assignment)
    : assignment_(std::move(raw_assignment)) {
    constexpr std::uint32_t unseen = 0xFFFFFFFFu;
    std::vector<std::uint32_t> remap;
    for (auto& c : assignment_) {
        if (c >= remap.size()) remap.resize(c + 1, unseen);
        if (remap[c] == unseen) remap[c] = community_count_++;
        c = remap[c];
    }
}

Partition Partition::singletons(std::size_t n) {
    std::vector<std::uint32_t> ids(n);
    std::iota(ids.begin(), ids.end(), 0u);
    return Partition(std::move(ids));
}

std::vector<std::vector<NodeIndex>> Partition::members() const {
    std::vector<std::vector<NodeIndex>> out(community_count_);
    for (NodeIndex v = 0; v < assignment_.size(); ++v) {
        out[assignment_[v]].push_back(v);
    }
    return out;
}

double modularity(const UndirectedGraph& g, const Partition& p) {
    if (p.node_count() != g.node_count()) throw Error("partition does not cover the graph");
    const Weight two_m = 2 * g.total_weight();
    if (two_m == 0) throw Error("no edges");

    std::vector<Weight> internal(p.community_count(), 0);
    std::vector<Weight> total(p.community_count(), 0);
    for (NodeIndex v = 0; v < g.node_count(); ++v) {
        const std::uint32_t c = p.community_of(v);
        total[c] += g.degree(v);
        internal[c] += 2 * g.loop(v);
        for (const Arc& a : g.neighbors(v)) {
            if (p.community_of(a.to) == c) internal[c] += a.weight;
        }
    }

    double q = 0.0;
    const double tm = static_cast<double>(two_m);
    for (std::uint32_t c = 0; c < p.community_count(); ++c) {
        const double tot = static_cast<double>(total[c]) / tm;
        q += static_cast<double>(internal[c]) / tm - tot * tot;
    }
    return q;
}

double modularity(const DirectedGraph& g, const Partition& p) {
    return modularity(undirected_view(g), p);
}

LouvainState::LouvainState(const UndirectedGraph& g, const Partition& p) : g_(&g) {
    if (p.node_count() != g.node_count()) throw Error("partition does not cover the graph");
    two_m_ = 2 * g.total_weight();
    if (two_m_ == 0) throw Error("no edges");

    community_ = p.assignment();
    internal_.assign(p.community_count(), 0);
    total_.assign(p.community_count(), 0);
    for (NodeIndex v = 0; v < g.node_count(); ++v) {
        const std::uint32_t c = community_[v];
        total_[c] += g.degree(v);
        internal_[c] += 2 * g.loop(v);
        for (const Arc& a : g.neighbors(v)) {
            if (community_[a.to] == c) internal_[c] += a.weight;
        }
    }
}

Weight LouvainState::weight_to(NodeIndex v, std::uint32_t c) const {
    Weight w = 0;
    for (const Arc& a : g_->neighbors(v)) {
        if (community_[a.to] == c) w += a.weight;
    }
    return w;
}

void LouvainState::remove(NodeIndex v) {
    const std::uint32_t c = community_[v];
    if (c == kNoCommunity) throw Error("node already removed");
    internal_[c] -= 2 * (weight_to(v, c) + g_->loop(v));
    total_[c] -= g_->degree(v);
    community_[v] = kNoCommunity;
}

void LouvainState::insert(NodeIndex v, std::uint32_t c) {
    if (community_[v] != kNoCommunity) throw Error("node not removed");
    if (c >= total_.size()) throw Error("unknown community");
    internal_[c] += 2 * (weight_to(v, c) + g_->loop(v));
    total_[c] += g_->degree(v);
    community_[v] = c;
}

double LouvainState::insertion_gain(Weight k_in_doubled, std::uint32_t c, Weight k) const {
    const double tm = static_cast<double>(two_m_);
    const double s_in = static_cast<double>(internal_[c]);
    const double s_tot = static_cast<double>(total_[c]);
    const double ki = static_cast<double>(k);
    const double kin = static_cast<double>(k_in_doubled);
    const double joined = (s_in + kin) / tm - ((s_tot + ki) / tm) * ((s_tot + ki) / tm);
    const double apart = s_in / tm - (s_tot / tm) * (s_tot / tm) - (ki / tm) * (ki / tm);
    return joined - apart;
}

double LouvainState::delta_modularity(NodeIndex v, std::uint32_t c) const {
    if (community_[v] != kNoCommunity) throw Error("node not removed");
    if (c >= total_.size()) throw Error("unknown community");
    return insertion_gain(2 * weight_to(v, c), c, g_->degree(v));
}

double LouvainState::modularity() const {
    double q = 0.0;
    const double tm = static_cast<double>(two_m_);
    for (std::size_t c = 0; c < total_.size(); ++c) {
        const double tot = static_cast<double>(total_[c]) / tm;
        q += static_cast<double>(internal_[c]) / tm - tot * tot;
    }
    return q;
}

UndirectedGraph aggregate(const UndirectedGraph& g, const Partition& p) {
    if (p.node_count() != g.node_count()) throw Error("partition does not cover the graph");
    const std::uint32_t k = p.community_count();
    std::vector<Weight> loops(k, 0);
    std::vector<std::tuple<NodeIndex, NodeIndex, Weight>> pairs;
    for (NodeIndex v = 0; v < g.node_count(); ++v) {
        const std::uint32_t cv = p.community_of(v);
        loops[cv] += g.loop(v);
        for (const Arc& a : g.neighbors(v)) {
            if (a.to < v) continue;  // each pair once
            const std::uint32_t cu = p.community_of(a.to);
            if (cu == cv) {
                loops[cv] += a.weight;
            } else {
                pairs.emplace_back(std::min(cv, cu), std::max(cv, cu), a.weight);
            }
        }
    }
    std::sort(pairs.begin(), pairs.end());
    std::size_t out = 0;
    for (std::size_t i = 0; i < pairs.size();) {
        std::size_t j = i + 1;
        Weight sum = std::get<2>(pairs[i]);
        while (j < pairs.size() && std::get<0>(pairs[j]) == std::get<0>(pairs[i]) &&
               std::get<1>(pairs[j]) == std::get<1>(pairs[i])) {
            sum += std::get<2>(pairs[j]);
            ++j;
        }
        pairs[out++] = {std::get<0>(pairs[i]), std::get<1>(pairs[i]), sum};
        i = j;
    }
    pairs.resize(out);
    return UndirectedGraph::from_parts(k, std::move(pairs), std::move(loops));
}

UndirectedGraph aggregate(const DirectedGraph& g, const Partition& p) {
    return aggregate(undirected_view(g), p);
}

namespace {

// One phase-1 pass: sweep in seeded random order until a full sweep moves
// nothing. Returns whether any membership changed.
bool refine_level(const UndirectedGraph& g, Rng& rng, std::vector<std::uint32_t>& community,
                  std::vector<double>* after_sweep) {
    LouvainState state(g, Partition(community));
    const std::size_t n = g.node_count();
    std::vector<NodeIndex> order(n);
    std::iota(order.begin(), order.end(), 0u);

    // Scratch: once-counted weight from the current node into each community.
    std::vector<Weight> weight_to(state.community_count(), 0);
    std::vector<std::uint32_t> touched;

    bool moved_any = false;
    for (;;) {
        rng.shuffle(order);
        bool moved_this_sweep = false;
        for (const NodeIndex v : order) {
            const std::uint32_t c_old = state.community_of(v);
            state.remove(v);

            touched.clear();
            for (const Arc& a : g.neighbors(v)) {
                const std::uint32_t c = state.community_of(a.to);
                if (c == LouvainState::kNoCommunity) continue;  // only v is removed
                if (weight_to[c] == 0) touched.push_back(c);
                weight_to[c] += a.weight;
            }
            std::sort(touched.begin(), touched.end());

            const double stay = state.delta_modularity(v, c_old);
            std::uint32_t best_c = c_old;
            double best_gain = stay;
            for (const std::uint32_t c : touched) {
                if (c == c_old) continue;
                const double gain = state.delta_modularity(v, c);
                if (gain > best_gain + kMinGain) {
                    best_gain = gain;
                    best_c = c;
                }
            }
            for (const std::uint32_t c : touched) weight_to[c] = 0;

            state.insert(v, best_c);
            if (best_c != c_old) {
                moved_this_sweep = true;
                moved_any = true;
            }
        }
        if (after_sweep) after_sweep->push_back(state.modularity());
        if (!moved_this_sweep) break;
    }

    for (NodeIndex v = 0; v < n; ++v) community[v] = state.community_of(v);
    return moved_any;
}

}  // namespace

Partition louvain(const UndirectedGraph& g, std::uint64_t seed, LouvainTrace* trace) {
    if (g.total_weight() == 0) throw Error("no edges");
    Rng rng(seed);

    std::vector<std::uint32_t> flat(g.node_count());
    std::iota(flat.begin(), flat.end(), 0u);

    UndirectedGraph level = g;
    for (;;) {
        std::vector<std::uint32_t> community(level.node_count());
        std::iota(community.begin(), community.end(), 0u);
        const bool moved =
            refine_level(level, rng, community, trace ? &trace->after_sweep : nullptr);
        const Partition p(community);
        for (auto& c : flat) c = p.community_of(c);
        if (!moved || p.community_count() == level.node_count()) break;
        level = aggregate(level, p);
        if (trace) {
            trace->after_level.push_back(
                modularity(level, Partition::singletons(level.node_count())));
        }
    }
    return Partition(std::move(flat));
}

Partition louvain(const DirectedGraph& g, std::uint64_t seed, LouvainTrace* trace) {
    return louvain(undirected_view(g), seed, trace);
}

AnchorSet read_anchors_csv(std::istream& in) {
    csv::Reader reader(in);
    const auto header = reader.next();
    if (!header || header->fields != std::vector<std::string>{"label", "node_id"}) {
        throw InputError("anchors file: header must be 'label,node_id'");
    }

    AnchorSet anchors;
    std::unordered_map<std::string, std::size_t> by_label;
    while (auto row = reader.next()) {
        if (row->fields.size() != 2) {
            throw InputError("anchors file record " + std::to_string(row->record_number) +
                             ": expected 2 fields, got " + std::to_string(row->fields.size()));
        }
        const std::string& label = row->fields[0];
        const std::string& node_id = row->fields[1];
        if (label.empty() || node_id.empty()) {
            throw InputError("anchors file record " + std::to_string(row->record_number) +
                             ": empty field");
        }
        if (label == kUnassignedLabel) {
            throw InputError("anchors file record " + std::to_string(row->record_number) +
                             ": label '" + label + "' is reserved");
        }
        const auto [it, inserted] = by_label.emplace(label, anchors.entries.size());
        if (inserted) anchors.entries.push_back({label, {}});
        auto& ids = anchors.entries[it->second].node_ids;
        if (std::find(ids.begin(), ids.end(), node_id) == ids.end()) ids.push_back(node_id);
    }
    return anchors;
}

std::vector<std::int32_t> match_clusters(const Partition& p, const DirectedGraph& g,
                                         const AnchorSet& anchors, const PageRankVector& pr) {
    if (p.node_count() != g.node_count() || pr.scores.size() != g.node_count()) {
        throw Error("partition, graph and pagerank sizes disagree");
    }
    const std::size_t n_labels = anchors.entries.size();
    std::vector<std::int32_t> label_to_community(n_labels, -1);

    struct Claim {
        std::size_t label;
        double score;
    };
    std::unordered_map<std::uint32_t, Claim> claimed;

    for (std::size_t l = 0; l < n_labels; ++l) {
        std::optional<NodeIndex> best;
        double best_score = 0.0;
        for (const auto& id : anchors.entries[l].node_ids) {
            const auto v = g.find(id);
            if (!v) continue;
            const double score = pr.scores[*v];
            if (!best || score > best_score || (score == best_score && g.id(*v) < g.id(*best))) {
                best = *v;
                best_score = score;
            }
        }
        if (!best) continue;

        const std::uint32_t community = p.community_of(*best);
        const auto it = claimed.find(community);
        if (it == claimed.end()) {
            claimed.emplace(community, Claim{l, best_score});
            label_to_community[l] = static_cast<std::int32_t>(community);
        } else if (best_score > it->second.score) {
            label_to_community[it->second.label] = -1;
            it->second = {l, best_score};
            label_to_community[l] = static_cast<std::int32_t>(community);
        }
        // Ties keep the earlier label: it already holds the claim.
    }
    return label_to_community;
}

std::vector<std::vector<NodeIndex>> ConsensusClustering::cluster_members() const {
    std::vector<std::vector<NodeIndex>> out(labels.size());
    for (NodeIndex v = 0; v < assignment.size(); ++v) {
        if (assignment[v] >= 0) out[static_cast<std::size_t>(assignment[v])].push_back(v);
    }
    return out;
}

ConsensusClustering consensus_cluster(const DirectedGraph& g, const AnchorSet& anchors,
                                      const ConsensusParams& params, const PageRankVector& pr) {
    if (params.n_runs < 1) throw Error("n_runs must be >= 1");
    if (params.epsilon < 0.0 || params.epsilon >= 1.0) throw Error("epsilon must be in [0, 1)");
    if (params.workers < 1) throw Error("workers must be >= 1");
    if (g.total_weight() == 0) throw Error("no edges");
    if (pr.scores.size() != g.node_count()) throw Error("pagerank does not cover the graph");

    const std::size_t n = g.node_count();
    const std::size_t n_labels = anchors.entries.size();

    ConsensusClustering cc;
    cc.params = params;
    for (const auto& entry : anchors.entries) cc.labels.push_back(entry.label);
    for (const auto& entry : anchors.entries) {
        for (const auto& id : entry.node_ids) {
            if (!g.find(id)) {
                cc.warnings.push_back("anchor '" + id + "' (label '" + entry.label +
                                      "') is not in the graph");
            }
        }
    }

    // Per-run node labels, merged by run index afterwards so the worker count
    // cannot change anything.
    std::vector<std::vector<std::int32_t>> run_label(params.n_runs);
    const auto run_one = [&](std::uint32_t i) {
        const Partition p = louvain(g, derive_run_seed(params.master_seed, i));
        const auto label_to_community = match_clusters(p, g, anchors, pr);
        std::vector<std::int32_t> community_label(p.community_count(), -1);
        for (std::size_t l = 0; l < n_labels; ++l) {
            if (label_to_community[l] >= 0) {
                community_label[static_cast<std::uint32_t>(label_to_community[l])] =
                    static_cast<std::int32_t>(l);
            }
        }
        auto& labels = run_label[i];
        labels.resize(n);
        for (NodeIndex v = 0; v < n; ++v) labels[v] = community_label[p.community_of(v)];
    };

    const std::uint32_t n_workers =
        std::min<std::uint32_t>(params.workers, params.n_runs);
    if (n_workers <= 1) {
        for (std::uint32_t i = 0; i < params.n_runs; ++i) run_one(i);
    } else {
        std::atomic<std::uint32_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(n_workers);
        for (std::uint32_t t = 0; t < n_workers; ++t) {
            pool.emplace_back([&] {
                for (;;) {
                    const std::uint32_t i = next.fetch_add(1);
                    if (i >= params.n_runs) return;
                    run_one(i);
                }
            });
        }
        for (auto& t : pool) t.join();
    }

    std::vector<std::uint32_t> votes(n * std::max<std::size_t>(n_labels, 1), 0);
    for (std::uint32_t i = 0; i < params.n_runs; ++i) {
        for (NodeIndex v = 0; v < n; ++v) {
            const std::int32_t l = run_label[i][v];
            if (l >= 0) votes[v * n_labels + static_cast<std::size_t>(l)]++;
        }
    }

    const auto threshold = static_cast<std::uint32_t>(std::max(
        1.0, std::ceil((1.0 - params.epsilon) * static_cast<double>(params.n_runs) - 1e-9)));

    cc.assignment.assign(n, -1);
    cc.stability.assign(n, 0.0);
    std::vector<bool> label_seen(n_labels, false);
    for (NodeIndex v = 0; v < n; ++v) {
        std::uint32_t best_votes = 0;
        std::int32_t best_label = -1;
        for (std::size_t l = 0; l < n_labels; ++l) {
            const std::uint32_t count = votes[v * n_labels + l];
            if (count > best_votes) {
                best_votes = count;
                best_label = static_cast<std::int32_t>(l);
            }
        }
        cc.stability[v] =
            static_cast<double>(best_votes) / static_cast<double>(params.n_runs);
        if (best_label >= 0 && best_votes >= threshold) {
            cc.assignment[v] = best_label;
            label_seen[static_cast<std::size_t>(best_label)] = true;
        }
    }
    for (std::size_t l = 0; l < n_labels; ++l) {
        bool matched_ever = false;
        for (std::uint32_t i = 0; i < params.n_runs && !matched_ever; ++i) {
            for (NodeIndex v = 0; v < n; ++v) {
                if (run_label[i][v] == static_cast<std::int32_t>(l)) {
                    matched_ever = true;
                    break;
                }
            }
        }
        if (!matched_ever) {
            cc.warnings.push_back("label '" + cc.labels[l] + "' matched no cluster in any run");
        } else if (!label_seen[l]) {
            cc.warnings.push_back("label '" + cc.labels[l] + "' has no stable members");
        }
    }
    return cc;
}

ConsensusClustering consensus_cluster(const DirectedGraph& g, const AnchorSet& anchors,
                                      const ConsensusParams& params) {
    return consensus_cluster(g, anchors, params, pagerank(g));
}

void write_clusters_csv(std::ostream& out, const DirectedGraph& g,
                        const ConsensusClustering& cc) {
    if (cc.assignment.size() != g.node_count()) throw Error("clustering does not cover the graph");

    std::vector<NodeIndex> order(g.node_count());
    std::iota(order.begin(), order.end(), 0u);
    const auto label_of = [&](NodeIndex v) -> const std::string& {
        static const std::string unassigned = kUnassignedLabel;
        return cc.assignment[v] >= 0 ? cc.labels[static_cast<std::size_t>(cc.assignment[v])]
                                     : unassigned;
    };
    std::sort(order.begin(), order.end(), [&](NodeIndex a, NodeIndex b) {
        return std::tie(label_of(a), g.id(a)) < std::tie(label_of(b), g.id(b));
    });

    const std::string header[] = {"node_id", "label", "stability"};
    csv::write_row(out, header);
    char buf[32];
    for (const NodeIndex v : order) {
        std::snprintf(buf, sizeof buf, "%.6f", cc.stability[v]);
        const std::string row[] = {g.id(v), label_of(v), buf};
        csv::write_row(out, row);
    }
}

ConsensusClustering read_clusters_csv(std::istream& in, const DirectedGraph& g) {
    csv::Reader reader(in);
    const auto header = reader.next();
    const std::vector<std::string> with_stability = {"node_id", "label", "stability"};
    const std::vector<std::string> bare = {"node_id", "label"};
    if (!header || (header->fields != with_stability && header->fields != bare)) {
        throw InputError(
            "clusters file: header must be 'node_id,label,stability' or 'node_id,label'");
    }
    const bool has_stability = header->fields.size() == 3;

    ConsensusClustering cc;
    cc.assignment.assign(g.node_count(), -1);
    cc.stability.assign(g.node_count(), has_stability ? 0.0 : 1.0);
    std::unordered_map<std::string, std::size_t> label_index;
    std::vector<bool> seen(g.node_count(), false);
    std::string unknown;

    while (auto row = reader.next()) {
        if (row->fields.size() != header->fields.size()) {
            throw InputError("clusters file record " + std::to_string(row->record_number) +
                             ": expected " + std::to_string(header->fields.size()) +
                             " fields, got " + std::to_string(row->fields.size()));
        }
        const std::string& node_id = row->fields[0];
        const std::string& label = row->fields[1];
        if (node_id.empty() || label.empty()) {
            throw InputError("clusters file record " + std::to_string(row->record_number) +
                             ": empty field");
        }
        const auto v = g.find(node_id);
        if (!v) {
            if (!unknown.empty()) unknown += ", ";
            unknown += node_id;
            continue;
        }
        if (seen[*v]) {
            throw InputError("clusters file record " + std::to_string(row->record_number) +
                             ": node '" + node_id + "' assigned twice");
        }
        seen[*v] = true;
        if (has_stability) {
            const std::string& text = row->fields[2];
            double value = 0.0;
            const auto [ptr, ec] =
                std::from_chars(text.data(), text.data() + text.size(), value);
            if (ec != std::errc() || ptr != text.data() + text.size()) {
                throw InputError("clusters file record " + std::to_string(row->record_number) +
                                 ": invalid stability '" + text + "'");
            }
            cc.stability[*v] = value;
        }
        if (label == kUnassignedLabel) continue;
        const auto [it, inserted] = label_index.emplace(label, cc.labels.size());
        if (inserted) cc.labels.push_back(label);
        cc.assignment[*v] = static_cast<std::int32_t>(it->second);
    }
    if (!unknown.empty()) throw InputError("clusters file names unknown node ids: " + unknown);

    std::size_t missing = 0;
    for (const bool s : seen) missing += s ? 0 : 1;
    if (missing > 0) {
        cc.warnings.push_back(std::to_string(missing) +
                              " graph node(s) absent from the clusters file are unassigned");
    }
    return cc;
}

}  // namespace polarnet
