#include "polarnet/pipeline.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <unordered_set>
#include <utility>

#include "polarnet/community.hpp"
#include "polarnet/csv.hpp"
#include "polarnet/errors.hpp"
#include "polarnet/pagerank.hpp"
#include "polarnet/report.hpp"
#include "polarnet/rng.hpp"

namespace fs = std::filesystem;

namespace polarnet {

namespace {

std::string fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

// Score-like values keep full precision; fixed decimals would flatten the
// small per-node scores of large graphs.
std::string general(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string opt_fixed(const std::optional<double>& v, int decimals) {
    return v ? fixed(*v, decimals) : std::string();
}

// Filenames derived from labels and node ids; anything outside a conservative
// portable set becomes '_', collisions get a numeric suffix in emission order.
class FileNamer {
  public:
    std::string claim(const std::string& stem, const std::string& raw) {
        std::string base = stem;
        for (const char ch : raw) {
            const bool ok = (ch >= 'A' && ch <= 'Z') || (ch >= 'a' && ch <= 'z') ||
                            (ch >= '0' && ch <= '9') || ch == '_' || ch == '-' || ch == '.';
            base.push_back(ok ? ch : '_');
        }
        std::string name = base + ".csv";
        for (int i = 2; !used_.insert(name).second; ++i) {
            name = base + "_" + std::to_string(i) + ".csv";
        }
        return name;
    }

  private:
    std::unordered_set<std::string> used_;
};

using FileList = std::vector<std::pair<std::string, std::string>>;

ParsedLog parse_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open '" + path + "'");
    return parse_interaction_log(in);
}

DirectedGraph thresholded_graph(const RunConfig& cfg, const ParsedLog& parsed) {
    DirectedGraph g = build_graph(parsed.edges, cfg.min_weight);
    if (g.node_count() == 0) {
        throw Error("no edges reach the minimum weight " + std::to_string(cfg.min_weight));
    }
    return g;
}

std::string render_profiles_csv(const std::vector<ClusterProfile>& profiles) {
    std::ostringstream os;
    csv::write_row(os, {"label", "node_count", "edge_count", "gini_in", "centralization_in",
                        "clustering", "apl_paper_literal", "apl_reachable_only", "k_max", "k_avg",
                        "k_std"});
    for (const ClusterProfile& p : profiles) {
        csv::write_row(os, {p.label, std::to_string(p.node_count), std::to_string(p.edge_count),
                            opt_fixed(p.gini_in, 6), opt_fixed(p.centralization_in, 6),
                            opt_fixed(p.clustering, 6), opt_fixed(p.apl_paper_literal, 6),
                            opt_fixed(p.apl_reachable_only, 6),
                            p.k_max ? std::to_string(*p.k_max) : std::string(),
                            opt_fixed(p.k_avg, 6), opt_fixed(p.k_std, 6)});
    }
    return std::move(os).str();
}

std::string render_scores_csv(const DirectedGraph& g, const PageRankVector& pr) {
    std::ostringstream os;
    csv::write_row(os, {"node_id", "pagerank"});
    for (const RankedNode& r : rank_nodes(g, pr, g.node_count())) {
        csv::write_row(os, {r.node_id, fixed(r.score, 6)});
    }
    return std::move(os).str();
}

void render_matrix_files(const InteractionMatrix& m, FileList& files) {
    std::ostringstream norm;
    std::ostringstream raw;
    std::vector<std::string> header;
    header.emplace_back("label");
    header.insert(header.end(), m.column_labels.begin(), m.column_labels.end());
    csv::write_row(norm, header);
    csv::write_row(raw, header);
    for (std::size_t i = 0; i < m.row_labels.size(); ++i) {
        std::vector<std::string> norm_row{m.row_labels[i]};
        std::vector<std::string> raw_row{m.row_labels[i]};
        for (std::size_t j = 0; j < m.column_labels.size(); ++j) {
            norm_row.push_back(fixed(m.normalized[i][j], 2));
            raw_row.push_back(std::to_string(m.raw[i][j]));
        }
        csv::write_row(norm, norm_row);
        csv::write_row(raw, raw_row);
    }
    files.emplace_back("interaction_matrix.csv", std::move(norm).str());
    files.emplace_back("interaction_matrix_raw.csv", std::move(raw).str());
}

void render_cluster_detail_files(const DirectedGraph& g, const ConsensusClustering& cc,
                                 FileNamer& namer, FileList& files) {
    const auto members = cc.cluster_members();
    for (std::size_t l = 0; l < cc.labels.size(); ++l) {
        const DirectedGraph intra = induced_subgraph(g, std::span<const NodeIndex>(members[l]));

        const DegreeDistribution dist = in_degree_distribution(intra);
        std::ostringstream deg;
        csv::write_row(deg, {"k", "count", "fraction", "cumulative"});
        for (const auto& bin : dist.bins) {
            csv::write_row(deg, {std::to_string(bin.k), std::to_string(bin.count),
                                 fixed(bin.fraction, 6), fixed(bin.cumulative, 6)});
        }
        files.emplace_back(namer.claim("indegree_", cc.labels[l]), std::move(deg).str());

        std::ostringstream lor;
        csv::write_row(lor, {"X", "Y"});
        try {
            std::vector<double> values(dist.degrees.begin(), dist.degrees.end());
            const LorenzCurve curve = lorenz_points(values);
            for (std::size_t i = 0; i < curve.x.size(); ++i) {
                csv::write_row(lor, {general(curve.x[i]), general(curve.y[i])});
            }
        } catch (const Error&) {
            // All-zero or empty in-degrees: the curve is undefined, emit header only.
        }
        files.emplace_back(namer.claim("lorenz_", cc.labels[l]), std::move(lor).str());

        const CoreDecomposition core = k_core_decomposition(intra);
        std::ostringstream kc;
        csv::write_row(kc, {"k", "node_count"});
        for (const auto& [k, count] : core.shell_counts) {
            csv::write_row(kc, {std::to_string(k), std::to_string(count)});
        }
        files.emplace_back(namer.claim("kcore_", cc.labels[l]), std::move(kc).str());
    }
}

std::string render_manifest(const RunConfig& cfg, const std::string& input_hash) {
    std::ostringstream os;
    os << "input=" << cfg.input_path << "\n";
    os << "kind=" << (cfg.input_kind == InputKind::events ? "events" : "edges") << "\n";
    os << "input-sha256=" << input_hash << "\n";
    os << "min-weight=" << cfg.min_weight << "\n";
    os << "giant-component=" << (cfg.use_giant_component ? "true" : "false") << "\n";
    os << "runs=" << cfg.n_runs << "\n";
    os << "epsilon=" << general(cfg.epsilon) << "\n";
    os << "seed=" << cfg.master_seed << "\n";
    os << "damping=" << general(cfg.damping) << "\n";
    os << "anchors=" << cfg.anchors_path << "\n";
    os << "apl-mode="
       << (cfg.apl_mode == AplMode::paper_literal ? "paper-literal" : "reachable-only") << "\n";
    os << "weak-ties-include-unassigned=" << (cfg.weak_ties_include_unassigned ? "true" : "false")
       << "\n";
    os << "matrix-include-unassigned=" << (cfg.matrix_include_unassigned ? "true" : "false")
       << "\n";
    os << "top-k=" << cfg.top_k << "\n";
    for (const std::string& id : cfg.ego_nodes) os << "ego=" << id << "\n";
    return std::move(os).str();
}

fs::path output_dir(const RunConfig& cfg) {
    return cfg.output.empty() ? fs::path("out") : fs::path(cfg.output);
}

// All-or-nothing bundle write: any failure removes what was already written.
void write_bundle(const fs::path& dir, const FileList& files) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error("cannot create output directory '" + dir.string() + "': " + ec.message());

    std::vector<fs::path> written;
    try {
        for (const auto& [name, bytes] : files) {
            const fs::path path = dir / name;
            std::ofstream out(path, std::ios::binary | std::ios::trunc);
            if (out) {
                out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
                out.flush();
            }
            if (!out) throw Error("cannot write '" + path.string() + "'");
            written.push_back(path);
        }
    } catch (...) {
        for (const fs::path& path : written) {
            std::error_code ignored;
            fs::remove(path, ignored);
        }
        throw;
    }
}

}  // namespace

std::string sha256_file_hex(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open '" + path + "'");

    const std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(),
                                                                      EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
        throw Error("sha256 initialization failed");
    }
    std::vector<char> buf(1 << 16);
    while (in) {
        in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
        const std::streamsize got = in.gcount();
        if (got > 0 && EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(got)) != 1) {
            throw Error("sha256 update failed");
        }
    }
    if (in.bad()) throw InputError("cannot read '" + path + "'");

    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_DigestFinal_ex(ctx.get(), md, &len) != 1) throw Error("sha256 finalization failed");

    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(kHex[md[i] >> 4]);
        out.push_back(kHex[md[i] & 0xF]);
    }
    return out;
}

void cmd_ingest(const RunConfig& cfg, std::ostream& log) {
    const ParsedLog parsed = parse_input(cfg.input_path);
    const std::string out_path = cfg.output.empty() ? std::string("edges.csv") : cfg.output;
    {
        std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
        if (out) {
            write_edge_csv(out, parsed.edges);
            out.flush();
        }
        if (!out) throw Error("cannot write '" + out_path + "'");
    }
    log << "events read: " << (parsed.event_count + parsed.self_loop_events) << "\n";
    log << "self-loop events dropped: " << parsed.self_loop_events << "\n";
    log << "edges written: " << parsed.edges.size() << " (" << out_path << ")\n";
}

void cmd_analyze(const RunConfig& cfg, std::ostream& log) {
    // Compute everything before writing anything; a failure in any stage must
    // not leave a partial bundle behind.
    const std::string input_hash = sha256_file_hex(cfg.input_path);
    const ParsedLog parsed = parse_input(cfg.input_path);
    const DirectedGraph full = thresholded_graph(cfg, parsed);
    const DirectedGraph giant = giant_component(full);
    const DirectedGraph& g = cfg.use_giant_component ? giant : full;

    std::ifstream anchors_in(cfg.anchors_path, std::ios::binary);
    if (!anchors_in) throw InputError("cannot open anchors file '" + cfg.anchors_path + "'");
    const AnchorSet anchors = read_anchors_csv(anchors_in);

    std::vector<std::string> warnings;
    PageRankConfig pr_cfg;
    pr_cfg.damping = cfg.damping;
    const PageRankVector pr = pagerank(g, pr_cfg);
    if (!pr.converged) {
        warnings.push_back("pagerank did not converge within " +
                           std::to_string(pr_cfg.max_iterations) + " iterations");
    }

    const ConsensusParams consensus_params{cfg.n_runs, cfg.epsilon, cfg.master_seed, cfg.workers};
    const ConsensusClustering cc = consensus_cluster(g, anchors, consensus_params, pr);
    warnings.insert(warnings.end(), cc.warnings.begin(), cc.warnings.end());

    // Size histogram and headline Q come from a single plain detection run;
    // consensus filtering would bias both.
    const Partition first_run = louvain(g, derive_run_seed(cfg.master_seed, 0));
    const double first_run_q = modularity(g, first_run);

    const DirectedGraph weak = weak_ties_subgraph(g, cc, cfg.weak_ties_include_unassigned);
    PageRankVector weak_pr;
    if (weak.node_count() > 0) {
        weak_pr = pagerank(weak, pr_cfg);
        if (!weak_pr.converged) {
            warnings.push_back("weak-ties pagerank did not converge within " +
                               std::to_string(pr_cfg.max_iterations) + " iterations");
        }
    } else {
        warnings.push_back("weak-ties subgraph is empty");
    }

    const std::vector<ClusterProfile> profiles = cluster_profiles(g, cc);
    const InteractionMatrix matrix = interaction_matrix(g, cc, cfg.matrix_include_unassigned);
    warnings.insert(warnings.end(), matrix.warnings.begin(), matrix.warnings.end());
    const std::vector<TopNodesRow> top = top_nodes_report(g, cc, pr, cfg.top_k);

    std::vector<std::pair<std::string, DirectedGraph>> egos;
    for (const std::string& id : cfg.ego_nodes) egos.emplace_back(id, ego_network(g, id));

    std::optional<double> apl;
    try {
        apl = average_path_length(g, cfg.apl_mode);
    } catch (const Error&) {
        // Degenerate or fully disconnected analysis graph; reported as undefined.
    }

    FileList files;
    FileNamer namer;

    {
        std::ostringstream os;
        write_clusters_csv(os, g, cc);
        files.emplace_back("clusters.csv", std::move(os).str());
    }
    files.emplace_back("profiles.csv", render_profiles_csv(profiles));
    render_matrix_files(matrix, files);
    {
        std::ostringstream os;
        csv::write_row(os, {"label", "rank", "node_id", "pagerank"});
        for (const TopNodesRow& row : top) {
            csv::write_row(os, {row.label, std::to_string(row.rank), row.node_id,
                                fixed(row.pagerank, 6)});
        }
        files.emplace_back("top_nodes.csv", std::move(os).str());
    }
    {
        std::ostringstream os;
        csv::write_row(os, {"size", "count"});
        for (const auto& [size, count] : cluster_size_distribution(first_run)) {
            csv::write_row(os, {std::to_string(size), std::to_string(count)});
        }
        files.emplace_back("cluster_sizes.csv", std::move(os).str());
    }
    files.emplace_back("pagerank.csv", render_scores_csv(g, pr));
    if (weak.node_count() > 0) {
        files.emplace_back("weak_ties_pagerank.csv", render_scores_csv(weak, weak_pr));
    } else {
        std::ostringstream os;
        csv::write_row(os, {"node_id", "pagerank"});
        files.emplace_back("weak_ties_pagerank.csv", std::move(os).str());
    }
    render_cluster_detail_files(g, cc, namer, files);
    for (const auto& [id, ego] : egos) {
        std::ostringstream os;
        write_edge_csv(os, ego);
        files.emplace_back(namer.claim("ego_", id), std::move(os).str());
    }
    files.emplace_back("run_manifest.txt", render_manifest(cfg, input_hash));

    const fs::path dir = output_dir(cfg);
    write_bundle(dir, files);

    for (const std::string& w : warnings) log << "warning: " << w << "\n";
    log << "input: " << cfg.input_path << " sha256=" << input_hash << "\n";
    log << "events read: " << (parsed.event_count + parsed.self_loop_events)
        << " (self-loop events dropped: " << parsed.self_loop_events << ")\n";
    log << "graph: " << full.node_count() << " nodes, " << full.edge_count()
        << " edges (min weight " << cfg.min_weight << ")\n";
    log << "giant component: " << giant.node_count() << " nodes, " << giant.edge_count()
        << " edges\n";
    log << "analysis graph: " << (cfg.use_giant_component ? "giant component" : "full graph")
        << "\n";
    log << "single-run modularity: " << fixed(first_run_q, 6) << " ("
        << first_run.community_count() << " communities)\n";
    std::size_t assigned = 0;
    for (const std::int32_t a : cc.assignment) assigned += a >= 0 ? 1 : 0;
    log << "consensus: " << cc.labels.size() << " labels, " << assigned << " of "
        << g.node_count() << " nodes assigned\n";
    log << "weak ties: " << weak.node_count() << " nodes, " << weak.edge_count() << " edges\n";
    log << "average path length ("
        << (cfg.apl_mode == AplMode::paper_literal ? "paper-literal" : "reachable-only")
        << "): " << (apl ? fixed(*apl, 6) : std::string("undefined")) << "\n";
    log << "wrote " << files.size() << " files to " << dir.string() << "\n";
}

void cmd_metrics(const RunConfig& cfg, const std::string& clusters_path, std::ostream& log) {
    const ParsedLog parsed = parse_input(cfg.input_path);
    DirectedGraph g = thresholded_graph(cfg, parsed);
    if (cfg.use_giant_component) g = giant_component(g);

    std::ifstream clusters_in(clusters_path, std::ios::binary);
    if (!clusters_in) throw InputError("cannot open clusters file '" + clusters_path + "'");
    const ConsensusClustering cc = read_clusters_csv(clusters_in, g);

    std::vector<std::string> warnings = cc.warnings;
    if (cc.labels.empty()) warnings.push_back("all nodes are unassigned; no profiles computed");

    const std::vector<ClusterProfile> profiles = cluster_profiles(g, cc);

    const fs::path dir = output_dir(cfg);
    write_bundle(dir, {{"profiles.csv", render_profiles_csv(profiles)}});

    for (const std::string& w : warnings) log << "warning: " << w << "\n";
    log << "wrote profiles for " << profiles.size() << " clusters to "
        << (dir / "profiles.csv").string() << "\n";
}

}  // namespace polarnet
