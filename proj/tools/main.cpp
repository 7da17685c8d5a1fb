#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "polarnet/errors.hpp"
#include "polarnet/pipeline.hpp"

namespace {

using polarnet::AplMode;
using polarnet::InputError;
using polarnet::InputKind;
using polarnet::RunConfig;

// CLI-level range check so an out-of-range value is reported as a usage error
// (exit 2) instead of surfacing from the pipeline as an internal one.
CLI::Validator float_range(double lo, bool lo_open, double hi, bool hi_open, std::string desc) {
    return CLI::Validator(
        [lo, lo_open, hi, hi_open, desc](std::string& value) -> std::string {
            char* end = nullptr;
            const double v = std::strtod(value.c_str(), &end);
            if (end == value.c_str() || *end != '\0') return "'" + value + "' is not a number";
            const bool lo_ok = lo_open ? v > lo : v >= lo;
            const bool hi_ok = hi_open ? v < hi : v <= hi;
            if (!lo_ok || !hi_ok) return "value " + value + " is outside " + desc;
            return {};
        },
        desc);
}

std::string trimmed(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
    return s.substr(b, e - b);
}

std::uint64_t config_u64(const std::string& key, const std::string& value) {
    std::uint64_t out{};
    const auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || p != value.data() + value.size()) {
        throw InputError("config: invalid integer for '" + key + "': '" + value + "'");
    }
    return out;
}

std::uint32_t config_count(const std::string& key, const std::string& value) {
    const std::uint64_t v = config_u64(key, value);
    if (v < 1 || v > 0xFFFFFFFFull) {
        throw InputError("config: value for '" + key + "' must be a positive 32-bit integer");
    }
    return static_cast<std::uint32_t>(v);
}

double config_double(const std::string& key, const std::string& value) {
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (end == value.c_str() || *end != '\0') {
        throw InputError("config: invalid number for '" + key + "': '" + value + "'");
    }
    return v;
}

bool config_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw InputError("config: invalid boolean for '" + key + "': '" + value + "'");
}

// Flat key=value config with the same vocabulary as the long flags (and the
// run manifest). The command line always wins; keys the active subcommand does
// not expose, and unknown keys such as input-sha256, are ignored.
void apply_config_file(CLI::App& sub, const std::string& path, RunConfig& cfg,
                       std::string& clusters_path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open config file '" + path + "'");

    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        const std::string text = trimmed(line);
        if (text.empty() || text[0] == '#' || text[0] == ';') continue;
        const std::size_t eq = text.find('=');
        if (eq == std::string::npos) {
            throw InputError("config: line " + std::to_string(line_number) +
                             " is not a key=value pair");
        }
        const std::string key = trimmed(text.substr(0, eq));
        const std::string value = trimmed(text.substr(eq + 1));
        if (key.empty() || key == "config" || value.empty()) continue;

        const CLI::Option* opt = key == "input" ? sub.get_option_no_throw("input")
                                                : sub.get_option_no_throw("--" + key);
        if (opt == nullptr || opt->count() > 0) continue;

        if (key == "input") {
            cfg.input_path = value;
        } else if (key == "kind") {
            if (value == "events") {
                cfg.input_kind = InputKind::events;
            } else if (value == "edges") {
                cfg.input_kind = InputKind::edges;
            } else {
                throw InputError("config: invalid kind '" + value + "'");
            }
        } else if (key == "min-weight") {
            const std::uint64_t v = config_u64(key, value);
            if (v < 1) throw InputError("config: min-weight must be >= 1");
            cfg.min_weight = static_cast<polarnet::Weight>(v);
        } else if (key == "giant-component") {
            cfg.use_giant_component = config_bool(key, value);
        } else if (key == "runs") {
            cfg.n_runs = config_count(key, value);
        } else if (key == "epsilon") {
            const double v = config_double(key, value);
            if (!(v >= 0.0 && v < 1.0)) throw InputError("config: epsilon must be in [0, 1)");
            cfg.epsilon = v;
        } else if (key == "seed") {
            cfg.master_seed = config_u64(key, value);
        } else if (key == "damping") {
            const double v = config_double(key, value);
            if (!(v > 0.0 && v < 1.0)) throw InputError("config: damping must be in (0, 1)");
            cfg.damping = v;
        } else if (key == "anchors") {
            cfg.anchors_path = value;
        } else if (key == "apl-mode") {
            if (value == "paper-literal") {
                cfg.apl_mode = AplMode::paper_literal;
            } else if (value == "reachable-only") {
                cfg.apl_mode = AplMode::reachable_only;
            } else {
                throw InputError("config: invalid apl-mode '" + value + "'");
            }
        } else if (key == "weak-ties-include-unassigned") {
            cfg.weak_ties_include_unassigned = config_bool(key, value);
        } else if (key == "matrix-include-unassigned") {
            cfg.matrix_include_unassigned = config_bool(key, value);
        } else if (key == "ego") {
            cfg.ego_nodes.push_back(value);
        } else if (key == "top-k") {
            cfg.top_k = config_count(key, value);
        } else if (key == "workers") {
            cfg.workers = config_count(key, value);
        } else if (key == "out") {
            cfg.output = value;
        } else if (key == "clusters") {
            clusters_path = value;
        }
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Weighted interaction-network toolkit: consensus community detection,\n"
        "PageRank rankings and structural reports from event logs"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string clusters_path;
    std::string config_path;

    const std::map<std::string, InputKind> kinds{{"events", InputKind::events},
                                                 {"edges", InputKind::edges}};
    const std::map<std::string, AplMode> apl_modes{{"paper-literal", AplMode::paper_literal},
                                                   {"reachable-only", AplMode::reachable_only}};

    const auto add_input = [&](CLI::App* sub) {
        sub->add_option("input", cfg.input_path,
                        "Input CSV with header `source,target` or `source,target,weight`");
        sub->add_option("--kind", cfg.input_kind,
                        "Input kind: `events` (one interaction per row) or `edges` "
                        "(pre-aggregated); rows aggregate identically either way")
            ->transform(CLI::CheckedTransformer(kinds, CLI::ignore_case));
        sub->add_option("--config", config_path,
                        "Flat key=value file supplying defaults; command-line flags win");
    };
    const auto add_graph_options = [&](CLI::App* sub) {
        sub->add_option("--min-weight", cfg.min_weight,
                        "Drop aggregated edges lighter than this (default 3)")
            ->check(CLI::PositiveNumber);
        sub->add_flag("--giant-component", cfg.use_giant_component,
                      "Restrict the analysis to the largest weakly connected component");
        sub->add_option("--out", cfg.output, "Output directory (default out)");
    };

    CLI::App* ingest =
        app.add_subcommand("ingest", "Aggregate an event log into a sorted weighted edge list");
    add_input(ingest);
    ingest->add_option("--out", cfg.output, "Output edge CSV path (default edges.csv)");

    CLI::App* analyze =
        app.add_subcommand("analyze", "Run the full pipeline and write the report bundle");
    add_input(analyze);
    add_graph_options(analyze);
    analyze->add_option("--anchors", cfg.anchors_path,
                        "Anchor CSV (`label,node_id`) naming the clusters (required)");
    analyze
        ->add_option("--runs", cfg.n_runs,
                     "Detection runs in the consensus ensemble (default 100)")
        ->check(CLI::PositiveNumber);
    analyze
        ->add_option("--epsilon", cfg.epsilon,
                     "Consensus tolerance: a node is assigned when one label recurs in at "
                     "least (1-epsilon) of the runs (default 0.05)")
        ->check(float_range(0.0, false, 1.0, true, "[0,1)"));
    analyze->add_option("--seed", cfg.master_seed, "Master seed for the run ensemble (default 0)");
    analyze
        ->add_option("--damping", cfg.damping, "PageRank damping factor (default 0.85)")
        ->check(float_range(0.0, true, 1.0, true, "(0,1)"));
    analyze
        ->add_option("--apl-mode", cfg.apl_mode,
                     "How unreachable ordered pairs enter the average path length: "
                     "`paper-literal` counts them as distance zero over all pairs, "
                     "`reachable-only` averages over reachable pairs (default paper-literal)")
        ->transform(CLI::CheckedTransformer(apl_modes));
    analyze->add_flag("--weak-ties-include-unassigned", cfg.weak_ties_include_unassigned,
                      "Keep weak-tie edges touching unassigned nodes, treated as one extra "
                      "pseudo-cluster");
    analyze->add_flag("--matrix-include-unassigned", cfg.matrix_include_unassigned,
                      "Append an unassigned column to the interaction matrix");
    analyze->add_option("--ego", cfg.ego_nodes,
                        "Node id whose ego network is exported (repeatable)");
    analyze
        ->add_option("--top-k", cfg.top_k,
                     "Rows per cluster in the top-nodes table (default 5)")
        ->check(CLI::PositiveNumber);
    analyze
        ->add_option("--workers", cfg.workers,
                     "Worker threads for the run ensemble; scheduling only, never changes "
                     "output bytes (default 1)")
        ->check(CLI::PositiveNumber);

    CLI::App* metrics = app.add_subcommand(
        "metrics", "Recompute per-cluster profiles for an existing cluster assignment");
    add_input(metrics);
    add_graph_options(metrics);
    metrics->add_option("--clusters", clusters_path,
                        "clusters.csv from a previous run, or hand-written (required)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        CLI::App* sub = ingest->parsed() ? ingest : analyze->parsed() ? analyze : metrics;
        if (!config_path.empty()) apply_config_file(*sub, config_path, cfg, clusters_path);

        if (cfg.input_path.empty()) {
            throw InputError("missing input path (positional argument, or input= in --config)");
        }
        if (analyze->parsed() && cfg.anchors_path.empty()) {
            throw InputError("analyze requires --anchors (or anchors= in --config)");
        }
        if (metrics->parsed() && clusters_path.empty()) {
            throw InputError("metrics requires --clusters (or clusters= in --config)");
        }

        if (ingest->parsed()) {
            polarnet::cmd_ingest(cfg, std::cout);
        } else if (analyze->parsed()) {
            polarnet::cmd_analyze(cfg, std::cout);
        } else {
            polarnet::cmd_metrics(cfg, clusters_path, std::cout);
        }
        return 0;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
