#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "polarnet/graph.hpp"
#include "polarnet/topology.hpp"

namespace polarnet {

enum class InputKind {
    events,  // one interaction per row, optional weight column
    edges,   // pre-aggregated weights; parsing is identical, the kind is recorded
};

/// Effective configuration of one command invocation. Everything here except
/// `output` and `workers` ends up in the run manifest; those two cannot change
/// any produced byte.
struct RunConfig {
    std::string input_path;
    InputKind input_kind = InputKind::events;
    Weight min_weight = 3;
    bool use_giant_component = false;
    std::uint32_t n_runs = 100;
    double epsilon = 0.05;
    std::uint64_t master_seed = 0;
    double damping = 0.85;
    std::string anchors_path;
    AplMode apl_mode = AplMode::paper_literal;
    bool weak_ties_include_unassigned = false;
    bool matrix_include_unassigned = false;
    std::vector<std::string> ego_nodes;
    std::uint32_t top_k = 5;
    std::uint32_t workers = 1;
    std::string output;  // ingest: edge CSV path (default edges.csv); analyze/metrics: directory (default out)
};

/// Parses the input log, aggregates it, writes `source,target,weight` sorted by
/// (source,target), and logs event and edge counts. No thresholding.
void cmd_ingest(const RunConfig& cfg, std::ostream& log);

/// Full pipeline: graph build, consensus clustering, PageRank, weak ties,
/// per-cluster metrics and the report bundle. Outputs are computed first and
/// written last, so a failure leaves no partial bundle behind.
void cmd_analyze(const RunConfig& cfg, std::ostream& log);

/// Recomputes profiles.csv for an existing cluster assignment; no detection.
void cmd_metrics(const RunConfig& cfg, const std::string& clusters_path, std::ostream& log);

/// Lowercase hex SHA-256 of a file's bytes; InputError when unreadable.
std::string sha256_file_hex(const std::string& path);

}  // namespace polarnet
