#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "polarnet/community.hpp"
#include "polarnet/csv.hpp"
#include "polarnet/errors.hpp"
#include "polarnet/graph.hpp"
#include "polarnet/pipeline.hpp"
#include "polarnet/topology.hpp"
#include "support/fixtures.hpp"

using namespace polarnet;
namespace fs = std::filesystem;
namespace fx = polarnet::testing;

namespace {

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("polarnet_unit_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::vector<std::string> dir_listing(const fs::path& dir) {
    std::vector<std::string> names;
    for (const auto& entry : fs::directory_iterator(dir)) {
        names.push_back(entry.path().filename().string());
    }
    std::sort(names.begin(), names.end());
    return names;
}

std::string edge_csv_text(const std::vector<WeightedEdge>& edges) {
    std::ostringstream out;
    write_edge_csv(out, edges);
    return out.str();
}

void write_planted_inputs(const fs::path& dir) {
    write_file(dir / "edges.csv", edge_csv_text(fx::two_cliques_with_bridge(5, 3)));
    write_file(dir / "anchors.csv",
               "label,node_id\r\nleft," + fx::node_name("p", 0) + "\r\nright," +
                   fx::node_name("q", 0) + "\r\n");
}

RunConfig planted_config(const fs::path& dir, const std::string& out_name) {
    RunConfig cfg;
    cfg.input_path = (dir / "edges.csv").string();
    cfg.input_kind = InputKind::edges;
    cfg.anchors_path = (dir / "anchors.csv").string();
    cfg.min_weight = 1;
    cfg.n_runs = 20;
    cfg.output = (dir / out_name).string();
    return cfg;
}

}  // namespace

TEST_CASE("sha256 of a known file") {
    const auto dir = fresh_dir("sha");
    write_file(dir / "abc.txt", "abc");
    CHECK(sha256_file_hex((dir / "abc.txt").string()) ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK_THROWS_WITH_AS(sha256_file_hex((dir / "missing.txt").string()),
                         doctest::Contains("cannot open"), InputError);
}

TEST_CASE("ingest aggregates events into a sorted edge list") {
    const auto dir = fresh_dir("ingest");
    write_file(dir / "events.csv", "source,target\r\nc,a\r\na,b\r\na,b\r\na,a\r\n");
    RunConfig cfg;
    cfg.input_path = (dir / "events.csv").string();
    cfg.output = (dir / "edges.csv").string();
    std::ostringstream log;
    cmd_ingest(cfg, log);
    CHECK(read_file(dir / "edges.csv") == "source,target,weight\r\na,b,2\r\nc,a,1\r\n");
    CHECK(log.str().find("events read: 4") != std::string::npos);
    CHECK(log.str().find("self-loop events dropped: 1") != std::string::npos);
    CHECK(log.str().find("edges written: 2") != std::string::npos);
}

TEST_CASE("ingest re-sorts and re-aggregates pre-built edge lists") {
    const auto dir = fresh_dir("ingest_edges");
    write_file(dir / "in.csv", "source,target,weight\r\nz,a,4\r\nb,c,2\r\nb,c,3\r\n");
    RunConfig cfg;
    cfg.input_path = (dir / "in.csv").string();
    cfg.input_kind = InputKind::edges;
    cfg.output = (dir / "out.csv").string();
    std::ostringstream log;
    cmd_ingest(cfg, log);
    CHECK(read_file(dir / "out.csv") == "source,target,weight\r\nb,c,5\r\nz,a,4\r\n");
}

TEST_CASE("analyze writes a complete deterministic bundle") {
    const auto dir = fresh_dir("analyze");
    write_planted_inputs(dir);

    std::ostringstream log1;
    cmd_analyze(planted_config(dir, "out1"), log1);
    std::ostringstream log2;
    cmd_analyze(planted_config(dir, "out2"), log2);

    const auto names = dir_listing(dir / "out1");
    const std::vector<std::string> expected{
        "cluster_sizes.csv",     "clusters.csv",     "indegree_left.csv",
        "indegree_right.csv",    "interaction_matrix.csv",
        "interaction_matrix_raw.csv", "kcore_left.csv",  "kcore_right.csv",
        "lorenz_left.csv",       "lorenz_right.csv", "pagerank.csv",
        "profiles.csv",          "run_manifest.txt", "top_nodes.csv",
        "weak_ties_pagerank.csv",
    };
    CHECK(names == expected);
    CHECK(dir_listing(dir / "out2") == names);
    for (const auto& name : names) {
        CHECK(read_file(dir / "out1" / name) == read_file(dir / "out2" / name));
    }

    // Every node lands in its planted cluster.
    const auto clusters = read_file(dir / "out1" / "clusters.csv");
    CHECK(clusters.find(kUnassignedLabel) == std::string::npos);
    std::istringstream cin(clusters);
    csv::Reader reader(cin);
    reader.next();  // header
    std::size_t rows = 0;
    while (auto row = reader.next()) {
        REQUIRE(row->fields.size() == 3);
        const char family = row->fields[0][0];
        CHECK(row->fields[1] == (family == 'p' ? "left" : "right"));
        CHECK(row->fields[2] == "1.000000");
        ++rows;
    }
    CHECK(rows == 10);

    // Intra traffic dominates each matrix row.
    std::istringstream min(read_file(dir / "out1" / "interaction_matrix.csv"));
    csv::Reader mreader(min);
    const auto header = mreader.next();
    REQUIRE(header.has_value());
    CHECK(header->fields == std::vector<std::string>{"label", "left", "right"});
    const auto left_row = mreader.next();
    REQUIRE(left_row.has_value());
    CHECK(std::stod(left_row->fields[1]) > std::stod(left_row->fields[2]));

    CHECK(log1.str().find("consensus: 2 labels, 10 of 10 nodes assigned") != std::string::npos);

    // The logs match except for the output directory in the final line.
    auto normalized = [](std::string text, const std::string& out_dir) {
        const auto at = text.find(out_dir);
        REQUIRE(at != std::string::npos);
        return text.replace(at, out_dir.size(), "<out>");
    };
    CHECK(normalized(log1.str(), (dir / "out1").string()) ==
          normalized(log2.str(), (dir / "out2").string()));
}

TEST_CASE("the manifest reflects the run but never the worker count") {
    const auto dir = fresh_dir("manifest");
    write_planted_inputs(dir);
    auto cfg = planted_config(dir, "out");
    cfg.workers = 8;
    cfg.ego_nodes = {fx::node_name("p", 0)};
    std::ostringstream log;
    cmd_analyze(cfg, log);

    const auto manifest = read_file(dir / "out" / "run_manifest.txt");
    CHECK(manifest.find("input=") != std::string::npos);
    CHECK(manifest.find("kind=edges\n") != std::string::npos);
    CHECK(manifest.find("input-sha256=") != std::string::npos);
    CHECK(manifest.find("min-weight=1\n") != std::string::npos);
    CHECK(manifest.find("runs=20\n") != std::string::npos);
    CHECK(manifest.find("epsilon=0.05\n") != std::string::npos);
    CHECK(manifest.find("seed=0\n") != std::string::npos);
    CHECK(manifest.find("damping=0.85\n") != std::string::npos);
    CHECK(manifest.find("apl-mode=paper-literal\n") != std::string::npos);
    CHECK(manifest.find("ego=" + fx::node_name("p", 0) + "\n") != std::string::npos);
    CHECK(manifest.find("workers") == std::string::npos);
    CHECK(manifest.find("out=") == std::string::npos);
}

TEST_CASE("a missing anchors file fails before any output exists") {
    const auto dir = fresh_dir("no_anchors");
    write_planted_inputs(dir);
    auto cfg = planted_config(dir, "out");
    cfg.anchors_path = (dir / "nope.csv").string();
    std::ostringstream log;
    CHECK_THROWS_WITH_AS(cmd_analyze(cfg, log), doctest::Contains("nope.csv"), InputError);
    CHECK_FALSE(fs::exists(dir / "out"));
}

TEST_CASE("an unknown ego node fails before any output exists") {
    const auto dir = fresh_dir("bad_ego");
    write_planted_inputs(dir);
    auto cfg = planted_config(dir, "out");
    cfg.ego_nodes = {"who"};
    std::ostringstream log;
    CHECK_THROWS_WITH_AS(cmd_analyze(cfg, log), doctest::Contains("unknown node id: 'who'"),
                         InputError);
    CHECK_FALSE(fs::exists(dir / "out"));
}

TEST_CASE("over-thresholding is reported as having no usable edges") {
    const auto dir = fresh_dir("threshold");
    write_planted_inputs(dir);
    auto cfg = planted_config(dir, "out");
    cfg.min_weight = 99;
    std::ostringstream log;
    CHECK_THROWS_WITH_AS(cmd_analyze(cfg, log),
                         doctest::Contains("no edges reach the minimum weight 99"), Error);
}

TEST_CASE("metrics reproduces the analyze profiles byte for byte") {
    const auto dir = fresh_dir("metrics_match");
    write_planted_inputs(dir);
    std::ostringstream alog;
    cmd_analyze(planted_config(dir, "out"), alog);

    auto cfg = planted_config(dir, "mout");
    std::ostringstream mlog;
    cmd_metrics(cfg, (dir / "out" / "clusters.csv").string(), mlog);
    CHECK(read_file(dir / "mout" / "profiles.csv") == read_file(dir / "out" / "profiles.csv"));
    CHECK(dir_listing(dir / "mout") == std::vector<std::string>{"profiles.csv"});
}

TEST_CASE("metrics with everything unassigned emits only a header and a warning") {
    const auto dir = fresh_dir("metrics_empty");
    write_file(dir / "edges.csv", "source,target,weight\r\na,b,3\r\n");
    std::string clusters = "node_id,label\r\na,__unassigned__\r\nb,__unassigned__\r\n";
    write_file(dir / "clusters.csv", clusters);
    RunConfig cfg;
    cfg.input_path = (dir / "edges.csv").string();
    cfg.input_kind = InputKind::edges;
    cfg.min_weight = 1;
    cfg.output = (dir / "out").string();
    std::ostringstream log;
    cmd_metrics(cfg, (dir / "clusters.csv").string(), log);
    const auto profiles = read_file(dir / "out" / "profiles.csv");
    CHECK(profiles ==
          "label,node_count,edge_count,gini_in,centralization_in,clustering,"
          "apl_paper_literal,apl_reachable_only,k_max,k_avg,k_std\r\n");
    CHECK(log.str().find("all nodes are unassigned") != std::string::npos);
}

TEST_CASE("a single all-covering cluster reports whole-graph numbers") {
    const auto dir = fresh_dir("metrics_whole");
    const auto edges = fx::triangle_with_pendant();
    write_file(dir / "edges.csv", edge_csv_text(edges));
    write_file(dir / "clusters.csv", "node_id,label\r\na,all\r\nb,all\r\nc,all\r\nd,all\r\n");
    RunConfig cfg;
    cfg.input_path = (dir / "edges.csv").string();
    cfg.input_kind = InputKind::edges;
    cfg.min_weight = 1;
    cfg.output = (dir / "out").string();
    std::ostringstream log;
    cmd_metrics(cfg, (dir / "clusters.csv").string(), log);

    const auto g = fx::make_graph(edges);
    std::vector<double> in_degrees;
    for (NodeIndex v = 0; v < g.node_count(); ++v) {
        in_degrees.push_back(static_cast<double>(g.in_degree(v)));
    }
    char expected[512];
    std::snprintf(expected, sizeof expected,
                  "all,4,4,%.6f,%.6f,%.6f,%.6f,%.6f,2,%.6f,%.6f",
                  gini(in_degrees), in_degree_centralization(g),
                  clustering_coefficient(g).average,
                  average_path_length(g, AplMode::paper_literal),
                  average_path_length(g, AplMode::reachable_only),
                  k_core_decomposition(g).k_avg, k_core_decomposition(g).k_std);
    const auto profiles = read_file(dir / "out" / "profiles.csv");
    CHECK(profiles.find(expected) != std::string::npos);
}

TEST_CASE("metrics rejects a clusters file naming unknown nodes") {
    const auto dir = fresh_dir("metrics_unknown");
    write_file(dir / "edges.csv", "source,target,weight\r\na,b,3\r\n");
    write_file(dir / "clusters.csv", "node_id,label\r\na,x\r\nmystery,x\r\n");
    RunConfig cfg;
    cfg.input_path = (dir / "edges.csv").string();
    cfg.input_kind = InputKind::edges;
    cfg.min_weight = 1;
    cfg.output = (dir / "out").string();
    std::ostringstream log;
    CHECK_THROWS_WITH_AS(cmd_metrics(cfg, (dir / "clusters.csv").string(), log),
                         doctest::Contains("unknown node ids: mystery"), InputError);
    CHECK_FALSE(fs::exists(dir / "out"));
}

TEST_CASE("ego bundles export the neighborhood edge lists") {
    const auto dir = fresh_dir("ego_files");
    write_planted_inputs(dir);
    auto cfg = planted_config(dir, "out");
    const auto center = fx::node_name("p", 0);
    cfg.ego_nodes = {center};
    std::ostringstream log;
    cmd_analyze(cfg, log);
    const auto ego_csv = read_file(dir / "out" / ("ego_" + center + ".csv"));
    // p0000 touches the whole left clique and the bridge head q0000.
    CHECK(ego_csv.find("source,target,weight") == 0);
    CHECK(ego_csv.find(center + "," + fx::node_name("q", 0) + ",1") != std::string::npos);
    CHECK(ego_csv.find(fx::node_name("p", 1) + "," + fx::node_name("p", 2) + ",3") !=
          std::string::npos);
}
