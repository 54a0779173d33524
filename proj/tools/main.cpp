#include <exception>
#include <filesystem>
#include <iostream>
#include <string>
#include <thread>

#include "CLI11.hpp"

#include "invsim/errors.hpp"
#include "invsim/graph.hpp"
#include "invsim/ingest.hpp"
#include "invsim/inv_sim.hpp"
#include "invsim/oracle.hpp"
#include "invsim/ranking.hpp"

// Exit codes: 0 success, 1 usage error, 2 input parse/validation error,
// 3 internal invariant violation. Reports go to stdout, diagnostics to stderr.

namespace {

struct RunConfig {
    std::string graph_nodes;
    std::string graph_edges;
    std::string query_path;
    std::string spec_path;
    std::string out_dir;
    std::size_t top_k = 20;
    std::size_t hop_bound = 2;
    std::string format = "json";
    std::string stats_format = "both";
    std::string mode = "investigative";
    std::string secondary = "relevant-size";
    bool oracle = false;
    unsigned threads = 0;  // 0 = all available
};

int cmd_match(const RunConfig& cfg) {
    if (cfg.top_k < 1) throw invsim::UsageError("--top-k must be at least 1");
    if (cfg.hop_bound < 1) throw invsim::UsageError("--hops must be at least 1");
    const invsim::ReportFormat format = invsim::parse_report_format(cfg.format);

    invsim::SecondaryKey secondary;
    if (cfg.secondary == "relevant-size") {
        secondary = invsim::SecondaryKey::relevant_size;
    } else if (cfg.secondary == "jaccard") {
        secondary = invsim::SecondaryKey::jaccard;
    } else {
        throw invsim::UsageError("unknown --secondary \"" + cfg.secondary +
                                 "\": expected \"relevant-size\" or \"jaccard\"");
    }

    unsigned threads = cfg.threads != 0 ? cfg.threads : std::thread::hardware_concurrency();
    if (threads == 0) threads = 1;

    const invsim::LabeledGraph g = invsim::load_graph(cfg.graph_nodes, cfg.graph_edges);
    const invsim::QueryGraph q = invsim::load_query(cfg.query_path);

    const invsim::InvSimResult result = invsim::investigative_match(q, g, cfg.hop_bound, threads);
    const auto matches = invsim::group_results(q, g, result);
    const auto ranked = invsim::rank_top_k(matches, cfg.top_k, secondary);
    const std::string report = invsim::serialize_report(ranked, q, g, format);

    if (cfg.oracle) {
        const auto expected = invsim::oracle::exhaustive_partial_search(
            q, g, cfg.hop_bound, invsim::oracle::SizeGuard::bypass);
        if (expected == result.survivors) {
            std::cerr << "oracle agreement: exact\n";
        } else {
            std::cerr << "oracle disagreement: engine kept " << result.survivors.size()
                      << " survivor(s), reference kept " << expected.size() << "\n";
            throw invsim::Error("oracle disagreement on survivors/relevant sets");
        }
    }

    std::cout << report;
    std::cerr << "survivors: " << result.survivors.size() << ", reported: " << ranked.size()
              << " (dual pairs: " << result.dual.pair_count() << ")\n";
    return 0;
}

int cmd_validate(const RunConfig& cfg) {
    invsim::MatchMode mode;
    if (cfg.mode == "dual") {
        mode = invsim::MatchMode::dual;
    } else if (cfg.mode == "investigative") {
        mode = invsim::MatchMode::investigative;
    } else {
        throw invsim::UsageError("unknown --mode \"" + cfg.mode +
                                 "\": expected \"dual\" or \"investigative\"");
    }

    const invsim::QueryGraph q = invsim::load_query(cfg.query_path);
    const invsim::ValidationReport report = invsim::validate_query(q, mode);

    std::cout << "query: " << cfg.query_path << "\n";
    std::cout << "mode: " << cfg.mode << "\n";
    for (const std::string& v : report.violations) std::cout << "violation: " << v << "\n";
    for (const std::string& w : report.warnings) std::cout << "warning: " << w << "\n";
    std::cout << "result: " << (report.ok ? "OK" : "INVALID") << "\n";
    return report.ok ? 0 : 2;
}

int cmd_stats(const RunConfig& cfg) {
    if (cfg.stats_format != "table" && cfg.stats_format != "json" &&
        cfg.stats_format != "both") {
        throw invsim::UsageError("unknown --format \"" + cfg.stats_format +
                                 "\": expected \"table\", \"json\" or \"both\"");
    }
    const invsim::LabeledGraph g = invsim::load_graph(cfg.graph_nodes, cfg.graph_edges);
    const invsim::GraphStats stats = invsim::compute_stats(g);
    if (cfg.stats_format == "table" || cfg.stats_format == "both") {
        std::cout << invsim::stats_table(stats);
    }
    if (cfg.stats_format == "json" || cfg.stats_format == "both") {
        std::cout << invsim::stats_json(stats);
    }
    return 0;
}

int cmd_gen(const RunConfig& cfg) {
    const invsim::oracle::GenSpec spec = invsim::oracle::load_genspec(cfg.spec_path);
    const invsim::oracle::GeneratedInstance instance = invsim::oracle::generate_graph(spec);

    const std::filesystem::path out(cfg.out_dir);
    std::error_code ec;
    std::filesystem::create_directories(out, ec);
    if (ec) {
        throw invsim::ParseError(out.string(), "cannot create output directory: " + ec.message());
    }

    invsim::save_graph(instance.graph, out / "nodes.tsv", out / "edges.tsv");
    invsim::save_query(instance.query, out / "query.json");
    invsim::oracle::save_ground_truth(instance.truth, out / "truth.json");

    std::cerr << "wrote " << (out / "nodes.tsv").string() << " (" << instance.graph.node_count()
              << " nodes)\n";
    std::cerr << "wrote " << (out / "edges.tsv").string() << " (" << instance.graph.edge_count()
              << " edges)\n";
    std::cerr << "wrote " << (out / "query.json").string() << " ("
              << instance.query.node_count() << " query nodes)\n";
    std::cerr << "wrote " << (out / "truth.json").string() << " (" << instance.truth.anchor_count
              << " anchors, " << instance.truth.survivor_count << " survivors)\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Graph pattern search with partial-match completion and ranked reporting"};
    app.require_subcommand(1);
    RunConfig cfg;

    CLI::App* match = app.add_subcommand("match", "Run a query and print the ranked report");
    match->add_option("--graph-nodes", cfg.graph_nodes, "Node TSV (id<TAB>label)")->required();
    match->add_option("--graph-edges", cfg.graph_edges, "Edge TSV (src<TAB>dst[<TAB>label])")
        ->required();
    match->add_option("--query", cfg.query_path, "Query JSON file")->required();
    match->add_option("--top-k", cfg.top_k, "Number of results to report (default 20)");
    match->add_option("--hops", cfg.hop_bound, "Hop bound for relevant sets (default 2)");
    match->add_option("--format", cfg.format, "Report format: json or tsv (default json)");
    match->add_option("--secondary", cfg.secondary,
                      "Secondary rank key: relevant-size or jaccard (default relevant-size)");
    match->add_flag("--oracle", cfg.oracle,
                    "Cross-check survivors against the brute-force reference");
    match->add_option("--threads", cfg.threads, "Worker threads (default: all available)");

    CLI::App* validate = app.add_subcommand("validate", "Validate a query file");
    validate->add_option("--query", cfg.query_path, "Query JSON file")->required();
    validate->add_option("--mode", cfg.mode, "dual or investigative (default investigative)");

    CLI::App* stats = app.add_subcommand("stats", "Print graph statistics");
    stats->add_option("--graph-nodes", cfg.graph_nodes, "Node TSV")->required();
    stats->add_option("--graph-edges", cfg.graph_edges, "Edge TSV")->required();
    stats->add_option("--format", cfg.stats_format, "table, json or both (default both)");

    CLI::App* gen = app.add_subcommand("gen", "Generate a synthetic instance from a spec");
    gen->add_option("--spec", cfg.spec_path, "Generator spec JSON file")->required();
    gen->add_option("--out-dir", cfg.out_dir, "Output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);  // prints help or the error itself
        return rc == 0 ? 0 : 1;
    }

    try {
        if (match->parsed()) return cmd_match(cfg);
        if (validate->parsed()) return cmd_validate(cfg);
        if (stats->parsed()) return cmd_stats(cfg);
        if (gen->parsed()) return cmd_gen(cfg);
        throw invsim::UsageError("no command given");
    } catch (const invsim::UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const invsim::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const invsim::BuildError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const invsim::QueryValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
}
