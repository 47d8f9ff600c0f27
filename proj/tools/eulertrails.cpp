#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "eult/counting.hpp"
#include "eult/explore.hpp"
#include "eult/multigraph.hpp"
#include "eult/state_tree.hpp"
#include "eult/testkit.hpp"

namespace {

constexpr int kExitFeasible = 0;
constexpr int kExitInfeasible = 1;
constexpr int kExitUsage = 2;

std::string read_input(const std::string& path) {
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open input file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

eult::TrailMode parse_mode(const std::string& mode) {
    if (mode == "simple") return eult::TrailMode::Simple;
    if (mode == "edge-distinct") return eult::TrailMode::EdgeDistinct;
    if (mode == "node-distinct") return eult::TrailMode::NodeDistinct;
    throw std::runtime_error("unknown mode: " + mode);
}

std::optional<eult::NodeId> resolve_start(const eult::Multigraph& g,
                                          const std::string& start) {
    if (start.empty()) return std::nullopt;
    const auto id = g.find_node(start);
    if (!id) throw std::runtime_error("start node not in graph: " + start);
    return id;
}

double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                     t0)
        .count();
}

int cmd_check(const std::string& input, const std::string& start) {
    const eult::Multigraph g = eult::parse_edge_list(read_input(input));
    const eult::EulerInfo info = eult::check_eulerian(g, resolve_start(g, start));
    if (!info.feasible) {
        std::cout << "infeasible: " << info.reason << "\n";
        std::cout << "n=" << g.node_count() << " m=" << g.total_multiplicity() << "\n";
        return kExitInfeasible;
    }
    if (info.kind == eult::TrailKind::Circuit)
        std::cout << "feasible circuit, start " << g.name(info.source) << "\n";
    else
        std::cout << "feasible open trail, start " << g.name(info.source) << ", end "
                  << g.name(info.target) << "\n";
    std::cout << "n=" << g.node_count() << " m=" << g.total_multiplicity() << "\n";
    return kExitFeasible;
}

int cmd_count(const std::string& input, const std::string& mode_str,
              const std::string& counter, const std::string& start,
              std::optional<int64_t> max_trails, int64_t cap, bool validate) {
    const eult::TrailMode mode = parse_mode(mode_str);
    const eult::Multigraph g =
        eult::parse_edge_list(read_input(input), mode == eult::TrailMode::Simple);
    const auto start_id = resolve_start(g, start);
    const eult::EulerInfo info = eult::check_eulerian(g, start_id);
    if (!info.feasible) {
        std::cerr << "infeasible: " << info.reason << "\n";
        return kExitInfeasible;
    }

    if (counter == "best") {
        if (mode == eult::TrailMode::NodeDistinct)
            throw std::runtime_error(
                "counter=best has no node-distinct form; use counter=enumerate");
        eult::BigCount z;
        if (mode == eult::TrailMode::EdgeDistinct) {
            const eult::SubdivisionResult sub = eult::subdivide(g);
            z = eult::count_best(sub.graph, eult::check_eulerian(sub.graph, start_id));
        } else {
            z = eult::count_best(g, info);
        }
        std::cout << z.get_str() << "\n";
        return kExitFeasible;
    }
    if (counter == "enumerate") {
        eult::EnumerateOptions opt;
        opt.max_trails = max_trails;
        opt.start = start_id;
        opt.validate = validate;
        const eult::EnumerationResult res = eult::enumerate_trails(g, mode, opt);
        std::cout << res.tree.leaf_count;
        if (res.cap_reached) std::cout << " (cap reached)";
        std::cout << "\n";
        return kExitFeasible;
    }
    if (counter == "brute") {
        const eult::TrailMode m =
            mode == eult::TrailMode::Simple ? eult::TrailMode::EdgeDistinct : mode;
        std::cout << eult::brute_force_trail_count(g, info.source, m, cap).get_str()
                  << "\n";
        return kExitFeasible;
    }
    throw std::runtime_error("unknown counter: " + counter);
}

int cmd_enumerate(const std::string& input, const std::string& mode_str,
                  const std::string& format, const std::string& start,
                  std::optional<int64_t> max_trails, bool validate) {
    const eult::TrailMode mode = parse_mode(mode_str);
    const eult::Multigraph g =
        eult::parse_edge_list(read_input(input), mode == eult::TrailMode::Simple);
    const auto start_id = resolve_start(g, start);
    const eult::EulerInfo info = eult::check_eulerian(g, start_id);
    if (!info.feasible) {
        std::cerr << "infeasible: " << info.reason << "\n";
        return kExitInfeasible;
    }

    eult::EnumerateOptions opt;
    opt.max_trails = max_trails;
    opt.start = start_id;
    opt.validate = validate;
    const eult::EnumerationResult res = eult::enumerate_trails(g, mode, opt);

    if (format == "count") {
        std::cout << res.tree.leaf_count;
        if (res.cap_reached) std::cout << " (cap reached)";
        std::cout << "\n";
    } else if (format == "trails-edges") {
        eult::for_each_trail(res, [&](const std::vector<int32_t>& t) {
            std::cout << eult::trail_to_edge_tokens(t) << "\n";
        });
    } else if (format == "trails-nodes") {
        if (mode == eult::TrailMode::NodeDistinct) {
            eult::for_each_trail(res, [&](const std::vector<int32_t>& t) {
                std::cout << eult::trail_to_node_names(res, t) << "\n";
            });
        } else {
            // Copy-id trails rendered as node names over the input graph.
            eult::for_each_trail(res, [&](const std::vector<int32_t>& t) {
                std::string line = g.name(info.source);
                for (int32_t c : t) {
                    line += ' ';
                    line += g.name(g.edge(g.copy_edge(c)).head);
                }
                std::cout << line << "\n";
            });
        }
    } else if (format == "trie") {
        std::cout << eult::trie_emit(res, eult::TrieFormat::Expanded);
    } else if (format == "trie-shared") {
        std::cout << eult::trie_emit(res, eult::TrieFormat::Shared);
    } else if (format == "dot") {
        std::cout << eult::dot_export(res);
    } else {
        throw std::runtime_error("unknown format: " + format);
    }
    return kExitFeasible;
}

int cmd_bench(int32_t gen_n, int32_t gen_cycles, uint64_t seed,
              std::optional<int64_t> max_trails, const std::string& mode_str) {
    eult::GenSpec spec;
    spec.nodes = gen_n;
    spec.cycles = gen_cycles;
    spec.seed = seed;
    spec.min_cycle_len = 3;
    spec.max_cycle_len = 12;
    const eult::Multigraph generated = eult::gen_random_eulerian(spec);
    const std::string text = eult::write_edge_list(generated);

    const auto t0 = std::chrono::steady_clock::now();
    const eult::Multigraph g = eult::parse_edge_list(text);
    const double parse_ms = ms_since(t0);

    const eult::EulerInfo info = eult::check_eulerian(g);
    const auto t1 = std::chrono::steady_clock::now();
    eult::LabelArena arena;
    eult::StepCounters build_counters;
    const eult::CompressedGraph cg = eult::build_compressed(
        g, info,
        mode_str == "node-distinct" ? eult::EngineMode::NodeDistinct
                                    : eult::EngineMode::Simple,
        arena, build_counters);
    const double build_ms = ms_since(t1);
    (void)cg;

    eult::EnumerateOptions opt;
    opt.max_trails = max_trails;
    const auto t2 = std::chrono::steady_clock::now();
    const eult::EnumerationResult res = eult::enumerate_trails(
        g, parse_mode(mode_str == "simple" && !g.is_simple() ? "node-distinct" : mode_str),
        opt);
    const double enum_ms = ms_since(t2);

    const auto& c = res.counters;
    const double ratio =
        static_cast<double>(c.walker_steps + c.journal_entries) /
        static_cast<double>(g.total_multiplicity() + c.leaves_emitted);
    std::cout << "n=" << g.node_count() << " m=" << g.total_multiplicity()
              << " leaves=" << c.leaves_emitted << "\n";
    std::cout << "parse_ms=" << parse_ms << " build_ms=" << build_ms
              << " enumerate_ms=" << enum_ms << "\n";
    std::cout << "walker_steps=" << c.walker_steps
              << " journal_entries=" << c.journal_entries
              << " transitions=" << c.transitions_created << "\n";
    std::cout << "ratio=" << ratio << "\n";
    return kExitFeasible;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Eulerian trail enumeration, counting and checking on directed multigraphs"};
    app.require_subcommand(1);

    std::string input = "-";
    std::string mode = "simple";
    std::string format = "trails-edges";
    std::string counter = "best";
    std::string start;
    int64_t max_trails_raw = -1;
    int64_t cap = 14;
    uint64_t seed = 1;
    int32_t gen_n = 100;
    int32_t gen_cycles = 50;
    bool validate = false;

    auto* check = app.add_subcommand("check", "report Eulerian feasibility");
    check->add_option("input", input, "edge-list file or - for stdin");
    check->add_option("--start", start, "requested start node");

    auto* count = app.add_subcommand("count", "count Eulerian trails exactly");
    count->add_option("input", input, "edge-list file or - for stdin");
    count->add_option("--mode", mode, "simple|edge-distinct|node-distinct");
    count->add_option("--counter", counter, "best|enumerate|brute");
    count->add_option("--start", start, "start node");
    count->add_option("--max-trails", max_trails_raw, "stop after this many trails");
    count->add_option("--cap", cap, "unit cap for counter=brute");
    count->add_flag("--validate", validate, "run slow internal oracle checks");

    auto* enumerate = app.add_subcommand("enumerate", "enumerate Eulerian trails");
    enumerate->add_option("input", input, "edge-list file or - for stdin");
    enumerate->add_option("--mode", mode, "simple|edge-distinct|node-distinct");
    enumerate->add_option("--format", format,
                          "trails-edges|trails-nodes|trie|trie-shared|count|dot");
    enumerate->add_option("--start", start, "start node");
    enumerate->add_option("--max-trails", max_trails_raw, "emit at most this many trails");
    enumerate->add_flag("--validate", validate, "run slow internal oracle checks");

    auto* bench = app.add_subcommand("bench", "generate an instance and time enumeration");
    bench->add_option("--gen-n", gen_n, "node count of the generated instance");
    bench->add_option("--gen-cycles", gen_cycles, "number of superimposed cycles");
    bench->add_option("--seed", seed, "generator seed");
    bench->add_option("--max-trails", max_trails_raw, "leaf budget");
    bench->add_option("--mode", mode, "simple|edge-distinct|node-distinct");

    CLI11_PARSE(app, argc, argv);

    std::optional<int64_t> max_trails;
    if (max_trails_raw >= 0) max_trails = max_trails_raw;
    if (app.count_all() && max_trails_raw == 0) {
        std::cerr << "error: --max-trails must be at least 1\n";
        return kExitUsage;
    }

    try {
        if (check->parsed()) return cmd_check(input, start);
        if (count->parsed())
            return cmd_count(input, mode, counter, start, max_trails, cap, validate);
        if (enumerate->parsed())
            return cmd_enumerate(input, mode, format, start, max_trails, validate);
        if (bench->parsed()) return cmd_bench(gen_n, gen_cycles, seed, max_trails, mode);
    } catch (const eult::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
