// regkit command-line tool: graph/matrix generation, greedy regularity
// decompositions, matrix norms, and graph-partition theorem verification
// with deterministic JSON reports.

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "regkit/engine.hpp"
#include "regkit/errors.hpp"
#include "regkit/generators.hpp"
#include "regkit/graph.hpp"
#include "regkit/graphreg.hpp"
#include "regkit/json_io.hpp"
#include "regkit/oracle.hpp"
#include "regkit/svd.hpp"

namespace {

using namespace regkit;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitBudget = 3;
constexpr int kExitConvergence = 4;
constexpr int kExitBoundViolation = 5;

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double elapsed_ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
    }
};

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path, 0);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Matrix files carry a "rows cols" header followed by `rows` full numeric
// rows; edge lists carry "n m" followed by m integer pairs. Parsing decides.
Matrix load_matrix_input(const std::string& path) {
    const std::string text = read_file(path);
    std::string matrix_err;
    {
        std::istringstream in(text);
        try {
            return read_matrix(in);
        } catch (const ParseError& e) {
            matrix_err = e.what();
        }
    }
    std::istringstream in(text);
    try {
        return read_graph(in).adjacency;
    } catch (const ParseError& e) {
        throw ParseError("not a matrix (" + matrix_err + ") nor an edge list (" + e.what() + ")",
                         e.line);
    }
}

Graph load_graph_input(const std::string& path) {
    const std::string text = read_file(path);
    std::string graph_err;
    {
        std::istringstream in(text);
        try {
            return read_graph(in);
        } catch (const ParseError& e) {
            graph_err = e.what();
        }
    }
    std::istringstream in(text);
    try {
        Matrix m = read_matrix(in);
        return Graph(m.rows(), std::move(m));
    } catch (const std::exception& e) {
        throw ParseError("not an edge list (" + graph_err + ") nor an adjacency matrix (" +
                             e.what() + ")",
                         0);
    }
}

CutSearchMode parse_mode(const std::string& mode) {
    if (mode == "exact") return CutSearchMode::Exact;
    if (mode == "heuristic") return CutSearchMode::Heuristic;
    throw CLI::ValidationError("--mode must be exact or heuristic");
}

void emit_report(const Json& report, const std::string& json_path) {
    if (json_path.empty()) return;
    std::ofstream out(json_path);
    if (!out) throw ParseError("cannot open " + json_path + " for writing", 0);
    write_json(out, report);
}

// ---------------------------------------------------------------- gen

struct GenArgs {
    std::string kind;
    int n = 10;
    double p = 0.5;
    int a = 3, b = 3, k = 2;
    double p_in = 0.7, p_out = 0.1;
    std::uint64_t seed = 0;
    std::string out_path;
};

int run_gen(const GenArgs& args) {
    Graph g;
    if (args.kind == "gnp") {
        g = gen_gnp(args.n, args.p, args.seed);
    } else if (args.kind == "complete-bipartite") {
        g = gen_complete_bipartite(args.a, args.b);
    } else if (args.kind == "planted-partition") {
        g = gen_planted_partition(args.n, args.k, args.p_in, args.p_out, args.seed);
    } else {
        throw CLI::ValidationError("--kind must be gnp, complete-bipartite or planted-partition");
    }
    if (args.out_path.empty()) {
        write_graph(std::cout, g);
    } else {
        write_graph_file(args.out_path, g);
        std::cout << "wrote " << args.out_path << " (" << g.n << " nodes, " << g.edge_count()
                  << " edges)\n";
    }
    return kExitOk;
}

// ---------------------------------------------------------------- decompose

struct DecomposeArgs {
    std::string in_path;
    std::string atoms = "cut";
    std::string mode = "exact";
    double epsilon = 0.5;
    std::string f_spec = "const:1";
    std::uint64_t seed = 0;
    int restarts = 32;
    int threads = 1;
    std::string json_path;
    bool timing = false;
};

int run_decompose(const DecomposeArgs& args) {
    const Timer timer;
    if (args.epsilon <= 0.0) throw CLI::ValidationError("--epsilon must be positive");
    const GrowthFunction f = GrowthFunction::parse(args.f_spec);
    const Matrix a = load_matrix_input(args.in_path);

    EngineOptions opts;
    opts.heuristic_restarts = args.restarts;

    RegularityResult result;
    if (args.atoms == "rank") {
        result = strong_decompose_rank(a, args.epsilon, f, args.seed, opts);
    } else if (args.atoms == "cut") {
        result = strong_decompose_cut(a, args.epsilon, f, parse_mode(args.mode), args.seed, opts);
    } else {
        throw CLI::ValidationError("--atoms must be rank or cut");
    }

    Json report;
    report["command"] = "decompose";
    report["input"] = Json{{"path", args.in_path}};
    // --threads is an execution detail; reports must be byte-identical
    // under thread-count variation, so it is not echoed.
    report["params"] = Json{{"atoms", args.atoms},     {"mode", args.mode},
                            {"epsilon", args.epsilon}, {"f", f.spec()},
                            {"seed", args.seed},       {"restarts", args.restarts}};
    report["engine"] = trace_to_json(result);
    report["residual_frobenius"] = frobenius_norm(a - result.a_hat);
    CheckResult witness;
    witness.name = "k_witness_le_f_iterate";
    witness.measured = static_cast<double>(result.k_witness);
    const SatCount bound = f_iterate(f, static_cast<int>(result.trace.rounds.size()));
    witness.bound = bound.saturated ? std::numeric_limits<double>::max()
                                    : static_cast<double>(bound.value);
    witness.bound_saturated = bound.saturated;
    witness.pass = sat_at_most(static_cast<std::uint64_t>(result.k_witness), bound);
    report["checks"] = checks_to_json({witness});
    if (args.timing) report["wall_time_ms"] = timer.elapsed_ms();
    emit_report(report, args.json_path);

    std::cout << "mode=" << result.mode << " rounds=" << result.trace.rounds.size()
              << " k_witness=" << result.k_witness << " certificate="
              << (result.halting_certificate == HaltingCertificate::Exact ? "exact" : "greedy")
              << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------- norms

struct NormsArgs {
    std::string in_path;
    std::string which = "frob";
    std::string mode = "exact";
    int restarts = 32;
    std::uint64_t seed = 0;
    std::string json_path;
};

int run_norms(const NormsArgs& args) {
    const Matrix a = load_matrix_input(args.in_path);

    std::string name = args.which;
    int k = 0;
    if (name.rfind("fk:", 0) == 0) {
        k = std::stoi(name.substr(3));
        name = "fk";
    } else if (name.rfind("cutk:", 0) == 0) {
        k = std::stoi(name.substr(5));
        name = "cutk";
    }

    double value = 0.0;
    if (name == "frob") {
        value = frobenius_norm(a);
    } else if (name == "fk") {
        if (k < 1) throw CLI::ValidationError("fk:k requires k >= 1");
        value = f_top_k_norm(a, k, args.seed);
    } else if (name == "cut1") {
        value = (parse_mode(args.mode) == CutSearchMode::Exact)
                    ? cut_norm_exact(a).value
                    : cut_norm_heuristic(a, args.restarts, args.seed).value;
    } else if (name == "cutk") {
        if (k < 1) throw CLI::ValidationError("cutk:k requires k >= 1");
        if (parse_mode(args.mode) != CutSearchMode::Exact)
            throw CLI::ValidationError("cutk is only available in exact mode");
        value = black_square_norm_exact(a, k);
    } else if (name == "classical") {
        if (parse_mode(args.mode) != CutSearchMode::Exact)
            throw CLI::ValidationError("classical is only available in exact mode");
        value = classical_cut_norm(a);
    } else {
        throw CLI::ValidationError("--which must be frob, fk:k, cut1, cutk:k or classical");
    }

    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    std::cout << args.which << " " << buf << "\n";

    Json report;
    report["command"] = "norms";
    report["input"] = Json{{"path", args.in_path}};
    report["params"] = Json{{"which", args.which},
                            {"mode", args.mode},
                            {"restarts", args.restarts},
                            {"seed", args.seed}};
    report["values"] = Json{{args.which, value}};
    emit_report(report, args.json_path);
    return kExitOk;
}

// ---------------------------------------------------------------- verify

struct VerifyArgs {
    std::string in_path;
    std::string theorem;
    double epsilon = 0.5;
    std::string mode = "exact";
    std::uint64_t seed = 0;
    int threads = 1;
    int max_pair_side = 12;
    int samples = 10000;
    std::string json_path;
    bool timing = false;
};

int run_verify(const VerifyArgs& args) {
    const Timer timer;
    if (args.epsilon <= 0.0) throw CLI::ValidationError("--epsilon must be positive");
    const Graph g = load_graph_input(args.in_path);
    const CutSearchMode mode = parse_mode(args.mode);

    VerifyOptions opts;
    opts.threads = args.threads;
    opts.discrepancy.max_side = args.max_pair_side;

    Json report;
    report["command"] = "verify";
    report["input"] = Json{{"path", args.in_path}};
    report["params"] = Json{{"theorem", args.theorem},
                            {"epsilon", args.epsilon},
                            {"mode", args.mode},
                            {"seed", args.seed},
                            {"max_pair_side", args.max_pair_side},
                            {"samples", args.samples}};

    bool pass = false;
    if (args.theorem == "weak-graph") {
        const CompressOutcome out = compress(g, args.epsilon, mode, args.seed);
        std::vector<CheckResult> checks;
        const double n2 = static_cast<double>(g.n) * g.n;
        double max_err = 0.0;
        bool exhaustive = g.n <= 12;
        if (exhaustive) {
            max_err = oracle::exhaustive_estimate_error(g, out.compressed);
        } else {
            max_err = max_sampled_estimate_error(g, out.compressed, args.samples, args.seed);
        }
        checks.push_back({exhaustive ? "max_error_exhaustive_lt_eps_n2"
                                     : "max_error_sampled_lt_eps_n2",
                          max_err, args.epsilon * n2, false, max_err < args.epsilon * n2});
        const auto ceil_eps = static_cast<std::uint64_t>(std::ceil(1.0 / (args.epsilon * args.epsilon)));
        const SatCount size_bound = sat_pow(4, {ceil_eps, false});
        checks.push_back(
            {"partition_size_le_4_pow_ceil_eps_minus2",
             static_cast<double>(out.compressed.partition.part_count),
             size_bound.saturated ? std::numeric_limits<double>::max()
                                  : static_cast<double>(size_bound.value),
             size_bound.saturated,
             sat_at_most(static_cast<std::uint64_t>(out.compressed.partition.part_count),
                         size_bound)});

        report["engine"] = trace_to_json(out.engine);
        report["partition"] = partition_to_json(out.compressed.partition);
        Json c_rows = Json::array();
        for (int i = 0; i < out.compressed.c.rows(); ++i) {
            Json row = Json::array();
            for (int j = 0; j < out.compressed.c.cols(); ++j)
                row.push_back(out.compressed.c.at(i, j));
            c_rows.push_back(std::move(row));
        }
        report["c"] = std::move(c_rows);
        report["checks"] = checks_to_json(checks);
        pass = checks[0].pass && checks[1].pass;
    } else {
        VerifyOutcome out;
        if (args.theorem == "disc") {
            out = verify_szemeredi_disc(g, args.epsilon, mode, args.seed, opts);
        } else if (args.theorem == "irregular") {
            out = verify_irregularity(g, args.epsilon, mode, args.seed, opts);
        } else if (args.theorem == "exceptional") {
            out = verify_exceptional(g, args.epsilon, mode, args.seed, opts);
        } else {
            throw CLI::ValidationError(
                "--theorem must be weak-graph, disc, irregular or exceptional");
        }
        report["engine"] = trace_to_json(out.engine);
        report["partition"] = partition_to_json(out.partition);
        report["report"] = report_to_json(out.report);
        pass = out.report.all_pass();
    }

    report["pass"] = pass;
    if (args.timing) report["wall_time_ms"] = timer.elapsed_ms();
    emit_report(report, args.json_path);

    std::cout << "theorem=" << args.theorem << " pass=" << (pass ? "true" : "false") << "\n";
    if (!pass) {
        std::cerr << "bound violation: a theorem check failed; this indicates a bug\n";
        return kExitBoundViolation;
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"linear-algebraic regularity decompositions and graph partitions"};
    app.require_subcommand(1);

    GenArgs gen;
    CLI::App* gen_cmd = app.add_subcommand("gen", "generate a graph edge list");
    gen_cmd->add_option("--kind", gen.kind, "gnp | complete-bipartite | planted-partition")
        ->required();
    gen_cmd->add_option("--n", gen.n, "node count");
    gen_cmd->add_option("--p", gen.p, "edge probability (gnp)");
    gen_cmd->add_option("--a", gen.a, "left part size (complete-bipartite)");
    gen_cmd->add_option("--b", gen.b, "right part size (complete-bipartite)");
    gen_cmd->add_option("--k", gen.k, "group count (planted-partition)");
    gen_cmd->add_option("--p-in", gen.p_in, "in-group edge probability");
    gen_cmd->add_option("--p-out", gen.p_out, "cross-group edge probability");
    gen_cmd->add_option("--seed", gen.seed, "random seed");
    gen_cmd->add_option("--out", gen.out_path, "output path (stdout when omitted)");

    DecomposeArgs dec;
    CLI::App* dec_cmd = app.add_subcommand("decompose", "run a greedy regularity decomposition");
    dec_cmd->add_option("--in", dec.in_path, "matrix or edge-list file")->required();
    dec_cmd->add_option("--atoms", dec.atoms, "rank | cut");
    dec_cmd->add_option("--mode", dec.mode, "exact | heuristic (cut atoms)");
    dec_cmd->add_option("--epsilon", dec.epsilon, "error parameter")->required();
    dec_cmd->add_option("--f", dec.f_spec, "growth function const:c | exp:b | scaledexp:a:b");
    dec_cmd->add_option("--seed", dec.seed, "random seed");
    dec_cmd->add_option("--restarts", dec.restarts, "heuristic search restarts");
    dec_cmd->add_option("--threads", dec.threads, "worker threads");
    dec_cmd->add_option("--json", dec.json_path, "write the JSON report here");
    dec_cmd->add_flag("--timing", dec.timing, "include wall_time_ms in the report");

    NormsArgs norms;
    CLI::App* norms_cmd = app.add_subcommand("norms", "compute matrix norms");
    norms_cmd->add_option("--in", norms.in_path, "matrix or edge-list file")->required();
    norms_cmd->add_option("--which", norms.which, "frob | fk:k | cut1 | cutk:k | classical")
        ->required();
    norms_cmd->add_option("--mode", norms.mode, "exact | heuristic");
    norms_cmd->add_option("--restarts", norms.restarts, "heuristic search restarts");
    norms_cmd->add_option("--seed", norms.seed, "random seed");
    norms_cmd->add_option("--json", norms.json_path, "write the JSON report here");

    VerifyArgs ver;
    CLI::App* ver_cmd = app.add_subcommand("verify", "verify a regularity theorem on a graph");
    ver_cmd->add_option("--in", ver.in_path, "edge-list file")->required();
    ver_cmd->add_option("--theorem", ver.theorem, "weak-graph | disc | irregular | exceptional")
        ->required();
    ver_cmd->add_option("--epsilon", ver.epsilon, "error parameter")->required();
    ver_cmd->add_option("--mode", ver.mode, "exact | heuristic");
    ver_cmd->add_option("--seed", ver.seed, "random seed");
    ver_cmd->add_option("--threads", ver.threads, "worker threads for pair discrepancies");
    ver_cmd->add_option("--max-pair-side", ver.max_pair_side, "exact discrepancy side budget");
    ver_cmd->add_option("--samples", ver.samples, "sampled (S,T) pairs when n > 12");
    ver_cmd->add_option("--json", ver.json_path, "write the JSON report here");
    ver_cmd->add_flag("--timing", ver.timing, "include wall_time_ms in the report");

    try {
        app.parse(argc, argv);
        if (gen_cmd->parsed()) return run_gen(gen);
        if (dec_cmd->parsed()) return run_decompose(dec);
        if (norms_cmd->parsed()) return run_norms(norms);
        if (ver_cmd->parsed()) return run_verify(ver);
        return kExitUsage;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    } catch (const BudgetExceededError& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return kExitBudget;
    } catch (const ConvergenceError& e) {
        std::cerr << "convergence failure: " << e.what() << "\n";
        return kExitConvergence;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const DomainError& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitUsage;
    } catch (const DimensionError& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
