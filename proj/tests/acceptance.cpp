// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one [PASS]/[FAIL] line per criterion. Exit code is the number
// of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "regkit/engine.hpp"
#include "regkit/generators.hpp"
#include "regkit/graphreg.hpp"
#include "regkit/json_io.hpp"
#include "regkit/oracle.hpp"
#include "regkit/rng.hpp"
#include "regkit/svd.hpp"
#include "test_util.hpp"

using namespace regkit;

namespace {

struct Checker {
    int failures = 0;
    std::string first_failure;
    void require(bool ok, const std::string& what) {
        if (!ok) {
            ++failures;
            if (first_failure.empty()) first_failure = what;
        }
    }
};

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// ------------------------------------------------------------------ battery

struct BatteryEntry {
    Matrix a;
    double eps;
    std::vector<RegularityResult> results; // all six engine modes
    const RegularityResult* weak_rank = nullptr;
    const RegularityResult* weak_cut_exact = nullptr;
    const RegularityResult* strong_rank = nullptr;
};

struct Battery {
    std::vector<BatteryEntry> entries;
    double engine_seconds = 0.0;
};

Battery& battery() {
    static Battery b = [] {
        Battery out;
        const GrowthFunction f2 = GrowthFunction::exponential(2);
        const auto start = std::chrono::steady_clock::now();
        int seed = 0;
        for (int m = 0; m < 200; ++m, ++seed) {
            const int n = 4 + (m % 9); // sizes 4..12
            const Matrix a = (m % 2 == 0) ? gen_sign_matrix(n, n, 42 + seed)
                                          : gen_uniform_matrix(n, n, 42 + seed);
            for (const double eps : {0.3, 0.5, 0.8}) {
                BatteryEntry e;
                e.a = a;
                e.eps = eps;
                e.results.push_back(weak_decompose_rank(a, eps, seed));
                e.results.push_back(strong_decompose_rank(a, eps, f2, seed));
                e.results.push_back(weak_decompose_cut(a, eps, CutSearchMode::Exact, seed));
                e.results.push_back(weak_decompose_cut(a, eps, CutSearchMode::Heuristic, seed));
                e.results.push_back(strong_decompose_cut(a, eps, f2, CutSearchMode::Exact, seed));
                e.results.push_back(
                    strong_decompose_cut(a, eps, f2, CutSearchMode::Heuristic, seed));
                out.entries.push_back(std::move(e));
            }
        }
        for (auto& e : out.entries) {
            e.weak_rank = &e.results[0];
            e.strong_rank = &e.results[1];
            e.weak_cut_exact = &e.results[2];
        }
        out.engine_seconds = seconds_since(start);
        return out;
    }();
    return b;
}

// ------------------------------------------------------------------ criteria

void criterion1_halting_potential(Checker& c) {
    const Battery& b = battery();
    long long total_rounds = 0;
    for (const auto& e : b.entries)
        for (const auto& res : e.results) total_rounds += static_cast<long long>(res.trace.rounds.size());
    c.require(total_rounds > 2000, "battery suspiciously idle; traces look empty");
    for (const auto& e : b.entries) {
        const double norm_a = frobenius_norm(e.a);
        const double na2 = norm_a * norm_a;
        for (const auto& res : e.results) {
            c.require(static_cast<double>(res.trace.rounds.size()) < 1.0 / (e.eps * e.eps),
                      "round count must stay below eps^-2");
            for (const auto& round : res.trace.rounds) {
                const double drop = round.potential_before - round.potential_after;
                c.require(drop > e.eps * e.eps * na2 - 1e-9 * na2,
                          "per-round potential drop too small");
            }
        }
    }
    c.require(b.engine_seconds < 60.0, "engine battery exceeded 60 s");
}

void criterion2_weak_rank_guarantee(Checker& c) {
    for (const auto& e : battery().entries) {
        const auto sv = oracle::exact_singular_values(e.a - e.weak_rank->a_hat);
        c.require(sv[0] <= e.eps * frobenius_norm(e.a) + 1e-8,
                  "weak rank residual top singular value exceeds eps*||A||_F");
        c.require(static_cast<double>(e.weak_rank->k_witness) < 1.0 / (e.eps * e.eps),
                  "weak rank witness must stay below eps^-2");
    }
}

void criterion3_weak_cut_guarantee(Checker& c) {
    for (const auto& e : battery().entries) {
        const auto& res = *e.weak_cut_exact;
        c.require(res.halting_certificate == HaltingCertificate::Exact,
                  "exact mode must report an exact certificate");
        const double residual_norm = cut_norm_exact(e.a - res.a_hat).value;
        c.require(residual_norm <= e.eps * frobenius_norm(e.a),
                  "exact-mode residual cut norm exceeds eps*||A||_F");
        c.require(static_cast<double>(res.k_witness) < 1.0 / (e.eps * e.eps),
                  "cutrank witness must stay below eps^-2");
    }
}

void criterion4_strong_specialization(Checker& c) {
    const GrowthFunction one = GrowthFunction::constant(1);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 5 + (trial % 6);
        const Matrix a = (trial % 2 == 0) ? gen_sign_matrix(n, n, 7000 + trial)
                                          : gen_uniform_matrix(n, n, 7000 + trial);
        const auto wr = weak_decompose_rank(a, 0.5, trial);
        const auto sr = strong_decompose_rank(a, 0.5, one, trial);
        c.require(json_to_string(trace_to_json(wr)) == json_to_string(trace_to_json(sr)),
                  "rank: strong f=1 trace differs from weak");
        const auto wc = weak_decompose_cut(a, 0.5, CutSearchMode::Exact, trial);
        const auto sc = strong_decompose_cut(a, 0.5, one, CutSearchMode::Exact, trial);
        c.require(json_to_string(trace_to_json(wc)) == json_to_string(trace_to_json(sc)),
                  "cut exact: strong f=1 trace differs from weak");
        const auto wh = weak_decompose_cut(a, 0.5, CutSearchMode::Heuristic, trial);
        const auto sh = strong_decompose_cut(a, 0.5, one, CutSearchMode::Heuristic, trial);
        c.require(json_to_string(trace_to_json(wh)) == json_to_string(trace_to_json(sh)),
                  "cut heuristic: strong f=1 trace differs from weak");
    }
}

void criterion5_strong_rank_recursion(Checker& c) {
    const GrowthFunction f2 = GrowthFunction::exponential(2);
    c.require(f_iterate(f2, 0) == SatCount{0, false}, "f_iterate(2^n, 0) != 0");
    c.require(f_iterate(f2, 1) == SatCount{1, false}, "f_iterate(2^n, 1) != 1");
    c.require(f_iterate(f2, 2) == SatCount{3, false}, "f_iterate(2^n, 2) != 3");
    c.require(f_iterate(f2, 3) == SatCount{11, false}, "f_iterate(2^n, 3) != 11");
    int seen = 0;
    for (const auto& e : battery().entries) {
        if (seen >= 50) break;
        if (e.eps != 0.5) continue;
        ++seen;
        c.require(sat_at_most(static_cast<std::uint64_t>(e.strong_rank->k_witness),
                              f_iterate(f2, static_cast<int>(e.strong_rank->trace.rounds.size()))),
                  "strong rank witness exceeds the f-iterate bound");
    }
    c.require(seen >= 50, "battery too small for the 50-input check");
}

void criterion6_norm_inequalities(Checker& c) {
    for (int trial = 0; trial < 100; ++trial) {
        const Matrix a = (trial % 2 == 0) ? gen_sign_matrix(8, 8, 8000 + trial)
                                          : gen_uniform_matrix(8, 8, 8000 + trial);
        const double square1 = cut_norm_exact(a).value;
        const double classical = classical_cut_norm(a);
        const auto sv = oracle::exact_singular_values(a);
        const double fro = frobenius_norm(a);
        c.require(classical <= 8.0 * square1 + 1e-9, "classical > sqrt(mn) * square1");
        c.require(square1 <= sv[0] + 1e-9, "square1 > F[1]");
        c.require(sv[0] <= fro + 1e-9, "F[1] > Frobenius");
    }
    // monotonicity of the exact k-cut norm, at sizes the enumeration budget allows
    for (int trial = 0; trial < 100; ++trial) {
        const Matrix a = gen_uniform_matrix(3, 3, 9000 + trial);
        double prev = 0.0;
        for (int k = 1; k <= 4; ++k) {
            const double bk = black_square_norm_exact(a, k);
            c.require(bk + 1e-9 >= prev, "square[k] not monotone in k");
            c.require(bk <= frobenius_norm(a) + 1e-9, "square[k] above Frobenius");
            prev = bk;
        }
    }
}

void criterion7_weak_graph_theorem(Checker& c) {
    const auto start = std::chrono::steady_clock::now();
    for (int trial = 0; trial < 20; ++trial) {
        const Graph g = gen_gnp(10, 0.3 + 0.02 * trial, 10'000 + trial);
        for (const double eps : {0.4, 0.6}) {
            const auto out = compress(g, eps, CutSearchMode::Exact, trial);
            const double max_err = oracle::exhaustive_estimate_error(g, out.compressed);
            c.require(max_err < eps * 100.0, "weak compression exhaustive error bound violated");
            const auto bound =
                sat_pow(4, {static_cast<std::uint64_t>(std::ceil(1.0 / (eps * eps))), false});
            c.require(sat_at_most(static_cast<std::uint64_t>(out.compressed.partition.part_count),
                                  bound),
                      "partition size exceeds 4^ceil(eps^-2)");
        }
    }
    c.require(seconds_since(start) < 600.0, "weak compression battery exceeded 10 min");
}

void criterion8_disc_pipeline(Checker& c) {
    for (int trial = 0; trial < 10; ++trial) {
        const Graph g = gen_gnp(12, 0.35 + 0.03 * trial, 11'000 + trial);
        const auto out = verify_szemeredi_disc(g, 0.4, CutSearchMode::Exact, trial);
        c.require(out.report.disc_sum_ordered <= 0.4 * 144.0,
                  "sum of discrepancies exceeds eps*n^2");
        c.require(out.report.all_pass(), "disc pipeline check failed");
        // the greedy multi-atom rounds must still be honest projections
        const double na2 = frobenius_norm(g.adjacency) * frobenius_norm(g.adjacency);
        for (const auto& round : out.engine.trace.rounds) {
            const double drop = round.potential_before - round.potential_after;
            c.require(drop > 0.4 * 0.4 * na2 - 1e-9 * na2, "16^n pipeline round drop too small");
            c.require(std::abs(drop - round.q_magnitude * round.q_magnitude) <= 1e-9 * na2,
                      "16^n pipeline round is not an orthogonal projection");
        }
    }
}

void criterion9_irregularity_pipeline(Checker& c) {
    for (int trial = 0; trial < 10; ++trial) {
        const Graph g = gen_gnp(12, 0.35 + 0.03 * trial, 11'000 + trial);
        const auto out = verify_irregularity(g, 0.7, CutSearchMode::Exact, trial);
        double mass = 0.0;
        for (const auto& pd : out.report.pairs)
            if (pd.irregular) mass += 2.0 * static_cast<double>(pd.size_i) * pd.size_j;
        c.require(mass < 0.7 * 144.0, "irregular-pair mass exceeds eps*n^2");
        c.require(out.report.all_pass(), "irregularity pipeline check failed");
    }
}

void criterion10_exceptional_pipeline(Checker& c) {
    for (int trial = 0; trial < 10; ++trial) {
        const Graph g = gen_gnp(12, 0.35 + 0.03 * trial, 12'000 + trial);
        const auto out = verify_exceptional(g, 0.6, CutSearchMode::Exact, trial);
        const auto sizes = out.partition.part_sizes();
        c.require(out.partition.exceptional.has_value(), "exceptional part missing");
        c.require(static_cast<double>(sizes[*out.partition.exceptional]) < 0.6 * 12.0,
                  "|V0| >= eps*n");
        long long lo = 1'000'000, hi = 0, k = 0;
        for (int p = 0; p < out.partition.part_count; ++p) {
            if (p == *out.partition.exceptional) continue;
            lo = std::min(lo, sizes[p]);
            hi = std::max(hi, sizes[p]);
            ++k;
        }
        c.require(k == 0 || lo == hi, "non-exceptional parts are not equal-sized");
        long long irregular = 0;
        for (const auto& pd : out.report.pairs)
            if (pd.irregular) irregular += 2;
        c.require(static_cast<double>(irregular) <= 0.6 * static_cast<double>(k) * k,
                  "irregular pair count exceeds eps*k^2");
        c.require(out.report.all_pass(), "exceptional pipeline check failed");
    }
}

void criterion11_discrepancy_cross_validation(Checker& c) {
    const Graph single_edge = Graph::from_edges(4, {{0, 2}});
    const double hand = discrepancy_exact(single_edge, 0b0011, 0b1100);
    c.require(std::abs(hand - 2.0 / 3.0) <= 1e-12, "hand value 2/3 missed by discrepancy_exact");
    c.require(std::abs(oracle::exhaustive_discrepancy(single_edge, 0b0011, 0b1100) - 2.0 / 3.0) <=
                  1e-9,
              "hand value 2/3 missed by the oracle");

    Rng rng(13);
    for (int trial = 0; trial < 200; ++trial) {
        const Graph g = gen_gnp(16, 0.2 + 0.05 * (trial % 12), 13'000 + trial);
        const IndexMask vi = rng.next_nonempty_mask(8);
        const IndexMask vj = rng.next_nonempty_mask(8) << 8;
        const double got = discrepancy_exact(g, vi, vj);
        const double want = oracle::exhaustive_discrepancy(g, vi, vj);
        c.require(std::abs(got - want) <= 1e-9, "discrepancy implementations disagree");
    }
}

void criterion12_cli_determinism(Checker& c) {
    using testutil::run_cli;
    using testutil::slurp;
    testutil::TempDir dir;
    if (!std::getenv("REGKIT_BIN")) {
        c.require(false, "REGKIT_BIN not set");
        return;
    }

    auto twice_identical = [&](const std::string& args, const std::string& f1,
                               const std::string& f2, const std::string& what) {
        const auto r1 = run_cli(args + " --json " + dir.file(f1));
        const auto r2 = run_cli(args + " --json " + dir.file(f2));
        c.require(r1.exit_code == 0 && r2.exit_code == 0, what + ": nonzero exit");
        const std::string b1 = slurp(dir.file(f1));
        c.require(!b1.empty() && b1 == slurp(dir.file(f2)), what + ": bytes differ");
    };

    run_cli("gen --kind gnp --n 10 --p 0.5 --seed 7 --out " + dir.file("g1"));
    run_cli("gen --kind gnp --n 10 --p 0.5 --seed 7 --out " + dir.file("g2"));
    c.require(!slurp(dir.file("g1")).empty() && slurp(dir.file("g1")) == slurp(dir.file("g2")),
              "gen not byte-identical");

    const std::string g = dir.file("g1");
    twice_identical("decompose --in " + g + " --atoms cut --mode exact --epsilon 0.5 --seed 7",
                    "d1.json", "d2.json", "decompose exact");
    twice_identical("decompose --in " + g + " --atoms rank --epsilon 0.5 --seed 7 --f exp:2",
                    "d3.json", "d4.json", "decompose rank");
    twice_identical("norms --in " + g + " --which cut1 --mode heuristic --seed 3", "n1.json",
                    "n2.json", "norms heuristic");

    const auto v1 = run_cli("verify --in " + g +
                            " --theorem disc --epsilon 0.5 --seed 2 --threads 1 --json " +
                            dir.file("v1.json"));
    const auto v4 = run_cli("verify --in " + g +
                            " --theorem disc --epsilon 0.5 --seed 2 --threads 4 --json " +
                            dir.file("v4.json"));
    c.require(v1.exit_code == 0 && v4.exit_code == 0, "verify runs failed");
    const std::string b1 = slurp(dir.file("v1.json"));
    c.require(!b1.empty() && b1 == slurp(dir.file("v4.json")),
              "verify output changes under --threads");
}

struct Criterion {
    int id;
    const char* title;
    std::function<void(Checker&)> run;
};

} // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "halting and potential drops across all engine modes", criterion1_halting_potential},
        {2, "weak rank residual guarantee against the Jacobi oracle", criterion2_weak_rank_guarantee},
        {3, "weak cut exact-mode residual and cutrank witness", criterion3_weak_cut_guarantee},
        {4, "strong f=1 specializes to weak, byte-identical traces", criterion4_strong_specialization},
        {5, "strong rank witness obeys the f-iterate recursion", criterion5_strong_rank_recursion},
        {6, "norm inequalities with exact oracles", criterion6_norm_inequalities},
        {7, "weak graph compression bound, exhaustive subsets", criterion7_weak_graph_theorem},
        {8, "discrepancy pipeline bound at eps = 0.4", criterion8_disc_pipeline},
        {9, "irregular-pair mass bound at eps = 0.7", criterion9_irregularity_pipeline},
        {10, "exceptional-set pipeline at eps = 0.6", criterion10_exceptional_pipeline},
        {11, "discrepancy cross-validation within 1e-9", criterion11_discrepancy_cross_validation},
        {12, "byte-identical CLI reports across reruns and threads", criterion12_cli_determinism},
    };

    int failed = 0;
    for (const auto& criterion : criteria) {
        Checker c;
        try {
            criterion.run(c);
        } catch (const std::exception& e) {
            c.require(false, std::string("exception: ") + e.what());
        }
        if (c.failures == 0) {
            std::printf("[PASS] criterion %2d: %s\n", criterion.id, criterion.title);
        } else {
            ++failed;
            std::printf("[FAIL] criterion %2d: %s (%d checks failed; first: %s)\n", criterion.id,
                        criterion.title, c.failures, c.first_failure.c_str());
        }
        std::fflush(stdout);
    }
    return failed;
}
