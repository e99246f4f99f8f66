#include "regkit/graphreg.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "regkit/errors.hpp"
#include "regkit/rng.hpp"

namespace regkit {

void Partition::validate() const {
    if (n <= 0 || static_cast<int>(part_of.size()) != n)
        throw DomainError("partition must assign every node");
    std::vector<long long> sizes(part_count, 0);
    for (int p : part_of) {
        if (p < 0 || p >= part_count) throw DomainError("part index out of range");
        ++sizes[p];
    }
    for (int p = 0; p < part_count; ++p) {
        if (sizes[p] == 0 && (!exceptional || *exceptional != p))
            throw DomainError("non-exceptional part is empty");
    }
    if (exceptional && (*exceptional < 0 || *exceptional >= part_count))
        throw DomainError("exceptional index out of range");
}

std::vector<std::vector<int>> Partition::parts() const {
    std::vector<std::vector<int>> out(part_count);
    for (int u = 0; u < n; ++u) out[part_of[u]].push_back(u);
    return out;
}

std::vector<long long> Partition::part_sizes() const {
    std::vector<long long> sizes(part_count, 0);
    for (int p : part_of) ++sizes[p];
    return sizes;
}

IndexMask Partition::part_mask(int p) const {
    if (n > 64) throw DomainError("partition too large for 64-bit masks");
    IndexMask m = 0;
    for (int u = 0; u < n; ++u)
        if (part_of[u] == p) m |= IndexMask{1} << u;
    return m;
}

Partition common_refinement(const CutDecomposition& d, int n) {
    if (d.rows != n || d.cols != n)
        throw DimensionError("decomposition shape must be n x n");
    if (n > 64) throw DomainError("common refinement limited to 64 nodes");

    // Signature of node u: membership bits in every S_i and every T_i.
    const int k = static_cast<int>(d.atoms.size());
    const int words = (2 * k + 63) / 64 + 1;
    std::map<std::vector<std::uint64_t>, int> ids;
    Partition part;
    part.n = n;
    part.part_of.resize(n);
    for (int u = 0; u < n; ++u) {
        std::vector<std::uint64_t> sig(words, 0);
        for (int i = 0; i < k; ++i) {
            if (d.atoms[i].row_set & (IndexMask{1} << u))
                sig[(2 * i) / 64] |= std::uint64_t{1} << ((2 * i) % 64);
            if (d.atoms[i].col_set & (IndexMask{1} << u))
                sig[(2 * i + 1) / 64] |= std::uint64_t{1} << ((2 * i + 1) % 64);
        }
        auto [it, inserted] = ids.try_emplace(std::move(sig), part.part_count);
        if (inserted) ++part.part_count;
        part.part_of[u] = it->second;
    }
    part.validate();
    return part;
}

CompressOutcome compress(const Graph& g, double eps, CutSearchMode mode, std::uint64_t seed,
                         const EngineOptions& opts) {
    CompressOutcome out;
    out.engine = weak_decompose_cut(g.adjacency, eps, mode, seed, opts);
    const auto& decomposition = std::get<CutDecomposition>(out.engine.decomposition);
    out.compressed.partition = common_refinement(decomposition, g.n);

    const Partition& p = out.compressed.partition;
    const auto members = p.parts();
    out.compressed.c = Matrix(p.part_count, p.part_count);
    for (int i = 0; i < p.part_count; ++i) {
        for (int j = 0; j < p.part_count; ++j) {
            const double rep = out.engine.a_hat.at(members[i][0], members[j][0]);
            for (int u : members[i])
                for (int v : members[j])
                    if (out.engine.a_hat.at(u, v) != rep)
                        throw std::logic_error("approximation is not block-constant");
            out.compressed.c.at(i, j) = rep;
        }
    }
    return out;
}

double estimate_cut(const CompressedGraph& cg, IndexMask s, IndexMask t) {
    const Partition& p = cg.partition;
    std::vector<double> s_count(p.part_count), t_count(p.part_count);
    for (int i = 0; i < p.part_count; ++i) {
        const IndexMask m = p.part_mask(i);
        s_count[i] = static_cast<double>(popcount(m & s));
        t_count[i] = static_cast<double>(popcount(m & t));
    }
    double total = 0.0;
    for (int i = 0; i < p.part_count; ++i) {
        if (s_count[i] == 0.0) continue;
        for (int j = 0; j < p.part_count; ++j)
            total += cg.c.at(i, j) * s_count[i] * t_count[j];
    }
    return total;
}

long long exact_cut_count(const Graph& g, IndexMask s, IndexMask t) {
    long long total = 0;
    for_each_bit(s, [&](int u) {
        const double* row = g.adjacency.row(u);
        for_each_bit(t, [&](int v) { total += static_cast<long long>(row[v]); });
    });
    return total;
}

namespace {

struct PairProfile {
    // for each block-size product p in [1, a*b]: min and max of e(S,T)
    std::vector<int> e_min, e_max;
    std::vector<bool> present;
    long long full_e = 0; // e(Vi, Vj)
    long long full_p = 0; // |Vi| * |Vj|
};

PairProfile collect_profile(const Graph& g, IndexMask vi, IndexMask vj) {
    const std::vector<int> I = mask_to_indices(vi);
    const std::vector<int> J = mask_to_indices(vj);
    const int a = static_cast<int>(I.size());
    const int b = static_cast<int>(J.size());

    PairProfile prof;
    prof.full_p = static_cast<long long>(a) * b;
    prof.e_min.assign(prof.full_p + 1, std::numeric_limits<int>::max());
    prof.e_max.assign(prof.full_p + 1, std::numeric_limits<int>::min());
    prof.present.assign(prof.full_p + 1, false);
    if (a == 0 || b == 0) return prof;

    std::vector<int> w(b, 0); // per-column sums over the current S
    IndexMask s_mask = 0;
    const std::uint64_t s_total = IndexMask{1} << a;
    for (std::uint64_t si = 1; si < s_total; ++si) {
        const int sbit = std::countr_zero(si);
        const int sgn = (s_mask & (IndexMask{1} << sbit)) ? -1 : 1;
        s_mask ^= IndexMask{1} << sbit;
        for (int jj = 0; jj < b; ++jj)
            w[jj] += sgn * static_cast<int>(g.adjacency.at(I[sbit], J[jj]));
        const int ps = popcount(s_mask);

        IndexMask t_mask = 0;
        int e = 0;
        const std::uint64_t t_total = IndexMask{1} << b;
        for (std::uint64_t ti = 1; ti < t_total; ++ti) {
            const int tbit = std::countr_zero(ti);
            e += (t_mask & (IndexMask{1} << tbit)) ? -w[tbit] : w[tbit];
            t_mask ^= IndexMask{1} << tbit;
            const int p = ps * popcount(t_mask);
            prof.present[p] = true;
            prof.e_min[p] = std::min(prof.e_min[p], e);
            prof.e_max[p] = std::max(prof.e_max[p], e);
        }
    }
    prof.full_e = prof.e_max[prof.full_p]; // only one (S,T) has the full product
    return prof;
}

double envelope_value(const PairProfile& prof, double c) {
    double worst = 0.0;
    for (long long p = 1; p <= prof.full_p; ++p) {
        if (!prof.present[p]) continue;
        worst = std::max(worst, prof.e_max[p] - c * p);
        worst = std::max(worst, c * p - prof.e_min[p]);
    }
    return worst;
}

void run_parallel(std::size_t count, int threads, const std::function<void(std::size_t)>& fn) {
    threads = std::max(1, std::min<int>(threads, static_cast<int>(count)));
    if (threads == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            try {
                for (;;) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= count) return;
                    fn(i);
                }
            } catch (...) {
                std::scoped_lock lock(error_mutex);
                if (!error) error = std::current_exception();
                next.store(count); // stop handing out work
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

} // namespace

double discrepancy_exact(const Graph& g, IndexMask vi, IndexMask vj, DiscrepancyMode mode,
                         const DiscrepancyBudget& budget) {
    if (vi & vj) throw DomainError("discrepancy requires disjoint vertex sets");
    if ((vi | vj) & ~full_mask(g.n)) throw DomainError("vertex set out of range");
    if (popcount(vi) > budget.max_side || popcount(vj) > budget.max_side)
        throw BudgetExceededError("discrepancy side exceeds the exact enumeration budget");
    if (vi == 0 || vj == 0) return 0.0;

    const PairProfile prof = collect_profile(g, vi, vj);

    if (mode == DiscrepancyMode::FixedDensity) {
        const double c = static_cast<double>(prof.full_e) / static_cast<double>(prof.full_p);
        return envelope_value(prof, c);
    }

    // Boundary lines of the envelope: e_max[p] - c p (falling) and
    // c p - e_min[p] (rising). The minimum of the upper envelope sits at a
    // crossing of a falling with a rising line; line zeros are included as
    // cheap extra candidates.
    std::vector<std::pair<long long, int>> falling, rising; // (p, intercept e)
    for (long long p = 1; p <= prof.full_p; ++p) {
        if (!prof.present[p]) continue;
        falling.push_back({p, prof.e_max[p]});
        rising.push_back({p, prof.e_min[p]});
    }
    double best = std::numeric_limits<double>::infinity();
    auto consider = [&](double c) { best = std::min(best, envelope_value(prof, c)); };
    for (const auto& [pf, ef] : falling) {
        consider(static_cast<double>(ef) / pf);
        for (const auto& [pr, er] : rising)
            consider((static_cast<double>(ef) + er) / (pf + pr));
    }
    for (const auto& [pr, er] : rising) consider(static_cast<double>(er) / pr);
    return best;
}

bool DiscrepancyReport::all_pass() const {
    for (const CheckResult& c : checks)
        if (!c.pass) return false;
    return true;
}

namespace {

// Fill pairwise discrepancies (unordered, non-exceptional parts only) and
// irregular flags at flag_eps.
void fill_pairs(DiscrepancyReport& report, const Graph& g, const Partition& partition,
                double flag_eps, const VerifyOptions& opts) {
    const auto sizes = partition.part_sizes();
    std::vector<std::pair<int, int>> todo;
    for (int i = 0; i < partition.part_count; ++i) {
        if (partition.exceptional && *partition.exceptional == i) continue;
        for (int j = i + 1; j < partition.part_count; ++j) {
            if (partition.exceptional && *partition.exceptional == j) continue;
            todo.emplace_back(i, j);
        }
    }
    report.pairs.resize(todo.size());
    report.flag_eps = flag_eps;
    run_parallel(todo.size(), opts.threads, [&](std::size_t idx) {
        const auto [i, j] = todo[idx];
        PairDiscrepancy pd;
        pd.i = i;
        pd.j = j;
        pd.size_i = sizes[i];
        pd.size_j = sizes[j];
        pd.disc = discrepancy_exact(g, partition.part_mask(i), partition.part_mask(j),
                                    DiscrepancyMode::Free, opts.discrepancy);
        pd.irregular = pd.disc > flag_eps * static_cast<double>(pd.size_i) * pd.size_j;
        report.pairs[idx] = pd;
    });
    double sum = 0.0;
    for (const auto& pd : report.pairs) sum += pd.disc;
    report.disc_sum_ordered = 2.0 * sum;
}

CheckResult make_check(std::string name, double measured, double bound, bool pass,
                       bool saturated = false) {
    CheckResult c;
    c.name = std::move(name);
    c.measured = measured;
    c.bound = bound;
    c.bound_saturated = saturated;
    c.pass = pass;
    return c;
}

// Tower-sized witness bounds are reported as f-iterate values with a
// saturation flag instead of trying to print towers.
CheckResult witness_check(const RegularityResult& engine, const GrowthFunction& f) {
    const SatCount bound = f_iterate(f, static_cast<int>(engine.trace.rounds.size()));
    return make_check("k_witness_le_f_iterate", static_cast<double>(engine.k_witness),
                      bound.saturated ? std::numeric_limits<double>::max()
                                      : static_cast<double>(bound.value),
                      sat_at_most(static_cast<std::uint64_t>(engine.k_witness), bound),
                      bound.saturated);
}

} // namespace

VerifyOutcome verify_szemeredi_disc(const Graph& g, double eps, CutSearchMode mode,
                                    std::uint64_t seed, const VerifyOptions& opts) {
    if (eps <= 0.0) throw DomainError("epsilon must be positive");
    const GrowthFunction f = GrowthFunction::exponential(16);
    VerifyOutcome out;
    out.engine = strong_decompose_cut(g.adjacency, eps, f, mode, seed, opts.engine);
    out.partition = common_refinement(std::get<CutDecomposition>(out.engine.decomposition), g.n);
    fill_pairs(out.report, g, out.partition, eps, opts);

    const double n2 = static_cast<double>(g.n) * g.n;
    out.report.checks.push_back(make_check("disc_sum_le_eps_n2", out.report.disc_sum_ordered,
                                           eps * n2, out.report.disc_sum_ordered <= eps * n2));
    out.report.checks.push_back(witness_check(out.engine, f));
    const SatCount size_bound =
        sat_pow(4, {static_cast<std::uint64_t>(out.engine.k_witness), false});
    out.report.checks.push_back(make_check(
        "partition_size_le_4_pow_cutrank", static_cast<double>(out.partition.part_count),
        size_bound.saturated ? std::numeric_limits<double>::max()
                             : static_cast<double>(size_bound.value),
        sat_at_most(static_cast<std::uint64_t>(out.partition.part_count), size_bound),
        size_bound.saturated));
    return out;
}

VerifyOutcome verify_irregularity(const Graph& g, double eps, CutSearchMode mode,
                                  std::uint64_t seed, const VerifyOptions& opts) {
    if (eps <= 0.0) throw DomainError("epsilon must be positive");
    const GrowthFunction f = GrowthFunction::exponential(16);
    VerifyOutcome out;
    out.engine = strong_decompose_cut(g.adjacency, eps * eps, f, mode, seed, opts.engine);
    out.partition = common_refinement(std::get<CutDecomposition>(out.engine.decomposition), g.n);
    fill_pairs(out.report, g, out.partition, eps, opts);

    const double n2 = static_cast<double>(g.n) * g.n;
    double irregular_mass = 0.0;
    for (const auto& pd : out.report.pairs)
        if (pd.irregular) irregular_mass += 2.0 * static_cast<double>(pd.size_i) * pd.size_j;
    out.report.checks.push_back(make_check("disc_sum_le_eps2_n2", out.report.disc_sum_ordered,
                                           eps * eps * n2,
                                           out.report.disc_sum_ordered <= eps * eps * n2));
    out.report.checks.push_back(make_check("irregular_mass_lt_eps_n2", irregular_mass, eps * n2,
                                           irregular_mass < eps * n2));
    out.report.checks.push_back(witness_check(out.engine, f));
    return out;
}

VerifyOutcome verify_exceptional(const Graph& g, double eps, CutSearchMode mode,
                                 std::uint64_t seed, const VerifyOptions& opts) {
    if (eps <= 0.0) throw DomainError("epsilon must be positive");
    const auto scale = static_cast<std::uint64_t>(std::ceil(1.0 / (eps * eps)));

    const GrowthFunction f = GrowthFunction::scaled_exponential(scale, 16);
    VerifyOutcome out;
    out.engine = strong_decompose_cut(g.adjacency, eps * eps, f, mode, seed, opts.engine);
    const Partition refinement =
        common_refinement(std::get<CutDecomposition>(out.engine.decomposition), g.n);

    // Chop each refinement part into chunks of q; remainders go to V0.
    const long long kpp = refinement.part_count;
    const long long q = std::max<long long>(
        1, static_cast<long long>(std::floor(eps * g.n / static_cast<double>(kpp))));

    Partition chopped;
    chopped.n = g.n;
    chopped.part_of.assign(g.n, -1);
    const auto members = refinement.parts(); // node-ascending within each part
    int next_part = 0;
    std::vector<int> leftovers;
    for (const auto& part : members) {
        const long long chunks = static_cast<long long>(part.size()) / q;
        std::size_t pos = 0;
        for (long long cidx = 0; cidx < chunks; ++cidx) {
            for (long long t = 0; t < q; ++t) chopped.part_of[part[pos++]] = next_part;
            ++next_part;
        }
        while (pos < part.size()) leftovers.push_back(part[pos++]);
    }
    chopped.part_count = next_part + 1;
    chopped.exceptional = next_part; // V0, possibly empty
    for (int u : leftovers) chopped.part_of[u] = next_part;
    chopped.validate();
    out.partition = chopped;

    fill_pairs(out.report, g, out.partition, eps, opts);

    const long long v0_size = static_cast<long long>(leftovers.size());
    const long long k = next_part;
    long long irregular_count = 0;
    for (const auto& pd : out.report.pairs)
        if (pd.irregular) irregular_count += 2; // ordered pairs

    out.report.checks.push_back(make_check("exceptional_lt_eps_n", static_cast<double>(v0_size),
                                           eps * g.n, static_cast<double>(v0_size) < eps * g.n));
    long long min_size = std::numeric_limits<long long>::max();
    long long max_size = 0;
    const auto sizes = chopped.part_sizes();
    for (int p = 0; p < chopped.part_count; ++p) {
        if (p == next_part) continue;
        min_size = std::min(min_size, sizes[p]);
        max_size = std::max(max_size, sizes[p]);
    }
    const double spread = (k == 0) ? 0.0 : static_cast<double>(max_size - min_size);
    out.report.checks.push_back(make_check("equal_part_sizes", spread, 0.0, spread <= 0.0));
    out.report.checks.push_back(make_check(
        "irregular_pairs_le_eps_k2", static_cast<double>(irregular_count),
        eps * static_cast<double>(k) * k,
        static_cast<double>(irregular_count) <= eps * static_cast<double>(k) * k));
    out.report.checks.push_back(witness_check(out.engine, f));
    return out;
}

double max_sampled_estimate_error(const Graph& g, const CompressedGraph& cg, int samples,
                                  std::uint64_t seed) {
    if (g.n > 64) throw DomainError("sampled estimate check limited to 64 nodes");
    Rng rng(seed);
    const IndexMask full = full_mask(g.n);
    double worst = 0.0;
    for (int s = 0; s < samples; ++s) {
        const IndexMask sm = rng.next_u64() & full;
        const IndexMask tm = rng.next_u64() & full;
        const double e = static_cast<double>(exact_cut_count(g, sm, tm));
        const double est = estimate_cut(cg, sm, tm);
        worst = std::max(worst, std::abs(e - est));
    }
    return worst;
}

} // namespace regkit
