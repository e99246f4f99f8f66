#include "regkit/cutalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "regkit/errors.hpp"
#include "regkit/kernels.hpp"
#include "regkit/rng.hpp"
#include "spd_solve.hpp"

namespace regkit {

namespace {

constexpr double kTieEps = 1e-12;
constexpr int kExactDimLimit = 14;

// Does C(n, k) exceed the budget? Partial products are binomials themselves
// and nondecreasing, so the early exit is sound.
bool combinations_exceed(std::uint64_t n, int k, std::uint64_t budget) {
    long double c = 1.0L;
    for (int i = 1; i <= k; ++i) {
        c = c * static_cast<long double>(n - k + i) / i;
        if (c > static_cast<long double>(budget)) return true;
    }
    return false;
}

void check_atom_bounds(const Matrix& m, IndexMask rows, IndexMask cols) {
    if (rows == 0 || cols == 0) throw DomainError("cut atom index sets must be nonempty");
    if ((rows & ~full_mask(m.rows())) || (cols & ~full_mask(m.cols())))
        throw DomainError("cut atom index set out of bounds");
}

// Sum of r over the S x T block, in fixed (row asc, col asc) order. Every
// code path that reports an objective value for a block goes through this,
// so equal blocks on equal residuals compare bit-identically.
double block_sum(const Matrix& r, IndexMask rows, IndexMask cols) {
    double total = 0.0;
    for_each_bit(rows, [&](int i) {
        double acc = 0.0;
        const double* row = r.row(i);
        for_each_bit(cols, [&](int j) { acc += row[j]; });
        total += acc;
    });
    return total;
}

double block_value(const Matrix& r, IndexMask rows, IndexMask cols) {
    return std::abs(block_sum(r, rows, cols)) /
           std::sqrt(static_cast<double>(popcount(rows)) * popcount(cols));
}

double block_sum_row(const Matrix& a, int i, IndexMask cols) {
    double acc = 0.0;
    const double* row = a.row(i);
    for_each_bit(cols, [&](int j) { acc += row[j]; });
    return acc;
}

// Precomputed 1/sqrt(j) for subset sizes.
struct InvSqrtTable {
    double v[65];
    InvSqrtTable() {
        v[0] = 0.0;
        for (int i = 1; i <= 64; ++i) v[i] = 1.0 / std::sqrt(static_cast<double>(i));
    }
};
const InvSqrtTable kInvSqrt;

struct PrefixScan {
    double best = -std::numeric_limits<double>::infinity();
    int best_len = 0;
};

// Max over prefix lengths of sign * psum_j / sqrt(j); strict improvement
// keeps the shortest (hence lex-smallest, prefixes being nested) maximizer.
PrefixScan scan_prefixes(const std::vector<int>& order, const double* w, int n, double sign) {
    PrefixScan out;
    double psum = 0.0;
    for (int j = 1; j <= n; ++j) {
        psum += w[order[j - 1]];
        const double val = sign * psum * kInvSqrt.v[j];
        if (val > out.best) {
            out.best = val;
            out.best_len = j;
        }
    }
    return out;
}

IndexMask prefix_mask(const std::vector<int>& order, int len) {
    IndexMask m = 0;
    for (int j = 0; j < len; ++j) m |= IndexMask{1} << order[j];
    return m;
}

void sort_descending(std::vector<int>& order, const double* w) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (w[a] != w[b]) return w[a] > w[b];
        return a < b;
    });
}

} // namespace

Matrix realize(const CutDecomposition& d) {
    Matrix out(d.rows, d.cols);
    for (const CutAtom& atom : d.atoms) {
        check_atom_bounds(out, atom.row_set, atom.col_set);
        for_each_bit(atom.row_set, [&](int i) {
            double* row = out.row(i);
            for_each_bit(atom.col_set, [&](int j) { row[j] += atom.coeff; });
        });
    }
    return out;
}

SubsetRatio best_subset_ratio(std::span<const double> w) {
    const int n = static_cast<int>(w.size());
    if (n == 0 || n > 64) throw DomainError("weight vector length must be in [1, 64]");
    std::vector<int> order(n);
    sort_descending(order, w.data());
    const PrefixScan scan = scan_prefixes(order, w.data(), n, +1.0);
    return {scan.best, prefix_mask(order, scan.best_len)};
}

SubsetRatio best_subset_ratio_signed(std::span<const double> w) {
    const int n = static_cast<int>(w.size());
    if (n == 0 || n > 64) throw DomainError("weight vector length must be in [1, 64]");
    std::vector<int> order(n);
    sort_descending(order, w.data());
    const PrefixScan pos = scan_prefixes(order, w.data(), n, +1.0);
    std::reverse(order.begin(), order.end());
    const PrefixScan neg = scan_prefixes(order, w.data(), n, -1.0);

    // neg.best_len prefixes are taken from the reversed order
    if (neg.best > pos.best + kTieEps) return {neg.best, prefix_mask(order, neg.best_len)};
    if (pos.best > neg.best + kTieEps) {
        std::reverse(order.begin(), order.end());
        return {pos.best, prefix_mask(order, pos.best_len)};
    }
    const IndexMask neg_mask = prefix_mask(order, neg.best_len);
    std::reverse(order.begin(), order.end());
    const IndexMask pos_mask = prefix_mask(order, pos.best_len);
    if (neg_mask < pos_mask) return {neg.best, neg_mask};
    return {pos.best, pos_mask};
}

CutNormWitness cut_norm_exact(const Matrix& a) {
    const int m = a.rows();
    const int n = a.cols();
    if (m > kExactDimLimit || n > kExactDimLimit)
        throw BudgetExceededError(
            "exact cut norm is limited to 14x14; use cut_norm_heuristic");

    std::vector<double> w(n, 0.0); // running s^T a
    std::vector<int> order(n);
    IndexMask s_mask = 0;
    int s_pop = 0;

    double best_val = -1.0;
    IndexMask best_s = 0, best_t = 0;

    const std::uint64_t total = IndexMask{1} << m;
    for (std::uint64_t i = 1; i < total; ++i) {
        const int bit = std::countr_zero(i);
        const IndexMask flip = IndexMask{1} << bit;
        s_mask ^= flip;
        if (s_mask & flip) {
            kernels::axpy(1.0, a.row(bit), w.data(), n);
            ++s_pop;
        } else {
            kernels::axpy(-1.0, a.row(bit), w.data(), n);
            --s_pop;
        }
        const double inv_s = kInvSqrt.v[s_pop];

        sort_descending(order, w.data());
        const PrefixScan pos = scan_prefixes(order, w.data(), n, +1.0);
        std::reverse(order.begin(), order.end());
        const PrefixScan neg = scan_prefixes(order, w.data(), n, -1.0);
        const double inner = std::max(pos.best, neg.best);
        const double val = inner * inv_s;

        if (val <= best_val - kTieEps) continue;

        // materialize this s's lex-smallest maximizing t
        IndexMask t_mask;
        if (neg.best >= inner - kTieEps && pos.best >= inner - kTieEps) {
            const IndexMask neg_mask = prefix_mask(order, neg.best_len);
            std::reverse(order.begin(), order.end());
            const IndexMask pos_mask = prefix_mask(order, pos.best_len);
            t_mask = std::min(neg_mask, pos_mask);
        } else if (neg.best > pos.best) {
            t_mask = prefix_mask(order, neg.best_len);
        } else {
            std::reverse(order.begin(), order.end());
            t_mask = prefix_mask(order, pos.best_len);
        }

        if (val > best_val + kTieEps ||
            (s_mask < best_s || (s_mask == best_s && t_mask < best_t))) {
            best_val = val;
            best_s = s_mask;
            best_t = t_mask;
        }
    }

    // Re-evaluate at the witness; the incremental accumulator has O(2^m)
    // rounding history and callers compare this value exactly.
    return {block_value(a, best_s, best_t), best_s, best_t};
}

double classical_cut_norm(const Matrix& a) {
    const int m = a.rows();
    const int n = a.cols();
    if (m > kExactDimLimit || n > kExactDimLimit)
        throw BudgetExceededError("classical cut norm is limited to 14x14");

    std::vector<double> w(n, 0.0);
    IndexMask s_mask = 0;
    double best = 0.0;
    IndexMask best_s = 0, best_t = 0;

    const std::uint64_t total = IndexMask{1} << m;
    for (std::uint64_t i = 1; i < total; ++i) {
        const int bit = std::countr_zero(i);
        const IndexMask flip = IndexMask{1} << bit;
        s_mask ^= flip;
        kernels::axpy((s_mask & flip) ? 1.0 : -1.0, a.row(bit), w.data(), n);

        double pos_sum = 0.0, neg_sum = 0.0;
        double max_w = -std::numeric_limits<double>::infinity();
        double min_w = std::numeric_limits<double>::infinity();
        bool any_pos = false, any_neg = false;
        for (int j = 0; j < n; ++j) {
            if (w[j] > 0) { pos_sum += w[j]; any_pos = true; }
            if (w[j] < 0) { neg_sum += w[j]; any_neg = true; }
            max_w = std::max(max_w, w[j]);
            min_w = std::min(min_w, w[j]);
        }
        const double hi = any_pos ? pos_sum : max_w;   // max over nonempty t
        const double lo = any_neg ? neg_sum : min_w;   // min over nonempty t
        const double val = std::max(hi, -lo);
        if (val > best) {
            best = val;
            best_s = s_mask;
            // recorded for the fresh re-evaluation below
            IndexMask t = 0;
            if (hi >= -lo) {
                for (int j = 0; j < n; ++j)
                    if (any_pos ? w[j] > 0 : w[j] == max_w) t |= IndexMask{1} << j;
            } else {
                for (int j = 0; j < n; ++j)
                    if (any_neg ? w[j] < 0 : w[j] == min_w) t |= IndexMask{1} << j;
            }
            best_t = t;
        }
    }
    if (best_s == 0) return 0.0;
    return std::abs(block_sum(a, best_s, best_t));
}

CutNormWitness cut_norm_heuristic(const Matrix& a, int restarts, std::uint64_t seed) {
    const int m = a.rows();
    const int n = a.cols();
    if (restarts < 1) throw DomainError("restarts must be >= 1");
    if (m > 64 || n > 64)
        throw BudgetExceededError("cut search uses 64-bit index masks; dims must be <= 64");

    std::vector<double> wr(m), wc(n);
    Rng rng(seed);
    CutNormWitness best{-1.0, 0, 0};

    for (int trial = 0; trial < restarts; ++trial) {
        IndexMask t = (trial == 0) ? full_mask(n) : rng.next_nonempty_mask(n);
        CutNormWitness cur{-1.0, 0, 0};
        for (int iter = 0; iter < 100; ++iter) {
            for (int i = 0; i < m; ++i) wr[i] = block_sum_row(a, i, t);
            const IndexMask s = best_subset_ratio_signed(wr).subset;
            for (int j = 0; j < n; ++j) wc[j] = 0.0;
            for_each_bit(s, [&](int i) { kernels::axpy(1.0, a.row(i), wc.data(), n); });
            t = best_subset_ratio_signed(wc).subset;
            const double val = block_value(a, s, t);
            if (!(val > cur.value)) break;
            cur = {val, s, t};
        }
        if (cur.value > best.value + kTieEps ||
            (cur.value > best.value - kTieEps &&
             (cur.row_set < best.row_set ||
              (cur.row_set == best.row_set && cur.col_set < best.col_set)))) {
            best = cur;
        }
    }
    return best;
}

SpanProjection project_onto_cut_span(const Matrix& r,
                                     std::span<const std::pair<IndexMask, IndexMask>> atoms) {
    const int k = static_cast<int>(atoms.size());
    if (k == 0) throw DomainError("projection needs at least one atom");
    for (const auto& [rows, cols] : atoms) check_atom_bounds(r, rows, cols);

    std::vector<double> gram(static_cast<std::size_t>(k) * k);
    std::vector<double> b(k);
    for (int l = 0; l < k; ++l) {
        b[l] = block_sum(r, atoms[l].first, atoms[l].second);
        for (int t = 0; t <= l; ++t) {
            const double g = static_cast<double>(popcount(atoms[l].first & atoms[t].first)) *
                             popcount(atoms[l].second & atoms[t].second);
            gram[static_cast<std::size_t>(l) * k + t] = g;
            gram[static_cast<std::size_t>(t) * k + l] = g;
        }
    }

    std::vector<double> x(k);
    std::vector<int> perm(k);
    std::vector<double> work(static_cast<std::size_t>(k) * k), y(k);
    pseudo_solve_spd(gram.data(), b.data(), k, x.data(), perm.data(), work.data(), y.data());

    SpanProjection out;
    out.q = Matrix(r.rows(), r.cols());
    for (int l = 0; l < k; ++l) {
        if (x[l] == 0.0) continue;
        for_each_bit(atoms[l].first, [&](int i) {
            double* row = out.q.row(i);
            for_each_bit(atoms[l].second, [&](int j) { row[j] += x[l]; });
        });
    }
    out.magnitude = frobenius_norm(out.q);
    out.coeffs = std::move(x);
    return out;
}

double black_square_norm_exact(const Matrix& a, int k, const CutBudget& budget) {
    if (k < 1) throw DomainError("k must be >= 1");
    const int m = a.rows();
    const int n = a.cols();
    if (m > 20 || n > 20)
        throw BudgetExceededError("black-square enumeration infeasible beyond 20 indices");

    const std::uint64_t atom_count =
        ((IndexMask{1} << m) - 1) * ((IndexMask{1} << n) - 1);
    const int kk = static_cast<int>(std::min<std::uint64_t>(k, atom_count));
    if (combinations_exceed(atom_count, kk, budget.max_evaluations))
        throw BudgetExceededError("black-square enumeration exceeds evaluation budget");

    if (kk == 1) {
        // Gray-coded double loop; no atom table needed.
        std::vector<double> rowblock(m, 0.0); // per-row sums over the current col set
        IndexMask c_mask = 0;
        double best = 0.0;
        const std::uint64_t ctotal = IndexMask{1} << n;
        for (std::uint64_t ci = 1; ci < ctotal; ++ci) {
            const int cbit = std::countr_zero(ci);
            const double csign = (c_mask & (IndexMask{1} << cbit)) ? -1.0 : 1.0;
            c_mask ^= IndexMask{1} << cbit;
            for (int i = 0; i < m; ++i) rowblock[i] += csign * a.at(i, cbit);
            const int cpop = popcount(c_mask);

            IndexMask r_mask = 0;
            double total = 0.0;
            const std::uint64_t rtotal = IndexMask{1} << m;
            for (std::uint64_t ri = 1; ri < rtotal; ++ri) {
                const int rbit = std::countr_zero(ri);
                const double rsign = (r_mask & (IndexMask{1} << rbit)) ? -1.0 : 1.0;
                r_mask ^= IndexMask{1} << rbit;
                total += rsign * rowblock[rbit];
                const double val =
                    std::abs(total) * kInvSqrt.v[popcount(r_mask)] * kInvSqrt.v[cpop];
                best = std::max(best, val);
            }
        }
        return best;
    }

    struct AtomInfo {
        IndexMask rows, cols;
        double b;
    };
    std::vector<AtomInfo> atom_list;
    atom_list.reserve(atom_count);
    for (IndexMask rm = 1; rm < (IndexMask{1} << m); ++rm)
        for (IndexMask cm = 1; cm < (IndexMask{1} << n); ++cm)
            atom_list.push_back({rm, cm, block_sum(a, rm, cm)});

    const int A = static_cast<int>(atom_list.size());
    std::vector<int> combo(kk);
    std::iota(combo.begin(), combo.end(), 0);
    std::vector<double> gram(static_cast<std::size_t>(kk) * kk), b(kk), x(kk);
    std::vector<double> work(static_cast<std::size_t>(kk) * kk), y(kk);
    std::vector<int> perm(kk);

    double best_sq = 0.0;
    for (;;) {
        for (int l = 0; l < kk; ++l) {
            const AtomInfo& al = atom_list[combo[l]];
            b[l] = al.b;
            for (int t = 0; t <= l; ++t) {
                const AtomInfo& at = atom_list[combo[t]];
                const double g = static_cast<double>(popcount(al.rows & at.rows)) *
                                 popcount(al.cols & at.cols);
                gram[static_cast<std::size_t>(l) * kk + t] = g;
                gram[static_cast<std::size_t>(t) * kk + l] = g;
            }
        }
        pseudo_solve_spd(gram.data(), b.data(), kk, x.data(), perm.data(), work.data(), y.data());
        double mag_sq = 0.0;
        for (int l = 0; l < kk; ++l) mag_sq += b[l] * x[l];
        best_sq = std::max(best_sq, mag_sq);

        // next lexicographic combination
        int pos = kk - 1;
        while (pos >= 0 && combo[pos] == A - kk + pos) --pos;
        if (pos < 0) break;
        ++combo[pos];
        for (int t = pos + 1; t < kk; ++t) combo[t] = combo[t - 1] + 1;
    }
    return std::sqrt(std::max(best_sq, 0.0));
}

} // namespace regkit
