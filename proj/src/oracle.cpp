#include "regkit/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>
#include <string>

#include "regkit/errors.hpp"

namespace regkit::oracle {

namespace {

// Symmetric Gram matrix of the smaller side.
Matrix gram_small_side(const Matrix& a) {
    const bool rows_small = a.rows() <= a.cols();
    const int k = rows_small ? a.rows() : a.cols();
    Matrix g(k, k);
    for (int i = 0; i < k; ++i) {
        for (int j = i; j < k; ++j) {
            double acc = 0.0;
            if (rows_small) {
                for (int t = 0; t < a.cols(); ++t) acc += a.at(i, t) * a.at(j, t);
            } else {
                for (int t = 0; t < a.rows(); ++t) acc += a.at(t, i) * a.at(t, j);
            }
            g.at(i, j) = acc;
            g.at(j, i) = acc;
        }
    }
    return g;
}

double off_diagonal_norm(const Matrix& g) {
    double acc = 0.0;
    for (int i = 0; i < g.rows(); ++i)
        for (int j = 0; j < g.cols(); ++j)
            if (i != j) acc += g.at(i, j) * g.at(i, j);
    return std::sqrt(acc);
}

} // namespace

std::vector<double> exact_singular_values(const Matrix& a) {
    if (std::min(a.rows(), a.cols()) > 16)
        throw BudgetExceededError("Jacobi oracle limited to min dimension 16");

    Matrix g = gram_small_side(a);
    const int k = g.rows();
    const double scale = frobenius_norm(g);

    // Cyclic Jacobi sweeps until the off-diagonal mass is negligible.
    int sweeps = 0;
    while (off_diagonal_norm(g) > 1e-14 * (scale + 1e-300)) {
        if (++sweeps > 100) throw ConvergenceError("Jacobi did not converge", 0.0);
        for (int p = 0; p < k; ++p) {
            for (int q = p + 1; q < k; ++q) {
                const double apq = g.at(p, q);
                if (apq == 0.0) continue;
                const double app = g.at(p, p);
                const double aqq = g.at(q, q);
                const double tau = (aqq - app) / (2.0 * apq);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                g.at(p, p) = app - t * apq;
                g.at(q, q) = aqq + t * apq;
                g.at(p, q) = 0.0;
                g.at(q, p) = 0.0;
                for (int i = 0; i < k; ++i) {
                    if (i == p || i == q) continue;
                    const double gip = g.at(i, p);
                    const double giq = g.at(i, q);
                    g.at(i, p) = c * gip - s * giq;
                    g.at(p, i) = g.at(i, p);
                    g.at(i, q) = s * gip + c * giq;
                    g.at(q, i) = g.at(i, q);
                }
            }
        }
    }

    std::vector<double> sigma(k);
    for (int i = 0; i < k; ++i) sigma[i] = std::sqrt(std::max(g.at(i, i), 0.0));
    std::sort(sigma.begin(), sigma.end(), std::greater<>());

    double sum_sq = 0.0;
    for (double s : sigma) sum_sq += s * s;
    const double fro_sq = frobenius_norm(a) * frobenius_norm(a);
    if (std::abs(sum_sq - fro_sq) > 1e-9 * std::max(fro_sq, 1e-12))
        throw std::logic_error("Jacobi reconstruction check failed");
    return sigma;
}

SubsetRatio exhaustive_best_subset_ratio(std::span<const double> w, const OracleBudget& budget) {
    const int n = static_cast<int>(w.size());
    if (n < 1 || n > budget.max_dim)
        throw BudgetExceededError("subset-ratio oracle limited to length " +
                                  std::to_string(budget.max_dim));
    SubsetRatio best{-1.0, 0};
    for (IndexMask m = 1; m < (IndexMask{1} << n); ++m) {
        double sum = 0.0;
        for_each_bit(m, [&](int i) { sum += w[i]; });
        const double val = std::abs(sum) / std::sqrt(static_cast<double>(popcount(m)));
        if (val > best.value + 1e-12) best = {val, m};
    }
    return best;
}

double exhaustive_discrepancy(const Graph& g, IndexMask vi, IndexMask vj,
                              const OracleBudget& budget) {
    if (vi & vj) throw DomainError("discrepancy requires disjoint vertex sets");
    const int total_bits = popcount(vi) + popcount(vj);
    if (total_bits > 20 || (std::uint64_t{1} << total_bits) > budget.max_evaluations)
        throw BudgetExceededError("discrepancy oracle enumeration exceeds its budget");
    if (vi == 0 || vj == 0) return 0.0;

    const std::vector<int> I = mask_to_indices(vi);
    const std::vector<int> J = mask_to_indices(vj);

    // All distinct (|S||T|, e(S,T)) value pairs, by direct double enumeration.
    std::set<std::pair<long long, long long>> points;
    for (IndexMask sm = 1; sm < (IndexMask{1} << I.size()); ++sm) {
        for (IndexMask tm = 1; tm < (IndexMask{1} << J.size()); ++tm) {
            long long e = 0;
            for_each_bit(sm, [&](int si) {
                for_each_bit(tm, [&](int tj) {
                    e += static_cast<long long>(g.adjacency.at(I[si], J[tj]));
                });
            });
            points.insert({static_cast<long long>(popcount(sm)) * popcount(tm), e});
        }
    }

    auto phi = [&](double c) {
        double worst = 0.0;
        for (const auto& [p, e] : points)
            worst = std::max(worst, std::abs(static_cast<double>(e) - c * p));
        return worst;
    };

    // Golden-section refinement on the convex envelope.
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& [p, e] : points) {
        lo = std::min(lo, static_cast<double>(e) / p - 1.0);
        hi = std::max(hi, static_cast<double>(e) / p + 1.0);
    }
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - gr * (hi - lo);
    double x2 = lo + gr * (hi - lo);
    double f1 = phi(x1), f2 = phi(x2);
    for (int round = 0; round < 3; ++round) {
        for (int iter = 0; iter < 40; ++iter) {
            if (f1 <= f2) {
                hi = x2; x2 = x1; f2 = f1;
                x1 = hi - gr * (hi - lo);
                f1 = phi(x1);
            } else {
                lo = x1; x1 = x2; f1 = f2;
                x2 = lo + gr * (hi - lo);
                f2 = phi(x2);
            }
        }
    }
    const double mid = 0.5 * (lo + hi);

    // Identify the active falling and rising lines just beside the minimum
    // and solve their crossing exactly.
    auto active = [&](double c, double sign_wanted) -> std::pair<double, double> {
        // returns (slope, intercept) of the argmax line with the wanted slope sign
        double worst = -1.0;
        double slope = 0.0, intercept = 0.0;
        for (const auto& [p, e] : points) {
            const double val = static_cast<double>(e) - c * p;
            const double v = std::abs(val);
            const double sl = (val >= 0.0) ? -static_cast<double>(p) : static_cast<double>(p);
            if (v > worst && sl * sign_wanted > 0.0) {
                worst = v;
                slope = sl;
                intercept = (val >= 0.0) ? static_cast<double>(e) : -static_cast<double>(e);
            }
        }
        return {slope, intercept};
    };
    double best = std::min(f1, f2);
    const auto [sf, cf] = active(mid, -1.0);
    const auto [sr, cr] = active(mid, +1.0);
    if (sf != 0.0 && sr != 0.0 && sf != sr) {
        const double cross = (cr - cf) / (sf - sr);
        best = std::min(best, phi(cross));
    }
    best = std::min(best, phi(mid));
    return best;
}

double exhaustive_estimate_error(const Graph& g, const CompressedGraph& cg) {
    if (g.n > 12) throw BudgetExceededError("estimate-error oracle limited to 12 nodes");

    // Residual entries straight from the c table, deliberately not from the
    // engine's dense approximation.
    Matrix r(g.n, g.n);
    for (int u = 0; u < g.n; ++u)
        for (int v = 0; v < g.n; ++v)
            r.at(u, v) = g.adjacency.at(u, v) -
                         cg.c.at(cg.partition.part_of[u], cg.partition.part_of[v]);

    std::vector<double> w(g.n, 0.0); // s^T r
    IndexMask s_mask = 0;
    double worst = 0.0;
    const std::uint64_t total = IndexMask{1} << g.n;
    for (std::uint64_t si = 1; si < total; ++si) {
        const int sbit = std::countr_zero(si);
        const double sgn = (s_mask & (IndexMask{1} << sbit)) ? -1.0 : 1.0;
        s_mask ^= IndexMask{1} << sbit;
        for (int j = 0; j < g.n; ++j) w[j] += sgn * r.at(sbit, j);

        IndexMask t_mask = 0;
        double val = 0.0;
        for (std::uint64_t ti = 1; ti < total; ++ti) {
            const int tbit = std::countr_zero(ti);
            val += (t_mask & (IndexMask{1} << tbit)) ? -w[tbit] : w[tbit];
            t_mask ^= IndexMask{1} << tbit;
            worst = std::max(worst, std::abs(val));
        }
    }
    return worst;
}

} // namespace regkit::oracle
