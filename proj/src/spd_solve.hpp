#pragma once

#include <algorithm>
#include <cmath>
#include <cstring>

namespace regkit {

/// Pivoted-Cholesky pseudo-solve for a symmetric PSD system G x = b.
/// Pivots whose remaining diagonal falls to <= 1e-12 * (largest initial
/// diagonal) are dropped and their coordinates get x = 0, which keeps the
/// projection well defined on rank-deficient spans.
/// Buffers supplied by the caller: work (k*k), y (k), perm (k).
inline void pseudo_solve_spd(const double* gram, const double* b, int k,
                             double* x, int* perm, double* work, double* y) {
    std::memcpy(work, gram, sizeof(double) * static_cast<std::size_t>(k) * k);
    auto W = [&](int i, int j) -> double& { return work[static_cast<std::size_t>(i) * k + j]; };
    for (int i = 0; i < k; ++i) perm[i] = i;

    double maxdiag = 0.0;
    for (int i = 0; i < k; ++i) maxdiag = std::max(maxdiag, W(i, i));
    const double droptol = 1e-12 * maxdiag;

    int rank = 0;
    for (int j = 0; j < k; ++j) {
        int p = j;
        for (int i = j + 1; i < k; ++i)
            if (W(i, i) > W(p, p)) p = i;
        if (!(W(p, p) > droptol)) break;
        if (p != j) {
            std::swap(perm[p], perm[j]);
            for (int t = 0; t < k; ++t) std::swap(W(p, t), W(j, t));
            for (int t = 0; t < k; ++t) std::swap(W(t, p), W(t, j));
        }
        const double piv = std::sqrt(W(j, j));
        W(j, j) = piv;
        for (int i = j + 1; i < k; ++i) W(i, j) /= piv;
        for (int i = j + 1; i < k; ++i) {
            const double lij = W(i, j);
            if (lij == 0.0) continue;
            for (int t = j + 1; t < k; ++t) W(i, t) -= lij * W(t, j);
        }
        ++rank;
    }

    // L y = b_perm, then L^T z = y, on the retained leading block.
    for (int i = 0; i < rank; ++i) {
        double acc = b[perm[i]];
        for (int t = 0; t < i; ++t) acc -= W(i, t) * y[t];
        y[i] = acc / W(i, i);
    }
    for (int i = rank - 1; i >= 0; --i) {
        double acc = y[i];
        for (int t = i + 1; t < rank; ++t) acc -= W(t, i) * y[t];
        y[i] = acc / W(i, i);
    }
    for (int i = 0; i < k; ++i) x[i] = 0.0;
    for (int i = 0; i < rank; ++i) x[perm[i]] = y[i];
}

} // namespace regkit
