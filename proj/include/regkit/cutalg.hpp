#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "regkit/indexset.hpp"
#include "regkit/matrix.hpp"

namespace regkit {

/// One cut matrix: coeff on the row_set x col_set block, zero elsewhere.
/// Both index sets must be nonempty.
struct CutAtom {
    IndexMask row_set = 0;
    IndexMask col_set = 0;
    double coeff = 0.0;
};

/// An ordered sum of cut matrices; its length witnesses a cutrank bound for
/// the matrix it realizes.
struct CutDecomposition {
    int rows = 0;
    int cols = 0;
    std::vector<CutAtom> atoms;
};

/// Materialize the decomposition as a dense matrix.
Matrix realize(const CutDecomposition& d);

struct CutNormWitness {
    double value = 0.0;
    IndexMask row_set = 0;
    IndexMask col_set = 0;
};

/// Exact normalized cut norm: max |s^T a t| / (||s|| ||t||) over nonempty
/// binary s, t. Row subsets are enumerated exhaustively with Gray-code
/// incremental updates of s^T a; for each s the column side is solved
/// exactly by the sorted-prefix rule (see best_subset_ratio). The witness is
/// the lexicographically smallest maximizing pair under value ties of 1e-12.
/// Requires rows <= 14 and cols <= 14, else BudgetExceededError.
CutNormWitness cut_norm_exact(const Matrix& a);

/// Alternating-maximization lower bound for the normalized cut norm. With
/// one side fixed, the other side's exact optimum is a sorted prefix of the
/// induced weight vector; sides alternate until no improvement, best over
/// seeded restarts. The returned value is a feasible objective value, hence
/// a certified lower bound on cut_norm_exact.
CutNormWitness cut_norm_heuristic(const Matrix& a, int restarts, std::uint64_t seed);
inline CutNormWitness cut_norm_heuristic(const Matrix& a, std::uint64_t seed) {
    return cut_norm_heuristic(a, 32, seed);
}

/// Classical (unnormalized) cut norm: max |s^T a t| over nonempty binary
/// s, t, by enumeration. Requires rows <= 14 and cols <= 14.
double classical_cut_norm(const Matrix& a);

struct SpanProjection {
    Matrix q;                   // Frobenius projection of r onto the span
    double magnitude = 0.0;     // ||q||_F
    std::vector<double> coeffs; // q = sum coeffs[l] * indicator(atoms[l])
};

/// Orthogonal projection of r onto the linear span of the indicator matrices
/// of the given (row_set, col_set) blocks. Solved through the Gram system
/// with symmetric pseudo-solving (pivot drop tolerance 1e-12 * max diagonal),
/// so rank-deficient spans are fine.
SpanProjection project_onto_cut_span(const Matrix& r,
                                     std::span<const std::pair<IndexMask, IndexMask>> atoms);

struct CutBudget {
    std::uint64_t max_evaluations = 10'000'000;
};

/// Exact ||a||_■[k]: the maximum span-projection magnitude over all k-subsets
/// of cut blocks. Enumerates combinations of the (2^m - 1)(2^n - 1) candidate
/// blocks; throws BudgetExceededError when that count exceeds the budget.
double black_square_norm_exact(const Matrix& a, int k, const CutBudget& budget = {});

/// Exact max over nonempty binary s of (sum_{i in s} w_i) / sqrt(|s|),
/// attained by a prefix of the coordinates sorted descending. `signed_best`
/// checks both sign choices and maximizes the absolute objective. Ties within
/// 1e-12 resolve to the smallest mask.
struct SubsetRatio {
    double value = 0.0;
    IndexMask subset = 0;
};
SubsetRatio best_subset_ratio(std::span<const double> w);
SubsetRatio best_subset_ratio_signed(std::span<const double> w);

} // namespace regkit
