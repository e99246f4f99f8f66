#pragma once

#include <span>
#include <vector>

#include "regkit/cutalg.hpp"
#include "regkit/graph.hpp"
#include "regkit/graphreg.hpp"
#include "regkit/matrix.hpp"

// Independent brute-force references used by tests and exact-mode
// certification. Each oracle uses a different algorithm from the production
// routine it checks; shared code is limited to Matrix arithmetic. They are
// deliberately simple and run only at desk scale; budgets are hard errors.
namespace regkit::oracle {

struct OracleBudget {
    std::uint64_t max_evaluations = 10'000'000;
    int max_dim = 14;
};

/// All singular values, descending, via cyclic Jacobi diagonalization of the
/// smaller Gram matrix. Self-checks sum sigma^2 == ||a||_F^2 to 1e-9 relative.
/// Requires min(rows, cols) <= 16.
std::vector<double> exact_singular_values(const Matrix& a);

/// Max over nonempty binary subsets of |sum_{i in s} w_i| / sqrt(|s|) by
/// full enumeration; the lexicographically smallest maximizer under 1e-12
/// value ties. Length <= budget.max_dim.
SubsetRatio exhaustive_best_subset_ratio(std::span<const double> w,
                                         const OracleBudget& budget = {});

/// Free-mode discrepancy of a disjoint pair, cross-validating
/// discrepancy_exact through a different minimization: golden-section
/// refinement of the convex envelope followed by an exact crossing solve of
/// the two active boundary lines. Requires |vi| + |vj| <= 20 and the subset
/// enumeration to fit budget.max_evaluations.
double exhaustive_discrepancy(const Graph& g, IndexMask vi, IndexMask vj,
                              const OracleBudget& budget = {});

/// Max of |e(S,T) - ê(S,T)| over all 2^n x 2^n subset pairs via Gray-coded
/// incremental updates, with ê read off the compressed graph's c table.
/// Requires n <= 12.
double exhaustive_estimate_error(const Graph& g, const CompressedGraph& cg);

} // namespace regkit::oracle
