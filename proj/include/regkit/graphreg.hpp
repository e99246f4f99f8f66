#pragma once

#include <optional>
#include <string>
#include <vector>

#include "regkit/engine.hpp"
#include "regkit/graph.hpp"

namespace regkit {

/// Assignment of nodes to parts 0..part_count-1. At most one part may be
/// designated exceptional (the leftover set of the equal-parts phrasing);
/// it is the only part allowed to be empty.
struct Partition {
    int n = 0;
    std::vector<int> part_of;
    int part_count = 0;
    std::optional<int> exceptional;

    void validate() const;
    std::vector<std::vector<int>> parts() const;
    std::vector<long long> part_sizes() const;
    /// Bitmask of one part's members; parts beyond 64 nodes are not maskable.
    IndexMask part_mask(int p) const;
};

/// Maximal partition refining every row-set and column-set bipartition of the
/// decomposition's atoms: nodes share a part iff they agree on membership in
/// every S_i and every T_i. Part ids follow first occurrence in node order.
Partition common_refinement(const CutDecomposition& d, int n);

/// A partition plus one density value per ordered part pair.
struct CompressedGraph {
    Partition partition;
    Matrix c; // part_count x part_count
};

struct CompressOutcome {
    RegularityResult engine;
    CompressedGraph compressed;
};

/// Weak (f = 1) cut decomposition of the adjacency matrix, refined into a
/// partition with the block-constant values of the approximation as c_ij.
/// The approximation is exactly constant on every block by construction;
/// this is verified and a violation is a bug.
CompressOutcome compress(const Graph& g, double eps, CutSearchMode mode, std::uint64_t seed,
                         const EngineOptions& opts = {});

/// Estimated cut value: sum over part pairs of c_ij |V_i∩S| |V_j∩T|.
double estimate_cut(const CompressedGraph& cg, IndexMask s, IndexMask t);

/// Exact cut value as the quadratic form s^T A t over indicator vectors
/// (ordered endpoint pairs; edges inside S∩T count once per orientation).
long long exact_cut_count(const Graph& g, IndexMask s, IndexMask t);

enum class DiscrepancyMode { Free, FixedDensity };

struct DiscrepancyBudget {
    int max_side = 12; // per-side exact enumeration limit
};

/// Exact discrepancy of a disjoint pair (V_i, V_j):
///   free mode:  min over c of max_{S,T} |e(S,T) - c |S||T||, minimized
///               exactly over the crossing points of the boundary lines of
///               the piecewise-linear envelope;
///   fixed mode: the same max with c pinned to the edge density of the pair.
double discrepancy_exact(const Graph& g, IndexMask vi, IndexMask vj,
                         DiscrepancyMode mode = DiscrepancyMode::Free,
                         const DiscrepancyBudget& budget = {});

struct PairDiscrepancy {
    int i = 0, j = 0; // part indices, i < j
    long long size_i = 0, size_j = 0;
    double disc = 0.0;
    bool irregular = false; // disc > flag_eps * |V_i| * |V_j|
};

struct CheckResult {
    std::string name;
    double measured = 0.0;
    double bound = 0.0;
    bool bound_saturated = false; // bound overflowed; comparison trivially true
    bool pass = false;
};

struct DiscrepancyReport {
    std::vector<PairDiscrepancy> pairs; // unordered pairs of non-exceptional parts
    double disc_sum_ordered = 0.0;      // counts both (i,j) and (j,i)
    double flag_eps = 0.0;              // threshold parameter used for irregular flags
    std::vector<CheckResult> checks;

    bool all_pass() const;
};

struct VerifyOptions {
    int threads = 1;
    DiscrepancyBudget discrepancy;
    EngineOptions engine;
};

struct VerifyOutcome {
    RegularityResult engine;
    Partition partition;
    DiscrepancyReport report;
};

/// Discrepancy phrasing: strong cut decomposition with f(n) = 16^n at error
/// eps, common refinement, exact pairwise discrepancies, and the checks
/// (ordered) sum of discrepancies <= eps n^2 and partition size <= 4^k'.
VerifyOutcome verify_szemeredi_disc(const Graph& g, double eps, CutSearchMode mode,
                                    std::uint64_t seed, const VerifyOptions& opts = {});

/// Irregularity phrasing: the discrepancy pipeline at parameter eps^2, pairs
/// flagged irregular when disc > eps |V_i||V_j|, and the check
/// sum of |V_i||V_j| over irregular pairs < eps n^2.
VerifyOutcome verify_irregularity(const Graph& g, double eps, CutSearchMode mode,
                                  std::uint64_t seed, const VerifyOptions& opts = {});

/// Exceptional-set phrasing: engine at error eps^2 with f(n) = ceil(eps^-2) 16^n,
/// refinement parts chopped into chunks of q = max(1, floor(eps n / k'')) with
/// remainders moved to V_0. Checks |V_0| < eps n, equal non-exceptional part
/// sizes, and (ordered) irregular pair count <= eps k^2.
VerifyOutcome verify_exceptional(const Graph& g, double eps, CutSearchMode mode,
                                 std::uint64_t seed, const VerifyOptions& opts = {});

/// Max of |e(S,T) - ê(S,T)| over `samples` seeded random subset pairs.
double max_sampled_estimate_error(const Graph& g, const CompressedGraph& cg,
                                  int samples, std::uint64_t seed);

} // namespace regkit
