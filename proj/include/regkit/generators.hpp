#pragma once

#include <cstdint>

#include "regkit/graph.hpp"
#include "regkit/matrix.hpp"

namespace regkit {

/// G(n, p): each unordered pair drawn independently. Deterministic per seed.
Graph gen_gnp(int n, double p, std::uint64_t seed);

/// Complete bipartite graph on parts of sizes a and b (nodes [0,a) and [a,a+b)).
Graph gen_complete_bipartite(int a, int b);

/// k contiguous near-equal groups; within-group edges with probability p_in,
/// cross-group with p_out.
Graph gen_planted_partition(int n, int k, double p_in, double p_out, std::uint64_t seed);

/// Dense test matrices. kind: entries uniform in [-1, 1) or Rademacher +-1.
Matrix gen_uniform_matrix(int rows, int cols, std::uint64_t seed);
Matrix gen_sign_matrix(int rows, int cols, std::uint64_t seed);

} // namespace regkit
