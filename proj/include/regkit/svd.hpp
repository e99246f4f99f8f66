#pragma once

#include <cstdint>
#include <vector>

#include "regkit/matrix.hpp"

namespace regkit {

/// Approximate singular triple: sigma >= 0, left/right unit vectors.
struct SingularTriple {
    double sigma = 0.0;
    std::vector<double> left;
    std::vector<double> right;
};

struct PowerIterOptions {
    double tol = 1e-10;  // relative to ||a||_F
    int max_iters = 10000;
    int restarts = 3;  // extra attempts with fresh seeds on stagnation
};

/// Top singular triple of `a` via power iteration on the Gram form (the
/// matrix is applied twice per step). Deterministic for a fixed seed.
///
/// A zero matrix is signalled by sigma == 0 with canonical basis vectors;
/// callers treat that as "top singular value is zero". Non-convergence after
/// all restarts throws ConvergenceError carrying the best sigma found.
SingularTriple top_singular_triple(const Matrix& a, double tol, int max_iters,
                                   std::uint64_t seed);
SingularTriple top_singular_triple(const Matrix& a, std::uint64_t seed);

/// sqrt(sum of squares of the top min(k, rank) singular values), computed by
/// power iteration with deflation. Equals frobenius_norm(a) once k covers the
/// full spectrum; nondecreasing in k up to the accumulated deflation error.
double f_top_k_norm(const Matrix& a, int k, double tol, std::uint64_t seed);
double f_top_k_norm(const Matrix& a, int k, std::uint64_t seed);

} // namespace regkit
