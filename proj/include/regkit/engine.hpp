#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "regkit/cutalg.hpp"
#include "regkit/errors.hpp"
#include "regkit/matrix.hpp"

namespace regkit {

/// Counter with a saturating-infinity state; the witness bounds grow like
/// towers and overflow 64 bits almost immediately for interesting growth
/// functions. Saturation is a value, not an error.
struct SatCount {
    std::uint64_t value = 0;
    bool saturated = false;

    static SatCount inf() { return {0, true}; }
    bool operator==(const SatCount&) const = default;
};

SatCount sat_add(SatCount a, SatCount b);
SatCount sat_mul(SatCount a, SatCount b);
SatCount sat_pow(std::uint64_t base, SatCount exp);

/// True when k <= bound under saturation semantics.
inline bool sat_at_most(std::uint64_t k, SatCount bound) {
    return bound.saturated || k <= bound.value;
}

/// Nondecreasing f : N -> N from a small spec grammar:
///   const:c        f(n) = c
///   exp:b          f(n) = b^n
///   scaledexp:a:b  f(n) = a * b^n
/// Monotonicity is checked on the first 64 values at construction.
class GrowthFunction {
public:
    static GrowthFunction constant(std::uint64_t c);
    static GrowthFunction exponential(std::uint64_t base);
    static GrowthFunction scaled_exponential(std::uint64_t scale, std::uint64_t base);
    static GrowthFunction parse(const std::string& spec);

    SatCount operator()(SatCount n) const;
    std::string spec() const;

private:
    enum class Kind { Constant, Exponential, ScaledExponential };
    GrowthFunction(Kind kind, std::uint64_t a, std::uint64_t b);
    Kind kind_;
    std::uint64_t a_; // constant value, or scale
    std::uint64_t b_; // base
};

/// f^(0) = 0, f^(i) = f^(i-1) + f(f^(i-1)).
SatCount f_iterate(const GrowthFunction& f, int i);

struct RoundRecord {
    double potential_before = 0.0; // ||A - A_hat||_F^2 entering the round
    double potential_after = 0.0;
    int atoms_added = 0;
    long long rank_after = 0;   // cumulative rank/cutrank witness
    double q_magnitude = 0.0;   // ||Q||_F of the applied projection
};

struct DecompositionTrace {
    std::vector<RoundRecord> rounds;
};

enum class HaltingCertificate { Exact, Greedy };
enum class CutSearchMode { Exact, Heuristic };

/// One rank-1 term coeff * left * right^T of a rank-mode approximation.
struct RankAtom {
    double coeff = 0.0;
    std::vector<double> left;
    std::vector<double> right;
};

struct RegularityResult {
    Matrix a_hat;
    std::variant<std::vector<RankAtom>, CutDecomposition> decomposition;
    long long k_witness = 0;
    DecompositionTrace trace;
    HaltingCertificate halting_certificate = HaltingCertificate::Greedy;

    // echoed into the serialized trace
    std::string mode; // "rank" | "cut-exact" | "cut-heuristic"
    double epsilon = 0.0;
    std::string f_spec;
};

/// Power-iteration convergence failure inside the engine; carries the rounds
/// completed before the failure.
struct EngineConvergenceError : ConvergenceError {
    DecompositionTrace partial_trace;
    EngineConvergenceError(const ConvergenceError& inner, DecompositionTrace trace)
        : ConvergenceError(inner.what(), inner.best_sigma),
          partial_trace(std::move(trace)) {}
};

struct EngineOptions {
    double power_tol = 1e-10;
    int power_max_iters = 10000;
    int heuristic_restarts = 32;
};

/// Greedy rank-atom decomposition: repeatedly project out spans of deflated
/// top singular directions of the residual while the projection magnitude
/// stays above eps * ||a||_F. The weak form is the f(n) = 1 special case.
RegularityResult weak_decompose_rank(const Matrix& a, double eps, std::uint64_t seed,
                                     const EngineOptions& opts = {});
RegularityResult strong_decompose_rank(const Matrix& a, double eps, const GrowthFunction& f,
                                       std::uint64_t seed, const EngineOptions& opts = {});

/// Same loop over cut atoms; `mode` selects the exact enumeration or the
/// heuristic search for the per-atom step.
RegularityResult weak_decompose_cut(const Matrix& a, double eps, CutSearchMode mode,
                                    std::uint64_t seed, const EngineOptions& opts = {});
RegularityResult strong_decompose_cut(const Matrix& a, double eps, const GrowthFunction& f,
                                      CutSearchMode mode, std::uint64_t seed,
                                      const EngineOptions& opts = {});

} // namespace regkit
