#pragma once

#include <cstddef>

namespace regkit::kernels {

/// Table of the dense double-precision primitives everything else is built
/// on. There is one scalar reference table and (on x86-64) one AVX2 table;
/// the active table is chosen once at startup from cpuid. Variants are
/// equivalence-tested against the scalar reference.
struct Ops {
    const char* name;
    double (*dot)(const double* x, const double* y, std::size_t n);
    double (*sum_squares)(const double* x, std::size_t n);
    double (*sum)(const double* x, std::size_t n);
    // y += a * x
    void (*axpy)(double a, const double* x, double* y, std::size_t n);
    // x *= a
    void (*scale)(double a, double* x, std::size_t n);
};

const Ops& scalar_ops();

/// AVX2 table, or nullptr when not compiled in / not supported by this CPU.
const Ops* avx2_ops();

/// Runtime-selected table (AVX2 when available, scalar otherwise).
const Ops& active_ops();

inline double dot(const double* x, const double* y, std::size_t n) {
    return active_ops().dot(x, y, n);
}
inline double sum_squares(const double* x, std::size_t n) {
    return active_ops().sum_squares(x, n);
}
inline double sum(const double* x, std::size_t n) {
    return active_ops().sum(x, n);
}
inline void axpy(double a, const double* x, double* y, std::size_t n) {
    active_ops().axpy(a, x, y, n);
}
inline void scale(double a, double* x, std::size_t n) {
    active_ops().scale(a, x, n);
}

} // namespace regkit::kernels
