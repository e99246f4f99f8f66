#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "regkit/kernels.hpp"
#include "regkit/rng.hpp"

using namespace regkit;

namespace {

std::vector<double> random_vec(int n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> v(n);
    for (double& x : v) x = 2.0 * rng.next_signed() + 0.1;
    return v;
}

} // namespace

TEST_CASE("active kernel table is a known variant") {
    const auto& ops = kernels::active_ops();
    const bool known = std::string(ops.name) == "scalar" || std::string(ops.name) == "avx2";
    CHECK(known);
}

TEST_CASE("avx2 kernels match the scalar reference") {
    const kernels::Ops* simd = kernels::avx2_ops();
    if (!simd) return; // nothing to compare on this host

    const auto& ref = kernels::scalar_ops();
    for (int n : {1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 17, 31, 64, 100, 1001}) {
        const auto x = random_vec(n, 10 + n);
        const auto y = random_vec(n, 20 + n);

        const double scale = std::sqrt(ref.sum_squares(x.data(), n) * ref.sum_squares(y.data(), n)) + 1.0;
        CHECK(std::abs(simd->dot(x.data(), y.data(), n) - ref.dot(x.data(), y.data(), n)) <=
              1e-12 * scale);
        CHECK(std::abs(simd->sum_squares(x.data(), n) - ref.sum_squares(x.data(), n)) <=
              1e-12 * scale);
        CHECK(std::abs(simd->sum(x.data(), n) - ref.sum(x.data(), n)) <= 1e-12 * scale);

        auto y1 = y, y2 = y;
        simd->axpy(0.37, x.data(), y1.data(), n);
        ref.axpy(0.37, x.data(), y2.data(), n);
        for (int i = 0; i < n; ++i) CHECK(std::abs(y1[i] - y2[i]) <= 1e-13 * (std::abs(y2[i]) + 1.0));

        auto x1 = x, x2 = x;
        simd->scale(-1.75, x1.data(), n);
        ref.scale(-1.75, x2.data(), n);
        for (int i = 0; i < n; ++i) CHECK(x1[i] == x2[i]); // multiply only, exact
    }
}

TEST_CASE("kernel edge cases") {
    const auto& ops = kernels::active_ops();
    CHECK(ops.dot(nullptr, nullptr, 0) == 0.0);
    CHECK(ops.sum_squares(nullptr, 0) == 0.0);
    CHECK(ops.sum(nullptr, 0) == 0.0);
}
