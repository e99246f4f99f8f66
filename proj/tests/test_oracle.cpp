#include <doctest.h>

#include <cmath>

#include "regkit/generators.hpp"
#include "regkit/graphreg.hpp"
#include "regkit/oracle.hpp"
#include "regkit/rng.hpp"
#include "test_util.hpp"

using namespace regkit;
using testutil::mat;

TEST_CASE("exact_singular_values") {
    SUBCASE("diagonal matrix") {
        const auto sv = oracle::exact_singular_values(mat({{3, 0}, {0, 4}}));
        CHECK(sv.size() == 2);
        CHECK(sv[0] == doctest::Approx(4.0).epsilon(1e-12));
        CHECK(sv[1] == doctest::Approx(3.0).epsilon(1e-12));
    }
    SUBCASE("rank-1 all-ones") {
        const auto sv = oracle::exact_singular_values(mat({{1, 1}, {1, 1}}));
        CHECK(sv[0] == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(sv[1] == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("Frobenius identity on seeded matrices") {
        for (int trial = 0; trial < 10; ++trial) {
            const Matrix a = gen_uniform_matrix(6, 6, 900 + trial);
            const auto sv = oracle::exact_singular_values(a);
            double sum_sq = 0.0;
            for (double s : sv) sum_sq += s * s;
            const double fro_sq = frobenius_norm(a) * frobenius_norm(a);
            CHECK(std::abs(sum_sq - fro_sq) <= 1e-9 * fro_sq);
        }
    }
    SUBCASE("wide matrices use the smaller Gram side") {
        const Matrix a = gen_uniform_matrix(3, 30, 4);
        const auto sv = oracle::exact_singular_values(a);
        CHECK(sv.size() == 3);
    }
    SUBCASE("budget") {
        CHECK_THROWS_AS(oracle::exact_singular_values(Matrix(17, 17)), BudgetExceededError);
    }
}

TEST_CASE("exhaustive_best_subset_ratio examples") {
    const auto r1 = oracle::exhaustive_best_subset_ratio(std::vector<double>{1, 0});
    CHECK(r1.value == doctest::Approx(1.0));
    CHECK(r1.subset == 0b01);
    const auto r2 = oracle::exhaustive_best_subset_ratio(std::vector<double>{1, 1});
    CHECK(r2.value == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(r2.subset == 0b11);
    const auto r3 = oracle::exhaustive_best_subset_ratio(std::vector<double>{3, -1});
    CHECK(r3.value == doctest::Approx(3.0));
    CHECK(r3.subset == 0b01);
}

TEST_CASE("exhaustive_discrepancy") {
    SUBCASE("complete block") {
        const Graph g = gen_complete_bipartite(3, 3);
        CHECK(oracle::exhaustive_discrepancy(g, 0b111, 0b111000) <= 1e-9);
    }
    SUBCASE("single-edge block must give 2/3") {
        const Graph g = Graph::from_edges(4, {{0, 2}});
        CHECK(oracle::exhaustive_discrepancy(g, 0b0011, 0b1100) ==
              doctest::Approx(2.0 / 3.0).epsilon(1e-9));
    }
    SUBCASE("cross-validates the production discrepancy") {
        Rng rng(1);
        for (int trial = 0; trial < 40; ++trial) {
            const Graph g = gen_gnp(10, 0.25 + 0.1 * (trial % 6), 2000 + trial);
            const IndexMask vi = rng.next_nonempty_mask(5);
            const IndexMask vj = rng.next_nonempty_mask(5) << 5;
            const double got = oracle::exhaustive_discrepancy(g, vi, vj);
            const double want = discrepancy_exact(g, vi, vj);
            CHECK(std::abs(got - want) <= 1e-9);
        }
    }
    SUBCASE("budget") {
        const Graph g = gen_gnp(24, 0.5, 3);
        CHECK_THROWS_AS(oracle::exhaustive_discrepancy(g, full_mask(12), full_mask(12) << 12),
                        BudgetExceededError);
    }
}

TEST_CASE("exhaustive_estimate_error") {
    SUBCASE("empty graph") {
        const Graph g(5, Matrix(5, 5));
        const auto out = compress(g, 0.5, CutSearchMode::Exact, 1);
        CHECK(oracle::exhaustive_estimate_error(g, out.compressed) == 0.0);
    }
    SUBCASE("complete bipartite compresses to zero error") {
        const Graph g = gen_complete_bipartite(5, 5);
        const auto out = compress(g, 0.5, CutSearchMode::Exact, 2);
        CHECK(oracle::exhaustive_estimate_error(g, out.compressed) <= 1e-12);
    }
    SUBCASE("agrees with direct enumeration on small graphs") {
        for (int trial = 0; trial < 3; ++trial) {
            const Graph g = gen_gnp(7, 0.5, 3000 + trial);
            const auto out = compress(g, 0.6, CutSearchMode::Exact, trial);
            // direct: max over all (S,T) of |e - estimate|
            double want = 0.0;
            for (IndexMask s = 0; s < (IndexMask{1} << 7); ++s)
                for (IndexMask t = 0; t < (IndexMask{1} << 7); ++t) {
                    const double e = static_cast<double>(exact_cut_count(g, s, t));
                    const double est = estimate_cut(out.compressed, s, t);
                    want = std::max(want, std::abs(e - est));
                }
            CHECK(oracle::exhaustive_estimate_error(g, out.compressed) ==
                  doctest::Approx(want).epsilon(1e-9));
        }
    }
    SUBCASE("budget") {
        const Graph g = gen_gnp(13, 0.5, 4);
        const auto out = compress(g, 0.6, CutSearchMode::Heuristic, 4);
        CHECK_THROWS_AS(oracle::exhaustive_estimate_error(g, out.compressed),
                        BudgetExceededError);
    }
}
