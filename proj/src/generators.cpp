#include "regkit/generators.hpp"

#include "regkit/errors.hpp"
#include "regkit/rng.hpp"

namespace regkit {

Graph gen_gnp(int n, double p, std::uint64_t seed) {
    if (n <= 0) throw DomainError("n must be positive");
    if (p < 0.0 || p > 1.0) throw DomainError("p must be in [0, 1]");
    Rng rng(seed);
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (rng.next_double() < p) edges.emplace_back(i, j);
    return Graph::from_edges(n, edges);
}

Graph gen_complete_bipartite(int a, int b) {
    if (a <= 0 || b <= 0) throw DomainError("part sizes must be positive");
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < a; ++i)
        for (int j = 0; j < b; ++j) edges.emplace_back(i, a + j);
    return Graph::from_edges(a + b, edges);
}

Graph gen_planted_partition(int n, int k, double p_in, double p_out, std::uint64_t seed) {
    if (n <= 0) throw DomainError("n must be positive");
    if (k <= 0 || k > n) throw DomainError("k must be in [1, n]");
    if (p_in < 0.0 || p_in > 1.0 || p_out < 0.0 || p_out > 1.0)
        throw DomainError("probabilities must be in [0, 1]");
    Rng rng(seed);
    auto group = [&](int u) { return static_cast<int>(static_cast<long long>(u) * k / n); };
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double p = (group(i) == group(j)) ? p_in : p_out;
            if (rng.next_double() < p) edges.emplace_back(i, j);
        }
    }
    return Graph::from_edges(n, edges);
}

Matrix gen_uniform_matrix(int rows, int cols, std::uint64_t seed) {
    Rng rng(seed);
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m.at(i, j) = rng.next_signed();
    return m;
}

Matrix gen_sign_matrix(int rows, int cols, std::uint64_t seed) {
    Rng rng(seed);
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m.at(i, j) = (rng.next_u64() & 1) ? 1.0 : -1.0;
    return m;
}

} // namespace regkit
