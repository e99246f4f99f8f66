#include "regkit/svd.hpp"

#include <cmath>

#include "regkit/errors.hpp"
#include "regkit/kernels.hpp"
#include "regkit/rng.hpp"

namespace regkit {

std::vector<double> random_unit_vector(int n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> v(n);
    for (;;) {
        for (double& x : v) x = rng.next_signed();
        const double norm2 = kernels::sum_squares(v.data(), v.size());
        if (norm2 > 1e-6) {
            kernels::scale(1.0 / std::sqrt(norm2), v.data(), v.size());
            return v;
        }
    }
}

namespace {

struct GramIterResult {
    bool converged = false;
    double rho = 0.0; // Rayleigh quotient of A^T A, i.e. sigma^2
    std::vector<double> v;
};

// Power iteration on A^T A starting from v0 (unit). Stops when the
// eigen-residual ||A^T A v - rho v|| certifies |sigma - sigma*| <= tol*||a||_F.
GramIterResult gram_iterate(const Matrix& a, std::vector<double> v, double tol,
                            int max_iters, double norm_a) {
    GramIterResult res;
    const double abs_floor = 1e-300;
    const int min_iters = 8; // don't trust the residual test on the first steps
    std::vector<double> z;
    for (int iter = 0; iter < max_iters; ++iter) {
        const std::vector<double> y = matvec(a, v);
        z = matvec_transpose(a, y);
        const double rho = kernels::dot(v.data(), z.data(), v.size());
        // residual z - rho*v
        double resid2 = 0.0;
        for (std::size_t i = 0; i < z.size(); ++i) {
            const double d = z[i] - rho * v[i];
            resid2 += d * d;
        }
        // |rho - lambda| <= ||resid|| and sigma = sqrt(rho), so the sigma
        // error is about ||resid|| / (2 sigma).
        const double sigma = std::sqrt(std::max(rho, 0.0));
        const double target = 2.0 * tol * norm_a * sigma + abs_floor;
        const bool settled = iter + 1 >= min_iters || resid2 == 0.0;
        if ((settled && std::sqrt(resid2) <= target) ||
            rho <= (1e-15 * norm_a) * (1e-15 * norm_a)) {
            res.converged = true;
            res.rho = std::max(rho, 0.0);
            res.v = std::move(v);
            return res;
        }
        const double znorm2 = kernels::sum_squares(z.data(), z.size());
        if (znorm2 == 0.0) break; // landed in the kernel; restart with a new seed
        kernels::scale(1.0 / std::sqrt(znorm2), z.data(), z.size());
        v = z;
    }
    res.rho = std::max(kernels::dot(v.data(), matvec_transpose(a, matvec(a, v)).data(), v.size()), 0.0);
    res.v = std::move(v);
    return res;
}

double abs_eps(double scale) { return 1e-30 * (scale + 1.0); }

SingularTriple canonical_zero_triple(int rows, int cols) {
    SingularTriple t;
    t.sigma = 0.0;
    t.left.assign(rows, 0.0);
    t.right.assign(cols, 0.0);
    t.left[0] = 1.0;
    t.right[0] = 1.0;
    return t;
}

} // namespace

SingularTriple top_singular_triple(const Matrix& a, double tol, int max_iters,
                                   std::uint64_t seed) {
    if (tol <= 0.0) throw DomainError("tol must be positive");
    const double norm_a = frobenius_norm(a);
    if (norm_a == 0.0) return canonical_zero_triple(a.rows(), a.cols());

    const PowerIterOptions defaults;
    GramIterResult best;
    for (int attempt = 0; attempt <= defaults.restarts; ++attempt) {
        std::vector<double> v0 = random_unit_vector(a.cols(), mix_seed(seed, attempt));
        GramIterResult res = gram_iterate(a, std::move(v0), tol, max_iters, norm_a);
        // Accept the first converged attempt unless an earlier (stagnated)
        // attempt already proved the spectrum reaches meaningfully higher.
        const double slack = 4.0 * tol * norm_a * std::sqrt(best.rho) + abs_eps(norm_a);
        const bool superseded = !best.v.empty() && res.rho < best.rho - slack;
        if (best.v.empty() || res.rho > best.rho ||
            (res.converged && !best.converged && !superseded)) {
            best = std::move(res);
        }
        if (best.converged) break;
    }
    if (!best.converged)
        throw ConvergenceError("power iteration did not converge", std::sqrt(best.rho));

    SingularTriple t;
    t.right = std::move(best.v);
    std::vector<double> av = matvec(a, t.right);
    const double av_norm = std::sqrt(kernels::sum_squares(av.data(), av.size()));
    if (av_norm == 0.0) return canonical_zero_triple(a.rows(), a.cols());
    t.sigma = av_norm;
    kernels::scale(1.0 / av_norm, av.data(), av.size());
    t.left = std::move(av);
    return t;
}

SingularTriple top_singular_triple(const Matrix& a, std::uint64_t seed) {
    const PowerIterOptions o;
    return top_singular_triple(a, o.tol, o.max_iters, seed);
}

double f_top_k_norm(const Matrix& a, int k, double tol, std::uint64_t seed) {
    if (k < 1) throw DomainError("k must be >= 1");
    const double norm_a = frobenius_norm(a);
    if (norm_a == 0.0) return 0.0;
    const PowerIterOptions defaults;

    Matrix r = a;
    double acc = 0.0;
    const int kmax = std::min<long long>(k, std::min(a.rows(), a.cols()));
    for (int i = 0; i < kmax; ++i) {
        SingularTriple t = top_singular_triple(r, tol, defaults.max_iters, mix_seed(seed, i));
        if (t.sigma <= 1e-13 * norm_a) break;
        acc += t.sigma * t.sigma;
        // deflate: r -= sigma * left * right^T
        for (int row = 0; row < r.rows(); ++row)
            kernels::axpy(-t.sigma * t.left[row], t.right.data(), r.row(row), r.cols());
    }
    return std::sqrt(acc);
}

double f_top_k_norm(const Matrix& a, int k, std::uint64_t seed) {
    const PowerIterOptions o;
    return f_top_k_norm(a, k, o.tol, seed);
}

} // namespace regkit
