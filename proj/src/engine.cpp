#include "regkit/engine.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "regkit/kernels.hpp"
#include "regkit/rng.hpp"
#include "regkit/svd.hpp"
#include "spd_solve.hpp"

namespace regkit {

SatCount sat_add(SatCount a, SatCount b) {
    if (a.saturated || b.saturated) return SatCount::inf();
    const std::uint64_t s = a.value + b.value;
    if (s < a.value) return SatCount::inf();
    return {s, false};
}

SatCount sat_mul(SatCount a, SatCount b) {
    if (a.value == 0 && !a.saturated) return {0, false};
    if (b.value == 0 && !b.saturated) return {0, false};
    if (a.saturated || b.saturated) return SatCount::inf();
    if (a.value > std::numeric_limits<std::uint64_t>::max() / b.value) return SatCount::inf();
    return {a.value * b.value, false};
}

SatCount sat_pow(std::uint64_t base, SatCount exp) {
    if (exp.saturated) {
        if (base == 0) return {0, false};
        if (base == 1) return {1, false};
        return SatCount::inf();
    }
    SatCount acc{1, false};
    for (std::uint64_t i = 0; i < exp.value; ++i) {
        acc = sat_mul(acc, {base, false});
        if (acc.saturated) break;
        if (acc.value == 0) break;
    }
    return acc;
}

GrowthFunction::GrowthFunction(Kind kind, std::uint64_t a, std::uint64_t b)
    : kind_(kind), a_(a), b_(b) {
    SatCount prev = (*this)({0, false});
    for (std::uint64_t n = 1; n < 64; ++n) {
        const SatCount cur = (*this)({n, false});
        const bool ok = cur.saturated || (!prev.saturated && prev.value <= cur.value);
        if (!ok) throw DomainError("growth function must be nondecreasing: " + spec());
        prev = cur;
    }
}

GrowthFunction GrowthFunction::constant(std::uint64_t c) {
    return GrowthFunction(Kind::Constant, c, 0);
}
GrowthFunction GrowthFunction::exponential(std::uint64_t base) {
    return GrowthFunction(Kind::Exponential, 0, base);
}
GrowthFunction GrowthFunction::scaled_exponential(std::uint64_t scale, std::uint64_t base) {
    return GrowthFunction(Kind::ScaledExponential, scale, base);
}

GrowthFunction GrowthFunction::parse(const std::string& spec) {
    auto parse_u64 = [&](const std::string& s) -> std::uint64_t {
        if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
            throw DomainError("bad growth function spec: " + spec);
        return std::stoull(s);
    };
    const auto colon = spec.find(':');
    if (colon == std::string::npos) throw DomainError("bad growth function spec: " + spec);
    const std::string head = spec.substr(0, colon);
    const std::string rest = spec.substr(colon + 1);
    if (head == "const") return constant(parse_u64(rest));
    if (head == "exp") return exponential(parse_u64(rest));
    if (head == "scaledexp") {
        const auto colon2 = rest.find(':');
        if (colon2 == std::string::npos) throw DomainError("bad growth function spec: " + spec);
        return scaled_exponential(parse_u64(rest.substr(0, colon2)),
                                  parse_u64(rest.substr(colon2 + 1)));
    }
    throw DomainError("bad growth function spec: " + spec);
}

SatCount GrowthFunction::operator()(SatCount n) const {
    switch (kind_) {
        case Kind::Constant: return {a_, false};
        case Kind::Exponential: return sat_pow(b_, n);
        case Kind::ScaledExponential: return sat_mul({a_, false}, sat_pow(b_, n));
    }
    return {0, false};
}

std::string GrowthFunction::spec() const {
    switch (kind_) {
        case Kind::Constant: return "const:" + std::to_string(a_);
        case Kind::Exponential: return "exp:" + std::to_string(b_);
        case Kind::ScaledExponential:
            return "scaledexp:" + std::to_string(a_) + ":" + std::to_string(b_);
    }
    return "";
}

SatCount f_iterate(const GrowthFunction& f, int i) {
    SatCount x{0, false};
    for (int step = 0; step < i; ++step) x = sat_add(x, f(x));
    return x;
}

namespace {

struct RankPolicy {
    double tol;
    int max_iters;
    std::uint64_t seed;
    std::uint64_t call_counter = 0;

    using Atom = SingularTriple;

    std::pair<Atom, double> best(const Matrix& rr) {
        Atom t = top_singular_triple(rr, tol, max_iters, mix_seed(seed, call_counter++));
        const double sigma = t.sigma;
        return {std::move(t), sigma};
    }

    static void deflate(Matrix& rr, const Atom& t) {
        for (int i = 0; i < rr.rows(); ++i)
            kernels::axpy(-t.sigma * t.left[i], t.right.data(), rr.row(i), rr.cols());
    }

    static SpanProjection project_span(const Matrix& r0, const std::vector<Atom>& atoms) {
        const int k = static_cast<int>(atoms.size());
        std::vector<double> gram(static_cast<std::size_t>(k) * k), b(k);
        for (int l = 0; l < k; ++l) {
            const std::vector<double> rv = matvec(r0, atoms[l].right);
            b[l] = kernels::dot(atoms[l].left.data(), rv.data(), rv.size());
            for (int t = 0; t <= l; ++t) {
                const double g =
                    kernels::dot(atoms[l].left.data(), atoms[t].left.data(), atoms[l].left.size()) *
                    kernels::dot(atoms[l].right.data(), atoms[t].right.data(), atoms[l].right.size());
                gram[static_cast<std::size_t>(l) * k + t] = g;
                gram[static_cast<std::size_t>(t) * k + l] = g;
            }
        }
        std::vector<double> x(k), work(static_cast<std::size_t>(k) * k), y(k);
        std::vector<int> perm(k);
        pseudo_solve_spd(gram.data(), b.data(), k, x.data(), perm.data(), work.data(), y.data());

        SpanProjection out;
        out.q = Matrix(r0.rows(), r0.cols());
        for (int l = 0; l < k; ++l) {
            if (x[l] == 0.0) continue;
            for (int i = 0; i < r0.rows(); ++i)
                kernels::axpy(x[l] * atoms[l].left[i], atoms[l].right.data(), out.q.row(i),
                              r0.cols());
        }
        out.magnitude = frobenius_norm(out.q);
        out.coeffs = std::move(x);
        return out;
    }

    static long long hard_cap(const Matrix& a) { return std::min(a.rows(), a.cols()); }
};

struct CutPolicy {
    CutSearchMode mode;
    int restarts;
    std::uint64_t seed;
    std::uint64_t call_counter = 0;

    using Atom = std::pair<IndexMask, IndexMask>;

    std::pair<Atom, double> best(const Matrix& rr) {
        const CutNormWitness w = (mode == CutSearchMode::Exact)
                                     ? cut_norm_exact(rr)
                                     : cut_norm_heuristic(rr, restarts, mix_seed(seed, call_counter++));
        return {{w.row_set, w.col_set}, w.value};
    }

    static void deflate(Matrix& rr, const Atom& atom) {
        double sum = 0.0;
        for_each_bit(atom.first, [&](int i) {
            const double* row = rr.row(i);
            for_each_bit(atom.second, [&](int j) { sum += row[j]; });
        });
        const double coeff =
            sum / (static_cast<double>(popcount(atom.first)) * popcount(atom.second));
        for_each_bit(atom.first, [&](int i) {
            double* row = rr.row(i);
            for_each_bit(atom.second, [&](int j) { row[j] -= coeff; });
        });
    }

    static SpanProjection project_span(const Matrix& r0, const std::vector<Atom>& atoms) {
        return project_onto_cut_span(r0, atoms);
    }

    static long long hard_cap(const Matrix& a) {
        return 4LL * a.rows() * a.cols();
    }
};

template <class Policy>
RegularityResult run_engine(const Matrix& a, double eps, const GrowthFunction& f,
                            Policy& policy, std::string mode_name,
                            HaltingCertificate certificate) {
    if (eps <= 0.0) throw DomainError("epsilon must be positive");

    const double norm_a = frobenius_norm(a);
    const double threshold = eps * norm_a;
    const double mag_floor = 1e-13 * norm_a;

    RegularityResult res;
    res.a_hat = Matrix(a.rows(), a.cols());
    res.mode = std::move(mode_name);
    res.epsilon = eps;
    res.f_spec = f.spec();
    res.halting_certificate = certificate;

    using Atom = typename Policy::Atom;
    std::vector<Atom> all_atoms;
    std::vector<double> all_coeffs;

    Matrix r = a;
    long long witness = 0;
    // mathematically rounds < eps^-2; anything past that is a defect
    const std::size_t round_guard = static_cast<std::size_t>(1.0 / (eps * eps)) + 4;

    for (;;) {
        const double pot_before = kernels::sum_squares(r.data(), r.size());
        // No projection of r can beat ||r||_F itself.
        if (!(std::sqrt(pot_before) > threshold)) break;

        const SatCount budget = f({static_cast<std::uint64_t>(witness), false});
        if (!budget.saturated && budget.value == 0) break;
        long long cap = Policy::hard_cap(a);
        if (!budget.saturated && budget.value < static_cast<std::uint64_t>(cap))
            cap = static_cast<long long>(budget.value);

        std::vector<Atom> atoms;
        std::vector<double> search_mags;
        Matrix rr = r;
        double captured_sq = 0.0;
        try {
            while (static_cast<long long>(atoms.size()) < cap) {
                auto [atom, mag] = policy.best(rr);
                if (!(mag > mag_floor)) break;
                Policy::deflate(rr, atom);
                atoms.push_back(std::move(atom));
                search_mags.push_back(mag);
                captured_sq += mag * mag;
                // the span projection can only be larger than what the
                // sequential pass already removed, so the round will apply
                if (captured_sq > threshold * threshold) break;
            }
        } catch (const ConvergenceError& e) {
            throw EngineConvergenceError(e, res.trace);
        }
        if (atoms.empty()) break;

        SpanProjection proj = Policy::project_span(r, atoms);
        // Single-atom rounds report the search's own objective value so the
        // halting comparison matches a later re-run of the same search on the
        // final residual bit for bit.
        const double qmag = (atoms.size() == 1) ? search_mags[0] : proj.magnitude;
        if (!(qmag > threshold)) break;

        res.a_hat.add_scaled(proj.q, 1.0);
        r = a - res.a_hat;
        witness += static_cast<long long>(atoms.size());
        for (std::size_t l = 0; l < atoms.size(); ++l) {
            all_atoms.push_back(atoms[l]);
            all_coeffs.push_back(proj.coeffs[l]);
        }
        RoundRecord rec;
        rec.potential_before = pot_before;
        rec.potential_after = kernels::sum_squares(r.data(), r.size());
        rec.atoms_added = static_cast<int>(atoms.size());
        rec.rank_after = witness;
        rec.q_magnitude = qmag;
        res.trace.rounds.push_back(rec);
        if (res.trace.rounds.size() > round_guard)
            throw std::logic_error("engine exceeded the provable round bound");
    }

    res.k_witness = witness;
    if constexpr (std::is_same_v<Policy, CutPolicy>) {
        CutDecomposition d;
        d.rows = a.rows();
        d.cols = a.cols();
        for (std::size_t l = 0; l < all_atoms.size(); ++l)
            d.atoms.push_back({all_atoms[l].first, all_atoms[l].second, all_coeffs[l]});
        res.decomposition = std::move(d);
    } else {
        std::vector<RankAtom> list;
        for (std::size_t l = 0; l < all_atoms.size(); ++l)
            list.push_back({all_coeffs[l], all_atoms[l].left, all_atoms[l].right});
        res.decomposition = std::move(list);
    }
    return res;
}

} // namespace

RegularityResult strong_decompose_rank(const Matrix& a, double eps, const GrowthFunction& f,
                                       std::uint64_t seed, const EngineOptions& opts) {
    RankPolicy policy{opts.power_tol, opts.power_max_iters, seed};
    return run_engine(a, eps, f, policy, "rank", HaltingCertificate::Exact);
}

RegularityResult weak_decompose_rank(const Matrix& a, double eps, std::uint64_t seed,
                                     const EngineOptions& opts) {
    return strong_decompose_rank(a, eps, GrowthFunction::constant(1), seed, opts);
}

RegularityResult strong_decompose_cut(const Matrix& a, double eps, const GrowthFunction& f,
                                      CutSearchMode mode, std::uint64_t seed,
                                      const EngineOptions& opts) {
    CutPolicy policy{mode, opts.heuristic_restarts, seed};
    const char* name = (mode == CutSearchMode::Exact) ? "cut-exact" : "cut-heuristic";
    const HaltingCertificate cert = (mode == CutSearchMode::Exact) ? HaltingCertificate::Exact
                                                                   : HaltingCertificate::Greedy;
    return run_engine(a, eps, f, policy, name, cert);
}

RegularityResult weak_decompose_cut(const Matrix& a, double eps, CutSearchMode mode,
                                    std::uint64_t seed, const EngineOptions& opts) {
    return strong_decompose_cut(a, eps, GrowthFunction::constant(1), mode, seed, opts);
}

} // namespace regkit
