#pragma once

// Low-degree polynomials vanishing on most of a point set of bounded height.
//
// Each round samples tuples L of r points, keeps the tuple colliding most
// often with the rest modulo the window primes, and takes its points as C.
// A small polynomial of the least admissible degree D vanishing on C is
// found from the monomial system; its exact zero set is removed and the
// round repeats on the remainder until a (1 - epsilon) share is covered.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "heights.hpp"
#include "linalg.hpp"
#include "parallel.hpp"
#include "params.hpp"
#include "points.hpp"
#include "polynomial.hpp"
#include "prime_windows.hpp"
#include "random.hpp"
#include "residue.hpp"
#include "siegel.hpp"

namespace rsieve {

/// r = ceil(eta (log N)^(n kappa / (n - kappa))) unless overridden.
inline long compute_r(const FitParams& params, long double log_n) {
    if (params.r_override) return *params.r_override;
    const long double n = static_cast<long double>(params.n);
    const long double kappa = params.kappa.get_d();
    const long double x = static_cast<long double>(params.eta) * std::pow(log_n, n * kappa / (n - kappa));
    return std::max<long>(1, static_cast<long>(std::ceil(x * (1 - 1e-12L))));
}

struct DegreeChoice {
    unsigned D = 0;
    Integer R;  // binomial(D + n, n)
};

/// Least D with binomial(D + n, n) > (2 d^2 + 1) r.
inline DegreeChoice choose_degree(std::size_t n, long d, long r) {
    if (n < 1 || r < 1 || d < 1) throw ParameterError("choose_degree needs n, d, r >= 1");
    const Integer target = Integer(2 * d * d + 1) * Integer(r);
    for (unsigned D = 1;; ++D) {
        Integer R = monomial_count(n, D);
        if (R > target) return {D, R};
    }
}

template <class R>
LinearSystem<R> monomial_matrix(const std::vector<ProjPoint<R>>& C, std::size_t n, unsigned D, const FieldDescriptor& fd) {
    if (C.empty()) throw ParameterError("monomial matrix of an empty point list");
    auto mons = monomials(n, D);
    Matrix<R> rows;
    rows.reserve(C.size());
    for (const auto& y : C) {
        if (y.dimension() != n) throw ParameterError("point dimension mismatch");
        rows.push_back(monomial_values(y.coords(), mons, D, fd));
    }
    return LinearSystem<R>(fd, std::move(rows), mons.size());
}

struct DenseSetResult {
    std::vector<std::size_t> C;                  // indices into the input, ascending
    std::vector<std::size_t> X_prime;            // indices into the input, ascending
    std::vector<double> scores;                  // per input point: sum of log N(P) over colliding primes
    std::vector<std::uint64_t> candidate_scores; // collision count of each sampled tuple
    std::size_t chosen = 0;                      // index of the kept tuple
    bool sampled = false;
};

/// `table` holds class ids of `points` for each prime in `primes`.
template <class R>
DenseSetResult build_dense_set(std::size_t count, const ClassTable& table, const std::vector<Prime<R>>& primes, std::size_t r, double window_length, double theta, std::size_t num_candidates, Rng& rng, std::size_t threads = 1) {
    if (count == 0) throw ParameterError("dense set of an empty point set");
    if (primes.empty()) throw ParameterError("dense set needs at least one prime");
    DenseSetResult out;
    const std::size_t np = primes.size();

    if (count <= r) {
        out.C.resize(count);
        for (std::size_t i = 0; i < count; ++i) out.C[i] = i;
    } else {
        out.sampled = true;
        std::vector<std::vector<std::size_t>> tuples(num_candidates, std::vector<std::size_t>(r));
        for (auto& L : tuples)
            for (auto& x : L) x = static_cast<std::size_t>(uniform_below(rng, count));
        // class sizes per prime
        std::vector<std::vector<std::uint32_t>> sizes(np);
        for (std::size_t j = 0; j < np; ++j) {
            sizes[j].assign(table.class_count[j], 0);
            for (std::size_t i = 0; i < count; ++i) ++sizes[j][table.ids[j][i]];
        }
        out.candidate_scores.assign(num_candidates, 0);
        parallel_for(num_candidates, threads, [&](std::size_t k) {
            std::uint64_t score = 0;
            std::vector<std::uint32_t> cls(r);
            for (std::size_t j = 0; j < np; ++j) {
                for (std::size_t a = 0; a < r; ++a) cls[a] = table.ids[j][tuples[k][a]];
                std::sort(cls.begin(), cls.end());
                for (std::size_t a = 0; a < r; ++a)
                    if (a == 0 || cls[a] != cls[a - 1]) score += sizes[j][cls[a]];
            }
            out.candidate_scores[k] = score;
        });
        out.chosen = static_cast<std::size_t>(std::max_element(out.candidate_scores.begin(), out.candidate_scores.end()) - out.candidate_scores.begin());
        out.C = tuples[out.chosen];
        std::sort(out.C.begin(), out.C.end());
        out.C.erase(std::unique(out.C.begin(), out.C.end()), out.C.end());
    }

    std::vector<std::vector<char>> hit(np);
    std::vector<double> weight(np);
    for (std::size_t j = 0; j < np; ++j) {
        hit[j].assign(table.class_count[j], 0);
        for (auto c : out.C) hit[j][table.ids[j][c]] = 1;
        weight[j] = log_abs(primes[j].norm);
    }
    out.scores.assign(count, 0.0);
    const double threshold = theta * window_length;
    for (std::size_t i = 0; i < count; ++i) {
        double s = 0;
        for (std::size_t j = 0; j < np; ++j)
            if (hit[j][table.ids[j][i]]) s += weight[j];
        out.scores[i] = s;
        if (s >= threshold) out.X_prime.push_back(i);
    }
    return out;
}

/// Convenience form deriving r and |I| from the parameters and the bound of X.
template <class R>
DenseSetResult build_dense_set(const PointSet<R>& X, const std::vector<Prime<R>>& primes, const FitParams& params, std::size_t threads = 1) {
    params.validate();
    if (X.empty()) throw ParameterError("dense set of an empty point set");
    const long double log_n = static_cast<long double>(X.bound().log());
    const PrimeWindow w = window_from_log(params, X.field(), log_n);
    const long r = compute_r(params, log_n);
    Rng rng(params.seed);
    ClassTable table = build_class_table(X.points(), primes, threads);
    return build_dense_set(X.size(), table, primes, static_cast<std::size_t>(r), static_cast<double>(w.length()), params.theta, params.num_candidates, rng, threads);
}

enum class FitStatus { Success, MaxIterations };

inline const char* to_string(FitStatus s) { return s == FitStatus::Success ? "success" : "max_iterations"; }

struct IterationRecord {
    std::size_t iteration = 0;
    std::size_t remainder = 0;  // uncovered points entering the round
    std::size_t dense_size = 0;
    std::size_t x_prime_size = 0;
    std::size_t x_prime_covered = 0;
    unsigned degree = 0;
    Integer monomials;
    std::size_t rank = 0;
    HeightValue coefficient_height;
    std::string strategy;
    bool siegel_bound_ok = false;
    bool coefficient_bound_ok = false;
    std::size_t newly_covered = 0;
    std::size_t covered = 0;
};

template <class R>
struct VanishingCertificate {
    FieldDescriptor field;
    std::size_t n = 0;
    HeightValue bound;
    FitParams params;
    long r = 0;
    PrimeWindow window;
    std::size_t prime_count = 0;
    std::vector<HomogeneousPolynomial<R>> factors;
    unsigned total_degree = 0;
    HeightValue max_coeff_height;
    std::size_t covered = 0;
    std::size_t total = 0;
    std::size_t iterations = 0;
    FitStatus status = FitStatus::MaxIterations;
    bool siegel_bounds_ok = true;
    bool coefficient_bounds_ok = true;
    std::vector<IterationRecord> log;

    double coverage() const { return total ? static_cast<double>(covered) / static_cast<double>(total) : 1.0; }
};

struct FitOptions {
    std::size_t threads = 1;
    SiegelOptions siegel;
    PrimeCaps caps;
    WindowMode mode = WindowMode::NormEqualsTarget;
};

/// height <= B (R N^((d n + 1) d^2 D))^(4 d^2)
inline bool coefficient_bound_holds(const HeightValue& h, const Integer& R, const HeightValue& N, std::size_t n, long d, unsigned D, long slack) {
    const unsigned long inner = static_cast<unsigned long>((d * static_cast<long>(n) + 1) * d * d) * D;
    Integer base = R * ipow(N.value, inner);
    return h.value <= Integer(slack) * ipow(base, static_cast<unsigned long>(4 * d * d));
}

inline bool coverage_reached(std::size_t covered, std::size_t total, double epsilon) {
    return static_cast<long double>(covered) >= (1.0L - static_cast<long double>(epsilon)) * static_cast<long double>(total) - 1e-9L;
}

/// Indices of the points (among `idx`) where p vanishes.
template <class R>
std::vector<char> vanishing_mask(const HomogeneousPolynomial<R>& p, const std::vector<ProjPoint<R>>& pts, const FieldDescriptor& fd, std::size_t threads) {
    std::vector<char> mask(pts.size(), 0);
    VanishingTester<R> tester(p, fd);
    parallel_for(pts.size(), threads, [&](std::size_t i) { mask[i] = tester.vanishes_at(pts[i].coords()) ? 1 : 0; });
    return mask;
}

template <class R>
VanishingCertificate<R> fit_polynomial(const PointSet<R>& X, const FitParams& params, const FitOptions& opt = {}) {
    params.validate();
    if (X.empty()) throw ParameterError("cannot fit an empty point set");
    if (X.n() != params.n) throw ParameterError("point dimension " + std::to_string(X.n()) + " does not match n = " + std::to_string(params.n));
    const FieldDescriptor& fd = X.field();
    const long double log_n = static_cast<long double>(X.bound().log());
    if (!(log_n > 1.0L)) throw ParameterError("the height bound N must exceed e");

    VanishingCertificate<R> cert;
    cert.field = fd;
    cert.n = X.n();
    cert.bound = X.bound();
    cert.params = params;
    cert.total = X.size();
    cert.window = window_from_log(params, fd, log_n, opt.mode);
    cert.r = compute_r(params, log_n);
    cert.max_coeff_height = RingOps<R>::height(RingOps<R>::zero(fd));
    const auto primes = enumerate_primes<R>(cert.window, opt.caps);
    cert.prime_count = primes.size();
    if (primes.empty()) throw ParameterError("the prime window [" + std::to_string(static_cast<double>(cert.window.lower)) + ", " + std::to_string(static_cast<double>(cert.window.upper)) + "] contains no primes");

    const long d = fd.degree_d;
    const DegreeChoice deg = choose_degree(X.n(), d, cert.r);
    Rng rng(params.seed);
    SiegelOptions sopt = opt.siegel;
    sopt.threads = opt.threads;

    std::vector<ProjPoint<R>> remainder = X.points();
    for (std::size_t it = 1; it <= params.max_iterations && !remainder.empty(); ++it) {
        IterationRecord rec;
        rec.iteration = it;
        rec.remainder = remainder.size();

        ClassTable table = build_class_table(remainder, primes, opt.threads);
        DenseSetResult dense = build_dense_set(remainder.size(), table, primes, static_cast<std::size_t>(cert.r), static_cast<double>(cert.window.length()), params.theta, params.num_candidates, rng, opt.threads);
        rec.dense_size = dense.C.size();
        rec.x_prime_size = dense.X_prime.size();

        std::vector<ProjPoint<R>> C;
        for (auto i : dense.C) C.push_back(remainder[i]);
        LinearSystem<R> A = monomial_matrix(C, X.n(), deg.D, fd);
        SmallSolution<R> sol = small_kernel(A, sopt);
        HomogeneousPolynomial<R> P = polynomial_from_coefficients(X.n(), deg.D, sol.c);

        rec.degree = deg.D;
        rec.monomials = deg.R;
        rec.rank = sol.rank;
        rec.strategy = to_string(sol.strategy_used);
        rec.coefficient_height = P.coefficient_height(fd);
        rec.siegel_bound_ok = sol.within_bound;
        rec.coefficient_bound_ok = coefficient_bound_holds(rec.coefficient_height, deg.R, X.bound(), X.n(), d, deg.D, sopt.slack);

        std::vector<char> mask = vanishing_mask(P, remainder, fd, opt.threads);
        for (auto i : dense.C)
            if (!mask[i]) throw IntegrityError("factor does not vanish on its own dense set");
        for (auto i : dense.X_prime) rec.x_prime_covered += mask[i] ? 1 : 0;
        std::vector<ProjPoint<R>> next;
        for (std::size_t i = 0; i < remainder.size(); ++i) {
            if (mask[i])
                ++rec.newly_covered;
            else
                next.push_back(std::move(remainder[i]));
        }
        remainder = std::move(next);
        cert.covered += rec.newly_covered;
        rec.covered = cert.covered;

        cert.total_degree += deg.D;
        cert.max_coeff_height = std::max(cert.max_coeff_height, rec.coefficient_height);
        cert.siegel_bounds_ok = cert.siegel_bounds_ok && rec.siegel_bound_ok;
        cert.coefficient_bounds_ok = cert.coefficient_bounds_ok && rec.coefficient_bound_ok;
        cert.factors.push_back(std::move(P));
        cert.log.push_back(std::move(rec));
        cert.iterations = it;
        if (coverage_reached(cert.covered, cert.total, params.epsilon)) break;
    }
    cert.status = coverage_reached(cert.covered, cert.total, params.epsilon) ? FitStatus::Success : FitStatus::MaxIterations;
    return cert;
}

struct VerifyResult {
    std::size_t covered = 0;
    std::vector<std::size_t> per_factor;
};

/// Recounts the points where some factor vanishes; throws IntegrityError if
/// the count differs from the certificate.
template <class R>
VerifyResult verify_certificate(const PointSet<R>& X, const VanishingCertificate<R>& cert, std::size_t threads = 1) {
    VerifyResult out;
    std::vector<char> any(X.size(), 0);
    for (const auto& f : cert.factors) {
        if (f.is_zero()) throw IntegrityError("certificate contains a zero factor");
        for (const auto& [e, c] : f.terms) {
            unsigned s = 0;
            for (auto k : e) s += k;
            if (e.size() != X.n() + 1 || s != f.degree) throw IntegrityError("factor is not homogeneous of its recorded degree");
        }
        std::vector<char> mask(X.size(), 0);
        parallel_for(X.size(), threads, [&](std::size_t i) { mask[i] = RingOps<R>::is_zero(evaluate(f, X.points()[i].coords(), X.field())) ? 1 : 0; });
        std::size_t count = 0;
        for (std::size_t i = 0; i < X.size(); ++i) {
            count += mask[i];
            any[i] |= mask[i];
        }
        out.per_factor.push_back(count);
    }
    for (auto v : any) out.covered += v;
    if (out.covered != cert.covered) throw IntegrityError("certificate claims " + std::to_string(cert.covered) + " covered points, exact evaluation finds " + std::to_string(out.covered));
    return out;
}

template <class R>
struct OracleResult {
    std::optional<unsigned> D_min;
    std::optional<HomogeneousPolynomial<R>> polynomial;
};

/// Least D <= D_max for which the full monomial matrix on X has a kernel,
/// computed by fraction-free elimination.
template <class R>
OracleResult<R> oracle_min_degree(const PointSet<R>& X, unsigned D_max) {
    if (X.size() > 500) throw ResourceError("oracle is limited to 500 points");
    if (D_max > 12) throw ResourceError("oracle is limited to degree 12");
    OracleResult<R> out;
    if (X.empty()) return out;
    const FieldDescriptor& fd = X.field();
    for (unsigned D = 1; D <= D_max; ++D) {
        auto mons = monomials(X.n(), D);
        Matrix<R> m;
        for (const auto& x : X.points()) m.push_back(monomial_values(x.coords(), mons, D, fd));
        auto e = bareiss(std::move(m), mons.size(), fd);
        if (e.rank == mons.size()) continue;
        std::size_t f = 0;
        for (std::size_t p = 0; f < mons.size(); ++f) {
            if (p < e.pivots.size() && e.pivots[p] == f)
                ++p;
            else
                break;
        }
        out.D_min = D;
        out.polynomial = polynomial_from_coefficients(X.n(), D, echelon_kernel_vector(e, mons.size(), f, fd));
        return out;
    }
    return out;
}

/// n+1 linear forms in m+1 variables defining P^m --> P^n.
template <class R>
struct VarietyMap {
    std::size_t m = 0;
    std::size_t n = 0;
    Matrix<R> forms;  // (n+1) x (m+1)

    void validate(const FieldDescriptor& fd) const {
        if (forms.size() != n + 1) throw ParameterError("a map to P^n needs n+1 forms");
        for (const auto& f : forms)
            if (f.size() != m + 1) throw ParameterError("each form needs m+1 coefficients");
        if (bareiss(forms, m + 1, fd).rank != n + 1) throw ParameterError("the linear forms are degenerate");
    }

    HeightValue coefficient_height(const FieldDescriptor& fd) const {
        HeightValue h = RingOps<R>::height(RingOps<R>::zero(fd));
        for (const auto& f : forms) h = std::max(h, max_height(f, fd));
        return h;
    }
};

template <class R>
struct TransformResult {
    PointSet<R> points;
    std::vector<std::size_t> source;  // index in X of each image point's first preimage
    std::size_t dropped = 0;          // points mapped to the zero vector
};

template <class R>
TransformResult<R> transform_points(const PointSet<R>& X, const VarietyMap<R>& map) {
    const FieldDescriptor& fd = X.field();
    map.validate(fd);
    if (X.n() != map.m) throw ParameterError("point dimension does not match the map");
    HeightValue M = HeightValue::of(Integer(static_cast<unsigned long>(map.m + 1)) * map.coefficient_height(fd).value * X.bound().value);
    TransformResult<R> out{PointSet<R>(fd, map.n, M), {}, 0};
    for (std::size_t k = 0; k < X.size(); ++k) {
        const auto& x = X.points()[k].coords();
        std::vector<R> y(map.n + 1, RingOps<R>::zero(fd));
        bool nonzero = false;
        for (std::size_t i = 0; i <= map.n; ++i) {
            for (std::size_t j = 0; j <= map.m; ++j)
                if (!RingOps<R>::is_zero(map.forms[i][j]) && !RingOps<R>::is_zero(x[j])) y[i] += map.forms[i][j] * x[j];
            nonzero = nonzero || !RingOps<R>::is_zero(y[i]);
        }
        if (!nonzero) {
            ++out.dropped;
            continue;
        }
        if (out.points.insert(ProjPoint<R>::from_ring(std::move(y)))) out.source.push_back(k);
    }
    return out;
}

/// Substitutes Y_i = F_i(T) into every factor and recounts coverage on the
/// preimage set X, checking that every point whose image was covered is
/// still a zero.
template <class R>
VanishingCertificate<R> compose_certificate(const VanishingCertificate<R>& cert, const VarietyMap<R>& map, const PointSet<R>& X) {
    const FieldDescriptor& fd = cert.field;
    map.validate(fd);
    if (cert.n != map.n) throw ParameterError("certificate dimension does not match the map");
    std::vector<HomogeneousPolynomial<R>> lin(map.n + 1);
    for (std::size_t i = 0; i <= map.n; ++i) {
        lin[i] = {map.m + 1, 1, {}};
        for (std::size_t j = 0; j <= map.m; ++j) {
            Exponent e(map.m + 1, 0);
            e[j] = 1;
            lin[i].add_term(e, map.forms[i][j]);
        }
    }
    VanishingCertificate<R> out = cert;
    out.n = map.m;
    out.factors.clear();
    out.max_coeff_height = RingOps<R>::height(RingOps<R>::zero(fd));
    for (const auto& f : cert.factors) {
        // powers of each form up to the factor degree
        std::vector<std::vector<HomogeneousPolynomial<R>>> pw(map.n + 1);
        for (std::size_t i = 0; i <= map.n; ++i) {
            Exponent zero(map.m + 1, 0);
            HomogeneousPolynomial<R> one{map.m + 1, 0, {}};
            one.add_term(zero, RingOps<R>::one(fd));
            pw[i].push_back(one);
            for (unsigned k = 1; k <= f.degree; ++k) pw[i].push_back(pw[i].back() * lin[i]);
        }
        HomogeneousPolynomial<R> g{map.m + 1, f.degree, {}};
        for (const auto& [e, c] : f.terms) {
            HomogeneousPolynomial<R> term{map.m + 1, 0, {}};
            term.add_term(Exponent(map.m + 1, 0), c);
            for (std::size_t i = 0; i <= map.n; ++i)
                if (e[i]) term = term * pw[i][e[i]];
            for (const auto& [te, tc] : term.terms) g.add_term(te, tc);
        }
        if (g.is_zero()) throw IntegrityError("substitution produced the zero polynomial");
        out.max_coeff_height = std::max(out.max_coeff_height, g.coefficient_height(fd));
        out.factors.push_back(std::move(g));
    }

    // recount on X and check consistency with the image certificate
    out.total = X.size();
    out.covered = 0;
    for (const auto& x : X.points()) {
        std::vector<R> y(map.n + 1, RingOps<R>::zero(fd));
        bool nonzero = false;
        for (std::size_t i = 0; i <= map.n; ++i) {
            for (std::size_t j = 0; j <= map.m; ++j) y[i] += map.forms[i][j] * x.coords()[j];
            nonzero = nonzero || !RingOps<R>::is_zero(y[i]);
        }
        bool image_covered = false;
        if (nonzero)
            for (const auto& f : cert.factors) image_covered = image_covered || RingOps<R>::is_zero(evaluate(f, y, fd));
        bool covered = false;
        for (const auto& g : out.factors) covered = covered || RingOps<R>::is_zero(evaluate(g, x.coords(), fd));
        if (image_covered && !covered) throw IntegrityError("composed factor does not vanish at a preimage of a covered point");
        out.covered += covered ? 1 : 0;
    }
    out.status = coverage_reached(out.covered, out.total, cert.params.epsilon) ? FitStatus::Success : FitStatus::MaxIterations;
    return out;
}

}  // namespace rsieve
