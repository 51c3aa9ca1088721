#pragma once

// Prime sets attached to a height bound N:
//   over Q      the rational primes with tau*(log N)^(n/(n-kappa)) <= p <= twice that,
//   over F_q(T) the monic irreducibles of the single degree h whose norm q^h is the
//               smallest q-power at or above that threshold (h > d).

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "errors.hpp"
#include "params.hpp"
#include "ring.hpp"

namespace rsieve {

template <class R>
struct Prime {
    R generator;   // positive rational prime, or monic irreducible polynomial
    Integer norm;  // |O_K / P|

    friend bool operator==(const Prime& a, const Prime& b) { return a.generator == b.generator; }
    friend bool operator<(const Prime& a, const Prime& b) { return RingOps<R>::compare(a.generator, b.generator) < 0; }
};

enum class WindowMode { NormInInterval, NormEqualsTarget };

struct PrimeWindow {
    FieldDescriptor field;
    WindowMode mode = WindowMode::NormInInterval;
    long double lower = 0;  // |I| = tau (log N)^(n/(n-kappa))
    long double upper = 0;
    long degree_lo = 0;  // function fields: admissible degrees
    long degree_hi = 0;

    /// The length |I| used by the dense-set threshold.
    long double length() const { return lower; }
};

struct PrimeCaps {
    std::uint64_t max_rational = 100'000'000;
    long max_degree = 24;
};

/// Builds the window for a bound with the given natural logarithm.
inline PrimeWindow window_from_log(const FitParams& params, const FieldDescriptor& fd, long double log_n, WindowMode fn_mode = WindowMode::NormEqualsTarget) {
    if (params.kappa < 0 || params.kappa >= Rational(static_cast<unsigned long>(params.n))) throw ParameterError("kappa must satisfy 0 <= kappa < n");
    if (!(params.tau >= 1.0)) throw ParameterError("tau must be >= 1");
    if (!(log_n > 1.0L)) throw ParameterError("the height bound must exceed e");
    const long double n = static_cast<long double>(params.n);
    const long double kappa = params.kappa.get_d();
    const long double base = static_cast<long double>(params.tau) * std::pow(log_n, n / (n - kappa));
    PrimeWindow w;
    w.field = fd;
    w.lower = base;
    w.upper = 2 * base;
    if (!fd.is_function_field()) {
        w.mode = WindowMode::NormInInterval;
        return w;
    }
    w.mode = fn_mode;
    // smallest h with q^h >= base, up to a relative rounding tolerance
    const long double q = fd.q;
    long h = 0;
    long double qh = 1;
    while (qh < base * (1 - 1e-12L)) {
        qh *= q;
        ++h;
    }
    h = std::max<long>(h, fd.degree_d + 1);
    w.degree_lo = h;
    w.degree_hi = h;
    if (fn_mode == WindowMode::NormInInterval) {
        long hi = h;
        long double qn = std::pow(q, static_cast<long double>(h + 1));
        while (qn <= w.upper * (1 + 1e-12L)) {
            ++hi;
            qn *= q;
        }
        w.degree_hi = hi;
    } else {
        w.lower = w.upper = std::pow(q, static_cast<long double>(h));
    }
    return w;
}

inline PrimeWindow window_from_params(const FitParams& params, const FieldDescriptor& fd, const HeightValue& bound, WindowMode fn_mode = WindowMode::NormEqualsTarget) {
    return window_from_log(params, fd, static_cast<long double>(bound.log()), fn_mode);
}

/// Rational primes in [lo, hi] by a segmented sieve.
inline std::vector<std::uint64_t> primes_between(std::uint64_t lo, std::uint64_t hi) {
    std::vector<std::uint64_t> out;
    if (hi < 2 || lo > hi) return out;
    lo = std::max<std::uint64_t>(lo, 2);
    std::uint64_t root = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(hi)));
    while (root * root > hi) --root;
    while ((root + 1) * (root + 1) <= hi) ++root;
    std::vector<bool> small(root + 1, true);
    std::vector<std::uint64_t> base;
    for (std::uint64_t i = 2; i <= root; ++i) {
        if (!small[i]) continue;
        base.push_back(i);
        for (std::uint64_t j = i * i; j <= root; j += i) small[j] = false;
    }
    std::vector<bool> seg(hi - lo + 1, true);
    for (auto p : base) {
        std::uint64_t start = std::max(p * p, (lo + p - 1) / p * p);
        for (std::uint64_t j = start; j <= hi; j += p) seg[j - lo] = false;
    }
    for (std::uint64_t i = 0; i < seg.size(); ++i)
        if (seg[i]) out.push_back(lo + i);
    return out;
}

/// Monic irreducible polynomials of degree h over F_q in ascending base-q order.
inline std::vector<FpPoly> irreducibles_of_degree(std::uint32_t q, long h, const PrimeCaps& caps = {}) {
    if (h < 1) throw ParameterError("degree must be positive");
    if (h > caps.max_degree) throw ResourceError("irreducible degree " + std::to_string(h) + " exceeds the cap " + std::to_string(caps.max_degree));
    long double total = std::pow(static_cast<long double>(q), static_cast<long double>(h));
    if (total > 1e9L) throw ResourceError("too many monic polynomials of degree " + std::to_string(h));
    std::vector<FpPoly> out;
    const std::uint64_t count = static_cast<std::uint64_t>(std::llround(total));
    std::vector<FpPoly::Coeff> c(static_cast<std::size_t>(h) + 1, 0);
    c[h] = 1;
    for (std::uint64_t v = 0; v < count; ++v) {
        std::uint64_t t = v;
        for (long i = 0; i < h; ++i) {
            c[i] = static_cast<FpPoly::Coeff>(t % q);
            t /= q;
        }
        if (h > 1 && c[0] == 0) continue;
        FpPoly f(q, c);
        if (f.is_irreducible()) out.push_back(std::move(f));
    }
    return out;
}

inline std::vector<Prime<Integer>> enumerate_rational_primes(const PrimeWindow& w, const PrimeCaps& caps = {}) {
    if (w.upper > static_cast<long double>(caps.max_rational)) throw ResourceError("prime window upper edge exceeds the cap " + std::to_string(caps.max_rational));
    // relative tolerance absorbs rounding in the floating window edges
    std::uint64_t lo = static_cast<std::uint64_t>(std::ceil(w.lower * (1 - 1e-12L)));
    std::uint64_t hi = static_cast<std::uint64_t>(std::floor(w.upper * (1 + 1e-12L)));
    std::vector<Prime<Integer>> out;
    for (auto p : primes_between(lo, hi)) out.push_back({Integer(static_cast<unsigned long>(p)), Integer(static_cast<unsigned long>(p))});
    return out;
}

inline std::vector<Prime<FpPoly>> enumerate_irreducible_primes(const PrimeWindow& w, const PrimeCaps& caps = {}) {
    std::vector<Prime<FpPoly>> out;
    for (long h = w.degree_lo; h <= w.degree_hi; ++h) {
        for (auto& f : irreducibles_of_degree(w.field.q, h, caps)) {
            Integer norm = RingOps<FpPoly>::norm(f);
            out.push_back({std::move(f), std::move(norm)});
        }
    }
    return out;
}

template <class R>
std::vector<Prime<R>> enumerate_primes(const PrimeWindow& w, const PrimeCaps& caps = {}) {
    if constexpr (std::is_same_v<R, Integer>)
        return enumerate_rational_primes(w, caps);
    else
        return enumerate_irreducible_primes(w, caps);
}

inline int moebius(long m) {
    int mu = 1;
    for (long p = 2; p * p <= m; ++p) {
        if (m % p) continue;
        m /= p;
        if (m % p == 0) return 0;
        mu = -mu;
    }
    if (m > 1) mu = -mu;
    return mu;
}

/// Number of monic irreducibles of degree h over F_q: (1/h) sum_{m | h} mu(m) q^(h/m).
inline Integer count_irreducibles(std::uint32_t q, long h) {
    if (h < 1) throw ParameterError("degree must be positive");
    if (!is_prime_u64(q)) throw ParameterError("q must be prime");
    Integer sum = 0;
    for (long m = 1; m <= h; ++m) {
        if (h % m) continue;
        int mu = moebius(m);
        if (mu == 0) continue;
        Integer term = ipow(static_cast<unsigned long>(q), static_cast<unsigned long>(h / m));
        if (mu > 0)
            sum += term;
        else
            sum -= term;
    }
    return rsieve::divexact(sum, Integer(h));
}

/// Primes with norm in [lower, upper], used by the conjecture probe.
template <class R>
std::vector<Prime<R>> primes_with_norm_between(const FieldDescriptor& fd, long double lower, long double upper, const PrimeCaps& caps = {}) {
    PrimeWindow w;
    w.field = fd;
    w.lower = lower;
    w.upper = upper;
    if constexpr (std::is_same_v<R, Integer>) {
        return enumerate_rational_primes(w, caps);
    } else {
        long lo = 0;
        long double qh = 1;
        while (qh < lower * (1 - 1e-12L)) {
            qh *= fd.q;
            ++lo;
        }
        lo = std::max<long>(lo, fd.degree_d + 1);
        long hi = lo - 1;
        qh = std::pow(static_cast<long double>(fd.q), static_cast<long double>(lo));
        while (qh <= upper * (1 + 1e-12L)) {
            ++hi;
            qh *= fd.q;
        }
        w.mode = WindowMode::NormInInterval;
        w.degree_lo = lo;
        w.degree_hi = hi;
        return enumerate_irreducible_primes(w, caps);
    }
}

}  // namespace rsieve
