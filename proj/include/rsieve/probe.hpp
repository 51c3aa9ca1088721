#pragma once

// Checks of the ill-distribution bound |X_P| <= alpha N(P)^kappa on a point
// set, and the exponential-graph sample {(1 : x : b^x)} used to test it.

#include <cmath>
#include <optional>
#include <string>
#include <type_traits>
#include <vector>

#include "errors.hpp"
#include "params.hpp"
#include "points.hpp"
#include "prime_windows.hpp"
#include "residue.hpp"

namespace rsieve {

template <class R>
struct ProbeEntry {
    Prime<R> prime;
    std::size_t class_count = 0;
    double bound = 0;  // alpha N(P)^kappa, for display only
    bool violation = false;
};

template <class R>
struct ProbeReport {
    Rational alpha = 1;
    Rational kappa = 1;
    double tau = 1;
    long double lower = 0;      // tau (log N)^(n/(n-kappa))
    long double prime_cap = 0;  // largest norm examined
    bool explicit_primes = false;
    std::vector<ProbeEntry<R>> entries;  // every prime examined
    std::vector<ProbeEntry<R>> violations;
    bool pass = true;
};

struct ProbeOptions {
    Rational alpha = 1;
    Rational kappa = 1;
    double tau = 1.0;
    std::optional<long double> prime_cap;  // default 10 * lower edge
    std::size_t threads = 1;
    PrimeCaps caps;
};

template <class R>
ProbeReport<R> conjecture_probe(const PointSet<R>& X, const ProbeOptions& opt, const std::optional<std::vector<Prime<std::type_identity_t<R>>>>& explicit_primes = std::nullopt) {
    if (opt.kappa < 0 || opt.kappa >= Rational(static_cast<unsigned long>(X.n()))) throw ParameterError("kappa must satisfy 0 <= kappa < n");
    if (opt.alpha <= 0) throw ParameterError("alpha must be positive");
    if (!(opt.tau >= 1.0)) throw ParameterError("tau must be >= 1");
    ProbeReport<R> rep;
    rep.alpha = opt.alpha;
    rep.kappa = opt.kappa;
    rep.tau = opt.tau;

    std::vector<Prime<R>> primes;
    if (explicit_primes) {
        rep.explicit_primes = true;
        primes = *explicit_primes;
        for (const auto& p : primes) rep.prime_cap = std::max(rep.prime_cap, static_cast<long double>(p.norm.get_d()));
    } else {
        const long double log_n = static_cast<long double>(X.bound().log());
        if (!(log_n > 0)) throw ParameterError("the height bound must exceed 1");
        const long double n = static_cast<long double>(X.n());
        rep.lower = static_cast<long double>(opt.tau) * std::pow(log_n, n / (n - static_cast<long double>(opt.kappa.get_d())));
        rep.prime_cap = opt.prime_cap.value_or(10 * rep.lower);
        if (rep.prime_cap < rep.lower) throw ParameterError("prime cap below the window's lower edge");
        primes = primes_with_norm_between<R>(X.field(), rep.lower, rep.prime_cap, opt.caps);
    }
    if (X.empty() || primes.empty()) return rep;

    auto prof = profile(X, primes, opt.threads);
    for (const auto& e : prof.per_prime) {
        ProbeEntry<R> entry;
        entry.prime = e.prime;
        entry.class_count = e.class_count;
        entry.bound = opt.alpha.get_d() * std::pow(e.prime.norm.get_d(), opt.kappa.get_d());
        entry.violation = exceeds_power_bound(Integer(static_cast<unsigned long>(e.class_count)), e.prime.norm, opt.kappa, opt.alpha);
        if (entry.violation) rep.violations.push_back(entry);
        rep.entries.push_back(std::move(entry));
    }
    rep.pass = rep.violations.empty();
    return rep;
}

/// {(1 : x : base^x) : x >= 0, base^x <= N}.
inline PointSet<Integer> exp_graph_sample(const Integer& N, unsigned long base) {
    if (base < 2) throw ParameterError("base must be >= 2");
    if (N < 1) throw ParameterError("N must be >= 1");
    PointSet<Integer> X(FieldDescriptor::rationals(), 2, HeightValue::of(N));
    Integer v = 1;
    for (unsigned long x = 0; v <= N; ++x, v *= base) X.insert(ProjPoint<Integer>::from_ring({1, Integer(x), v}));
    return X;
}

struct OrderProfileEntry {
    std::uint64_t prime = 0;
    bool skipped = false;  // p divides the base
    std::uint64_t order = 0;             // u_p
    std::size_t class_count = 0;         // measured |X_p|
    std::uint64_t predicted = 0;         // p u_p
    std::uint64_t predicted_truncated = 0;  // min(|X|, p u_p)
    std::string note;
};

/// For the exponential graph, (x mod p, b^x mod p) depends on x modulo
/// lcm(p, u_p) = p u_p, so consecutive x give min(|X|, p u_p) classes.
inline std::vector<OrderProfileEntry> multiplicative_order_profile(const PointSet<Integer>& X, const std::vector<std::uint64_t>& primes, unsigned long base, std::size_t threads = 1) {
    std::vector<OrderProfileEntry> out;
    for (auto p : primes) {
        if (!is_prime_u64(p)) throw ParameterError(std::to_string(p) + " is not prime");
        OrderProfileEntry e;
        e.prime = p;
        if (base % p == 0) {
            e.skipped = true;
            e.note = "p divides the base";
            out.push_back(e);
            continue;
        }
        e.order = multiplicative_order(base % p, p);
        e.predicted = p * e.order;
        e.predicted_truncated = std::min<std::uint64_t>(X.size(), e.predicted);
        Prime<Integer> P{Integer(static_cast<unsigned long>(p)), Integer(static_cast<unsigned long>(p))};
        e.class_count = X.empty() ? 0 : build_class_table(X.points(), std::vector<Prime<Integer>>{P}, threads).class_count[0];
        out.push_back(e);
    }
    return out;
}

}  // namespace rsieve
