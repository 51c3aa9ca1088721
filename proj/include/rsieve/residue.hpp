#pragma once

// Reduction of projective points modulo a prime and residue-class counts.

#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <unordered_map>
#include <vector>

#include "errors.hpp"
#include "parallel.hpp"
#include "points.hpp"
#include "prime_windows.hpp"

namespace rsieve {

/// The residue field O_K / P with elements encoded as integers in [0, N(P)).
/// Over F_q[T] an element is a polynomial of degree < deg P in base-q digits.
template <class R>
class ResidueField;

template <>
class ResidueField<Integer> {
   public:
    explicit ResidueField(const Prime<Integer>& p) {
        if (!mpz_fits_ulong_p(p.generator.get_mpz_t()) || p.generator > Integer("4294967295")) throw ResourceError("residue prime too large: " + p.generator.get_str());
        p_ = p.generator.get_ui();
    }
    std::uint64_t size() const { return p_; }
    std::uint64_t reduce(const Integer& x) const { return mpz_fdiv_ui(x.get_mpz_t(), p_); }
    std::uint64_t mul(std::uint64_t a, std::uint64_t b) const { return a * b % p_; }
    std::uint64_t inv(std::uint64_t a) const { return invmod64(a, p_); }

   private:
    std::uint64_t p_;
};

template <>
class ResidueField<FpPoly> {
   public:
    explicit ResidueField(const Prime<FpPoly>& p) : f_(p.generator) {
        if (p.norm > Integer("9223372036854775807")) throw ResourceError("residue field too large to encode");
        size_ = p.norm.get_ui();
    }
    std::uint64_t size() const { return size_; }
    std::uint64_t reduce(const FpPoly& x) const { return (x % f_).encode(); }
    std::uint64_t mul(std::uint64_t a, std::uint64_t b) const { return FpPoly::mulmod(decode(a), decode(b), f_).encode(); }
    std::uint64_t inv(std::uint64_t a) const { return FpPoly::invmod(decode(a), f_).encode(); }

   private:
    FpPoly decode(std::uint64_t v) const { return FpPoly::decode(f_.modulus(), v); }
    FpPoly f_;
    std::uint64_t size_;
};

/// A point of P^n(O_K / P), scaled so its first nonzero coordinate is 1.
template <class R>
struct ResidueClass {
    Prime<R> prime;
    std::vector<std::uint64_t> coords;
};

/// Normalized residue coordinates of a canonical point. Primitivity makes
/// some coordinate a unit mod P, so the result is never zero.
template <class R>
std::vector<std::uint64_t> residue_key(const ProjPoint<R>& x, const ResidueField<R>& field) {
    std::vector<std::uint64_t> r;
    r.reserve(x.coords().size());
    for (const auto& c : x.coords()) r.push_back(field.reduce(c));
    std::size_t lead = 0;
    while (lead < r.size() && r[lead] == 0) ++lead;
    if (lead == r.size()) throw IntegrityError("point " + x.to_string() + " reduces to zero; it is not primitive");
    if (r[lead] != 1) {
        std::uint64_t inv = field.inv(r[lead]);
        for (std::size_t i = lead; i < r.size(); ++i)
            if (r[i]) r[i] = field.mul(r[i], inv);
    }
    return r;
}

template <class R>
ResidueClass<R> reduce_point(const ProjPoint<R>& x, const Prime<R>& p) {
    return {p, residue_key(x, ResidueField<R>(p))};
}

template <class R>
struct ResidueClassSet {
    std::size_t count = 0;
    std::set<std::vector<std::uint64_t>> classes;
};

template <class R>
ResidueClassSet<R> residue_classes(const PointSet<R>& X, const Prime<R>& p) {
    ResidueField<R> field(p);
    ResidueClassSet<R> out;
    for (const auto& x : X.points()) out.classes.insert(residue_key(x, field));
    out.count = out.classes.size();
    return out;
}

/// Per prime, a dense class id for every point (ids in order of first
/// appearance) plus the number of distinct classes.
struct ClassTable {
    std::vector<std::vector<std::uint32_t>> ids;  // [prime][point]
    std::vector<std::uint32_t> class_count;       // [prime]
};

template <class R>
ClassTable build_class_table(const std::vector<ProjPoint<R>>& points, const std::vector<Prime<R>>& primes, std::size_t threads = 1) {
    ClassTable t;
    t.ids.resize(primes.size());
    t.class_count.resize(primes.size());
    parallel_for(primes.size(), threads, [&](std::size_t j) {
        ResidueField<R> field(primes[j]);
        std::map<std::vector<std::uint64_t>, std::uint32_t> index;
        auto& ids = t.ids[j];
        ids.resize(points.size());
        for (std::size_t i = 0; i < points.size(); ++i) {
            auto [it, fresh] = index.emplace(residue_key(points[i], field), static_cast<std::uint32_t>(index.size()));
            ids[i] = it->second;
        }
        t.class_count[j] = static_cast<std::uint32_t>(index.size());
    });
    return t;
}

template <class R>
struct PrimeProfile {
    Prime<R> prime;
    std::size_t class_count = 0;
    double log_classes = 0;  // log |X_P|
    double log_norm = 0;     // log N(P)
    double kappa = 0;        // log |X_P| / log N(P), 0 for empty X
};

template <class R>
struct ResidueProfile {
    std::vector<PrimeProfile<R>> per_prime;  // ordered as the input primes
    double kappa_max = 0;
};

template <class R>
ResidueProfile<R> profile(const PointSet<R>& X, const std::vector<Prime<R>>& primes, std::size_t threads = 1) {
    if (primes.empty()) throw ParameterError("profile needs at least one prime");
    ResidueProfile<R> out;
    out.per_prime.resize(primes.size());
    ClassTable table = build_class_table(X.points(), primes, threads);
    for (std::size_t j = 0; j < primes.size(); ++j) {
        auto& e = out.per_prime[j];
        e.prime = primes[j];
        e.class_count = X.empty() ? 0 : table.class_count[j];
        e.log_norm = log_abs(primes[j].norm);
        e.log_classes = e.class_count ? std::log(static_cast<double>(e.class_count)) : 0.0;
        e.kappa = e.class_count ? e.log_classes / e.log_norm : 0.0;
        out.kappa_max = std::max(out.kappa_max, e.kappa);
    }
    return out;
}

/// Exact test of count > alpha * norm^kappa for rational alpha, kappa >= 0.
inline bool exceeds_power_bound(const Integer& count, const Integer& norm, const Rational& kappa, const Rational& alpha = 1) {
    // count^b * alpha_den^b > alpha_num^b * norm^a  with kappa = a/b
    const unsigned long a = kappa.get_num().get_ui();
    const unsigned long b = kappa.get_den().get_ui();
    Integer lhs = ipow(count, b) * ipow(alpha.get_den(), b);
    Integer rhs = ipow(alpha.get_num(), b) * ipow(norm, a);
    return lhs > rhs;
}

/// Number of points of P^n over a field with `size` elements.
inline Integer projective_space_size(const Integer& size, std::size_t n) {
    return rsieve::divexact(ipow(size, static_cast<unsigned long>(n + 1)) - 1, Integer(size - 1));
}

}  // namespace rsieve
