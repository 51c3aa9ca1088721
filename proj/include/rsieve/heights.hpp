#pragma once

// Places, normalized absolute values and heights over Q and F_q(T).
//
// Normalization: for a finite place given by a prime P, ||x||_P = N(P)^(-ord_P x)
// with N(P) = p or q^deg P. At infinity ||x|| = |x| over Q and q^(deg num - deg den)
// over F_q(T). With these choices the product over all places is exactly 1.

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "field.hpp"
#include "points.hpp"
#include "ring.hpp"

namespace rsieve {

template <class R>
struct Place {
    enum class Kind { Infinite, Finite };
    Kind kind = Kind::Infinite;
    R prime{};  // Finite only: positive rational prime or monic irreducible

    static Place infinite() { return {}; }
    static Place finite(R p) { return {Kind::Finite, std::move(p)}; }
    bool is_infinite() const { return kind == Kind::Infinite; }
};

/// ||x||_v in exact form. Finite places: ||x|| = norm_base^(-ord).
/// Infinite place over Q: ord = 0 and norm_base = 0 are sentinels and the
/// value lives in `abs_value`. Over F_q(T) every value is q^q_exponent.
struct LocalValue {
    long ord = 0;
    Integer norm_base = 0;
    Rational abs_value = 1;
    std::optional<long> q_exponent;
};

namespace detail {

inline long valuation(Integer x, const Integer& p) {
    long v = 0;
    while (x != 0 && mpz_divisible_p(x.get_mpz_t(), p.get_mpz_t())) {
        x = rsieve::divexact(x, p);
        ++v;
    }
    return v;
}

inline long valuation(FpPoly x, const FpPoly& p) {
    long v = 0;
    while (!x.is_zero()) {
        auto [quo, rem] = FpPoly::divmod(x, p);
        if (!rem.is_zero()) break;
        x = std::move(quo);
        ++v;
    }
    return v;
}

inline Rational rational_power(const Integer& base, long e) {
    Rational r;
    if (e >= 0)
        r = Rational(ipow(base, static_cast<unsigned long>(e)));
    else
        r = Rational(Integer(1), ipow(base, static_cast<unsigned long>(-e)));
    r.canonicalize();
    return r;
}

}  // namespace detail

inline LocalValue local_value(const Rat& x, const Place<Integer>& v) {
    if (x.is_zero()) throw ParameterError("valuation of zero is not finite");
    LocalValue lv;
    if (v.is_infinite()) {
        lv.abs_value = Rational(iabs(x.num()), x.den());
        lv.abs_value.canonicalize();
        return lv;
    }
    lv.ord = detail::valuation(x.num(), v.prime) - detail::valuation(x.den(), v.prime);
    lv.norm_base = v.prime;
    lv.abs_value = detail::rational_power(v.prime, -lv.ord);
    return lv;
}

inline LocalValue local_value(const RatFunc& x, const Place<FpPoly>& v) {
    if (x.is_zero()) throw ParameterError("valuation of zero is not finite");
    LocalValue lv;
    const std::uint32_t q = x.num().modulus();
    if (v.is_infinite()) {
        lv.ord = x.den().degree() - x.num().degree();
        lv.norm_base = q;
    } else {
        lv.ord = detail::valuation(x.num(), v.prime) - detail::valuation(x.den(), v.prime);
        lv.norm_base = RingOps<FpPoly>::norm(v.prime);
    }
    const long deg = v.is_infinite() ? 1 : v.prime.degree();
    lv.q_exponent = -lv.ord * deg;
    lv.abs_value = detail::rational_power(Integer(q), *lv.q_exponent);
    return lv;
}

/// Finite places where x is not a unit, ascending.
inline std::vector<Place<Integer>> support(const Rat& x) {
    std::vector<Place<Integer>> out;
    std::vector<Integer> ps;
    for (const auto& [p, e] : factor_integer(x.num())) ps.push_back(p);
    for (const auto& [p, e] : factor_integer(x.den())) ps.push_back(p);
    std::sort(ps.begin(), ps.end());
    ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
    for (auto& p : ps) out.push_back(Place<Integer>::finite(p));
    return out;
}

inline std::vector<Place<FpPoly>> support(const RatFunc& x) {
    std::vector<FpPoly> ps;
    if (x.num().degree() > 0)
        for (const auto& [p, e] : factor_poly(x.num())) ps.push_back(p);
    if (x.den().degree() > 0)
        for (const auto& [p, e] : factor_poly(x.den())) ps.push_back(p);
    std::sort(ps.begin(), ps.end());
    ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
    std::vector<Place<FpPoly>> out;
    for (auto& p : ps) out.push_back(Place<FpPoly>::finite(p));
    return out;
}

/// Exact product of ||x||_v over every place with ||x||_v != 1.
template <class R>
bool product_formula_check(const FieldElement<R>& x) {
    if (x.is_zero()) throw ParameterError("product formula needs x != 0");
    Rational prod = local_value(x, Place<R>::infinite()).abs_value;
    for (const auto& v : support(x)) {
        prod *= local_value(x, v).abs_value;
        prod.canonicalize();
    }
    return prod == 1;
}

/// H(x) = H(1 : x); max(|a|, |b|) for a/b in lowest terms, q^max(deg a, deg b) over F_q(T).
template <class R>
HeightValue height_affine(const FieldElement<R>& x) {
    return std::max(RingOps<R>::height(x.num()), RingOps<R>::height(x.den()));
}

/// H(1 : x_1 : ... : x_n).
template <class R>
HeightValue height_one_affix(const std::vector<FieldElement<R>>& x, const FieldDescriptor& fd) {
    return height_projective(ProjPoint<R>::from_affine(x, fd), fd);
}

/// H(x_1 : ... : x_n) of a nonzero tuple of field elements.
template <class R>
HeightValue height_projective(const std::vector<FieldElement<R>>& x, const FieldDescriptor& fd) {
    return height_projective(ProjPoint<R>::from_field(x), fd);
}

template <class R>
Integer norm_of_ring_element(const R& x) {
    return RingOps<R>::norm(x);
}

}  // namespace rsieve
