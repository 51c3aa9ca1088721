#pragma once

// The two rings of integers shipped here, Z and F_q[T], behind one static
// interface so that every algorithm above this layer is written once.

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "fp_poly.hpp"
#include "integer.hpp"

namespace rsieve {

enum class FieldKind { Rationals, RationalFunctions };

/// Which global field we work over. Only the base fields themselves ship,
/// so degree_d is always 1; it is carried so formulas can keep their shape.
struct FieldDescriptor {
    FieldKind kind = FieldKind::Rationals;
    std::uint32_t q = 0;
    int degree_d = 1;

    static FieldDescriptor rationals() { return {}; }
    static FieldDescriptor rational_functions(std::uint32_t q) {
        if (!is_prime_u64(q) || q >= (1u << 31)) throw ParameterError("F_q(T) requires a prime q < 2^31, got " + std::to_string(q));
        return {FieldKind::RationalFunctions, q, 1};
    }

    bool is_function_field() const { return kind == FieldKind::RationalFunctions; }
    std::string name() const { return is_function_field() ? "F" + std::to_string(q) + "(T)" : "Q"; }

    friend bool operator==(const FieldDescriptor&, const FieldDescriptor&) = default;
};

/// Exact height H >= 1. Over F_q(T) the value is always a power of q and the
/// exponent is kept alongside.
struct HeightValue {
    Integer value = 1;
    std::optional<long> q_exponent;

    static HeightValue of(Integer v) { return {std::move(v), std::nullopt}; }
    static HeightValue q_power(std::uint32_t q, long e) { return {ipow(static_cast<unsigned long>(q), static_cast<unsigned long>(e)), e}; }

    double log() const { return log_abs(value); }
    std::string to_string() const { return value.get_str(); }

    friend bool operator==(const HeightValue& a, const HeightValue& b) { return a.value == b.value; }
    friend std::strong_ordering operator<=>(const HeightValue& a, const HeightValue& b) {
        int c = cmp(a.value, b.value);
        return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
    }
};

template <class R>
struct RingOps;

template <>
struct RingOps<Integer> {
    static constexpr FieldKind kind = FieldKind::Rationals;

    static Integer zero(const FieldDescriptor&) { return 0; }
    static Integer one(const FieldDescriptor&) { return 1; }
    static Integer from_int(long v, const FieldDescriptor&) { return v; }

    static bool is_zero(const Integer& a) { return a == 0; }
    static bool is_one(const Integer& a) { return a == 1; }

    /// Non-negative gcd.
    static Integer gcd(const Integer& a, const Integer& b) { return igcd(a, b); }
    static Integer divexact(const Integer& a, const Integer& b) {
        if (b == 0) throw DivisionByZero();
        return rsieve::divexact(a, b);
    }
    static std::pair<Integer, Integer> divmod(const Integer& a, const Integer& b) {
        if (b == 0) throw DivisionByZero();
        Integer q, r;
        mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
        return {q, r};
    }

    /// The unit u with a/u canonical (positive). unit(0) = 1.
    static Integer unit(const Integer& a) { return a < 0 ? Integer(-1) : Integer(1); }
    static Integer unit_inverse(const Integer& u) { return u; }
    static bool is_canonical(const Integer& a) { return a >= 0; }

    static HeightValue height(const Integer& a) {
        Integer v = iabs(a);
        if (v == 0) v = 1;
        return HeightValue::of(std::move(v));
    }
    /// Absolute norm |O/(a)| for a != 0.
    static Integer norm(const Integer& a) {
        if (a == 0) throw ParameterError("norm of zero");
        return iabs(a);
    }

    static std::strong_ordering compare(const Integer& a, const Integer& b) {
        int c = cmp(a, b);
        return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
    }
    static std::string to_string(const Integer& a) { return a.get_str(); }
    static std::size_t hash(const Integer& a) {
        std::size_t h = mpz_sgn(a.get_mpz_t()) < 0 ? 0x9e37u : 0;
        std::size_t n = mpz_size(a.get_mpz_t());
        for (std::size_t i = 0; i < n; ++i) h = h * 1000003u ^ mpz_getlimbn(a.get_mpz_t(), static_cast<mp_size_t>(i));
        return h;
    }

    /// All ring elements of height <= h, ascending.
    static std::vector<Integer> elements_up_to(const HeightValue& h, const FieldDescriptor&) {
        if (!mpz_fits_slong_p(h.value.get_mpz_t()) || h.value > (1 << 24)) throw ResourceError("height bound too large to enumerate");
        long b = h.value.get_si();
        std::vector<Integer> out;
        for (long v = -b; v <= b; ++v) out.emplace_back(v);
        return out;
    }
};

template <>
struct RingOps<FpPoly> {
    static constexpr FieldKind kind = FieldKind::RationalFunctions;

    static FpPoly zero(const FieldDescriptor& fd) { return FpPoly(fd.q); }
    static FpPoly one(const FieldDescriptor& fd) { return FpPoly::constant(fd.q, 1); }
    static FpPoly from_int(long v, const FieldDescriptor& fd) {
        long m = v % static_cast<long>(fd.q);
        if (m < 0) m += fd.q;
        return FpPoly::constant(fd.q, static_cast<std::uint64_t>(m));
    }

    static bool is_zero(const FpPoly& a) { return a.is_zero(); }
    static bool is_one(const FpPoly& a) { return a.is_one(); }

    /// Monic gcd; gcd(0, 0) = 0.
    static FpPoly gcd(const FpPoly& a, const FpPoly& b) {
        if (a.is_zero() && b.is_zero()) return a;
        return FpPoly::gcd(a, b);
    }
    static FpPoly divexact(const FpPoly& a, const FpPoly& b) { return FpPoly::divexact(a, b); }
    static std::pair<FpPoly, FpPoly> divmod(const FpPoly& a, const FpPoly& b) { return FpPoly::divmod(a, b); }

    /// Leading coefficient as a constant polynomial; unit(0) = 1.
    static FpPoly unit(const FpPoly& a) { return FpPoly::constant(a.modulus(), a.is_zero() ? 1 : a.lead()); }
    static FpPoly unit_inverse(const FpPoly& u) { return FpPoly::constant(u.modulus(), u.inv_scalar(u.lead())); }
    static bool is_canonical(const FpPoly& a) { return a.is_zero() || a.is_monic(); }

    static HeightValue height(const FpPoly& a) { return HeightValue::q_power(a.modulus(), a.is_zero() ? 0 : a.degree()); }
    static Integer norm(const FpPoly& a) {
        if (a.is_zero()) throw ParameterError("norm of zero");
        return ipow(static_cast<unsigned long>(a.modulus()), static_cast<unsigned long>(a.degree()));
    }

    static std::strong_ordering compare(const FpPoly& a, const FpPoly& b) { return a <=> b; }
    static std::string to_string(const FpPoly& a) { return a.to_string(); }
    static std::size_t hash(const FpPoly& a) { return a.hash(); }

    /// All polynomials of degree <= floor(log_q h), in ascending order.
    static std::vector<FpPoly> elements_up_to(const HeightValue& h, const FieldDescriptor& fd) {
        long e = 0;
        Integer p = fd.q;
        while (p <= h.value) {
            p *= fd.q;
            ++e;
        }
        if (p > (1 << 24)) throw ResourceError("height bound too large to enumerate");
        std::vector<FpPoly> out;
        std::uint64_t count = p.get_ui();
        for (std::uint64_t v = 0; v < count; ++v) out.push_back(FpPoly::decode(fd.q, v));
        return out;
    }
};

template <class R>
concept RingElement = requires { RingOps<R>::kind; };

/// Calls f(std::type_identity<R>{}) with R the ring of integers of fd.
template <class F>
decltype(auto) with_ring(const FieldDescriptor& fd, F&& f) {
    if (fd.is_function_field()) return std::forward<F>(f)(std::type_identity<FpPoly>{});
    return std::forward<F>(f)(std::type_identity<Integer>{});
}

/// Hash/equality adaptors for containers keyed by vectors of ring elements.
template <class R>
struct VectorHash {
    std::size_t operator()(const std::vector<R>& v) const {
        std::size_t h = v.size();
        for (const auto& x : v) h = h * 0x100000001b3ull ^ RingOps<R>::hash(x);
        return h;
    }
};

template <class R>
std::strong_ordering compare_tuples(const std::vector<R>& a, const std::vector<R>& b) {
    for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
        if (auto c = RingOps<R>::compare(a[i], b[i]); c != 0) return c;
    }
    return a.size() <=> b.size();
}

/// max over entries of the ring height, 1 for an empty tuple.
template <class R>
HeightValue max_height(const std::vector<R>& v, const FieldDescriptor& fd) {
    HeightValue h = RingOps<R>::height(RingOps<R>::zero(fd));
    for (const auto& x : v) h = std::max(h, RingOps<R>::height(x));
    return h;
}

}  // namespace rsieve
