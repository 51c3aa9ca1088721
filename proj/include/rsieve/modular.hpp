#pragma once

// Word-size residue rings used by the multimodular kernel solver, CRT
// accumulation and rational reconstruction for both rings of integers.
//
//   Z        -> Z/p for primes just below 2^62
//   F_q[T]   -> F_q[T]/(g) = GF(q^e) with g primitive, Zech-log tables;
//               for large q the evaluation maps F_q[T] -> F_q, f -> f(alpha)

#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "fp_poly.hpp"
#include "integer.hpp"
#include "ring.hpp"

namespace rsieve {

/// Z/p with p < 2^62.
class ModP62 {
   public:
    using Elem = std::uint64_t;
    using Ring = Integer;

    explicit ModP62(std::uint64_t p) : p_(p) {}

    Elem zero() const { return 0; }
    Elem one() const { return 1; }
    bool is_zero(Elem a) const { return a == 0; }
    Elem add(Elem a, Elem b) const {
        Elem s = a + b;
        return s >= p_ ? s - p_ : s;
    }
    Elem sub(Elem a, Elem b) const { return a >= b ? a - b : a + p_ - b; }
    Elem neg(Elem a) const { return a ? p_ - a : 0; }
    Elem mul(Elem a, Elem b) const { return static_cast<Elem>(static_cast<unsigned __int128>(a) * b % p_); }
    Elem inv(Elem a) const { return invmod64(a, p_); }

    Elem reduce(const Integer& x) const { return mpz_fdiv_ui(x.get_mpz_t(), p_); }
    Integer lift(Elem a) const { return Integer(static_cast<unsigned long>(a)); }
    Integer modulus() const { return Integer(static_cast<unsigned long>(p_)); }
    std::uint64_t prime() const { return p_; }

   private:
    std::uint64_t p_;
};

/// GF(q^e) = F_q[T]/(g). In table mode elements are discrete logarithms to
/// the base T (g primitive) with `order()` standing for zero; in direct mode
/// (e = 1, g = T - alpha) they are plain residues mod q.
class GFModPoly {
   public:
    using Elem = std::uint32_t;
    using Ring = FpPoly;

    /// Table mode.
    GFModPoly(const FpPoly& g, bool) : q_(g.modulus()), e_(static_cast<unsigned>(g.degree())), g_(g), direct_(false) { build_tables(); }

    /// Direct mode: reduction is evaluation at alpha.
    GFModPoly(std::uint32_t q, std::uint32_t alpha) : q_(q), e_(1), direct_(true), alpha_(alpha) {
        g_ = FpPoly(q, {static_cast<FpPoly::Coeff>((q - alpha % q) % q), 1});
    }

    Elem zero() const { return direct_ ? 0 : order_; }
    Elem one() const { return direct_ ? 1 : 0; }
    bool is_zero(Elem a) const { return a == zero(); }

    Elem mul(Elem a, Elem b) const {
        if (direct_) return static_cast<Elem>(std::uint64_t(a) * b % q_);
        if (a == order_ || b == order_) return order_;
        std::uint64_t s = std::uint64_t(a) + b;
        return static_cast<Elem>(s >= order_ ? s - order_ : s);
    }
    Elem inv(Elem a) const {
        if (is_zero(a)) throw DivisionByZero();
        if (direct_) return static_cast<Elem>(invmod64(a, q_));
        return a == 0 ? 0 : order_ - a;
    }
    Elem neg(Elem a) const {
        if (direct_) return a ? q_ - a : 0;
        if (a == order_ || q_ == 2) return a;
        std::uint64_t s = std::uint64_t(a) + order_ / 2;
        return static_cast<Elem>(s >= order_ ? s - order_ : s);
    }
    Elem add(Elem a, Elem b) const {
        if (direct_) {
            std::uint64_t s = std::uint64_t(a) + b;
            return static_cast<Elem>(s >= q_ ? s - q_ : s);
        }
        if (a == order_) return b;
        if (b == order_) return a;
        // T^a + T^b = T^a (1 + T^(b-a))
        Elem d = b >= a ? b - a : b + order_ - a;
        Elem z = zech_[d];
        if (z == order_) return order_;
        std::uint64_t s = std::uint64_t(a) + z;
        return static_cast<Elem>(s >= order_ ? s - order_ : s);
    }
    Elem sub(Elem a, Elem b) const { return add(a, neg(b)); }

    Elem reduce(const FpPoly& f) const {
        if (direct_) return f.evaluate(alpha_);
        Elem acc = order_;
        const auto& c = f.coeffs();
        for (std::size_t i = c.size(); i-- > 0;) {
            acc = mul(acc, 1);
            if (c[i]) acc = add(acc, log_[c[i]]);
        }
        return acc;
    }
    FpPoly lift(Elem a) const {
        if (direct_) return FpPoly::constant(q_, a);
        if (a == order_) return FpPoly(q_);
        return FpPoly::decode(q_, exp_[a]);
    }
    const FpPoly& modulus() const { return g_; }

    /// Whether T generates the multiplicative group of F_q[T]/(g).
    static bool is_primitive(const FpPoly& g) {
        if (g.coeff(0) == 0 || !g.is_irreducible()) return false;
        const Integer order = ipow(static_cast<unsigned long>(g.modulus()), static_cast<unsigned long>(g.degree())) - 1;
        const FpPoly t = FpPoly::variable(g.modulus()) % g;
        for (const auto& [l, m] : factor_integer(order)) {
            if (FpPoly::powmod(t, order / l, g).is_one()) return false;
        }
        return true;
    }

   private:
    void build_tables() {
        std::uint64_t size = 1;
        for (unsigned i = 0; i < e_; ++i) size *= q_;
        order_ = static_cast<Elem>(size - 1);
        std::uint64_t top_unit = size / q_;  // q^(e-1)
        std::vector<std::uint32_t> gl(e_);   // low coefficients of the monic g
        for (unsigned i = 0; i < e_; ++i) gl[i] = g_.coeff(i);
        exp_.assign(order_, 0);
        log_.assign(size, order_);
        std::uint64_t v = 1;
        std::vector<std::uint32_t> dig(e_);
        for (Elem k = 0; k < order_; ++k) {
            exp_[k] = static_cast<std::uint32_t>(v);
            log_[v] = k;
            // v <- v * T mod g
            std::uint64_t top = v / top_unit;
            std::uint64_t low = (v % top_unit) * q_;
            if (top == 0) {
                v = low;
                continue;
            }
            std::uint64_t w = low;
            for (unsigned i = 0; i < e_; ++i) {
                dig[i] = static_cast<std::uint32_t>(w % q_);
                w /= q_;
            }
            std::uint64_t out = 0;
            for (unsigned i = e_; i-- > 0;) {
                std::uint64_t d = (dig[i] + (q_ - top) * gl[i]) % q_;
                out = out * q_ + d;
            }
            v = out;
        }
        zech_.assign(order_, order_);
        for (Elem k = 0; k < order_; ++k) {
            std::uint64_t x = exp_[k];
            std::uint64_t d0 = x % q_;
            std::uint64_t y = x - d0 + (d0 + 1) % q_;
            zech_[k] = y ? log_[y] : order_;
        }
    }

    std::uint32_t q_;
    unsigned e_;
    FpPoly g_;
    bool direct_;
    std::uint32_t alpha_ = 0;
    Elem order_ = 0;
    std::vector<std::uint32_t> exp_, log_, zech_;
};

/// Deterministic supply of residue rings for a ring of integers.
template <class R>
class ModulusSource;

template <>
class ModulusSource<Integer> {
   public:
    using Engine = ModP62;
    explicit ModulusSource(const FieldDescriptor&) {}

    Engine next() {
        while (!is_prime_u64(cursor_)) cursor_ -= 2;
        std::uint64_t p = cursor_;
        cursor_ -= 2;
        return Engine(p);
    }
    /// log2 of the modulus contributed by each residue ring.
    double bits_per_modulus() const { return 61.9; }

   private:
    std::uint64_t cursor_ = (std::uint64_t(1) << 62) - 1;
};

template <>
class ModulusSource<FpPoly> {
   public:
    using Engine = GFModPoly;

    explicit ModulusSource(const FieldDescriptor& fd) : q_(fd.q) {
        if (q_ >= (1u << 16)) {
            direct_ = true;
            alpha_ = q_;
            return;
        }
        std::uint64_t size = q_;
        e_ = 1;
        while (size * q_ <= (std::uint64_t(1) << 16)) {
            size *= q_;
            ++e_;
        }
        cursor_ = 0;
        limit_ = size;
    }

    Engine next() {
        if (direct_) {
            if (alpha_ == 0) throw ResourceError("evaluation points exhausted");
            --alpha_;
            return Engine(q_, alpha_);
        }
        for (;;) {
            if (cursor_ >= limit_) {
                if (e_ == 1) throw ResourceError("moduli exhausted");
                --e_;
                limit_ /= q_;
                cursor_ = 0;
            }
            FpPoly g = FpPoly::decode(q_, cursor_++) + FpPoly::monomial(q_, e_);
            if (g.coeff(0) == 0 && e_ > 1) continue;
            if (GFModPoly::is_primitive(g)) return Engine(g, true);
        }
    }
    double bits_per_modulus() const { return direct_ ? std::log2(double(q_)) : double(e_) * std::log2(double(q_)); }

   private:
    std::uint32_t q_;
    bool direct_ = false;
    std::uint32_t alpha_ = 0;
    unsigned e_ = 1;
    std::uint64_t cursor_ = 0, limit_ = 0;
};

/// Incremental Chinese remaindering x (mod M) with a new residue a (mod m).
template <class E>
void crt_step(typename E::Ring& x, const typename E::Ring& M, typename E::Elem a, const E& eng, typename E::Elem m_inv) {
    typename E::Elem u = eng.mul(eng.sub(a, eng.reduce(x)), m_inv);
    if (!eng.is_zero(u)) x += M * eng.lift(u);
}

/// n/d with n = d x (mod M), |n|, d <= sqrt(M/2), gcd(n, d) = 1, d > 0.
inline std::optional<std::pair<Integer, Integer>> rational_reconstruct(const Integer& x, const Integer& M) {
    Integer bound;
    {
        Integer half = M / 2;
        mpz_sqrt(bound.get_mpz_t(), half.get_mpz_t());
    }
    Integer r0 = M, r1 = x % M;
    if (r1 < 0) r1 += M;
    Integer t0 = 0, t1 = 1, qq, tmp;
    while (r1 > bound) {
        mpz_fdiv_qr(qq.get_mpz_t(), tmp.get_mpz_t(), r0.get_mpz_t(), r1.get_mpz_t());
        r0 = std::move(r1);
        r1 = std::move(tmp);
        tmp = t0 - qq * t1;
        t0 = std::move(t1);
        t1 = std::move(tmp);
    }
    if (t1 == 0 || iabs(t1) > bound) return std::nullopt;
    if (igcd(r1, t1) != 1) return std::nullopt;
    if (t1 < 0) {
        r1 = -r1;
        t1 = -t1;
    }
    return std::make_pair(r1, t1);
}

/// n/d with n = d x (mod M), deg n + deg d < deg M, gcd(n, d) = 1, d monic.
inline std::optional<std::pair<FpPoly, FpPoly>> rational_reconstruct(const FpPoly& x, const FpPoly& M) {
    const long m = M.degree();
    FpPoly r0 = M, r1 = x % M;
    FpPoly t0(M.modulus()), t1 = FpPoly::constant(M.modulus(), 1);
    while (!r1.is_zero() && 2 * r1.degree() >= m) {
        auto [qq, rem] = FpPoly::divmod(r0, r1);
        r0 = std::move(r1);
        r1 = std::move(rem);
        FpPoly t2 = t0 - qq * t1;
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    if (t1.is_zero()) return std::nullopt;
    if (r1.degree() + t1.degree() >= m) return std::nullopt;
    if (!r1.is_zero() && !FpPoly::gcd(r1, t1).is_one()) return std::nullopt;
    auto inv = t1.inv_scalar(t1.lead());
    return std::make_pair(r1.scaled(inv), t1.scaled(inv));
}

/// Whether y (already reduced mod M) is a plausible numerator under the
/// same size bound rational_reconstruct uses; y is mapped to its symmetric
/// representative in the integer case.
inline bool small_residue(Integer& y, const Integer& M) {
    Integer half = M / 2;
    if (y > half) y -= M;
    Integer bound;
    mpz_sqrt(bound.get_mpz_t(), half.get_mpz_t());
    return iabs(y) <= bound;
}
inline bool small_residue(FpPoly& y, const FpPoly& M) { return 2 * y.degree() < M.degree(); }

}  // namespace rsieve
