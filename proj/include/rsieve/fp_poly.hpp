#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "integer.hpp"

namespace rsieve {

/// Dense univariate polynomial over the prime field F_q, coefficients
/// little-endian in degree and always trimmed (the zero polynomial has no
/// coefficients). The modulus travels with the value.
class FpPoly {
   public:
    using Coeff = std::uint32_t;

    FpPoly() = default;
    explicit FpPoly(std::uint32_t q) : q_(q) {}
    FpPoly(std::uint32_t q, std::vector<Coeff> coeffs) : q_(q), c_(std::move(coeffs)) {
        for (auto& x : c_) x %= q_;
        trim();
    }

    static FpPoly constant(std::uint32_t q, std::uint64_t c) { return FpPoly(q, {static_cast<Coeff>(c % q)}); }
    static FpPoly monomial(std::uint32_t q, std::size_t deg, Coeff c = 1) {
        std::vector<Coeff> v(deg + 1, 0);
        v[deg] = c % q;
        return FpPoly(q, std::move(v));
    }
    static FpPoly variable(std::uint32_t q) { return monomial(q, 1); }

    std::uint32_t modulus() const { return q_; }
    long degree() const { return static_cast<long>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    bool is_one() const { return c_.size() == 1 && c_[0] == 1; }
    bool is_monic() const { return !c_.empty() && c_.back() == 1; }
    Coeff lead() const { return c_.empty() ? 0 : c_.back(); }
    Coeff coeff(std::size_t i) const { return i < c_.size() ? c_[i] : 0; }
    const std::vector<Coeff>& coeffs() const { return c_; }

    // ---- scalar helpers -------------------------------------------------
    Coeff inv_scalar(Coeff a) const {
        if (a % q_ == 0) throw DivisionByZero();
        return static_cast<Coeff>(invmod64(a, q_));
    }
    Coeff mul_scalar(Coeff a, Coeff b) const { return static_cast<Coeff>(std::uint64_t(a) * b % q_); }

    FpPoly scaled(Coeff s) const {
        FpPoly r(q_);
        s %= q_;
        if (s == 0) return r;
        r.c_.resize(c_.size());
        for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] = mul_scalar(c_[i], s);
        return r;
    }

    FpPoly monic() const {
        if (is_zero()) return *this;
        return scaled(inv_scalar(lead()));
    }

    // ---- ring operations -----------------------------------------------
    FpPoly& operator+=(const FpPoly& o) {
        check(o);
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0);
        for (std::size_t i = 0; i < o.c_.size(); ++i) {
            std::uint64_t s = std::uint64_t(c_[i]) + o.c_[i];
            c_[i] = static_cast<Coeff>(s >= q_ ? s - q_ : s);
        }
        trim();
        return *this;
    }
    FpPoly& operator-=(const FpPoly& o) {
        check(o);
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0);
        for (std::size_t i = 0; i < o.c_.size(); ++i) {
            std::uint64_t s = std::uint64_t(c_[i]) + q_ - o.c_[i];
            c_[i] = static_cast<Coeff>(s >= q_ ? s - q_ : s);
        }
        trim();
        return *this;
    }
    FpPoly operator-() const {
        FpPoly r(q_);
        r.c_.resize(c_.size());
        for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] = c_[i] ? q_ - c_[i] : 0;
        return r;
    }
    friend FpPoly operator+(FpPoly a, const FpPoly& b) { return a += b; }
    friend FpPoly operator-(FpPoly a, const FpPoly& b) { return a -= b; }

    friend FpPoly operator*(const FpPoly& a, const FpPoly& b) {
        a.check(b);
        FpPoly r(a.q_);
        if (a.is_zero() || b.is_zero()) return r;
        const std::uint64_t q = a.q_;
        const std::uint64_t sq = (q - 1) * (q - 1);
        // number of products that can be accumulated before reducing
        const std::uint64_t batch = sq == 0 ? std::numeric_limits<std::uint64_t>::max() : std::max<std::uint64_t>(1, (std::numeric_limits<std::uint64_t>::max() - q) / sq);
        std::vector<std::uint64_t> acc(a.c_.size() + b.c_.size() - 1, 0);
        std::uint64_t pending = 0;
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            const std::uint64_t ai = a.c_[i];
            if (ai != 0) {
                for (std::size_t j = 0; j < b.c_.size(); ++j) acc[i + j] += ai * b.c_[j];
                if (++pending >= batch) {
                    for (auto& x : acc) x %= q;
                    pending = 0;
                }
            }
        }
        r.c_.resize(acc.size());
        for (std::size_t i = 0; i < acc.size(); ++i) r.c_[i] = static_cast<Coeff>(acc[i] % q);
        r.trim();
        return r;
    }
    FpPoly& operator*=(const FpPoly& o) { return *this = *this * o; }

    /// Euclidean division; throws on a zero divisor.
    static std::pair<FpPoly, FpPoly> divmod(const FpPoly& a, const FpPoly& b) {
        a.check(b);
        if (b.is_zero()) throw DivisionByZero();
        FpPoly rem = a;
        FpPoly quo(a.q_);
        if (a.degree() < b.degree()) return {quo, rem};
        const Coeff inv = b.inv_scalar(b.lead());
        const std::size_t db = b.c_.size() - 1;
        quo.c_.assign(a.c_.size() - db, 0);
        std::vector<std::uint64_t> r(rem.c_.begin(), rem.c_.end());
        const std::uint64_t q = a.q_;
        for (std::size_t k = r.size(); k-- > db;) {
            std::uint64_t coef = r[k] % q;
            if (coef == 0) continue;
            coef = coef * inv % q;
            quo.c_[k - db] = static_cast<Coeff>(coef);
            const std::uint64_t neg = q - coef;
            for (std::size_t j = 0; j <= db; ++j) r[k - db + j] = (r[k - db + j] + neg * b.c_[j]) % q;
        }
        rem.c_.assign(db, 0);
        for (std::size_t j = 0; j < db && j < r.size(); ++j) rem.c_[j] = static_cast<Coeff>(r[j] % q);
        rem.trim();
        quo.trim();
        return {quo, rem};
    }
    friend FpPoly operator/(const FpPoly& a, const FpPoly& b) { return divmod(a, b).first; }
    friend FpPoly operator%(const FpPoly& a, const FpPoly& b) { return divmod(a, b).second; }

    /// Exact quotient; throws IntegrityError when b does not divide a.
    static FpPoly divexact(const FpPoly& a, const FpPoly& b) {
        auto [quo, rem] = divmod(a, b);
        if (!rem.is_zero()) throw IntegrityError("inexact polynomial division");
        return quo;
    }

    /// Monic gcd. gcd(0, 0) is rejected.
    static FpPoly gcd(FpPoly a, FpPoly b) {
        a.check(b);
        if (a.is_zero() && b.is_zero()) throw ParameterError("gcd of two zero polynomials");
        while (!b.is_zero()) {
            FpPoly r = a % b;
            a = std::move(b);
            b = std::move(r);
        }
        return a.monic();
    }

    /// Returns (g, s, t) with s*a + t*b = g, g monic (or zero when both are zero).
    static std::tuple<FpPoly, FpPoly, FpPoly> ext_gcd(const FpPoly& a, const FpPoly& b) {
        const std::uint32_t q = a.q_;
        FpPoly r0 = a, r1 = b, s0 = constant(q, 1), s1(q), t0(q), t1 = constant(q, 1);
        while (!r1.is_zero()) {
            auto [quo, rem] = divmod(r0, r1);
            r0 = std::move(r1);
            r1 = std::move(rem);
            FpPoly s2 = s0 - quo * s1;
            FpPoly t2 = t0 - quo * t1;
            s0 = std::move(s1);
            s1 = std::move(s2);
            t0 = std::move(t1);
            t1 = std::move(t2);
        }
        if (r0.is_zero()) return {r0, s0, t0};
        Coeff inv = r0.inv_scalar(r0.lead());
        return {r0.scaled(inv), s0.scaled(inv), t0.scaled(inv)};
    }

    static FpPoly mulmod(const FpPoly& a, const FpPoly& b, const FpPoly& m) { return (a * b) % m; }

    static FpPoly powmod(FpPoly base, Integer e, const FpPoly& m) {
        FpPoly r = constant(base.q_, 1) % m;
        base = base % m;
        while (e > 0) {
            if (mpz_odd_p(e.get_mpz_t())) r = mulmod(r, base, m);
            e >>= 1;
            if (e > 0) base = mulmod(base, base, m);
        }
        return r;
    }

    static FpPoly invmod(const FpPoly& a, const FpPoly& m) {
        auto [g, s, t] = ext_gcd(a % m, m);
        if (!g.is_one()) throw DivisionByZero();
        return s % m;
    }

    FpPoly derivative() const {
        FpPoly r(q_);
        if (c_.size() <= 1) return r;
        r.c_.resize(c_.size() - 1);
        for (std::size_t i = 1; i < c_.size(); ++i) r.c_[i - 1] = static_cast<Coeff>(std::uint64_t(c_[i]) * (i % q_) % q_);
        r.trim();
        return r;
    }

    Coeff evaluate(Coeff x) const {
        std::uint64_t acc = 0;
        for (std::size_t i = c_.size(); i-- > 0;) acc = (acc * x + c_[i]) % q_;
        return static_cast<Coeff>(acc);
    }

    /// Base-q encoding of a polynomial of degree < h; requires q^h < 2^64.
    std::uint64_t encode() const {
        std::uint64_t v = 0;
        for (std::size_t i = c_.size(); i-- > 0;) v = v * q_ + c_[i];
        return v;
    }
    static FpPoly decode(std::uint32_t q, std::uint64_t v) {
        std::vector<Coeff> c;
        while (v) {
            c.push_back(static_cast<Coeff>(v % q));
            v /= q;
        }
        return FpPoly(q, std::move(c));
    }

    /// Rabin's test.
    bool is_irreducible() const {
        const long n = degree();
        if (n <= 0) return false;
        if (n == 1) return true;
        const FpPoly f = monic();
        const FpPoly x = variable(q_);
        // Ben-Or: f is irreducible iff gcd(x^(q^i) - x, f) = 1 for i <= n/2.
        // Most reducible f have a small factor, so they exit early.
        FpPoly h = x;
        for (long i = 1; 2 * i <= n; ++i) {
            h = powmod(h, Integer(q_), f);
            if (!gcd(h - x, f).is_one()) return false;
        }
        return true;
    }

    friend bool operator==(const FpPoly& a, const FpPoly& b) { return a.q_ == b.q_ && a.c_ == b.c_; }

    /// Total order: by degree, then coefficients from the top down (i.e. by the base-q value).
    friend std::strong_ordering operator<=>(const FpPoly& a, const FpPoly& b) {
        if (auto c = a.c_.size() <=> b.c_.size(); c != 0) return c;
        for (std::size_t i = a.c_.size(); i-- > 0;) {
            if (auto c = a.c_[i] <=> b.c_[i]; c != 0) return c;
        }
        return std::strong_ordering::equal;
    }

    std::string to_string() const {
        if (is_zero()) return "0";
        std::string s;
        for (std::size_t i = c_.size(); i-- > 0;) {
            if (c_[i] == 0) continue;
            if (!s.empty()) s += " + ";
            if (c_[i] != 1 || i == 0) s += std::to_string(c_[i]);
            if (i > 0) {
                if (c_[i] != 1) s += "*";
                s += "T";
                if (i > 1) s += "^" + std::to_string(i);
            }
        }
        return s;
    }

    std::size_t hash() const {
        std::size_t h = q_;
        for (auto c : c_) h = h * 1000003u ^ c;
        return h;
    }

   private:
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }
    void check(const FpPoly& o) const {
        if (q_ != o.q_) throw ParameterError("mixing polynomials over different fields");
    }

    std::uint32_t q_ = 2;
    std::vector<Coeff> c_;
};

// ---------------------------------------------------------------------------
// Factorization over F_q: square-free decomposition, distinct-degree and
// equal-degree splitting.

namespace detail {

inline FpPoly pth_root(const FpPoly& f) {
    // f(T) = g(T^q); coefficients are in the prime field so c^(1/q) = c.
    const std::uint32_t q = f.modulus();
    std::vector<FpPoly::Coeff> c;
    for (std::size_t i = 0; i < f.coeffs().size(); i += q) c.push_back(f.coeffs()[i]);
    return FpPoly(q, std::move(c));
}

inline void squarefree_into(const FpPoly& f, unsigned mult, std::vector<std::pair<FpPoly, unsigned>>& out) {
    if (f.degree() <= 0) return;
    const std::uint32_t q = f.modulus();
    FpPoly d = f.derivative();
    if (d.is_zero()) {
        squarefree_into(pth_root(f), mult * q, out);
        return;
    }
    FpPoly c = FpPoly::gcd(f, d);
    FpPoly w = FpPoly::divexact(f, c);
    unsigned i = 1;
    while (!w.is_one()) {
        FpPoly y = FpPoly::gcd(w, c);
        FpPoly z = FpPoly::divexact(w, y);
        if (!z.is_one()) out.emplace_back(z, i * mult);
        ++i;
        w = y;
        c = FpPoly::divexact(c, y);
    }
    if (!c.is_one()) squarefree_into(pth_root(c), mult * q, out);
}

inline void equal_degree_into(const FpPoly& f, long d, std::mt19937_64& rng, std::vector<FpPoly>& out) {
    const long n = f.degree();
    if (n == d) {
        out.push_back(f.monic());
        return;
    }
    const std::uint32_t q = f.modulus();
    for (;;) {
        std::vector<FpPoly::Coeff> rc(static_cast<std::size_t>(n));
        for (auto& c : rc) c = static_cast<FpPoly::Coeff>(rng() % q);
        FpPoly a(q, std::move(rc));
        if (a.degree() <= 0) continue;
        FpPoly b;
        if (q == 2) {
            // trace map a + a^2 + ... + a^(2^(d-1))
            FpPoly t = a % f;
            b = t;
            for (long i = 1; i < d; ++i) {
                t = FpPoly::mulmod(t, t, f);
                b += t;
            }
        } else {
            Integer e = (ipow(static_cast<unsigned long>(q), static_cast<unsigned long>(d)) - 1) / 2;
            b = FpPoly::powmod(a, e, f) - FpPoly::constant(q, 1);
        }
        if (b.is_zero()) continue;
        FpPoly g = FpPoly::gcd(f, b);
        if (g.degree() > 0 && g.degree() < n) {
            equal_degree_into(g, d, rng, out);
            equal_degree_into(FpPoly::divexact(f, g), d, rng, out);
            return;
        }
    }
}

}  // namespace detail

/// Monic irreducible factors with multiplicities, ascending. f must be nonzero;
/// the leading coefficient is dropped.
inline std::vector<std::pair<FpPoly, unsigned>> factor_poly(const FpPoly& f) {
    if (f.is_zero()) throw ParameterError("cannot factor the zero polynomial");
    std::vector<std::pair<FpPoly, unsigned>> sqf;
    detail::squarefree_into(f.monic(), 1, sqf);
    std::vector<std::pair<FpPoly, unsigned>> out;
    std::mt19937_64 rng(0x5eed);
    const std::uint32_t q = f.modulus();
    const FpPoly x = FpPoly::variable(q);
    for (const auto& [g0, mult] : sqf) {
        FpPoly g = g0;
        FpPoly h = x;
        for (long d = 1; 2 * d <= g.degree(); ++d) {
            h = FpPoly::powmod(h, Integer(q), g);
            FpPoly common = FpPoly::gcd(g, h - x);
            if (!common.is_one()) {
                std::vector<FpPoly> parts;
                detail::equal_degree_into(common, d, rng, parts);
                for (auto& p : parts) out.emplace_back(std::move(p), mult);
                g = FpPoly::divexact(g, common);
                h = h % g;
            }
        }
        if (g.degree() > 0) out.emplace_back(g.monic(), mult);
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    // merge equal factors that arrived via different square-free layers
    std::vector<std::pair<FpPoly, unsigned>> merged;
    for (auto& e : out) {
        if (!merged.empty() && merged.back().first == e.first)
            merged.back().second += e.second;
        else
            merged.push_back(std::move(e));
    }
    return merged;
}

}  // namespace rsieve

template <>
struct std::hash<rsieve::FpPoly> {
    std::size_t operator()(const rsieve::FpPoly& p) const noexcept { return p.hash(); }
};
