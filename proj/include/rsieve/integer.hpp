#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace rsieve {

using Integer = mpz_class;
using Rational = mpq_class;

inline Integer ipow(const Integer& base, unsigned long exp) {
    Integer r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exp);
    return r;
}

inline Integer ipow(unsigned long base, unsigned long exp) {
    Integer r;
    mpz_ui_pow_ui(r.get_mpz_t(), base, exp);
    return r;
}

inline Integer iabs(const Integer& a) { return a < 0 ? Integer(-a) : a; }

inline Integer igcd(const Integer& a, const Integer& b) {
    Integer g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

inline Integer ilcm(const Integer& a, const Integer& b) {
    Integer l;
    mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return l;
}

inline Integer divexact(const Integer& a, const Integer& b) {
    Integer q;
    mpz_divexact(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

/// Natural log of |a| for a != 0, accurate for arbitrarily large a.
inline double log_abs(const Integer& a) {
    long exp = 0;
    double mant = mpz_get_d_2exp(&exp, a.get_mpz_t());
    return std::log(std::fabs(mant)) + static_cast<double>(exp) * std::log(2.0);
}

inline double log_abs(const Rational& a) { return log_abs(a.get_num()) - log_abs(a.get_den()); }

inline Integer parse_integer(const std::string& s) {
    Integer r;
    if (s.empty() || r.set_str(s, 10) != 0) throw InputError("not an integer: '" + s + "'");
    return r;
}

// ---------------------------------------------------------------------------
// word-size modular helpers

inline std::uint64_t mulmod64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t powmod64(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    b %= m;
    while (e) {
        if (e & 1) r = mulmod64(r, b, m);
        b = mulmod64(b, b, m);
        e >>= 1;
    }
    return r;
}

/// Deterministic Miller-Rabin for all 64-bit inputs.
inline bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        std::uint64_t x = powmod64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod64(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

/// Inverse of a modulo m (gcd(a, m) = 1 assumed).
inline std::uint64_t invmod64(std::uint64_t a, std::uint64_t m) {
    __int128 t = 0, nt = 1;
    __int128 r = m, nr = a % m;
    while (nr != 0) {
        __int128 q = r / nr;
        __int128 tmp = t - q * nt;
        t = nt;
        nt = tmp;
        tmp = r - q * nr;
        r = nr;
        nr = tmp;
    }
    if (r != 1) throw DivisionByZero();
    if (t < 0) t += m;
    return static_cast<std::uint64_t>(t);
}

inline bool is_probable_prime(const Integer& n) {
    if (n < 2) return false;
    if (mpz_fits_ulong_p(n.get_mpz_t())) return is_prime_u64(mpz_get_ui(n.get_mpz_t()));
    return mpz_probab_prime_p(n.get_mpz_t(), 40) > 0;
}

namespace detail {

// Brent's variant of Pollard rho; n composite, odd, not a perfect power of a small prime.
inline Integer pollard_brent(const Integer& n, unsigned long c) {
    auto f = [&](const Integer& x) {
        Integer y = x * x + c;
        mpz_mod(y.get_mpz_t(), y.get_mpz_t(), n.get_mpz_t());
        return y;
    };
    Integer y = 2, x, ys, q = 1, g = 1;
    unsigned long r = 1;
    const unsigned long m = 128;
    while (g == 1) {
        x = y;
        for (unsigned long i = 0; i < r; ++i) y = f(y);
        unsigned long k = 0;
        while (k < r && g == 1) {
            ys = y;
            for (unsigned long i = 0; i < std::min(m, r - k); ++i) {
                y = f(y);
                Integer diff = iabs(Integer(x - y));
                q *= diff;
                mpz_mod(q.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
            }
            g = igcd(q, n);
            k += m;
        }
        r *= 2;
    }
    if (g == n) {
        do {
            ys = f(ys);
            g = igcd(iabs(Integer(x - ys)), n);
        } while (g == 1);
    }
    return g;
}

inline void factor_into(Integer n, std::vector<Integer>& out) {
    if (n == 1) return;
    if (is_probable_prime(n)) {
        out.push_back(n);
        return;
    }
    for (unsigned long c = 1;; ++c) {
        Integer d = pollard_brent(n, c);
        if (d != n && d != 1) {
            factor_into(d, out);
            factor_into(divexact(n, d), out);
            return;
        }
    }
}

}  // namespace detail

/// Prime factorization of |n| (n != 0), ascending primes with multiplicities.
inline std::vector<std::pair<Integer, unsigned>> factor_integer(const Integer& n) {
    if (n == 0) throw ParameterError("cannot factor zero");
    Integer m = iabs(n);
    std::vector<Integer> primes;
    for (unsigned long p = 2; p < 1000 && m > 1; ++p) {
        if (!is_prime_u64(p)) continue;
        while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
            primes.emplace_back(p);
            mpz_divexact_ui(m.get_mpz_t(), m.get_mpz_t(), p);
        }
    }
    detail::factor_into(m, primes);
    std::sort(primes.begin(), primes.end());
    std::vector<std::pair<Integer, unsigned>> out;
    for (const auto& p : primes) {
        if (!out.empty() && out.back().first == p)
            ++out.back().second;
        else
            out.emplace_back(p, 1u);
    }
    return out;
}

/// Exact order of `base` modulo prime p (p not dividing base).
inline std::uint64_t multiplicative_order(std::uint64_t base, std::uint64_t p) {
    if (base % p == 0) throw ParameterError("base divisible by p has no multiplicative order");
    std::uint64_t order = p - 1;
    for (const auto& [fac, mult] : factor_integer(Integer(static_cast<unsigned long>(p - 1)))) {
        std::uint64_t f = mpz_get_ui(fac.get_mpz_t());
        for (unsigned i = 0; i < mult && order % f == 0; ++i) {
            if (powmod64(base, order / f, p) == 1)
                order /= f;
            else
                break;
        }
    }
    return order;
}

}  // namespace rsieve
