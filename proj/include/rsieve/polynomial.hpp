#pragma once

// Homogeneous polynomials in x_0..x_n with ring coefficients.

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "modular.hpp"
#include "points.hpp"
#include "ring.hpp"

namespace rsieve {

using Exponent = std::vector<unsigned>;

/// Degree-D exponent tuples in n+1 variables, graded-lex order
/// (x_0^D first, x_n^D last).
inline std::vector<Exponent> monomials(std::size_t n, unsigned D) {
    std::vector<Exponent> out;
    Exponent e(n + 1, 0);
    auto rec = [&](auto&& self, std::size_t i, unsigned left) -> void {
        if (i == n) {
            e[i] = left;
            out.push_back(e);
            return;
        }
        for (unsigned k = left + 1; k-- > 0;) {
            e[i] = k;
            self(self, i + 1, left - k);
        }
    };
    rec(rec, 0, D);
    return out;
}

/// Number of monomials of degree D in n+1 variables, binomial(D+n, n).
inline Integer monomial_count(std::size_t n, unsigned D) {
    Integer b;
    mpz_bin_uiui(b.get_mpz_t(), D + n, n);
    return b;
}

template <class R>
struct HomogeneousPolynomial {
    std::size_t nvars = 0;
    unsigned degree = 0;
    std::map<Exponent, R> terms;  // nonzero coefficients only

    bool is_zero() const { return terms.empty(); }

    HeightValue coefficient_height(const FieldDescriptor& fd) const {
        HeightValue h = RingOps<R>::height(RingOps<R>::zero(fd));
        for (const auto& [e, c] : terms) h = std::max(h, RingOps<R>::height(c));
        return h;
    }

    void add_term(const Exponent& e, const R& c) {
        if (RingOps<R>::is_zero(c)) return;
        auto [it, fresh] = terms.emplace(e, c);
        if (fresh) return;
        it->second += c;
        if (RingOps<R>::is_zero(it->second)) terms.erase(it);
    }

    friend HomogeneousPolynomial operator*(const HomogeneousPolynomial& a, const HomogeneousPolynomial& b) {
        HomogeneousPolynomial r{a.nvars, a.degree + b.degree, {}};
        for (const auto& [ea, ca] : a.terms) {
            for (const auto& [eb, cb] : b.terms) {
                Exponent e(a.nvars);
                for (std::size_t i = 0; i < a.nvars; ++i) e[i] = ea[i] + eb[i];
                r.add_term(e, ca * cb);
            }
        }
        return r;
    }

    std::string to_string() const {
        if (terms.empty()) return "0";
        std::string s;
        for (auto it = terms.rbegin(); it != terms.rend(); ++it) {
            if (!s.empty()) s += " + ";
            s += "(" + RingOps<R>::to_string(it->second) + ")";
            for (std::size_t i = 0; i < nvars; ++i) {
                if (it->first[i] == 0) continue;
                s += "*x" + std::to_string(i);
                if (it->first[i] > 1) s += "^" + std::to_string(it->first[i]);
            }
        }
        return s;
    }
};

/// Polynomial with coefficients c over the graded-lex monomials of degree D.
template <class R>
HomogeneousPolynomial<R> polynomial_from_coefficients(std::size_t n, unsigned D, const std::vector<R>& c) {
    auto mons = monomials(n, D);
    if (mons.size() != c.size()) throw ParameterError("coefficient count does not match the monomial count");
    HomogeneousPolynomial<R> p{n + 1, D, {}};
    for (std::size_t k = 0; k < c.size(); ++k)
        if (!RingOps<R>::is_zero(c[k])) p.terms.emplace(mons[k], c[k]);
    return p;
}

/// Values of all degree-D monomials at a point: powers are tabulated once.
template <class R>
std::vector<R> monomial_values(const std::vector<R>& x, const std::vector<Exponent>& mons, unsigned D, const FieldDescriptor& fd) {
    std::vector<std::vector<R>> pw(x.size(), std::vector<R>(D + 1));
    for (std::size_t i = 0; i < x.size(); ++i) {
        pw[i][0] = RingOps<R>::one(fd);
        for (unsigned k = 1; k <= D; ++k) pw[i][k] = pw[i][k - 1] * x[i];
    }
    std::vector<R> out;
    out.reserve(mons.size());
    for (const auto& e : mons) {
        R v = pw[0][e[0]];
        for (std::size_t i = 1; i < x.size(); ++i)
            if (e[i]) v *= pw[i][e[i]];
        out.push_back(std::move(v));
    }
    return out;
}

/// Exact value of P at a ring tuple.
template <class R>
R evaluate(const HomogeneousPolynomial<R>& p, const std::vector<R>& x, const FieldDescriptor& fd) {
    if (x.size() != p.nvars) throw ParameterError("point dimension does not match the polynomial");
    std::vector<std::vector<R>> pw(x.size(), std::vector<R>(p.degree + 1));
    for (std::size_t i = 0; i < x.size(); ++i) {
        pw[i][0] = RingOps<R>::one(fd);
        for (unsigned k = 1; k <= p.degree; ++k) pw[i][k] = pw[i][k - 1] * x[i];
    }
    R acc = RingOps<R>::zero(fd);
    for (const auto& [e, c] : p.terms) {
        R v = c;
        for (std::size_t i = 0; i < x.size(); ++i)
            if (e[i]) v *= pw[i][e[i]];
        acc += v;
    }
    return acc;
}

/// Vanishing test that first evaluates modulo a word-size prime and only
/// falls back to exact evaluation when the residue is zero.
template <class R>
class VanishingTester {
    using Engine = typename ModulusSource<R>::Engine;

   public:
    VanishingTester(const HomogeneousPolynomial<R>& p, const FieldDescriptor& fd) : p_(p), fd_(fd), eng_(ModulusSource<R>(fd).next()) {
        for (const auto& [e, c] : p.terms) {
            exps_.push_back(e);
            coef_.push_back(eng_.reduce(c));
        }
    }

    bool vanishes_at(const std::vector<R>& x) const {
        if (x.size() != p_.nvars) throw ParameterError("point dimension does not match the polynomial");
        using Elem = typename Engine::Elem;
        std::vector<std::vector<Elem>> pw(x.size(), std::vector<Elem>(p_.degree + 1));
        for (std::size_t i = 0; i < x.size(); ++i) {
            pw[i][0] = eng_.one();
            Elem xi = eng_.reduce(x[i]);
            for (unsigned k = 1; k <= p_.degree; ++k) pw[i][k] = eng_.mul(pw[i][k - 1], xi);
        }
        Elem acc = eng_.zero();
        for (std::size_t t = 0; t < exps_.size(); ++t) {
            Elem v = coef_[t];
            for (std::size_t i = 0; i < x.size(); ++i)
                if (exps_[t][i]) v = eng_.mul(v, pw[i][exps_[t][i]]);
            acc = eng_.add(acc, v);
        }
        if (!eng_.is_zero(acc)) return false;
        return RingOps<R>::is_zero(evaluate(p_, x, fd_));
    }

   private:
    const HomogeneousPolynomial<R>& p_;
    FieldDescriptor fd_;
    Engine eng_;
    std::vector<Exponent> exps_;
    std::vector<typename Engine::Elem> coef_;
};

}  // namespace rsieve
