#pragma once

// Exact and modular linear algebra over the rings of integers.

#include <cstddef>
#include <optional>
#include <tuple>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "field.hpp"
#include "modular.hpp"
#include "ring.hpp"

namespace rsieve {

template <class R>
using Matrix = std::vector<std::vector<R>>;

/// Reduced row echelon form over a residue field.
template <class E>
struct ModEchelon {
    std::size_t rank = 0;
    std::vector<std::size_t> pivots;
    std::vector<std::vector<typename E::Elem>> rows;  // `rank` reduced rows of full width
};

template <class E>
std::vector<std::vector<typename E::Elem>> reduce_matrix(const E& eng, const Matrix<typename E::Ring>& a) {
    std::vector<std::vector<typename E::Elem>> m(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        m[i].reserve(a[i].size());
        for (const auto& x : a[i]) m[i].push_back(eng.reduce(x));
    }
    return m;
}

/// Gauss-Jordan with the leftmost available pivot in each column.
template <class E>
ModEchelon<E> rref_mod(const E& eng, std::vector<std::vector<typename E::Elem>> m, std::size_t t) {
    ModEchelon<E> out;
    const std::size_t s = m.size();
    std::size_t r = 0;
    for (std::size_t col = 0; col < t && r < s; ++col) {
        std::size_t piv = r;
        while (piv < s && eng.is_zero(m[piv][col])) ++piv;
        if (piv == s) continue;
        std::swap(m[piv], m[r]);
        auto& prow = m[r];
        const auto inv = eng.inv(prow[col]);
        for (std::size_t j = col; j < t; ++j) prow[j] = eng.mul(prow[j], inv);
        for (std::size_t i = 0; i < s; ++i) {
            if (i == r || eng.is_zero(m[i][col])) continue;
            const auto f = m[i][col];
            auto& row = m[i];
            for (std::size_t j = col; j < t; ++j)
                if (!eng.is_zero(prow[j])) row[j] = eng.sub(row[j], eng.mul(f, prow[j]));
        }
        out.pivots.push_back(col);
        ++r;
    }
    out.rank = r;
    m.resize(r);
    out.rows = std::move(m);
    return out;
}

/// Higher rank first, then lexicographically smaller pivot columns. A prime
/// whose profile is worse than another's is unlucky.
inline int compare_profiles(std::size_t rank_a, const std::vector<std::size_t>& piv_a, std::size_t rank_b, const std::vector<std::size_t>& piv_b) {
    if (rank_a != rank_b) return rank_a > rank_b ? -1 : 1;
    if (piv_a == piv_b) return 0;
    return piv_a < piv_b ? -1 : 1;
}

/// Fraction-free (Bareiss) row echelon form over the ring itself.
template <class R>
struct BareissEchelon {
    std::size_t rank = 0;
    std::vector<std::size_t> pivots;
    Matrix<R> rows;  // `rank` echelon rows
};

template <class R>
BareissEchelon<R> bareiss(Matrix<R> m, std::size_t t, const FieldDescriptor& fd) {
    BareissEchelon<R> out;
    const std::size_t s = m.size();
    R prev = RingOps<R>::one(fd);
    std::size_t r = 0;
    for (std::size_t col = 0; col < t && r < s; ++col) {
        std::size_t piv = r;
        while (piv < s && RingOps<R>::is_zero(m[piv][col])) ++piv;
        if (piv == s) continue;
        std::swap(m[piv], m[r]);
        for (std::size_t i = r + 1; i < s; ++i) {
            for (std::size_t j = col + 1; j < t; ++j) m[i][j] = RingOps<R>::divexact(m[r][col] * m[i][j] - m[i][col] * m[r][j], prev);
            m[i][col] = RingOps<R>::zero(fd);
        }
        prev = m[r][col];
        out.pivots.push_back(col);
        ++r;
    }
    out.rank = r;
    m.resize(r);
    out.rows = std::move(m);
    return out;
}

/// The kernel vector of an echelon form attached to free column f, scaled to a
/// canonical primitive ring vector.
template <class R>
std::vector<R> echelon_kernel_vector(const BareissEchelon<R>& e, std::size_t t, std::size_t f, const FieldDescriptor& fd) {
    using F = FieldElement<R>;
    std::vector<F> v(t, F(RingOps<R>::zero(fd), fd));
    v[f] = F(RingOps<R>::one(fd), fd);
    for (std::size_t i = e.rank; i-- > 0;) {
        const std::size_t p = e.pivots[i];
        if (p > f) continue;
        F acc(RingOps<R>::zero(fd), fd);
        for (std::size_t j = p + 1; j < t; ++j)
            if (!v[j].is_zero() && !RingOps<R>::is_zero(e.rows[i][j])) acc = acc + F(e.rows[i][j], fd) * v[j];
        v[p] = -acc / F(e.rows[i][p], fd);
    }
    return content_and_primitive(v).primitive;
}

template <class R>
bool is_kernel_vector(const Matrix<R>& a, const std::vector<R>& c) {
    for (const auto& row : a) {
        R acc = RingOps<R>::zero(FieldDescriptor{});
        bool first = true;
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (RingOps<R>::is_zero(c[j]) || RingOps<R>::is_zero(row[j])) continue;
            if (first) {
                acc = row[j] * c[j];
                first = false;
            } else {
                acc += row[j] * c[j];
            }
        }
        if (!first && !RingOps<R>::is_zero(acc)) return false;
    }
    return true;
}

namespace detail {

inline std::tuple<Integer, Integer, Integer> ext_gcd(const Integer& a, const Integer& b) {
    Integer g, s, t;
    mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return {g, s, t};
}
inline std::tuple<FpPoly, FpPoly, FpPoly> ext_gcd(const FpPoly& a, const FpPoly& b) { return FpPoly::ext_gcd(a, b); }

}  // namespace detail

/// A basis of the saturated kernel {c in O_K^t : A c = 0}, obtained by
/// unimodular column operations that bring A to column echelon form.
template <class R>
std::vector<std::vector<R>> saturated_kernel(const Matrix<R>& a, std::size_t t, const FieldDescriptor& fd) {
    Matrix<R> m = a;
    // u[k] is the k-th column of the transform, stored as a vector
    std::vector<std::vector<R>> u(t, std::vector<R>(t, RingOps<R>::zero(fd)));
    for (std::size_t k = 0; k < t; ++k) u[k][k] = RingOps<R>::one(fd);
    auto combine = [&](std::size_t p, std::size_t j, const R& x, const R& y, const R& z, const R& w) {
        // col_p <- x col_p + y col_j,  col_j <- z col_p + w col_j
        for (auto& row : m) {
            R cp = row[p], cj = row[j];
            row[p] = x * cp + y * cj;
            row[j] = z * cp + w * cj;
        }
        for (std::size_t r = 0; r < t; ++r) {
            R cp = u[p][r], cj = u[j][r];
            u[p][r] = x * cp + y * cj;
            u[j][r] = z * cp + w * cj;
        }
    };
    std::size_t piv = 0;
    for (std::size_t i = 0; i < m.size() && piv < t; ++i) {
        for (std::size_t j = piv + 1; j < t; ++j) {
            const R b = m[i][j];
            if (RingOps<R>::is_zero(b)) continue;
            const R a0 = m[i][piv];
            auto [g, x, y] = detail::ext_gcd(a0, b);
            combine(piv, j, x, y, -RingOps<R>::divexact(b, g), RingOps<R>::divexact(a0, g));
        }
        if (!RingOps<R>::is_zero(m[i][piv])) ++piv;
    }
    std::vector<std::vector<R>> out;
    for (std::size_t k = piv; k < t; ++k) out.push_back(primitive_part(u[k]).first);
    return out;
}

namespace detail {

inline Integer dot(const std::vector<Integer>& a, const std::vector<Integer>& b) {
    Integer s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline bool is_zero_vector(const std::vector<Integer>& v) {
    for (const auto& x : v)
        if (x != 0) return false;
    return true;
}

}  // namespace detail

/// Pairwise size reduction of an integer lattice basis in the Euclidean norm
/// (Lagrange steps between every ordered pair until nothing shrinks).
inline std::vector<std::vector<Integer>> pairwise_reduce(std::vector<std::vector<Integer>> b, std::size_t max_sweeps = 100) {
    bool changed = true;
    for (std::size_t sweep = 0; changed && sweep < max_sweeps; ++sweep) {
        changed = false;
        for (std::size_t i = 0; i < b.size(); ++i) {
            for (std::size_t j = 0; j < b.size(); ++j) {
                if (i == j) continue;
                Integer nj = detail::dot(b[j], b[j]);
                if (nj == 0) continue;
                // m = round(<b_i, b_j> / <b_j, b_j>)
                Integer m;
                Integer num = 2 * detail::dot(b[i], b[j]) + nj;
                Integer den = 2 * nj;
                mpz_fdiv_q(m.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
                if (m == 0) continue;
                std::vector<Integer> c(b[i].size());
                for (std::size_t k = 0; k < c.size(); ++k) c[k] = b[i][k] - m * b[j][k];
                if (detail::is_zero_vector(c)) continue;
                c = primitive_part(std::move(c)).first;
                if (detail::dot(c, c) < detail::dot(b[i], b[i])) {
                    b[i] = std::move(c);
                    changed = true;
                }
            }
        }
    }
    return b;
}

/// Weak Popov form of a polynomial module basis: afterwards no two vectors
/// share a leading position, so the least row degree is the least degree of
/// any nonzero module element.
inline std::vector<std::vector<FpPoly>> weak_popov(std::vector<std::vector<FpPoly>> b) {
    auto leading = [](const std::vector<FpPoly>& v) {
        long deg = -1;
        std::size_t pos = 0;
        for (std::size_t k = 0; k < v.size(); ++k)
            if (v[k].degree() >= deg) {
                deg = v[k].degree();
                pos = k;
            }
        return std::make_pair(deg, pos);
    };
    for (;;) {
        bool changed = false;
        for (std::size_t i = 0; i < b.size() && !changed; ++i) {
            auto [di, pi] = leading(b[i]);
            for (std::size_t j = 0; j < b.size(); ++j) {
                if (i == j) continue;
                auto [dj, pj] = leading(b[j]);
                if (pi != pj || di < dj) continue;
                const std::uint32_t q = b[i][pi].modulus();
                FpPoly f = FpPoly::monomial(q, static_cast<std::size_t>(di - dj), b[i][pi].mul_scalar(b[i][pi].lead(), b[j][pj].inv_scalar(b[j][pj].lead())));
                for (std::size_t k = 0; k < b[i].size(); ++k) b[i][k] -= f * b[j][k];
                changed = true;
                break;
            }
        }
        if (!changed) break;
    }
    for (auto& v : b) v = primitive_part(std::move(v)).first;
    return b;
}

template <class R>
std::vector<std::vector<R>> reduce_kernel_basis(std::vector<std::vector<R>> b) {
    if constexpr (std::is_same_v<R, Integer>)
        return pairwise_reduce(std::move(b));
    else
        return weak_popov(std::move(b));
}

}  // namespace rsieve
