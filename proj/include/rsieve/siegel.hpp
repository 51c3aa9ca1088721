#pragma once

// Small nonzero solutions of homogeneous linear systems over O_K.
//
// KernelReduce: the reduced echelon form of A is computed modulo many word-size
// primes, lifted by CRT and rational reconstruction, and each free column gives
// a kernel vector; the candidate of least height is verified exactly. For
// small systems the saturated integral kernel is also computed and reduced,
// which usually finds the true minimum.
//
// BoundedEnumeration: pigeonhole over all tuples of height <= h, doubling h.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "field.hpp"
#include "linalg.hpp"
#include "modular.hpp"
#include "parallel.hpp"
#include "ring.hpp"

namespace rsieve {

enum class SiegelStrategy { KernelReduce, BoundedEnumeration };

inline const char* to_string(SiegelStrategy s) { return s == SiegelStrategy::KernelReduce ? "KernelReduce" : "BoundedEnumeration"; }

template <class R>
struct LinearSystem {
    FieldDescriptor field;
    std::size_t s = 0;
    std::size_t t = 0;
    Matrix<R> entries;
    HeightValue C;  // max entry height

    LinearSystem() = default;
    LinearSystem(FieldDescriptor fd, Matrix<R> rows, std::size_t columns) : field(fd), s(rows.size()), t(columns), entries(std::move(rows)) {
        C = RingOps<R>::height(RingOps<R>::zero(field));
        for (const auto& row : entries) {
            if (row.size() != t) throw InputError("ragged matrix: row of length " + std::to_string(row.size()) + ", expected " + std::to_string(t));
            C = std::max(C, max_height(row, field));
        }
    }
};

struct SiegelOptions {
    enum class Choice { Auto, KernelReduce, BoundedEnumeration };
    Choice strategy = Choice::Auto;
    long slack = 4;
    std::uint64_t enumeration_cap = std::uint64_t(1) << 22;  // tuples per pigeonhole round
    std::size_t reduce_columns = 40;                         // saturation pass up to this many unknowns
    std::size_t max_moduli = 4096;
    std::size_t threads = 1;
};

template <class R>
struct SmallSolution {
    std::vector<R> c;
    HeightValue height;
    SiegelStrategy strategy_used = SiegelStrategy::KernelReduce;
    bool within_bound = false;
    double log_bound = 0;  // log of B (t C^d)^(4 d^2 s / (t - 2 d^2 s))
    std::size_t rank = 0;
    std::size_t moduli_used = 0;
};

/// Number of ring elements of height <= h.
inline Integer count_ring_points(const HeightValue& h, const FieldDescriptor& fd) {
    if (h.value < 1) throw ParameterError("height must be >= 1");
    if (!fd.is_function_field()) return 2 * h.value + 1;
    Integer p = fd.q;
    while (p <= h.value) p *= fd.q;
    return p;
}

/// Orders tuples from the last coordinate backwards.
template <class R>
std::strong_ordering compare_colex(const std::vector<R>& a, const std::vector<R>& b) {
    for (std::size_t i = std::min(a.size(), b.size()); i-- > 0;)
        if (auto c = RingOps<R>::compare(a[i], b[i]); c != 0) return c;
    return a.size() <=> b.size();
}

namespace detail {

inline void check_hypothesis(std::size_t s, std::size_t t, const FieldDescriptor& fd) {
    const std::size_t d = static_cast<std::size_t>(fd.degree_d);
    if (t <= 2 * d * d * s) throw ParameterError("the system needs t > 2 d^2 s unknowns (s = " + std::to_string(s) + ", t = " + std::to_string(t) + ")");
}

/// H^b <= B^b (t C^d)^a with a = 4 d^2 s, b = t - 2 d^2 s.
template <class R>
bool bound_holds(const HeightValue& h, const LinearSystem<R>& A, long slack) {
    const unsigned long d = static_cast<unsigned long>(A.field.degree_d);
    const unsigned long a = 4 * d * d * A.s;
    const unsigned long b = A.t - 2 * d * d * A.s;
    Integer base = Integer(static_cast<unsigned long>(A.t)) * ipow(A.C.value, d);
    return ipow(h.value, b) <= ipow(Integer(slack), b) * ipow(base, a);
}

template <class R>
double log_bound(const LinearSystem<R>& A, long slack) {
    const double d = static_cast<double>(A.field.degree_d);
    const double a = 4 * d * d * static_cast<double>(A.s);
    const double b = static_cast<double>(A.t) - 2 * d * d * static_cast<double>(A.s);
    return std::log(static_cast<double>(slack)) + a / b * (std::log(static_cast<double>(A.t)) + d * A.C.log());
}

template <class R>
struct Candidate {
    std::vector<R> c;
    HeightValue height;
};

template <class R>
bool better(const Candidate<R>& x, const Candidate<R>& y) {
    if (x.height != y.height) return x.height < y.height;
    return compare_colex(x.c, y.c) < 0;
}

template <class R>
Candidate<R> make_candidate(std::vector<R> v, const FieldDescriptor& fd) {
    auto c = primitive_part(std::move(v)).first;
    HeightValue h = max_height(c, fd);
    return {std::move(c), std::move(h)};
}

template <class R>
struct KernelReduceResult {
    Candidate<R> best;
    std::size_t rank = 0;
    std::size_t moduli = 0;
};

/// Multimodular echelon form, lifted and reconstructed; returns the least
/// kernel basis vector once it verifies exactly.
template <class R>
KernelReduceResult<R> kernel_reduce(const LinearSystem<R>& A, const SiegelOptions& opt) {
    using Source = ModulusSource<R>;
    using E = typename Source::Engine;
    using Elem = typename E::Elem;
    const FieldDescriptor& fd = A.field;
    const std::size_t t = A.t;

    KernelReduceResult<R> out;
    if (A.s == 0) {
        std::vector<R> v(t, RingOps<R>::zero(fd));
        v[0] = RingOps<R>::one(fd);
        out.best = make_candidate(std::move(v), fd);
        return out;
    }

    Source source(fd);
    bool have = false;
    std::size_t rank = 0;
    std::vector<std::size_t> pivots, free_cols;
    Matrix<R> acc;  // CRT images of the echelon entries in free columns
    R modulus = RingOps<R>::one(fd);
    std::size_t images = 0, used = 0, next_check = 1;

    while (used < opt.max_moduli) {
        const std::size_t want = std::min(std::max<std::size_t>(1, opt.threads), next_check - std::min(next_check, images));
        std::vector<E> engines;
        for (std::size_t k = 0; k < std::max<std::size_t>(want, 1); ++k) engines.push_back(source.next());
        used += engines.size();
        std::vector<ModEchelon<E>> ech(engines.size());
        parallel_for(engines.size(), opt.threads, [&](std::size_t k) { ech[k] = rref_mod(engines[k], reduce_matrix(engines[k], A.entries), t); });

        for (std::size_t k = 0; k < engines.size(); ++k) {
            const auto& eng = engines[k];
            const auto& e = ech[k];
            int cmp = have ? compare_profiles(e.rank, e.pivots, rank, pivots) : -1;
            if (cmp > 0) continue;
            if (cmp < 0) {
                have = true;
                rank = e.rank;
                pivots = e.pivots;
                free_cols.clear();
                for (std::size_t j = 0, p = 0; j < t; ++j) {
                    if (p < pivots.size() && pivots[p] == j)
                        ++p;
                    else
                        free_cols.push_back(j);
                }
                acc.assign(rank, std::vector<R>(free_cols.size()));
                for (std::size_t i = 0; i < rank; ++i)
                    for (std::size_t f = 0; f < free_cols.size(); ++f) acc[i][f] = eng.lift(e.rows[i][free_cols[f]]);
                modulus = eng.modulus();
                images = 1;
                next_check = 1;
                continue;
            }
            const Elem m_inv = eng.inv(eng.reduce(modulus));
            for (std::size_t i = 0; i < rank; ++i)
                for (std::size_t f = 0; f < free_cols.size(); ++f) crt_step(acc[i][f], modulus, e.rows[i][free_cols[f]], eng, m_inv);
            modulus *= eng.modulus();
            ++images;
        }
        if (images < next_check) continue;
        next_check = 2 * images;

        // reconstruct with a shared running denominator
        using F = FieldElement<R>;
        R common = RingOps<R>::one(fd);
        bool ok = true;
        Matrix<F> entries(rank, std::vector<F>(free_cols.size()));
        for (std::size_t i = 0; i < rank && ok; ++i) {
            for (std::size_t f = 0; f < free_cols.size(); ++f) {
                R y = (common * acc[i][f]) % modulus;
                if constexpr (std::is_same_v<R, Integer>)
                    if (y < 0) y += modulus;
                if (small_residue(y, modulus)) {
                    entries[i][f] = F(y, common);
                    continue;
                }
                auto nd = rational_reconstruct(y, modulus);
                if (!nd) {
                    ok = false;
                    break;
                }
                entries[i][f] = F(nd->first, nd->second * common);
                common *= nd->second;
            }
        }
        if (!ok) continue;

        std::optional<Candidate<R>> best;
        for (std::size_t f = 0; f < free_cols.size(); ++f) {
            std::vector<F> v(t, F(RingOps<R>::zero(fd), fd));
            v[free_cols[f]] = F(RingOps<R>::one(fd), fd);
            for (std::size_t i = 0; i < rank; ++i) v[pivots[i]] = -entries[i][f];
            Candidate<R> cand = make_candidate(content_and_primitive(v).primitive, fd);
            if (!best || better(cand, *best)) best = std::move(cand);
        }
        if (best && is_kernel_vector(A.entries, best->c)) {
            out.best = std::move(*best);
            out.rank = rank;
            out.moduli = used;
            return out;
        }
    }
    throw ResourceError("kernel reconstruction did not stabilize within " + std::to_string(opt.max_moduli) + " moduli");
}

/// Pigeonhole search: two tuples with equal image differ by a kernel vector.
template <class R>
Candidate<R> bounded_enumeration(const LinearSystem<R>& A, const SiegelOptions& opt) {
    const FieldDescriptor& fd = A.field;
    const std::size_t t = A.t;
    // target h ~ (t C^d)^(2 d s / (t - 2 d^2 s))
    const double d = static_cast<double>(fd.degree_d);
    const double expo = 2 * d * static_cast<double>(A.s) / (static_cast<double>(t) - 2 * d * d * static_cast<double>(A.s));
    const double log_target = expo * (std::log(static_cast<double>(t)) + d * A.C.log());

    HeightValue h = fd.is_function_field() ? HeightValue::q_power(fd.q, 0) : HeightValue::of(1);
    for (;;) {
        auto elems = RingOps<R>::elements_up_to(h, fd);
        const long double total = std::pow(static_cast<long double>(elems.size()), static_cast<long double>(t));
        if (total > static_cast<long double>(opt.enumeration_cap))
            throw ResourceError("enumeration cap exceeded at height " + h.to_string() + " (target about exp(" + std::to_string(log_target) + "))");
        const std::uint64_t n = static_cast<std::uint64_t>(std::llround(total));
        std::unordered_map<std::vector<R>, std::uint64_t, VectorHash<R>> seen;
        seen.reserve(static_cast<std::size_t>(n));
        std::vector<std::size_t> idx(t, 0);
        auto tuple_of = [&](std::uint64_t code) {
            std::vector<R> c(t);
            for (std::size_t j = 0; j < t; ++j) {
                c[j] = elems[code % elems.size()];
                code /= elems.size();
            }
            return c;
        };
        for (std::uint64_t code = 0; code < n; ++code) {
            std::vector<R> c = tuple_of(code);
            std::vector<R> image(A.s, RingOps<R>::zero(fd));
            for (std::size_t i = 0; i < A.s; ++i)
                for (std::size_t j = 0; j < t; ++j)
                    if (!RingOps<R>::is_zero(c[j])) image[i] += A.entries[i][j] * c[j];
            auto [it, fresh] = seen.emplace(std::move(image), code);
            if (fresh) continue;
            std::vector<R> other = tuple_of(it->second);
            for (std::size_t j = 0; j < t; ++j) c[j] -= other[j];
            return make_candidate(std::move(c), fd);
        }
        if (fd.is_function_field())
            h = HeightValue::q_power(fd.q, *h.q_exponent + 1);
        else
            h = HeightValue::of(2 * h.value);
    }
}

}  // namespace detail

template <class R>
SmallSolution<R> small_kernel(const LinearSystem<R>& A, const SiegelOptions& opt = {}) {
    detail::check_hypothesis(A.s, A.t, A.field);
    if (opt.slack < 1) throw ParameterError("slack must be >= 1");
    SmallSolution<R> out;
    std::optional<detail::Candidate<R>> best;

    if (opt.strategy != SiegelOptions::Choice::BoundedEnumeration) {
        try {
            auto kr = detail::kernel_reduce(A, opt);
            best = std::move(kr.best);
            out.rank = kr.rank;
            out.moduli_used = kr.moduli;
            out.strategy_used = SiegelStrategy::KernelReduce;
        } catch (const ResourceError&) {
            if (opt.strategy == SiegelOptions::Choice::KernelReduce) throw;
        }
        if (best && A.t <= opt.reduce_columns && A.s > 0) {
            auto basis = saturated_kernel(A.entries, A.t, A.field);
            auto reduced = reduce_kernel_basis(basis);
            for (auto* set : {&basis, &reduced}) {
                for (auto& v : *set) {
                    auto cand = detail::make_candidate(v, A.field);
                    if (detail::better(cand, *best) && is_kernel_vector(A.entries, cand.c)) best = std::move(cand);
                }
            }
        }
    }
    const bool need_enumeration = opt.strategy == SiegelOptions::Choice::BoundedEnumeration || !best || (opt.strategy == SiegelOptions::Choice::Auto && !detail::bound_holds(best->height, A, opt.slack));
    if (need_enumeration) {
        try {
            auto cand = detail::bounded_enumeration(A, opt);
            if (!best || detail::better(cand, *best)) {
                best = std::move(cand);
                out.strategy_used = SiegelStrategy::BoundedEnumeration;
            }
        } catch (const ResourceError& e) {
            if (!best) throw;
            if (opt.strategy == SiegelOptions::Choice::BoundedEnumeration)
                throw ResourceError(std::string(e.what()) + "; best kernel vector found has height " + best->height.to_string());
        }
    }
    if (!is_kernel_vector(A.entries, best->c)) throw IntegrityError("solution failed exact verification");
    out.c = std::move(best->c);
    out.height = std::move(best->height);
    out.within_bound = detail::bound_holds(out.height, A, opt.slack);
    out.log_bound = detail::log_bound(A, opt.slack);
    return out;
}

}  // namespace rsieve
