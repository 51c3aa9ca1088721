#pragma once

// Seeded generators shared by the unit and acceptance suites.

#include <cstdint>
#include <random>
#include <vector>

#include "rsieve/field.hpp"

namespace rsieve::testing {

inline Integer random_integer(std::mt19937_64& rng, std::int64_t bound) {
    std::uniform_int_distribution<std::int64_t> d(-bound, bound);
    return Integer(static_cast<long>(d(rng)));
}

inline Integer random_nonzero_integer(std::mt19937_64& rng, std::int64_t bound) {
    Integer v;
    do v = random_integer(rng, bound);
    while (v == 0);
    return v;
}

inline FpPoly random_poly(std::mt19937_64& rng, std::uint32_t q, long max_deg) {
    std::uniform_int_distribution<long> deg(0, max_deg);
    std::vector<FpPoly::Coeff> c(static_cast<std::size_t>(deg(rng)) + 1);
    for (auto& x : c) x = static_cast<FpPoly::Coeff>(rng() % q);
    return FpPoly(q, c);
}

inline FpPoly random_nonzero_poly(std::mt19937_64& rng, std::uint32_t q, long max_deg) {
    FpPoly p;
    do p = random_poly(rng, q, max_deg);
    while (p.is_zero());
    return p;
}

inline Rat random_rat(std::mt19937_64& rng, std::int64_t bound) { return Rat(random_integer(rng, bound), random_nonzero_integer(rng, bound)); }
inline Rat random_nonzero_rat(std::mt19937_64& rng, std::int64_t bound) { return Rat(random_nonzero_integer(rng, bound), random_nonzero_integer(rng, bound)); }

inline RatFunc random_ratfunc(std::mt19937_64& rng, std::uint32_t q, long max_deg) { return RatFunc(random_poly(rng, q, max_deg), random_nonzero_poly(rng, q, max_deg)); }
inline RatFunc random_nonzero_ratfunc(std::mt19937_64& rng, std::uint32_t q, long max_deg) {
    return RatFunc(random_nonzero_poly(rng, q, max_deg), random_nonzero_poly(rng, q, max_deg));
}

inline FpPoly poly(std::uint32_t q, std::vector<FpPoly::Coeff> c) { return FpPoly(q, std::move(c)); }

}  // namespace rsieve::testing
