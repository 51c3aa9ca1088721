#include <gtest/gtest.h>

#include <cmath>

#include "rsieve/prime_windows.hpp"
#include "test_support.hpp"

using namespace rsieve;

namespace {

// Independent oracles: trial division for integers, trial division by every
// monic polynomial of degree <= h/2 for polynomials.
bool trial_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

bool trial_irreducible(const FpPoly& f) {
    const std::uint32_t q = f.modulus();
    const long h = f.degree();
    if (h < 1) return false;
    for (long d = 1; 2 * d <= h; ++d) {
        std::uint64_t count = 1;
        for (long i = 0; i < d; ++i) count *= q;
        for (std::uint64_t v = 0; v < count; ++v) {
            FpPoly g = FpPoly::decode(q, v) + FpPoly::monomial(q, static_cast<std::size_t>(d));
            if ((f % g).is_zero()) return false;
        }
    }
    return true;
}

FitParams params(std::size_t n, long kappa, double tau = 1.0) {
    FitParams p;
    p.n = n;
    p.kappa = kappa;
    p.tau = tau;
    return p;
}

TEST(PrimeWindows, RationalWindowExamples) {
    auto w = window_from_log(params(2, 1), FieldDescriptor::rationals(), 10.0L);
    EXPECT_NEAR(static_cast<double>(w.lower), 100.0, 1e-9);
    EXPECT_NEAR(static_cast<double>(w.upper), 200.0, 1e-9);
    w = window_from_log(params(2, 0), FieldDescriptor::rationals(), 10.0L);
    EXPECT_NEAR(static_cast<double>(w.lower), 10.0, 1e-9);
    EXPECT_NEAR(static_cast<double>(w.upper), 20.0, 1e-9);
    EXPECT_THROW(window_from_log(params(2, 2), FieldDescriptor::rationals(), 10.0L), ParameterError);
}

TEST(PrimeWindows, FunctionFieldWindowRoundsUp) {
    auto w = window_from_log(params(2, 1), FieldDescriptor::rational_functions(2), 8.0L);
    EXPECT_EQ(w.degree_lo, 6);
    EXPECT_EQ(w.degree_hi, 6);
    EXPECT_NEAR(static_cast<double>(w.lower), 64.0, 1e-9);
    // 65 is not a power of two: round the exponent up
    w = window_from_log(params(1, 0, 65.0 / std::log(std::exp(1.0))), FieldDescriptor::rational_functions(2), std::exp(1.0L) * 1.0000001L);
    EXPECT_GE(std::pow(2.0L, static_cast<long double>(w.degree_lo)), 65.0L);
    // never at or below d = 1
    w = window_from_log(params(1, 0), FieldDescriptor::rational_functions(5), 1.5L);
    EXPECT_EQ(w.degree_lo, 2);
}

TEST(PrimeWindows, RationalEnumeration) {
    PrimeWindow w;
    w.lower = 100;
    w.upper = 200;
    auto ps = enumerate_rational_primes(w);
    ASSERT_EQ(ps.size(), 21u);
    EXPECT_EQ(ps.front().generator, 101);
    EXPECT_EQ(ps.back().generator, 199);
    std::size_t oracle = 0;
    for (std::uint64_t n = 100; n <= 200; ++n) oracle += trial_prime(n);
    EXPECT_EQ(ps.size(), oracle);

    w.lower = 14;
    w.upper = 16;
    EXPECT_TRUE(enumerate_rational_primes(w).empty());

    w.lower = 1e9;
    w.upper = 2e9;
    EXPECT_THROW(enumerate_rational_primes(w), ResourceError);
}

TEST(PrimeWindows, IrreducibleEnumeration) {
    auto cubics = irreducibles_of_degree(2, 3);
    ASSERT_EQ(cubics.size(), 2u);
    EXPECT_EQ(cubics[0], rsieve::testing::poly(2, {1, 1, 0, 1}));
    EXPECT_EQ(cubics[1], rsieve::testing::poly(2, {1, 0, 1, 1}));
    EXPECT_THROW(irreducibles_of_degree(2, 30), ResourceError);
}

TEST(PrimeWindows, CountMatchesEnumerationAndTrialDivision) {
    for (std::uint32_t q : {2u, 3u, 5u}) {
        for (long h = 1; h <= 6; ++h) {
            auto irr = irreducibles_of_degree(q, h);
            EXPECT_EQ(count_irreducibles(q, h), Integer(static_cast<unsigned long>(irr.size()))) << q << " " << h;
            for (const auto& f : irr) ASSERT_TRUE(trial_irreducible(f)) << f.to_string();
        }
    }
    EXPECT_EQ(count_irreducibles(2, 3), 2);
    EXPECT_EQ(count_irreducibles(3, 1), 3);
    EXPECT_EQ(count_irreducibles(2, 4), 3);
}

TEST(PrimeWindows, ChebyshevBand) {
    for (std::uint64_t a : {1000ull, 10000ull}) {
        double count = static_cast<double>(primes_between(a, 2 * a).size());
        double ref = static_cast<double>(a) / std::log(static_cast<double>(a));
        EXPECT_GE(count, 0.9 * ref);
        EXPECT_LE(count, 1.3 * ref);
    }
}

TEST(PrimeWindows, SieveAgreesWithTrialDivision) {
    auto ps = primes_between(1, 5000);
    std::size_t k = 0;
    for (std::uint64_t n = 1; n <= 5000; ++n) {
        if (trial_prime(n)) {
            ASSERT_LT(k, ps.size());
            EXPECT_EQ(ps[k++], n);
        }
    }
    EXPECT_EQ(k, ps.size());
}

}  // namespace
