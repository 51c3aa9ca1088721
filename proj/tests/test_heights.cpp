#include <gtest/gtest.h>

#include <random>

#include "rsieve/heights.hpp"
#include "test_support.hpp"

using namespace rsieve;
using rsieve::testing::poly;

namespace {

Rat q(long a, long b = 1) { return Rat(Integer(a), Integer(b)); }
const FieldDescriptor kQ = FieldDescriptor::rationals();

TEST(Heights, LocalValueExamples) {
    auto v = local_value(q(6, 5), Place<Integer>::finite(5));
    EXPECT_EQ(v.ord, -1);
    EXPECT_EQ(v.abs_value, 5);

    v = local_value(q(8), Place<Integer>::finite(2));
    EXPECT_EQ(v.ord, 3);
    EXPECT_EQ(v.abs_value, Rational(1, 8));

    RatFunc x(poly(2, {0, 1}), poly(2, {1, 1}));
    auto w = local_value(x, Place<FpPoly>::infinite());
    EXPECT_EQ(*w.q_exponent, 0);
    EXPECT_EQ(w.abs_value, 1);

    EXPECT_THROW(local_value(q(0), Place<Integer>::infinite()), ParameterError);
}

TEST(Heights, ProductFormulaExamples) {
    EXPECT_TRUE(product_formula_check(q(6, 5)));
    EXPECT_TRUE(product_formula_check(RatFunc(poly(2, {0, 1}), poly(2, {1, 1}))));
    EXPECT_THROW(product_formula_check(q(0)), ParameterError);
}

TEST(Heights, ProductFormulaRandom) {
    std::mt19937_64 rng(1);
    for (int i = 0; i < 200; ++i) EXPECT_TRUE(product_formula_check(rsieve::testing::random_nonzero_rat(rng, 1'000'000'000)));
    for (std::uint32_t p : {2u, 3u, 5u})
        for (int i = 0; i < 60; ++i) EXPECT_TRUE(product_formula_check(rsieve::testing::random_nonzero_ratfunc(rng, p, 10)));
}

TEST(Heights, AffineHeightExamples) {
    EXPECT_EQ(height_affine(q(6, 5)).value, 6);
    EXPECT_EQ(height_affine(q(0)).value, 1);
    auto h = height_affine(RatFunc(poly(2, {1, 0, 1}), FieldDescriptor::rational_functions(2)));
    EXPECT_EQ(h.value, 4);
    EXPECT_EQ(*h.q_exponent, 2);
}

TEST(Heights, ProjectiveHeightExamples) {
    EXPECT_EQ(height_projective(ProjPoint<Integer>::from_ring({5, 6, 10}), kQ).value, 10);
    EXPECT_EQ(height_projective(ProjPoint<Integer>::from_ring({2, 4}), kQ).value, 2);
    const auto f3 = FieldDescriptor::rational_functions(3);
    auto h = height_projective(ProjPoint<FpPoly>::from_ring({poly(3, {1}), poly(3, {0, 0, 1})}), f3);
    EXPECT_EQ(*h.q_exponent, 2);
}

TEST(Heights, OneAffixExamples) {
    EXPECT_EQ(height_one_affix(std::vector<Rat>{q(6, 5), q(2)}, kQ).value, 10);
    EXPECT_EQ(height_one_affix(std::vector<Rat>{q(0), q(0)}, kQ).value, 1);
    const auto f2 = FieldDescriptor::rational_functions(2);
    auto h = height_one_affix(std::vector<RatFunc>{RatFunc(poly(2, {0, 1}), f2), RatFunc(poly(2, {1, 1}), f2)}, f2);
    EXPECT_EQ(*h.q_exponent, 1);
}

TEST(Heights, NormExamples) {
    EXPECT_EQ(norm_of_ring_element(Integer(-7)), 7);
    EXPECT_EQ(norm_of_ring_element(poly(5, {2, 0, 0, 1})), 125);
    EXPECT_EQ(norm_of_ring_element(Integer(1)), 1);
    EXPECT_THROW(norm_of_ring_element(Integer(0)), ParameterError);
}

TEST(Heights, InverseInvariance) {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 300; ++i) {
        Rat x = rsieve::testing::random_nonzero_rat(rng, 1'000'000);
        EXPECT_EQ(height_affine(x), height_affine(x.inverse()));
        RatFunc f = rsieve::testing::random_nonzero_ratfunc(rng, 3, 8);
        EXPECT_EQ(height_affine(f), height_affine(f.inverse()));
    }
}

TEST(Heights, SumBound) {
    std::mt19937_64 rng(4);
    for (int i = 0; i < 300; ++i) {
        Rat x = rsieve::testing::random_rat(rng, 100000), y = rsieve::testing::random_rat(rng, 100000);
        EXPECT_LE(height_affine(x + y).value, 2 * height_affine(x).value * height_affine(y).value);
    }
}

TEST(Heights, ScalingInvariance) {
    std::mt19937_64 rng(8);
    for (int i = 0; i < 200; ++i) {
        std::vector<Rat> v{rsieve::testing::random_nonzero_rat(rng, 500), rsieve::testing::random_rat(rng, 500), rsieve::testing::random_rat(rng, 500)};
        Rat lambda = rsieve::testing::random_nonzero_rat(rng, 500);
        std::vector<Rat> w;
        for (auto& x : v) w.push_back(lambda * x);
        EXPECT_EQ(height_projective(v, kQ), height_projective(w, kQ));
    }
}

}  // namespace
