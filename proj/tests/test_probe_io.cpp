#include <gtest/gtest.h>

#include <random>
#include <set>
#include <sstream>

#include "rsieve/io.hpp"
#include "rsieve/probe.hpp"
#include "rsieve/random.hpp"
#include "test_support.hpp"

using namespace rsieve;
using rsieve::testing::poly;

namespace {

const FieldDescriptor kQ = FieldDescriptor::rationals();

io::LoadedPointSet load(const std::string& text) {
    std::istringstream in(text);
    return io::read_pointset(in);
}

template <class R>
const PointSet<R>& as(const io::LoadedPointSet& l) {
    return std::get<PointSet<R>>(l.set);
}

std::string error_of(const std::string& text) {
    try {
        load(text);
    } catch (const InputError& e) {
        return e.what();
    }
    return "";
}

// Number of pairs (x mod p, 2^x mod p) for 0 <= x < count, by direct listing.
std::size_t exp_pairs(std::uint64_t p, std::uint64_t count) {
    std::set<std::pair<std::uint64_t, std::uint64_t>> s;
    std::uint64_t v = 1 % p;
    for (std::uint64_t x = 0; x < count; ++x, v = v * 2 % p) s.insert({x % p, v});
    return s.size();
}

// Direct count of distinct reductions of (1 : a : b) modulo p.
std::size_t affine_classes(const PointSet<Integer>& X, long p) {
    std::set<std::pair<long, long>> s;
    for (const auto& pt : X.points()) {
        const auto& c = pt.coords();
        EXPECT_EQ(c[0], 1);
        long a = mpz_fdiv_ui(c[1].get_mpz_t(), p), b = mpz_fdiv_ui(c[2].get_mpz_t(), p);
        s.insert({a, b});
    }
    return s.size();
}

PointSet<Integer> parabola(long bound) {
    PointSet<Integer> X(kQ, 2, HeightValue::of(Integer(bound * bound)));
    for (long a = -bound; a <= bound; ++a) X.insert(ProjPoint<Integer>::from_ring({1, a, a * a}));
    return X;
}

PointSet<Integer> grid(long bound) {
    PointSet<Integer> X(kQ, 2, HeightValue::of(Integer(bound)));
    for (long a = -bound; a <= bound; ++a)
        for (long b = -bound; b <= bound; ++b) X.insert(ProjPoint<Integer>::from_ring({1, a, b}));
    return X;
}

}  // namespace

TEST(ExpGraph, SampleSizes) {
    EXPECT_EQ(exp_graph_sample(100, 2).size(), 7u);
    EXPECT_EQ(exp_graph_sample(2, 2).size(), 2u);
    EXPECT_EQ(exp_graph_sample(1, 2).size(), 1u);
    EXPECT_EQ(exp_graph_sample(Integer(1000000), 2).size(), 20u);
    auto X = exp_graph_sample(100, 2);
    EXPECT_EQ(X.points()[6].coords(), (std::vector<Integer>{1, 6, 64}));
    EXPECT_THROW(exp_graph_sample(100, 1), ParameterError);
}

TEST(ExpGraph, MultiplicativeOrders) {
    auto X = exp_graph_sample(Integer(1000000), 2);
    auto prof = multiplicative_order_profile(X, {2, 3, 5, 7, 11, 13}, 2);
    ASSERT_EQ(prof.size(), 6u);
    EXPECT_TRUE(prof[0].skipped);
    const std::vector<std::uint64_t> u = {2, 4, 3, 10, 12};
    for (std::size_t i = 1; i < prof.size(); ++i) {
        const auto& e = prof[i];
        EXPECT_FALSE(e.skipped);
        EXPECT_EQ(e.order, u[i - 1]) << e.prime;
        EXPECT_EQ(e.predicted, e.prime * e.order);
        EXPECT_EQ(e.class_count, exp_pairs(e.prime, X.size())) << e.prime;
        EXPECT_EQ(e.class_count, e.predicted_truncated) << e.prime;
    }
    EXPECT_THROW(multiplicative_order_profile(X, {9}, 2), ParameterError);
}

TEST(Probe, ParabolaPassesAtKappaOne) {
    auto X = parabola(100);
    ProbeOptions opt;
    auto rep = conjecture_probe(X, opt);
    ASSERT_FALSE(rep.entries.empty());
    EXPECT_TRUE(rep.pass);
    for (const auto& e : rep.entries) {
        const long p = e.prime.generator.get_si();
        EXPECT_EQ(e.class_count, affine_classes(X, p));
        EXPECT_LE(e.class_count, static_cast<std::size_t>(p));
    }
}

TEST(Probe, DenseGridViolatesEverywhere) {
    auto X = grid(30);
    ProbeOptions opt;
    auto rep = conjecture_probe(X, opt);
    ASSERT_FALSE(rep.entries.empty());
    EXPECT_FALSE(rep.pass);
    EXPECT_EQ(rep.violations.size(), rep.entries.size());
    for (const auto& e : rep.entries) {
        const long p = e.prime.generator.get_si();
        const std::size_t direct = affine_classes(X, p);
        EXPECT_EQ(e.class_count, direct);
        if (p <= 61) EXPECT_EQ(direct, static_cast<std::size_t>(p * p));
        EXPECT_GT(direct, static_cast<std::size_t>(p));
    }
}

TEST(Probe, EmptySetPassesAndKappaIsChecked) {
    PointSet<Integer> X(kQ, 2, HeightValue::of(1000));
    ProbeOptions opt;
    EXPECT_TRUE(conjecture_probe(X, opt).pass);
    opt.kappa = 2;
    EXPECT_THROW(conjecture_probe(X, opt), ParameterError);
    opt.kappa = Rational(5, 2);
    EXPECT_THROW(conjecture_probe(X, opt), ParameterError);
}

TEST(Probe, WindowEdgesAndDefaultCap) {
    auto X = parabola(100);  // N = 10^4
    ProbeOptions opt;
    auto rep = conjecture_probe(X, opt);
    const long double lower = std::pow(std::log(10000.0L), 2.0L);
    EXPECT_NEAR(static_cast<double>(rep.lower), static_cast<double>(lower), 1e-9);
    EXPECT_NEAR(static_cast<double>(rep.prime_cap), static_cast<double>(10 * lower), 1e-8);
    for (const auto& e : rep.entries) {
        EXPECT_GE(e.prime.norm.get_d(), static_cast<double>(lower));
        EXPECT_LE(e.prime.norm.get_d(), static_cast<double>(10 * lower));
    }
    auto all = primes_between(static_cast<std::uint64_t>(std::ceil(lower)), static_cast<std::uint64_t>(10 * lower));
    EXPECT_EQ(rep.entries.size(), all.size());
}

TEST(Probe, MonotoneInAlpha) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        PointSet<Integer> X(kQ, 2, HeightValue::of(500));
        for (int i = 0; i < 300; ++i) {
            long a = static_cast<long>(rng() % 1001) - 500, b = static_cast<long>(rng() % 1001) - 500;
            X.insert(ProjPoint<Integer>::from_ring({1, a, trial % 2 ? b : (a * a) % 500}));
        }
        const std::vector<Rational> alphas = {Rational(1, 2), 1, 8, 32, 64, 128};
        std::vector<std::set<Integer>> viol;
        for (const auto& alpha : alphas) {
            ProbeOptions opt;
            opt.alpha = alpha;
            opt.kappa = Rational(1, 2);
            std::set<Integer> v;
            for (const auto& e : conjecture_probe(X, opt).violations) v.insert(e.prime.generator);
            viol.push_back(v);
        }
        for (std::size_t i = 1; i < viol.size(); ++i)
            EXPECT_TRUE(std::includes(viol[i - 1].begin(), viol[i - 1].end(), viol[i].begin(), viol[i].end()));
    }
}

TEST(Probe, ExactBoundAtEquality) {
    // 6 classes against 1 * 36^(1/2) = 6: not a violation; against 35^(1/2) it is.
    PointSet<Integer> X(kQ, 1, HeightValue::of(10));
    for (long a = 0; a < 6; ++a) X.insert(ProjPoint<Integer>::from_ring({1, a}));
    EXPECT_FALSE(exceeds_power_bound(6, 36, Rational(1, 2)));
    EXPECT_TRUE(exceeds_power_bound(6, 35, Rational(1, 2)));
    ProbeOptions opt;
    opt.kappa = Rational(1, 2);
    opt.alpha = Rational(6, 7);  // 6 > (6/7) sqrt(37)? 6 > 5.21: yes
    auto rep = conjecture_probe(X, opt, std::vector<Prime<Integer>>{{37, 37}});
    ASSERT_EQ(rep.entries.size(), 1u);
    EXPECT_EQ(rep.entries[0].class_count, 6u);
    EXPECT_TRUE(rep.entries[0].violation);
    opt.alpha = 1;  // 6 <= sqrt(37)
    EXPECT_TRUE(conjecture_probe(X, opt, std::vector<Prime<Integer>>{{37, 37}}).pass);
}

TEST(Probe, PinnedExpGraphViolations) {
    auto X = exp_graph_sample(Integer(1000000), 2);
    ProbeOptions opt;
    opt.kappa = Rational(11, 10);
    std::vector<Prime<Integer>> ps;
    for (long p : {3, 5, 7, 11, 13}) ps.push_back({p, p});
    auto rep = conjecture_probe(X, opt, ps);
    EXPECT_EQ(rep.violations.size(), 5u);
    const std::vector<std::size_t> counts = {6, 20, 20, 20, 20};
    for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(rep.entries[i].class_count, counts[i]);
}

TEST(Probe, FunctionFieldRange) {
    const auto fd = FieldDescriptor::rational_functions(3);
    PointSet<FpPoly> X(fd, 2, HeightValue::q_power(3, 6));
    for (std::uint64_t v = 0; v < 81; ++v) {
        FpPoly f = FpPoly::decode(3, v);
        X.insert(ProjPoint<FpPoly>::from_ring({poly(3, {1}), f, f * f}));
    }
    ProbeOptions opt;
    auto rep = conjecture_probe(X, opt);
    ASSERT_FALSE(rep.entries.empty());
    EXPECT_TRUE(rep.pass);
    for (const auto& e : rep.entries) EXPECT_LE(Integer(static_cast<unsigned long>(e.class_count)), e.prime.norm);
}

// ---------------------------------------------------------------------------

TEST(PointSetIO, ParsesHeaderExample) {
    auto l = load("{\"field\":\"Q\",\"n\":2,\"N\":\"1000\"}\n[\"1\",\"7\",\"49\"]\n");
    const auto& X = as<Integer>(l);
    ASSERT_EQ(X.size(), 1u);
    EXPECT_EQ(X.points()[0].coords(), (std::vector<Integer>{1, 7, 49}));
    EXPECT_EQ(X.bound().value, 1000);
}

TEST(PointSetIO, RejectsHeightViolationWithLineNumber) {
    auto msg = error_of("{\"field\":\"Q\",\"n\":2,\"N\":\"1000\"}\n[\"1\",\"7\",\"49\"]\n\n[\"1\",\"2000\",\"3\"]\n");
    EXPECT_NE(msg.find("line 4"), std::string::npos) << msg;
    EXPECT_NE(msg.find("2000"), std::string::npos) << msg;
}

TEST(PointSetIO, MalformedRecords) {
    const std::string h = "{\"field\":\"Q\",\"n\":2,\"N\":\"1000\"}\n";
    EXPECT_NE(error_of(h + "[\"1\",\"2\"]\n").find("line 2"), std::string::npos);
    EXPECT_NE(error_of(h + "[\"1\",\"2\",\"3\"]\n[1,2,\n").find("line 3"), std::string::npos);
    EXPECT_NE(error_of(h + "[\"0\",\"0\",\"0\"]\n").find("zero vector"), std::string::npos);
    EXPECT_NE(error_of(h + "[\"1/0\",\"0\",\"1\"]\n").find("line 2"), std::string::npos);
    EXPECT_NE(error_of(h + "[\"x\",\"0\",\"1\"]\n").find("line 2"), std::string::npos);
    EXPECT_NE(error_of("{\"field\":\"Q\",\"n\":2}\n").find("line 1"), std::string::npos);
    EXPECT_NE(error_of("{\"field\":\"Q\",\"n\":2,\"N\":\"10\",\"extra\":1}\n").find("unknown header key"), std::string::npos);
    EXPECT_NE(error_of("{\"field\":\"R\",\"n\":2,\"N\":\"10\"}\n").find("unknown field"), std::string::npos);
    EXPECT_NE(error_of("").find("missing header"), std::string::npos);
}

TEST(PointSetIO, DeduplicatesWithCount) {
    auto l = load("{\"field\":\"Q\",\"n\":2,\"N\":\"1000\"}\n[\"1\",\"7\",\"49\"]\n[\"-2\",\"-14\",\"-98\"]\n[\"1/7\",\"1\",\"7\"]\n[1,8,64]\n");
    EXPECT_EQ(as<Integer>(l).size(), 2u);
    EXPECT_EQ(l.records, 4u);
    EXPECT_EQ(l.duplicates, 2u);
}

TEST(PointSetIO, AffineEmbedding) {
    auto l = load("{\"field\":\"Q\",\"n\":2,\"N\":\"10\",\"affine\":true}\n[\"1/2\",\"3\"]\n");
    EXPECT_EQ(as<Integer>(l).points()[0].coords(), (std::vector<Integer>{2, 1, 6}));
}

TEST(PointSetIO, FunctionFieldCoordinates) {
    const std::string h = "{\"field\":\"F3(T)\",\"n\":2,\"N\":\"3^4\"}\n";
    auto l = load(h + "[\"1\",\"T^2 + 2*T + 1\",\"-T\"]\n[[1],[1,2,1],[0,2]]\n[{\"num\":\"T\",\"den\":\"T+1\"},\"1\",\"(T)/(T + 1)\"]\n");
    const auto& X = as<FpPoly>(l);
    EXPECT_EQ(X.bound().q_exponent, 4);
    EXPECT_EQ(X.size(), 2u);
    EXPECT_EQ(l.duplicates, 1u);
    EXPECT_EQ(X.points()[0].coords(), (std::vector<FpPoly>{poly(3, {1}), poly(3, {1, 2, 1}), poly(3, {0, 2})}));
    // (T/(T+1) : 1 : T/(T+1)) scales to (T : T+1 : T)
    EXPECT_EQ(X.points()[1].coords(), (std::vector<FpPoly>{poly(3, {0, 1}), poly(3, {1, 1}), poly(3, {0, 1})}));
    EXPECT_NE(error_of("{\"field\":\"F2(T)\",\"n\":1,\"N\":\"1000\"}\n").find("power of q"), std::string::npos);
}

TEST(PointSetIO, RoundTripRationals) {
    std::mt19937_64 rng(11);
    PointSet<Integer> X(kQ, 3, HeightValue::of(Integer("1000000000000")));
    for (int i = 0; i < 300; ++i) {
        std::vector<Integer> c;
        for (int k = 0; k < 4; ++k) c.push_back(rsieve::testing::random_integer(rng, 1000000000000LL));
        if (std::all_of(c.begin(), c.end(), [](const Integer& x) { return x == 0; })) continue;
        X.insert(ProjPoint<Integer>::from_ring(c));
    }
    std::ostringstream os;
    io::write_pointset(os, X);
    auto l = load(os.str());
    const auto& Y = as<Integer>(l);
    EXPECT_EQ(Y.points(), X.points());
    EXPECT_EQ(Y.bound(), X.bound());
    EXPECT_EQ(l.duplicates, 0u);
}

TEST(PointSetIO, RoundTripFunctionField) {
    std::mt19937_64 rng(12);
    const auto fd = FieldDescriptor::rational_functions(5);
    PointSet<FpPoly> X(fd, 2, HeightValue::q_power(5, 9));
    for (int i = 0; i < 200; ++i) {
        std::vector<FpPoly> c;
        for (int k = 0; k < 3; ++k) c.push_back(rsieve::testing::random_poly(rng, 5, 9));
        if (std::all_of(c.begin(), c.end(), [](const FpPoly& x) { return x.is_zero(); })) continue;
        X.insert(ProjPoint<FpPoly>::from_ring(c));
    }
    std::ostringstream os;
    io::write_pointset(os, X);
    auto l = load(os.str());
    EXPECT_EQ(as<FpPoly>(l).points(), X.points());
    EXPECT_EQ(as<FpPoly>(l).bound().q_exponent, 9);
}

TEST(PolynomialParse, Forms) {
    EXPECT_EQ(io::parse_fp_poly("T^3 + T + 1", 2), poly(2, {1, 1, 0, 1}));
    EXPECT_EQ(io::parse_fp_poly("-1", 5), poly(5, {4}));
    EXPECT_EQ(io::parse_fp_poly("3*T^2 - 2T", 7), poly(7, {0, 5, 3}));
    EXPECT_EQ(io::parse_fp_poly("T + T", 2), poly(2, {}));
    EXPECT_THROW(io::parse_fp_poly("T^", 3), InputError);
    EXPECT_THROW(io::parse_fp_poly("T*T", 3), InputError);
    EXPECT_THROW(io::parse_fp_poly("", 3), InputError);
    const FpPoly f = poly(7, {3, 0, 6, 1});
    EXPECT_EQ(io::parse_fp_poly(f.to_string(), 7), f);
}

// ---------------------------------------------------------------------------

TEST(CertificateIO, RoundTripAndVerify) {
    auto X = parabola(60);
    FitParams p;
    p.seed = 3;
    auto cert = fit_polynomial(X, p);
    ASSERT_EQ(cert.status, FitStatus::Success);
    const auto j = io::certificate_to_json(cert);
    const std::string text = io::dump(j);
    EXPECT_EQ(text, io::dump(io::certificate_to_json(cert)));
    auto back = io::certificate_from_json<Integer>(io::json::parse(text));
    ASSERT_EQ(back.factors.size(), cert.factors.size());
    for (std::size_t i = 0; i < cert.factors.size(); ++i) EXPECT_EQ(back.factors[i].terms, cert.factors[i].terms);
    EXPECT_EQ(back.params.seed, 3u);
    EXPECT_EQ(back.params.kappa, p.kappa);
    EXPECT_EQ(back.total_degree, cert.total_degree);
    EXPECT_EQ(verify_certificate(X, back).covered, X.size());
}

TEST(CertificateIO, TamperingIsDetected) {
    auto X = parabola(60);
    FitParams p;
    auto cert = fit_polynomial(X, p);
    auto j = io::certificate_to_json(cert);
    auto& coeffs = j["factors"][0]["coefficients"];
    const std::string key = coeffs.begin().key();
    coeffs[key] = "12345";
    auto bad = io::certificate_from_json<Integer>(j);
    EXPECT_THROW(verify_certificate(X, bad), IntegrityError);

    auto j2 = io::certificate_to_json(cert);
    j2["factors"][0]["coefficients"]["0,0,0"] = "1";
    EXPECT_THROW(io::certificate_from_json<Integer>(j2), IntegrityError);

    auto j3 = io::certificate_to_json(cert);
    j3["total_degree"] = 1;
    EXPECT_THROW(io::certificate_from_json<Integer>(j3), IntegrityError);

    auto j4 = io::certificate_to_json(cert);
    j4.erase("params");
    EXPECT_THROW(io::certificate_from_json<Integer>(j4), InputError);
}

TEST(LinearSystemIO, ParseAndSolve) {
    auto j = io::json::parse(R"({"field":"Q","rows":[["1","2","3","4","-5"],[4,5,6,"7","100000000000000000000"]]})");
    auto A = io::system_from_json<Integer>(j, kQ);
    EXPECT_EQ(A.s, 2u);
    EXPECT_EQ(A.t, 5u);
    EXPECT_EQ(A.C.value, Integer("100000000000000000000"));
    auto sol = small_kernel(A);
    EXPECT_TRUE(is_kernel_vector(A.entries, sol.c));
    auto out = io::solution_to_json(sol, A);
    ASSERT_EQ(out["solution"].size(), 5u);
    for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(out["solution"][i].get<std::string>(), sol.c[i].get_str());
    EXPECT_THROW(io::system_from_json<Integer>(io::json::parse(R"({"field":"Q","rows":[[1.5,2,3]]})"), kQ), InputError);
    EXPECT_THROW(io::system_from_json<Integer>(io::json::parse(R"({"field":"Q","rows":[["1"],["1","2"]]})"), kQ), InputError);
    EXPECT_THROW(io::system_from_json<Integer>(io::json::parse(R"({"field":"Q","rows":[],"extra":1})"), kQ), InputError);
}

TEST(Sampling, DistinctSortedIndices) {
    Rng rng(5);
    auto idx = sample_indices(rng, 2001, 100);
    ASSERT_EQ(idx.size(), 100u);
    EXPECT_TRUE(std::is_sorted(idx.begin(), idx.end()));
    EXPECT_EQ(std::set<std::size_t>(idx.begin(), idx.end()).size(), 100u);
    EXPECT_LT(idx.back(), 2001u);
    Rng a(9), b(9);
    EXPECT_EQ(sample_indices(a, 500, 50), sample_indices(b, 500, 50));
    EXPECT_EQ(sample_indices(a, 5, 50).size(), 5u);
}
