#include "bubble/exact_algebra.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace bubble;

namespace {

Poly P(std::vector<long> c, char v = 't') {
    std::vector<Rational> r;
    for (long x : c) r.push_back(rat(x));
    return Poly(r, v);
}

Rational random_rational(std::mt19937_64& g) {
    std::uniform_int_distribution<long> num(-1000, 1000), den(1, 97);
    return rat(num(g), den(g));
}

Poly random_poly(std::mt19937_64& g, int deg) {
    std::vector<Rational> c;
    for (int i = 0; i <= deg; ++i) c.push_back(random_rational(g));
    return Poly(c);
}

}  // namespace

TEST(Rational, CanonicalForm) {
    const Rational x = rat(6, -4);
    EXPECT_EQ(x.get_num(), -3);
    EXPECT_EQ(x.get_den(), 2);
    EXPECT_EQ(to_string(x), "-3/2");
    EXPECT_EQ(to_string(rat(4, 2)), "2/1");  // always p/q
    EXPECT_EQ(rat(1, 3) + rat(1, 6), rat(1, 2));
    EXPECT_THROW(rat(1, 0), std::domain_error);
}

TEST(Rational, Parsing) {
    EXPECT_EQ(parse_rational("55/42"), rat(55, 42));
    EXPECT_EQ(parse_rational("-7"), rat(-7));
    EXPECT_EQ(parse_rational("0.94"), rat(47, 50));
    EXPECT_EQ(parse_rational("10/4"), rat(5, 2));
    EXPECT_THROW(parse_rational(""), std::invalid_argument);
    EXPECT_THROW(parse_rational("1/0"), std::invalid_argument);
    EXPECT_THROW(parse_rational("abc"), std::invalid_argument);
}

TEST(Rational, FieldLawsOnRandomInputs) {
    std::mt19937_64 g(2024);
    for (int i = 0; i < 200; ++i) {
        const Rational a = random_rational(g), b = random_rational(g), c = random_rational(g);
        EXPECT_EQ(Rational((a + b) + c), Rational(a + (b + c)));
        EXPECT_EQ(Rational(a * (b + c)), Rational(a * b + a * c));
    }
}

TEST(Poly, ArithmeticExamples) {
    EXPECT_EQ(P({0, 3, 1}).derive(), P({3, 2}));
    EXPECT_EQ(P({-1, 0, 1}).eval(rat(1)), rat(0));
    EXPECT_EQ(P({1, 1}) * P({-1, 1}), P({-1, 0, 1}));
    EXPECT_TRUE((P({1, 2}) - P({1, 2})).is_zero());
    EXPECT_EQ((P({1, 2}) - P({1, 2})).degree(), -1);
    EXPECT_EQ(P({1, 2, 0, 0}).degree(), 1);
}

TEST(Poly, VariableMismatchRejected) {
    EXPECT_THROW(P({1, 1}, 't') + P({1}, 's'), std::invalid_argument);
    EXPECT_THROW(P({1, 1}, 't') * P({1}, 's'), std::invalid_argument);
}

TEST(Poly, LeibnizRuleOnRandomInputs) {
    std::mt19937_64 g(7);
    for (int i = 0; i < 30; ++i) {
        const Poly p = random_poly(g, 4), q = random_poly(g, 5);
        EXPECT_EQ((p * q).derive(), p.derive() * q + p * q.derive());
        const Rational x = random_rational(g);
        EXPECT_EQ((p * q).eval(x), Rational(p.eval(x) * q.eval(x)));
    }
}

TEST(QuadExt, FieldEvaluation) {
    const QuadExt sqrt2(0, 1, 2);
    EXPECT_EQ(quad_field_eval(P({-2, 0, 1}, 'a'), sqrt2).sign(), 0);
    const QuadExt one(1, 0, 5);
    const QuadExt v = quad_field_eval(P({0, 1}, 'a'), one);
    EXPECT_EQ(v.base(), 1);
    EXPECT_EQ(v.coeff_sqrt(), 0);
}

TEST(QuadExt, ExactSigns) {
    // 1414/1000 < sqrt 2 < 1415/1000.
    EXPECT_EQ(QuadExt(rat(-1414, 1000), 1, 2).sign(), 1);
    EXPECT_EQ(QuadExt(rat(-1415, 1000), 1, 2).sign(), -1);
    EXPECT_EQ(QuadExt(rat(3), -1, 9).sign(), 0);
    EXPECT_EQ(QuadExt(0, 0, 2).sign(), 0);
    EXPECT_THROW(QuadExt(0, 1, -1), std::domain_error);
    EXPECT_THROW(QuadExt(0, 1, 2) + QuadExt(0, 1, 3), std::invalid_argument);
}

TEST(QuadExt, RingOperations) {
    const QuadExt a(1, 2, 3), b(rat(-1, 2), 1, 3);
    const QuadExt p = a * b;  // (1 + 2r)(-1/2 + r) = -1/2 + 6 + (1 - 1) r
    EXPECT_EQ(p.base(), rat(11, 2));
    EXPECT_EQ(p.coeff_sqrt(), 0);
    EXPECT_NEAR((a + b).approx(), 0.5 + 3 * std::sqrt(3.0), 1e-14);
}

TEST(RootIsolate, KnownRoot) {
    const Interval iv =
        root_isolate([](const Rational& x) { return sign(Rational(x * x - 2)); }, rat(1), rat(2), rat(1, 1024));
    EXPECT_FALSE(iv.exact_zero);
    EXPECT_LE(Rational(iv.hi - iv.lo), rat(1, 1024));
    EXPECT_LT(iv.lo * iv.lo, 2);
    EXPECT_GT(iv.hi * iv.hi, 2);
    // Dyadic probes.
    EXPECT_EQ(iv.lo.get_den() & (iv.lo.get_den() - 1), 0);
}

TEST(RootIsolate, ExactZeroProbe) {
    const Interval iv = root_isolate([](const Rational& x) { return sign(x); }, rat(-1), rat(1), rat(1, 8));
    EXPECT_TRUE(iv.exact_zero);
    EXPECT_EQ(iv.lo, 0);
    EXPECT_EQ(iv.hi, 0);
}

TEST(RootIsolate, Errors) {
    auto f = [](const Rational& x) { return sign(Rational(x * x + 1)); };
    EXPECT_THROW(root_isolate(f, rat(0), rat(1), rat(1, 8)), std::domain_error);
    EXPECT_THROW(root_isolate([](const Rational& x) { return sign(x); }, rat(-1), rat(2), rat(0)), std::invalid_argument);
}
