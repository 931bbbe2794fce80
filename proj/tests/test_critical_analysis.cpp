#include "bubble/critical_analysis.hpp"

#include <boost/multiprecision/cpp_dec_float.hpp>
#include <gtest/gtest.h>

using namespace bubble;
using Dec50 = boost::multiprecision::cpp_dec_float_50;

namespace {

Dec50 dec(const Rational& x) { return Dec50(x.get_num().get_str()) / Dec50(x.get_den().get_str()); }

Rational p_at_one(FEngine& e, int d0, const Rational& a0, int derivs) {
    Poly P = assemble_P(e, f_family(d0, a0)).P;
    for (int k = 0; k < derivs; ++k) P = P.derive();
    return P.eval(1);
}

}  // namespace

TEST(ExtractQ, InterpolationMatchesDirectAssembly) {
    FEngine e(52, rat(1, 2));
    const QuadraticQ q = extract_Q(e, 1);
    for (const Rational& a0 : {rat(3), rat(-5, 2), rat(99, 50)}) EXPECT_EQ(q.eval(a0), p_at_one(e, 1, a0, 1));
    EXPECT_LT(q.b2, 0);
    EXPECT_EQ(q.disc(), disc_Q(52, rat(1, 2), 1));
}

TEST(ExtractQ, QuarticFamilyPinned) {
    const QuadraticQ q = extract_Q(24, rat(9, 10), 4);
    EXPECT_EQ(q.b2, rat(-103823723, 15643680000));
    EXPECT_EQ(q.b1, parse_rational("8065047044397206691271/61513837154827200000"));
    EXPECT_EQ(q.b0, parse_rational("-329401779987268592776958095639905267090059/508822224038001877259856600000000000"));
}

TEST(Discriminant, SignsAroundTheTransition) {
    EXPECT_GT(disc_Q(24, rat(9, 10), 4), 0);
    EXPECT_LT(disc_Q(24, rat(95, 100), 4), 0);
    EXPECT_LT(disc_Q(23, rat(1, 2), 4), 0);
    EXPECT_GT(disc_Q(52, rat(1, 2), 1), 0);
}

TEST(SelectA0, ExceedsNinetyNineFiftieths) {
    const QuadExt a = select_a0(52, rat(1, 2), 1);
    EXPECT_EQ((a - QuadExt(rat(99, 50), 0, a.radicand())).sign(), 1);
    // The argument used for it: Q(99/50) > 0 and b2 < 0.
    for (const Rational& g : {rat(1, 10), rat(1, 2), rat(9, 10)}) {
        const QuadraticQ q = extract_Q(52, g, 1);
        EXPECT_GT(q.eval(rat(99, 50)), 0) << to_string(g);
        EXPECT_LT(q.b2, 0);
    }
}

TEST(SelectA0, NoRealRootRaises) { EXPECT_THROW(select_a0(23, rat(1, 2), 4), NoCriticalCoefficient); }

TEST(SelectA0, RootOfQExactlyAndInFiftyDigits) {
    const QuadraticQ q = extract_Q(30, rat(1, 2), 4);
    const QuadExt a = select_a0(q);
    const Poly qp(std::vector<Rational>{q.b0, q.b1, q.b2}, 'a');
    EXPECT_EQ(quad_field_eval(qp, a).sign(), 0);

    // Independent check: the quadratic formula in 50-digit decimal arithmetic.
    const Dec50 b0 = dec(q.b0), b1 = dec(q.b1), b2 = dec(q.b2);
    const Dec50 root = (-b1 - sqrt(b1 * b1 - 4 * b0 * b2)) / (2 * b2);
    const Dec50 resid = b0 + root * (b1 + root * b2);
    const Dec50 scale = abs(b0) + abs(root * b1) + abs(root * root * b2);
    EXPECT_LT(static_cast<double>(abs(resid) / scale), 1e-45);
    EXPECT_NEAR(static_cast<double>(root), a.approx(), 1e-12 * std::abs(a.approx()));
}

TEST(SecondDerivative, GapIsIncreasingAffineInA0) {
    FEngine e(52, rat(1, 2));
    auto gap = [&](const Rational& a0) { return Rational(p_at_one(e, 1, a0, 2) - p_at_one(e, 1, a0, 1)); };
    const Rational g0 = gap(0), g1 = gap(1), g2 = gap(2), g5 = gap(5);
    EXPECT_EQ(Rational(g2 - 2 * g1 + g0), 0);
    EXPECT_EQ(Rational(g5 - g0), Rational(5 * (g1 - g0)));
    EXPECT_GT(g1, g0);
    EXPECT_GT(gap(rat(99, 50)), 0);
}

TEST(SecondDerivative, HessianValuesAffineInA0) {
    FEngine e(52, rat(1, 2));
    auto at = [&](int a0) {
        const auto h = assemble_P_tilde(e, f_family(1, rat(a0)));
        return std::pair{h.p_tilde_1.eval(1), h.p_tilde_2.eval(1)};
    };
    const auto [u0, v0] = at(0);
    const auto [u1, v1] = at(1);
    const auto [u3, v3] = at(3);
    EXPECT_EQ(Rational(u3 - u0), Rational(3 * (u1 - u0)));
    EXPECT_EQ(Rational(v3 - v0), Rational(3 * (v1 - v0)));
    EXPECT_GT(u1, u0);
    EXPECT_GT(v1, v0);
}

TEST(CheckMinimizer, HoldsAtFiftyTwoAndThirty) {
    for (int n : {52, 30}) {
        const MinimizerReport r = check_minimizer(n, rat(1, 2));
        EXPECT_EQ(r.d0, n >= 52 ? 1 : 4);
        EXPECT_TRUE(r.c1_ok) << n;
        EXPECT_TRUE(r.c2_ok) << n;
        EXPECT_TRUE(r.c3_ok) << n;
        EXPECT_TRUE(r.all());
        EXPECT_EQ(r.p1.sign(), 0);
        EXPECT_EQ(r.p2.sign(), 1);
        EXPECT_EQ(r.pt1.sign(), 1);
        EXPECT_EQ(r.pt2.sign(), 1);
    }
}

TEST(CheckMinimizer, UnavailableAboveTransitionAtTwentyFour) {
    bool failed = false;
    try {
        failed = !check_minimizer(24, rat(95, 100)).all();
    } catch (const NoCriticalCoefficient&) {
        failed = true;
    }
    EXPECT_TRUE(failed);
}

TEST(GammaStar, CoarseBracket) {
    const Interval iv = find_gamma_star(rat(1, 4));
    EXPECT_LE(Rational(iv.hi - iv.lo), rat(1, 4));
    EXPECT_GE(iv.lo, rat(1, 2));
    EXPECT_LE(iv.hi, rat(99, 100));
    EXPECT_EQ(sign(disc_Q(24, iv.lo, 4)) * sign(disc_Q(24, iv.hi, 4)), -1);
    EXPECT_LE(iv.lo, rat(940197, 1000000));
    EXPECT_GE(iv.hi, rat(940197, 1000000));
    EXPECT_THROW(find_gamma_star(rat(0)), std::invalid_argument);
}

TEST(NOfGamma, Values) {
    EXPECT_EQ(n_of_gamma(rat(1, 2)), 24);
    EXPECT_EQ(n_of_gamma(rat(95, 100)), 25);
}

TEST(Sweep, DeterministicRowsAndCsv) {
    SweepOptions opt;
    opt.n_min = 23;
    opt.n_max = 24;
    opt.grid_count = 9;
    const auto a = sweep(opt);
    opt.threads = 2;
    const auto b = sweep(opt);
    ASSERT_EQ(a.size(), 18u);
    const std::string csv = sweep_csv(a);
    EXPECT_EQ(csv, sweep_csv(b));
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "n,gamma,d0,disc_sign,c1,c2,c3");
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].n, i < 9 ? 23 : 24);
        EXPECT_EQ(a[i].gamma, rat(static_cast<long>(i % 9 + 1), 10));
    }
    for (std::size_t i = 0; i < 9; ++i) EXPECT_EQ(a[i].disc_sign, -1);
    // gamma = 9/10 lies below the transition at n = 24.
    EXPECT_EQ(a[17].disc_sign, 1);
}

TEST(Sweep, InfeasibleCellsRecorded) {
    SweepOptions opt;
    opt.n_min = 20;
    opt.n_max = 20;
    opt.grid_count = 1;
    const auto rows = sweep(opt);
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_FALSE(rows[0].infeasible.empty());
}
