#include "bubble/moment_reduction.hpp"
#include "bubble/special_functions.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace bubble;

namespace {

double eta_value(const Exponent& e, double gamma) { return e.int_part + e.gamma_mult * gamma; }

ProfileSide numeric_side(Side s) { return s == Side::Phi ? ProfileSide::Phi : ProfileSide::What; }

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

// coeff * base against the numerically integrated key; returns the relative gap.
double reduction_gap(int n, const Rational& gamma, const MomentKey& key) {
    const double g = to_double(gamma);
    const Exponent base = key.side == Side::Phi ? phi_base_exponent() : what_base_exponent(n);
    const auto side = numeric_side(key.side);
    const NumericValue b = profile_moment(side, n, g, eta_value(base, g), 0, 0);
    const NumericValue m = profile_moment(side, n, g, eta_value(key.eta, g), key.j, key.jp);
    return rel(to_double(reduce_moment(n, gamma, key)) * b.value, m.value);
}

}  // namespace

TEST(MomentReduction, PhiSideExamples) {
    for (const Rational& g : {rat(1, 4), rat(1, 2), rat(3, 4), rat(9, 10)}) {
        const MomentKey a3{Side::Phi, {3, -2}, 0, 0};
        EXPECT_EQ(reduce_moment(30, g, a3), Rational(2 * (1 - g * g) / 3));
        const MomentKey mixed{Side::Phi, {2, -2}, 0, 1};
        EXPECT_EQ(reduce_moment(30, g, mixed), Rational(-(1 - g)));
    }
    const MomentValue v = reduce_phi_moment(25, rat(1, 2), {Side::Phi, {3, -2}, 0, 0});
    EXPECT_TRUE(v.convergent);
    EXPECT_EQ(v.coeff, rat(1, 2));
}

TEST(MomentReduction, HalfGammaClosedForms) {
    // phi = e^{-t}: A_1 = 1/2, A_3 = 1/4.
    EXPECT_NEAR(moment_numeric(MomentKind::A, 25, 0.5, 1).value, 0.5, 1e-10);
    EXPECT_NEAR(moment_numeric(MomentKind::A, 25, 0.5, 3).value, 0.25, 1e-10);
    EXPECT_NEAR(profile_moment(ProfileSide::Phi, 25, 0.5, 0, 0, 0).value, 1.0 / 2, 1e-12);
}

TEST(MomentReduction, WhatRatioAtHalfGamma) {
    // B_4 integrates rho^(n-5+2g) = rho^21 against the base rho^23. With a = 2 and eta = 23 one descent step
    // gives I(23) = (21 * 22 / 2) / (1 + 12 / 10) I(21) = 105 I(21).
    const MomentKey b4{Side::What, {25 - 5, 2}, 0, 0};
    const Rational ratio = reduce_moment(25, rat(1, 2), b4);
    EXPECT_EQ(ratio, rat(1, 105));
    const double num = moment_numeric(MomentKind::B, 25, 0.5, 4).value / moment_numeric(MomentKind::B, 25, 0.5, 2).value;
    EXPECT_LT(rel(num, to_double(ratio)), 1e-8);
}

TEST(MomentReduction, WhatMixedMomentByParts) {
    // int rho^(n-4+2g) what what' = -((n-4+2g)/2) int rho^(n-5+2g) what^2.
    for (const Rational& g : {rat(1, 4), rat(1, 2), rat(3, 4)}) {
        const int n = 25;
        const Rational mixed = reduce_moment(n, g, {Side::What, {n - 4, 2}, 0, 1});
        const Rational square = reduce_moment(n, g, {Side::What, {n - 5, 2}, 0, 0});
        EXPECT_EQ(mixed, Rational(-(n - 4 + 2 * g) / 2 * square));
    }
    // Composition in the W-rel proof at (25, 1/2).
    const Rational g = rat(1, 2);
    const int n = 25;
    EXPECT_EQ(Rational(2 * (1 - g) * (n - 3) / ((n - 4) * (n - 2 * g - 4))), rat(11, 210));
}

TEST(MomentReduction, DivergenceNamesInequality) {
    // what^2 near 0 behaves like rho^(-4g); rho^(4g-1) * rho^(-4g) is not integrable.
    const MomentKey bad{Side::What, {-1, 4}, 0, 0};
    EXPECT_FALSE(convergence_violation(25, rat(1, 2), bad).empty());
    EXPECT_THROW(reduce_moment(25, rat(1, 2), bad), DivergenceError);
    const MomentValue v = reduce_what_moment(25, rat(1, 2), bad);
    EXPECT_FALSE(v.convergent);
    EXPECT_NE(v.violated_condition.find("> -1"), std::string::npos);

    const MomentKey bad_phi{Side::Phi, {-1, 0}, 1, 1};
    EXPECT_THROW(reduce_moment(25, rat(1, 4), bad_phi), DivergenceError);

    // int phi phi' dt = -phi(0)^2 / 2 at g = 1/2: the boundary term survives, so no reduction is claimed.
    EXPECT_THROW(reduce_moment(25, rat(1, 2), {Side::Phi, {1, -2}, 0, 1}), DivergenceError);
}

TEST(MomentReduction, ParityMismatchReported) {
    EXPECT_THROW(reduce_moment(25, rat(1, 2), {Side::Phi, {2, -2}, 0, 0}), ParityError);
    EXPECT_THROW(reduce_moment(25, rat(1, 2), {Side::Phi, {3, 0}, 0, 0}), ParityError);
}

// The two recursions of the profile ODE, checked on quadrature alone (no symbolic reduction involved).
TEST(MomentReduction, RecursionsHoldNumerically) {
    for (double g : {0.25, 0.5, 0.75}) {
        for (int step : {2, 3, 4, 5}) {
            for (Side side : {Side::Phi, Side::What}) {
                const int n = 25;
                // On the what side the shift by 22 keeps the weight comparable to the one used by the engine.
                const double eta = side == Side::Phi ? step : step + 22;
                const double a = side == Side::Phi ? 1 - 2 * g : 1 + 2 * g;
                if (side == Side::What && !(eta > 4 * g + 1)) continue;
                const auto ns = numeric_side(side);
                const double h = (eta + 1) / 2;
                const double sq = profile_moment(ns, n, g, eta, 0, 0).value;
                const double der = profile_moment(ns, n, g, eta, 1, 1).value;
                const double lower = profile_moment(ns, n, g, eta - 2, 0, 0).value;
                EXPECT_LT(rel(der, h / (h - a) * sq), 1e-8) << g << " " << eta;
                EXPECT_LT(rel(sq, (eta - a) * (eta - 1) / 2 / (1 + h / (h - a)) * lower), 1e-8) << g << " " << eta;
            }
        }
    }
    // Unshifted what-side exponents, where the boundary condition allows them.
    for (double g : {0.25, 0.5, 0.75}) {
        for (int eta : {2, 3, 4, 5}) {
            if (!(eta > 4 * g + 1)) continue;
            const double a = 1 + 2 * g, h = (eta + 1) / 2.0;
            const double sq = profile_moment(ProfileSide::What, 25, g, eta, 0, 0).value;
            const double der = profile_moment(ProfileSide::What, 25, g, eta, 1, 1).value;
            const double lower = profile_moment(ProfileSide::What, 25, g, eta - 2, 0, 0).value;
            EXPECT_LT(rel(der, h / (h - a) * sq), 1e-8) << g << " " << eta;
            EXPECT_LT(rel(sq, (eta - a) * (eta - 1) / 2 / (1 + h / (h - a)) * lower), 1e-8) << g << " " << eta;
        }
    }
}

TEST(MomentReduction, CoefficientTimesBaseMatchesQuadrature) {
    const std::pair<int, Rational> pairs[] = {{25, rat(1, 2)}, {30, rat(3, 4)}, {52, rat(1, 4)}};
    for (const auto& [n, g] : pairs) {
        int checked = 0;
        for (Side side : {Side::Phi, Side::What}) {
            const Exponent base = side == Side::Phi ? phi_base_exponent() : what_base_exponent(n);
            for (int shift = -8; shift <= 12; ++shift) {
                for (auto [j, jp] : {std::pair{0, 0}, {0, 1}, {1, 1}}) {
                    const MomentKey key{side, {base.int_part + shift, base.gamma_mult}, j, jp};
                    if (!convergence_violation(n, g, key).empty()) continue;
                    try {
                        reduce_moment(n, g, key);
                    } catch (const ParityError&) {
                        continue;
                    } catch (const DivergenceError&) {
                        // Parts with a surviving boundary term, e.g. int phi phi' at g = 1/2.
                        continue;
                    }
                    EXPECT_LT(reduction_gap(n, g, key), 1e-8) << n << " " << describe(key);
                    ++checked;
                }
            }
        }
        EXPECT_GT(checked, 30);
    }
}

TEST(MomentReduction, TableMemoizesConsistently) {
    MomentTable t(25, rat(1, 2));
    const MomentKey k{Side::What, {30, 2}, 1, 1};
    const Rational first = t.get(k);
    EXPECT_EQ(first, reduce_moment(25, rat(1, 2), k));
    EXPECT_EQ(t.get(k), first);
}
