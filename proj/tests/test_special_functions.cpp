#include "bubble/special_functions.hpp"
#include "bubble/moment_reduction.hpp"

#include <boost/math/special_functions/bessel.hpp>
#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

using namespace bubble;

namespace {

double rel(double a, double b) { return std::fabs(a - b) / std::fabs(b); }

// Trapezoid in u = log x over [u0, u1]; fine enough for the smooth log-scale integrands below.
template <class F>
double log_trapezoid(F f, double u0, double u1, double du) {
    double s = 0;
    const int m = static_cast<int>(std::round((u1 - u0) / du));
    for (int i = 0; i <= m; ++i) {
        const double x = std::exp(u0 + i * du);
        s += (i == 0 || i == m ? 0.5 : 1.0) * f(x) * x;
    }
    return s * du;
}

}  // namespace

TEST(Bessel, HalfOrderClosedForm) {
    for (double t : {1e-6, 0.01, 1.0, 1.999, 2.001, 7.5, 300.0}) {
        const double exact = std::sqrt(std::numbers::pi / (2 * t)) * std::exp(-t);
        EXPECT_LT(rel(bessel_k(0.5, t).value, exact), 1e-12) << t;
    }
    EXPECT_NEAR(bessel_k(0.5, 1.0).value, 0.46106850, 1e-8);
}

TEST(Bessel, AgreesWithBoostOnGrid) {
    for (double nu : {0.1, 0.25, 0.5, 0.7, 0.940197, 1.0, 1.3, 2.5, 3.7, 4.9})
        for (double t : {1e-6, 1e-3, 0.1, 0.5, 1.0, 1.9, 2.0, 2.1, 5.0, 10.0, 50.0, 200.0, 650.0}) {
            const double ref = boost::math::cyl_bessel_k(nu, t);
            EXPECT_LT(rel(bessel_k(nu, t).value, ref), 1e-12) << nu << " " << t;
        }
}

TEST(Bessel, PinnedByIntegralRepresentation) {
    // K_g(t) = int_0^inf exp(-t cosh s) cosh(g s) ds; trapezoid in s converges geometrically.
    const double g = 0.940197;
    long double s = 0;
    const long double h = 1.0L / 64;
    for (int i = 0; i <= 64 * 12; ++i) {
        const long double x = i * h;
        s += (i == 0 ? 0.5L : 1.0L) * std::exp(-std::cosh(x)) * std::cosh(g * x);
    }
    const double quad = static_cast<double>(s * h);
    const double frozen = 0.577913868987478443;
    EXPECT_LT(rel(quad, frozen), 1e-14);
    EXPECT_LT(rel(bessel_k(g, 1.0).value, frozen), 1e-12);
}

TEST(Bessel, RecurrenceAndDerivativeIdentities) {
    const double g = 0.7, t = 2.3;
    const double r = bessel_k(g + 1, t).value - bessel_k(g - 1 < 0 ? 1 - g : g - 1, t).value -
                     2 * g / t * bessel_k(g, t).value;
    EXPECT_LT(std::fabs(r) / bessel_k(g + 1, t).value, 1e-12);
    for (double nu : {0.3, 0.5, 0.940197, 1.6, 2.2})
        for (double x : {0.05, 0.7, 1.99, 2.01, 4.0, 30.0}) {
            const double kp = bessel_k(nu + 1, x).value, k0 = bessel_k(nu, x).value;
            const double km = bessel_k(std::fabs(nu - 1), x).value;  // K_{-v} = K_v
            EXPECT_LT(std::fabs(kp - km - 2 * nu / x * k0) / kp, 1e-12) << nu << " " << x;
        }
}

TEST(Bessel, SeriesAndContinuedFractionOverlap) {
    for (double nu : {0.2, 0.940197, 2.7}) {
        const double lo = bessel_k(nu, 2.0 - 1e-13).value, hi = bessel_k(nu, 2.0 + 1e-13).value;
        EXPECT_LT(rel(lo, hi), 1e-12) << nu;
    }
}

TEST(Bessel, MonotoneAndUnderflowFlag) {
    double prev = INFINITY;
    for (double t = 1e-3; t < 700; t *= 1.3) {
        const double v = bessel_k(0.940197, t).value;
        EXPECT_LT(v, prev);
        prev = v;
    }
    const BesselValue u = bessel_k(0.5, 701);
    EXPECT_TRUE(u.underflow);
    EXPECT_EQ(u.value, 0.0);
    EXPECT_THROW(bessel_k(0.5, 0.0), ParameterError);
    EXPECT_THROW(bessel_k(0.5, -1.0), ParameterError);
}

TEST(Profiles, HalfGammaIsExponential) {
    for (double t : {0.01, 0.5, 1.0, 3.0, 20.0}) {
        const ProfilePoint p = eval_profiles(25, 0.5, t);
        EXPECT_LT(rel(p.phi, std::exp(-t)), 1e-10);
        EXPECT_LT(rel(p.phi_prime, -std::exp(-t)), 1e-10);
    }
    EXPECT_NEAR(eval_profiles(25, 0.5, 1.0).phi, 0.36787944, 1e-8);
}

TEST(Profiles, OdeResiduals) {
    // Fourth-order central differences; residuals relative to the largest term.
    const double g = 0.3, t = 1.7, h = 1e-3;
    auto fd = [&](auto f) {
        const double fm2 = f(t - 2 * h), fm1 = f(t - h), f0 = f(t), fp1 = f(t + h), fp2 = f(t + 2 * h);
        const double d1 = (fm2 - 8 * fm1 + 8 * fp1 - fp2) / (12 * h);
        const double d2 = (-fm2 + 16 * fm1 - 30 * f0 + 16 * fp1 - fp2) / (12 * h * h);
        return std::array<double, 3>{f0, d1, d2};
    };
    const auto phi = fd([&](double x) { return eval_profiles(25, g, x).phi; });
    EXPECT_LT(std::fabs(phi[2] + (1 - 2 * g) / t * phi[1] - phi[0]) / phi[0], 1e-8);
    const auto wh = fd([&](double x) { return eval_profiles(25, g, x).what; });
    EXPECT_LT(std::fabs(wh[2] + (1 + 2 * g) / t * wh[1] - wh[0]) / wh[0], 1e-8);
    const ProfilePoint p = eval_profiles(25, g, t);
    EXPECT_LT(rel(p.phi_prime, phi[1]), 1e-9);
    EXPECT_LT(rel(p.what_prime, wh[1]), 1e-9);
}

TEST(Profiles, Asymptotics) {
    const double g = 0.3;
    EXPECT_NEAR(eval_profiles(25, g, 1e-9).phi, 1.0, 1e-4);
    // what ~ C rho^{-2g}: the ratio at rho and rho/10 tends to 10^{2g}.
    const double a = eval_profiles(25, g, 1e-8).what, b = eval_profiles(25, g, 1e-9).what;
    EXPECT_NEAR(b / a, std::pow(10.0, 2 * g), 1e-3);
    EXPECT_THROW(eval_profiles(2, 0.9, 1.0), ParameterError);  // n > 4g - 1 fails
}

TEST(Constants, SphereMeasureAndPositivity) {
    EXPECT_NEAR(static_cast<double>(sphere_measure(2)), 2 * std::numbers::pi, 1e-14);
    EXPECT_NEAR(static_cast<double>(sphere_measure(3)), 4 * std::numbers::pi, 1e-13);
    const PaperConstants c = paper_constants(25, 0.3);
    EXPECT_GT(c.c_ng, 0);
    EXPECT_GT(c.p_ng, 0);
    EXPECT_GT(c.kappa_gamma, 0);
    EXPECT_GT(c.d1, 0);
    EXPECT_GT(c.d2, 0);
    EXPECT_NEAR(c.d1, std::pow(2.0, 0.7) / std::tgamma(0.3), 1e-14);
}

TEST(Moments, HalfGammaClosedForms) {
    EXPECT_NEAR(moment_numeric(MomentKind::A, 25, 0.5, 1).value, 0.5, 1e-10);
    EXPECT_NEAR(moment_numeric(MomentKind::A, 25, 0.5, 3).value, 0.25, 1e-10);
    // what = d2 sqrt(pi/2) e^{-rho} / rho, so B_2 = d2^2 (pi/2) Gamma(22) / 2^22.
    const double d2 = paper_constants(25, 0.5).d2;
    const double exact = d2 * d2 * std::numbers::pi / 2 * std::tgamma(22.0) / std::pow(2.0, 22);
    EXPECT_LT(rel(moment_numeric(MomentKind::B, 25, 0.5, 2).value, exact), 1e-8);
}

TEST(Moments, DivergenceNamesCondition) {
    try {
        moment_numeric(MomentKind::A, 25, 0.5, 0, 1, 1);
        FAIL();
    } catch (const DivergenceError& e) {
        EXPECT_NE(std::string(e.what()).find("alpha"), std::string::npos);
    }
    EXPECT_THROW(moment_numeric(MomentKind::B, 25, 0.5, 24), DivergenceError);
}

TEST(Extension, HalfGammaClosedForm) {
    // At g = 1/2 the extension is harmonic: W = c ((1 + xN)^2 + r^2)^{-(n-1)/2}.
    const int n = 25;
    const double c = paper_constants(n, 0.5).c_ng;
    for (double r : {0.0, 0.3, 1.0, 5.0, 40.0})
        for (double x : {1e-12, 1e-4, 0.2, 1.0, 30.0}) {
            const ExtensionValue e = bubble_extension_all(n, 0.5, r, x);
            const double q = (1 + x) * (1 + x) + r * r;
            const double w = c * std::pow(q, -(n - 1) / 2.0);
            const double wr = -(n - 1) * r * w / q, wn = -(n - 1) * (1 + x) * w / q;
            const double scale = w + std::fabs(wr) + std::fabs(wn);
            EXPECT_LT(std::fabs(static_cast<double>(e.w) - w) / scale, 1e-10) << r << " " << x;
            EXPECT_LT(std::fabs(static_cast<double>(e.w_r) - wr) / scale, 1e-10) << r << " " << x;
            EXPECT_LT(std::fabs(static_cast<double>(e.w_n) - wn) / scale, 1e-10) << r << " " << x;
        }
}

TEST(Extension, BoundaryTraceAndMonotonicity) {
    const double w1 = bubble_boundary(25, 0.5, 0.8);
    EXPECT_LT(rel(bubble_extension(25, 0.5, 0.8, 1e-9).value, w1), 1e-5);
    EXPECT_LT(rel(bubble_extension(25, 0.3, 0.8, 1e-12).value, bubble_boundary(25, 0.3, 0.8)), 1e-5);
    double prev = INFINITY;
    for (double x = 1e-6; x < 50; x *= 2) {
        const double v = bubble_extension(25, 0.3, 0.0, x).value;
        EXPECT_LT(v, prev) << x;
        prev = v;
    }
}

TEST(Extension, FourierRepresentationAtOrigin) {
    // W(0, xN) = (2 pi)^{-n/2} |S^{n-1}| int what(rho) phi(rho xN) rho^{n-1} drho.
    for (double g : {0.5, 0.3}) {
        const int n = 25;
        const double xn = 0.5;
        const double integral = log_trapezoid(
            [&](double rho) { return eval_profiles(n, g, rho).what * eval_profiles(n, g, rho * xn).phi * std::pow(rho, n - 1); },
            -30, 6, 0.01);
        const double fourier = std::pow(2 * std::numbers::pi, -n / 2.0) * static_cast<double>(sphere_measure(n)) * integral;
        EXPECT_LT(rel(bubble_extension(n, g, 0.0, xn).value, fourier), 1e-5) << g;
    }
}

TEST(Extension, PlancherelConsistency) {
    const int n = 25;
    const double g = 0.3;
    const ExtensionOptions fast{1.0 / 16, 1.0 / 16, 1e-12};
    for (double xn : {0.3, 1.0}) {
        const double physical = log_trapezoid(
            [&](double r) {
                const double w = static_cast<double>(bubble_extension_all(n, g, r, xn, fast).w);
                return w * w * std::pow(r, n - 1);
            },
            -6, 5, 0.04);
        const double fourier = log_trapezoid(
            [&](double rho) {
                const double v = eval_profiles(n, g, rho).what * eval_profiles(n, g, rho * xn).phi;
                return v * v * std::pow(rho, n - 1);
            },
            -30, 6, 0.01);
        EXPECT_LT(rel(physical, fourier), 1e-5) << xn;
    }
}

TEST(Extension, RejectsBadInput) {
    EXPECT_THROW(bubble_extension(25, 0.5, 1.0, 0.0), ParameterError);
    EXPECT_THROW(bubble_extension(25, 1.5, 1.0, 1.0), ParameterError);
    EXPECT_THROW(bubble_extension(25, 0.5, -1.0, 1.0), ParameterError);
}
