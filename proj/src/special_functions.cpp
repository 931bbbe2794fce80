#include "bubble/special_functions.hpp"

#include "bubble/moment_reduction.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/float128.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>

namespace bubble {

namespace {

using boost::multiprecision::float128;

constexpr long double kPi = 3.141592653589793238462643383279502884L;
constexpr long double kEulerGamma = 0.577215664901532860606512090082402431L;
constexpr long double kEps = 1e-19L;

// Temme's gamma combinations for |mu| <= 1/2:
// gam1 = (1/G(1-mu) - 1/G(1+mu)) / (2 mu), gam2 = (1/G(1-mu) + 1/G(1+mu)) / 2.
void temme_gammas(long double mu, long double& gam1, long double& gam2, long double& gampl, long double& gammi) {
    const long double gp1 = boost::math::tgamma1pm1(mu);   // G(1+mu) - 1
    const long double gm1 = boost::math::tgamma1pm1(-mu);  // G(1-mu) - 1
    gampl = 1 / (1 + gp1);
    gammi = 1 / (1 + gm1);
    // 1/G(1-mu) - 1/G(1+mu) = (G(1+mu) - G(1-mu)) gampl gammi; the difference has no cancellation issue
    // because each term is relatively accurate and of size |mu|.
    gam1 = mu == 0 ? -kEulerGamma : (gp1 - gm1) / (2 * mu) * gampl * gammi;
    gam2 = (gammi + gampl) / 2;
}

// K_mu, K_{mu+1} scaled by e^x for |mu| <= 1/2.
std::pair<long double, long double> k_fractional_scaled(long double mu, long double x) {
    const long double xi = 1 / x;
    const int max_iter = 100000;
    if (x <= 2) {
        // Temme's series.
        const long double x2 = x / 2;
        const long double pimu = kPi * mu;
        const long double fact = std::fabs(pimu) < kEps ? 1 : pimu / std::sin(pimu);
        long double d = -std::log(x2);
        long double e = mu * d;
        const long double fact2 = std::fabs(e) < kEps ? 1 : std::sinh(e) / e;
        long double gam1, gam2, gampl, gammi;
        temme_gammas(mu, gam1, gam2, gampl, gammi);
        long double ff = fact * (gam1 * std::cosh(e) + gam2 * fact2 * d);
        long double sum = ff;
        e = std::exp(e);
        long double p = 0.5L * e / gampl;
        long double q = 0.5L / (e * gammi);
        long double c = 1;
        d = x2 * x2;
        long double sum1 = p;
        for (int i = 1; i <= max_iter; ++i) {
            ff = (i * ff + p + q) / (i * static_cast<long double>(i) - mu * mu);
            c *= d / i;
            p /= i - mu;
            q /= i + mu;
            const long double del = c * ff;
            sum += del;
            sum1 += c * (p - i * ff);
            if (std::fabs(del) < std::fabs(sum) * kEps) break;
        }
        const long double ex = std::exp(x);
        return {sum * ex, sum1 * 2 * xi * ex};
    }
    // Steed's continued fraction CF2 with Temme's normalization.
    long double b = 2 * (1 + x);
    long double d = 1 / b;
    long double h = d, delh = d;
    long double q1 = 0, q2 = 1;
    const long double a1 = 0.25L - mu * mu;
    long double q = a1, c = a1;
    long double a = -a1;
    long double s = 1 + q * delh;
    for (int i = 2; i <= max_iter; ++i) {
        a -= 2 * (i - 1);
        c = -a * c / i;
        const long double qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2;
        d = 1 / (b + a * d);
        delh = (b * d - 1) * delh;
        h += delh;
        const long double dels = q * delh;
        s += dels;
        if (std::fabs(dels / s) < kEps) break;
    }
    h = a1 * h;
    const long double kmu = std::sqrt(kPi / (2 * x)) / s;
    return {kmu, kmu * (mu + x + 0.5L - h) * xi};
}

}  // namespace

std::pair<long double, long double> bessel_k_pair_scaled(long double order, long double t) {
    if (!(t > 0)) throw ParameterError("bessel_k: argument must be positive");
    if (order < 0) order = -order;  // K_{-nu} = K_nu
    const int nl = static_cast<int>(std::floor(order + 0.5L));
    const long double mu = order - nl;
    auto [kmu, k1] = k_fractional_scaled(mu, t);
    const long double xi2 = 2 / t;
    for (int i = 1; i <= nl; ++i) {
        const long double next = (mu + i) * xi2 * k1 + kmu;
        kmu = k1;
        k1 = next;
    }
    return {kmu, k1};
}

long double bessel_k_ld(long double order, long double t) {
    return bessel_k_pair_scaled(order, t).first * std::exp(-t);
}

BesselValue bessel_k(double order, double t) {
    if (!(t > 0)) throw ParameterError("bessel_k: t must be > 0");
    if (t > 700) return {0.0, true};
    return {static_cast<double>(bessel_k_ld(order, t)), false};
}

long double sphere_measure(int n) {
    return 2 * std::pow(kPi, n / 2.0L) / std::tgamma(n / 2.0L);
}

long double log_d2(int n, long double g) {
    const long double gp = std::lgamma((n + 2 * g) / 2);
    const long double gm = std::lgamma((n - 2 * g) / 2);
    return std::log(2.0L) + (n - 2 * g) / (4 * g) * gp - (n + 2 * g) / (4 * g) * gm;
}

long double log_c_ng(int n, long double g) {
    const long double gp = std::lgamma((n + 2 * g) / 2);
    const long double gm = std::lgamma((n - 2 * g) / 2);
    return (n - 2 * g) / 2 * std::log(2.0L) + (n - 2 * g) / (4 * g) * (gp - gm);
}

namespace {

void check_gamma(int n, double gamma) {
    if (!(gamma > 0 && gamma < 1)) throw ParameterError("gamma must lie in (0, 1)");
    if (!(n > 2 * gamma)) throw ParameterError("n > 2 gamma required");
}

long double log_d1(long double g) { return (1 - g) * std::log(2.0L) - std::lgamma(g); }

}  // namespace

PaperConstants paper_constants(int n, double gamma) {
    check_gamma(n, gamma);
    const long double g = gamma;
    PaperConstants c;
    c.c_ng = static_cast<double>(std::exp(log_c_ng(n, g)));
    c.p_ng = static_cast<double>(std::exp(std::lgamma((n + 2 * g) / 2) - n / 2.0L * std::log(kPi) - std::lgamma(g)));
    c.kappa_gamma = static_cast<double>(std::pow(2.0L, 2 * g - 1) * std::tgamma(g) / std::tgamma(1 - g));
    c.d1 = static_cast<double>(std::exp(log_d1(g)));
    c.d2 = static_cast<double>(std::exp(log_d2(n, g)));
    c.sphere_measure = static_cast<double>(sphere_measure(n));
    return c;
}

// Values are assembled in log space so that t^eta weights never overflow against e^{-t}.
long double phi_ld(long double g, long double t) {
    const long double ks = bessel_k_pair_scaled(g, t).first;
    return std::exp(log_d1(g) + g * std::log(t) + std::log(ks) - t);
}

// (t^g K_g)' = -t^g K_{g-1} = -t^g K_{1-g}.
long double phi_prime_ld(long double g, long double t) {
    const long double ks = bessel_k_pair_scaled(1 - g, t).first;
    return -std::exp(log_d1(g) + g * std::log(t) + std::log(ks) - t);
}

long double what_ld(int n, long double g, long double rho, bool unit_d2) {
    const long double ks = bessel_k_pair_scaled(g, rho).first;
    return std::exp((unit_d2 ? 0 : log_d2(n, g)) - g * std::log(rho) + std::log(ks) - rho);
}

// (rho^-g K_g)' = -rho^-g K_{g+1}.
long double what_prime_ld(int n, long double g, long double rho, bool unit_d2) {
    const long double ks = bessel_k_pair_scaled(g, rho).second;
    return -std::exp((unit_d2 ? 0 : log_d2(n, g)) - g * std::log(rho) + std::log(ks) - rho);
}

ProfilePoint eval_profiles(int n, double gamma, double t) {
    check_gamma(n, gamma);
    if (!(n > 4 * gamma - 1)) throw ParameterError("eval_profiles: n > 4 gamma - 1 required");
    if (!(t > 0)) throw ParameterError("eval_profiles: t must be > 0");
    ProfilePoint p;
    p.phi = static_cast<double>(phi_ld(gamma, t));
    p.phi_prime = static_cast<double>(phi_prime_ld(gamma, t));
    p.what = static_cast<double>(what_ld(n, gamma, t));
    p.what_prime = static_cast<double>(what_prime_ld(n, gamma, t));
    return p;
}

namespace {

// log|f^(j)(t)| for the unit-normalized profile; phi carries d1, what carries no d2.
long double log_profile(ProfileSide side, long double g, long double t, int j) {
    if (side == ProfileSide::Phi) {
        const long double ks = bessel_k_pair_scaled(j == 0 ? g : 1 - g, t).first;
        return log_d1(g) + g * std::log(t) + std::log(ks) - t;
    }
    const auto [k0, k1] = bessel_k_pair_scaled(g, t);
    return -g * std::log(t) + std::log(j == 0 ? k0 : k1) - t;
}

}  // namespace

NumericValue profile_moment(ProfileSide side, int n, double gamma, double eta, int j, int jp) {
    check_gamma(n, gamma);
    const long double g = gamma;
    // Endpoint exponent at 0: phi ~ 1, phi' ~ t^{2g-1}; what ~ t^{-2g}, what' ~ t^{-2g-1}.
    const long double lead = side == ProfileSide::Phi ? eta + (2 * g - 1) * (j + jp) : eta - 4 * g - (j + jp);
    if (!(lead > -1)) {
        std::ostringstream os;
        os << "divergent moment at 0: endpoint exponent " << static_cast<double>(lead) << " must exceed -1";
        throw DivergenceError(os.str());
    }
    const int sgn = ((j + jp) % 2 == 0) ? 1 : -1;  // each derivative is negative
    auto f = [&](float128 tq) -> float128 {
        const long double t = static_cast<long double>(tq);
        if (!(t > 0)) return 0;
        const long double lv = eta * std::log(t) + log_profile(side, g, t, j) + log_profile(side, g, t, jp);
        return float128(sgn * std::exp(lv));
    };
    boost::math::quadrature::exp_sinh<float128> q;
    float128 err = 0, l1 = 0;
    const float128 v = q.integrate(f, float128(1e-14), &err, &l1);
    NumericValue out{static_cast<double>(v), static_cast<double>(err)};
    if (!(err <= 1e-10 * abs(v))) throw QuadratureError("profile_moment: quadrature did not converge", out.error);
    return out;
}

NumericValue moment_numeric(MomentKind kind, int n, double gamma, int alpha, int j, int jp) {
    check_gamma(n, gamma);
    if (kind == MomentKind::A) {
        const double lead = alpha - 2 * gamma + (2 * gamma - 1) * (j + jp);
        if (!(lead > -1))
            throw DivergenceError("A moment diverges at 0: needs alpha - 2g + (2g-1)(j+j') > -1");
        return profile_moment(ProfileSide::Phi, n, gamma, alpha - 2 * gamma, j, jp);
    }
    const double lead = -alpha + 2 * gamma + n - 1 - 4 * gamma - (j + jp);
    if (!(lead > -1)) throw DivergenceError("B moment diverges at 0: needs n - alpha - 2g - (j+j') > 0");
    NumericValue v = profile_moment(ProfileSide::What, n, gamma, n - 1 - alpha + 2 * gamma, j, jp);
    const double d2sq = static_cast<double>(std::exp(2 * log_d2(n, gamma)));
    v.value *= d2sq;
    v.error *= d2sq;
    return v;
}

double bubble_boundary(int n, double gamma, double r) {
    check_gamma(n, gamma);
    const long double g = gamma;
    return static_cast<double>(std::exp(log_c_ng(n, g) - (n - 2 * g) / 2 * std::log1p(static_cast<long double>(r) * r)));
}

std::vector<QuadNode> de_half_line(long double h, long double t_lo, long double t_hi) {
    std::vector<QuadNode> out;
    const long k_lo = static_cast<long>(std::ceil(t_lo / h));
    const long k_hi = static_cast<long>(std::floor(t_hi / h));
    for (long k = k_lo; k <= k_hi; ++k) {
        const long double t = k * h;
        const long double x = std::exp(kPi / 2 * std::sinh(t));
        out.push_back({x, h * kPi / 2 * std::cosh(t) * x, k % 2 == 0});
    }
    return out;
}

namespace {

// Tanh-sinh rule on (0, pi) for the angle theta measured from the direction of the bubble core;
// nodes cluster at both ends. Weights include sin^{n-2} theta.
struct AngularRule {
    std::vector<long double> one_minus_cos, one_plus_cos, w;
    std::vector<bool> coarse;
};

const AngularRule& angular_rule(int n, double h_in) {
    static std::mutex mu;
    static std::map<std::pair<int, double>, AngularRule> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find({n, h_in});
    if (it != cache.end()) return it->second;
    AngularRule rule;
    const long double h = h_in;
    for (long k = -std::lround(3.25L / h); k <= std::lround(3.25L / h); ++k) {
        const long double t = k * h;
        const long double e = std::exp(kPi * std::sinh(t));
        // theta = pi e/(1+e), pi - theta = pi/(1+e), both free of cancellation.
        const long double th = kPi * e / (1 + e);
        const long double sn = std::sin(std::min(th, kPi / (1 + e)));
        const long double half = std::sin(th / 2);
        const long double half_c = std::sin(kPi / (2 * (1 + e)));  // cos(th/2)
        const long double dth = kPi * kPi * std::cosh(t) * e / ((1 + e) * (1 + e));
        const long double w = h * dth * std::pow(sn, static_cast<long double>(n - 2));
        if (!(w > 0)) continue;
        rule.one_minus_cos.push_back(2 * half * half);
        rule.one_plus_cos.push_back(2 * half_c * half_c);
        rule.w.push_back(w);
        rule.coarse.push_back(k % 2 == 0);
    }
    return cache.emplace(std::make_pair(n, h_in), std::move(rule)).first->second;
}

}  // namespace

// Kernel-centred form: with xi = xbar + xN eta, eta = s omega,
// W = p |S^{n-2}| int_0^inf s^{n-1} (1+s^2)^{-lambda} int_0^pi w(R) sin^{n-2} th dth ds,
// R^2 = (r - xN s)^2 + 2 r xN s (1 - cos th), th measured from -xbar. The bubble core (R ~ 1) sits at
// s0 = r/xN, th = 0 with widths 1/xN and 1/r; the s integral is split at s0 and both pieces, like the
// angular rule, cluster their nodes there.
ExtensionValue bubble_extension_all(int n, double gamma, double r_in, double xn_in, const ExtensionOptions& opt) {
    check_gamma(n, gamma);
    if (!(opt.h_radial > 0) || !(opt.h_angle > 0)) throw ParameterError("bubble_extension: steps must be positive");
    if (!(xn_in > 0) || !(r_in >= 0)) throw ParameterError("bubble_extension: need r >= 0 and xN > 0");
    const long double g = gamma, r = r_in, x = xn_in;
    const long double lambda = (n + 2 * g) / 2;
    const long double k = (n - 2 * g) / 2;
    const long double c = std::exp(log_c_ng(n, g));
    const long double log_pref = std::lgamma(lambda) - n / 2.0L * std::log(kPi) - std::lgamma(g) +
                                 std::log(2.0L) + (n - 1) / 2.0L * std::log(kPi) - std::lgamma((n - 1) / 2.0L);
    const AngularRule& ang = angular_rule(n, opt.h_angle);
    const long double s0 = r / x;

    struct SNode {
        long double s, d, w;  // d = s - s0 without cancellation
        bool coarse;
    };
    std::vector<SNode> nodes;
    const long double h = opt.h_radial;
    const long kmax = std::lround(3.25L / h);  // tanh-sinh weights fall below 1e-40 beyond
    // Tanh-sinh on (0, len) in a variable v; emit(v from the left end, v from the right end, weight).
    auto tanh_sinh = [&](long double len, auto emit) {
        for (long kk = -kmax; kk <= kmax; ++kk) {
            const long double t = kk * h;
            const long double e = std::exp(kPi * std::sinh(t));
            const long double w = h * len * kPi * std::cosh(t) * e / ((1 + e) * (1 + e));
            if (w > 0) emit(len * e / (1 + e), len / (1 + e), w, kk % 2 == 0);
        }
    };
    // Pieces on the s axis. Left of s0: the kernel peak near s = 1, then a power law up to the core,
    // taken in log s. Right of s0, in d = s - s0: scales max(1, s0) (kernel) and 1/xN (decay of w).
    const long double s_mid = s0 > 2 ? 1.0L : s0;
    if (s_mid > 0)
        tanh_sinh(s_mid, [&](long double v, long double vr, long double w, bool co) {
            nodes.push_back({v, s_mid < s0 ? v - s0 : -vr, w, co});
        });
    if (s_mid < s0) {
        const long double L = std::log(s0);
        tanh_sinh(L, [&](long double, long double du, long double w, bool co) {
            const long double s = s0 * std::exp(-du);
            nodes.push_back({s, s0 * std::expm1(-du), w * s, co});
        });
    }
    const long double scale_a = std::max(1.0L, s0), scale_b = 1 / x;
    const long double lo = std::min(scale_a, scale_b), hi = std::max(scale_a, scale_b);
    const bool two_scales = hi > 4 * lo;
    const long double first = two_scales ? lo : hi;
    tanh_sinh(first, [&](long double v, long double, long double w, bool co) { nodes.push_back({s0 + v, v, w, co}); });
    if (two_scales) {
        const long double L = std::log(hi / lo);
        tanh_sinh(L, [&](long double u, long double, long double w, bool co) {
            const long double d = lo * std::exp(u);
            nodes.push_back({s0 + d, d, w * d, co});
        });
    }
    // exp-sinh on (hi, inf); the kernel tail decays like s^{-1-2g}, reached out to hi * 1e80.
    for (long kk = -std::lround(5.5L / h); kk <= std::lround(5.5L / h); ++kk) {
        const long double t = kk * h;
        const long double e = std::exp(kPi / 2 * std::sinh(t));
        const long double d = hi * (1 + e);
        nodes.push_back({s0 + d, d, h * kPi / 2 * std::cosh(t) * e * hi, kk % 2 == 0});
    }

    // acc[level][component]: level 0 fine, 1 coarse in s, 2 coarse in the angle;
    // components (W, W_r, W_N).
    // W_N uses int d_N P = 0: W_N = (1/xN) int K(s) (2g - 2 lambda/(1+s^2)) [w(xbar+eta) - w(xbar)], and the
    // bracket is paired with -eta into an exact second difference, since the first-order part only cancels
    // after the angular sum.
    // Far from the boundary W << w(xbar) and the subtraction would cancel instead; there the direct
    // derivative dR^2/dxN = 2 s (xN s - r cos th) is used.
    const bool second_diff = x <= 1;
    const long double q0 = 1 + r * r;
    const long double f0 = c * std::exp(-k * std::log(q0));
    // Pruning threshold: a coarse pass fixes the magnitude S = |W| + |W_r| + |W_N|, and any (s, th) node
    // whose contribution is bounded by opt.prune * S is skipped.
    long double cut = 0;
    if (opt.prune > 0) {
        const ExtensionValue est = bubble_extension_all(n, gamma, r_in, xn_in, {0.25, 0.25, 0});
        cut = opt.prune * (std::fabs(est.w) + std::fabs(est.w_r) + std::fabs(est.w_n));
    }
    long double acc[3][3] = {};
    const std::size_t na = ang.w.size();
    const std::size_t half = na / 2;  // ang.w rises on [0, half] and is mirror symmetric
    for (const SNode& nd : nodes) {
        const long double s = nd.s;
        const long double lw = log_pref + std::log(nd.w) + (n - 1) * std::log(s) - lambda * std::log1p(s * s);
        if (lw < -200) continue;  // w <= c, so the node moves W by less than e^-200 c
        const long double kw = std::exp(lw);
        const long double kn = (2 * g - 2 * lambda / (1 + s * s)) / x;
        const long double rad = x * nd.d;  // xN s - r
        const long double xs = x * s;
        std::size_t j_lo = 0, j_hi = na;
        if (cut > 0) {
            const long double bound =
                kw * c *
                std::max({1.0L, 2 * k * (std::fabs(rad) + 2 * xs),
                          second_diff ? 2 * std::fabs(kn) : 2 * k * s * (std::fabs(rad) + 2 * r)});
            const long double wmin = cut / bound;
            if (!(ang.w[half] >= wmin)) continue;
            j_lo = static_cast<std::size_t>(
                std::partition_point(ang.w.begin(), ang.w.begin() + half, [&](long double v) { return v < wmin; }) -
                ang.w.begin());
            j_hi = na - j_lo;
        }
        long double fine[3] = {}, coarse[3] = {};
        for (std::size_t j = j_lo; j < j_hi; ++j) {
            const long double omc = ang.one_minus_cos[j], opc = ang.one_plus_cos[j];
            const long double qp = 1 + rad * rad + 2 * r * xs * omc;  // 1 + R^2
            const long double qm = 1 + rad * rad + 2 * r * xs * opc;  // mirrored point
            const long double w = c * std::exp(-k * std::log(qp));
            const long double wpr = -2 * k * w / qp;  // w'(R) / R
            const long double cs = (opc - omc) / 2;
            const long double m = -k / 2 * std::log1p(xs * xs * (2 * q0 + xs * xs - 4 * r * r * cs * cs) / (q0 * q0));
            const long double z = (qp - qm) / (qp + qm);
            const long double dl = std::fabs(z) < 0.5L ? -k * std::atanh(z) : -k / 2 * std::log(qp / qm);
            const long double sh = std::sinh(dl / 2);
            const long double d2 = f0 * (std::expm1(m) * std::cosh(dl) + 2 * sh * sh);  // half second difference
            // dR^2/dr = 2 (r - xN s cos th) = 2 (-rad + xN s omc).
            const long double v[3] = {w, wpr * (-rad + xs * omc), second_diff ? kn * d2 : wpr * s * (rad + r * omc)};
            for (int a = 0; a < 3; ++a) {
                fine[a] += ang.w[j] * v[a];
                if (ang.coarse[j]) coarse[a] += 2 * ang.w[j] * v[a];
            }
        }
        for (int a = 0; a < 3; ++a) {
            acc[0][a] += kw * fine[a];
            if (nd.coarse) acc[1][a] += 2 * kw * fine[a];
            acc[2][a] += kw * coarse[a];
        }
    }
    ExtensionValue out;
    out.w = acc[0][0];
    out.w_r = acc[0][1];
    out.w_n = acc[0][2];
    auto err = [&](int a) -> long double {
        return std::max(std::fabs(acc[0][a] - acc[1][a]), std::fabs(acc[0][a] - acc[2][a]));
    };
    out.err_w = err(0);
    out.err_r = err(1);
    out.err_n = err(2);
    return out;
}

NumericValue bubble_extension(int n, double gamma, double r, double xn, ExtensionDeriv deriv) {
    const ExtensionValue v = bubble_extension_all(n, gamma, r, xn, {});
    NumericValue out;
    switch (deriv) {
        case ExtensionDeriv::None: out = {static_cast<double>(v.w), static_cast<double>(v.err_w)}; break;
        case ExtensionDeriv::R: out = {static_cast<double>(v.w_r), static_cast<double>(v.err_r)}; break;
        case ExtensionDeriv::N: out = {static_cast<double>(v.w_n), static_cast<double>(v.err_n)}; break;
    }
    const double scale = std::max(std::fabs(static_cast<double>(v.w)), std::fabs(out.value));
    if (out.error > 1e-6 * scale)
        throw QuadratureError("bubble_extension: kernel quadrature did not reach 1e-6", out.error / scale);
    return out;
}

}  // namespace bubble
