#include "bubble/f_oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace bubble {

namespace {

constexpr long double kPi = 3.141592653589793238462643383279502884L;

void check_keys(const std::vector<FKey>& keys, OracleMethod method) {
    for (const FKey& k : keys) {
        if (k.kind < 1 || k.kind > 4) throw ParameterError("f_integral_oracle: kind must be 1..4");
        if (k.alpha < 0 || k.beta < 0 || k.beta % 2 != 0)
            throw ParameterError("f_integral_oracle: need alpha >= 0 and even beta >= 0");
        if (method == OracleMethod::PoissonPhysical && k.alpha + k.beta > 10)
            throw ParameterError("f_integral_oracle: poisson_physical is limited to alpha + beta <= 10");
        if (method == OracleMethod::FourierFd && k.beta > 10)
            throw ParameterError("f_integral_oracle: fourier_fd is limited to beta <= 10");
    }
}

// Nodes x = centre exp(a sinh t) on [lo, hi], step h; coarse marks the rule with step 2h. A peak of
// width sigma in log x at the centre is resolved when a h is well below sigma.
std::vector<QuadNode> log_de_nodes(long double h, long double lo, long double hi, long double centre = 1,
                                   long double a = kPi / 2) {
    const long double t_lo = std::asinh(std::log(lo / centre) / a);
    const long double t_hi = std::asinh(std::log(hi / centre) / a);
    const long k_lo = static_cast<long>(std::ceil(t_lo / h));
    const long k_hi = static_cast<long>(std::floor(t_hi / h));
    std::vector<QuadNode> out;
    for (long k = k_lo; k <= k_hi; ++k) {
        const long double t = k * h;
        const long double x = centre * std::exp(a * std::sinh(t));
        out.push_back({x, h * a * std::cosh(t) * x, k % 2 == 0});
    }
    return out;
}

// ---------------------------------------------------------------------------------------------
// Fourier side.

// Fornberg weights for derivatives 0..M at offsets -p..p (unit spacing), evaluated at 0.
std::vector<std::vector<long double>> fornberg(int p, int M) {
    const int N = 2 * p + 1;
    std::vector<long double> x(N);
    for (int i = 0; i < N; ++i) x[i] = i - p;
    std::vector<std::vector<long double>> c(N, std::vector<long double>(M + 1, 0));  // c[node][deriv]
    long double c1 = 1, c4 = x[0];
    c[0][0] = 1;
    for (int i = 1; i < N; ++i) {
        const int mn = std::min(i, M);
        long double c2 = 1;
        const long double c5 = c4;
        c4 = x[i];
        for (int j = 0; j < i; ++j) {
            const long double c3 = x[i] - x[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k) c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<std::vector<long double>> w(M + 1, std::vector<long double>(N));
    for (int m = 0; m <= M; ++m)
        for (int j = 0; j < N; ++j) w[m][j] = c[j][m];
    return w;
}

constexpr int kMaxD = 5;  // beta <= 10 needs D^j for j <= 5

// Coefficients of prod_{i<m} (D - 2i)(D + N - 2 - 2i), times (D - 2m) when `grad` is set: the
// operator with rho^{-2m} L_N^m g = that polynomial in D = rho d/drho applied to g, and
// rho^{-2m-1}-scaled derivative of it.
std::vector<long double> laplacian_poly(int m, int N, bool grad) {
    std::vector<long double> p{1};
    auto mul = [&](long double root) {
        std::vector<long double> q(p.size() + 1, 0);
        for (std::size_t i = 0; i < p.size(); ++i) {
            q[i + 1] += p[i];
            q[i] -= root * p[i];
        }
        p = q;
    };
    for (int i = 0; i < m; ++i) {
        mul(2 * i);
        mul(-(N - 2 - 2 * i));
    }
    if (grad) mul(2 * m);
    return p;
}

long double apply_poly(const std::vector<long double>& p, const std::array<long double, kMaxD + 1>& d) {
    long double s = 0;
    for (std::size_t i = 0; i < p.size(); ++i) s += p[i] * d[i];
    return s;
}

// Integrand of int g (-Lap)^k g over the rho-sphere, divided by |S^{n-1}| rho^{n-1}; d = D^j g.
struct FourierForms {
    int n;
    int k;
    std::vector<long double> scal, scal_grad, vec, vec_grad;
    FourierForms(int n_, int k_) : n(n_), k(k_) {
        const int m = k / 2;
        scal = laplacian_poly(m, n, false);
        scal_grad = laplacian_poly(m, n, true);
        vec = laplacian_poly(m, n + 2, false);
        vec_grad = laplacian_poly(m, n + 2, true);
    }
    long double scalar(const std::array<long double, kMaxD + 1>& d, long double rho) const {
        const int m = k / 2;
        const long double s = std::pow(rho, -2.0L * m);
        if (k % 2 == 0) {
            const long double u = s * apply_poly(scal, d);
            return u * u;
        }
        const long double du = s / rho * apply_poly(scal_grad, d);
        return du * du;
    }
    // sum_i int (xi_i v)(-Lap)^k (xi_i v) with Lap^m (xi_i v) = xi_i L_{n+2}^m v.
    long double vector(const std::array<long double, kMaxD + 1>& d, long double rho) const {
        const int m = k / 2;
        const long double s = std::pow(rho, -2.0L * m);
        const long double u = s * apply_poly(vec, d);
        if (k % 2 == 0) return rho * rho * u * u;
        const long double rdu = s * apply_poly(vec_grad, d);  // rho u'
        return n * u * u + 2 * u * rdu + rdu * rdu;
    }
};

std::vector<NumericValue> fourier_fd(const std::vector<FKey>& keys, int n, double gamma) {
    const long double g = gamma;
    const int p = 6;
    static const auto w13 = fornberg(6, kMaxD);
    static const auto w11 = fornberg(5, kMaxD);
    const long double sphere = sphere_measure(n);

    std::vector<FourierForms> forms;
    for (const FKey& key : keys) forms.emplace_back(n, key.beta / 2);

    struct Acc {
        long double fine = 0, coarse = 0, fd_alt = 0;
    };
    std::vector<Acc> acc(keys.size());

    // Nodes in (rho, tau) with tau = rho xN; the profiles decay like exp(-rho) and exp(-tau).
    const long double hq = 1.0L / 32;
    // rho^{n-1} what^2 peaks near rho = n/2 with width ~ n^{-1/2} in log rho.
    const auto rho_nodes = log_de_nodes(hq, 1e-30L, 250, std::max(1.0L, (n - 2) / 2.0L));
    const auto tau_nodes = log_de_nodes(hq, 1e-30L, 250);
    for (const QuadNode& rn : rho_nodes) {
        const long double rho = rn.x;
        for (const QuadNode& tn : tau_nodes) {
            const long double tau = tn.x;
            const long double xn = tau / rho;
            const long double hu = 0.125L / std::max(1.0L, rho + tau);
            // G1 = what(rho) phi(rho xN), G3 = what(rho) rho phi'(rho xN), sampled at rho e^{i hu}.
            std::array<long double, 2 * 6 + 1> g1{}, g3{};
            for (int i = -p; i <= p; ++i) {
                const long double rr = rho * std::exp(i * hu);
                const long double wh = what_ld(n, g, rr);
                g1[i + p] = wh * phi_ld(g, rr * xn);
                g3[i + p] = wh * rr * phi_prime_ld(g, rr * xn);
            }
            auto derivs = [&](const std::array<long double, 13>& f, const std::vector<std::vector<long double>>& w,
                              int pp) {
                std::array<long double, kMaxD + 1> d{};
                long double hp = 1;
                for (int j = 0; j <= kMaxD; ++j) {
                    long double s = 0;
                    for (int i = -pp; i <= pp; ++i) s += w[j][i + pp] * f[i + p];
                    d[j] = s / hp;
                    hp *= hu;
                }
                return d;
            };
            const auto d1 = derivs(g1, w13, 6), d1b = derivs(g1, w11, 5);
            const auto d3 = derivs(g3, w13, 6), d3b = derivs(g3, w11, 5);
            // dxN = dtau / rho; |S^{n-1}| rho^{n-1} from the sphere.
            const long double base = rn.w * tn.w / rho * sphere * std::pow(rho, static_cast<long double>(n - 1));
            for (std::size_t q = 0; q < keys.size(); ++q) {
                const FKey& key = keys[q];
                const FourierForms& fm = forms[q];
                auto val = [&](const std::array<long double, kMaxD + 1>& a, const std::array<long double, kMaxD + 1>& b) {
                    switch (key.kind) {
                        case 1: return fm.scalar(a, rho);
                        case 2: return fm.vector(a, rho);
                        case 3: return fm.scalar(b, rho);
                        default: return fm.vector(a, rho) + fm.scalar(b, rho);
                    }
                };
                const long double wgt = base * std::pow(xn, key.alpha - 2 * g);
                const long double v = wgt * val(d1, d3);
                acc[q].fine += v;
                if (rn.coarse && tn.coarse) acc[q].coarse += 4 * v;
                acc[q].fd_alt += wgt * val(d1b, d3b);
            }
        }
    }
    std::vector<NumericValue> out;
    for (const Acc& a : acc) {
        const long double err = std::fabs(a.fine - a.coarse) + std::fabs(a.fine - a.fd_alt);
        out.push_back({static_cast<double>(a.fine), static_cast<double>(err)});
    }
    return out;
}

// ---------------------------------------------------------------------------------------------
// Physical side.

std::vector<NumericValue> poisson_physical(const std::vector<FKey>& keys, int n, double gamma, double delta) {
    const long double g = gamma;
    const long double sphere = sphere_measure(n);
    // Small-xN behaviour: W^2 and W_r^2 stay bounded, W_N^2 ~ xN^{4g-2}.
    long double lead = 1e9;
    for (const FKey& k : keys) {
        const long double e0 = k.alpha - 2 * g + 1;
        const long double e1 = k.alpha + 2 * g - 1;
        lead = std::min(lead, k.kind >= 3 ? std::min(e0, e1) : e0);
    }
    if (!(lead > 0)) throw DivergenceError("f_integral_oracle: integrand not integrable at xN = 0");
    const long double xn_lo = std::max(1e-300L, std::exp(-70 / lead));
    const long double r_lo = std::exp(-70.0L / n);
    const long double hq = 1.0L / 8;
    // r^{n-1} W^2 peaks near r = 1 with width (n - 2g)^{-1/2} in log r.
    const auto r_nodes = log_de_nodes(hq, r_lo, 1e6L, 1, std::min(kPi / 2, 7 / std::sqrt(static_cast<long double>(n))));
    const auto x_nodes = log_de_nodes(hq, xn_lo, 1e6L);
    const ExtensionOptions ext{1.0 / 16, 1.0 / 16, 1e-12};
    const long double amp = std::pow(static_cast<long double>(delta), -(n - 2 * g) / 2);

    struct Acc {
        long double fine = 0, coarse = 0, ext_err = 0;
    };
    std::vector<Acc> acc(keys.size());
    for (const QuadNode& rn : r_nodes) {
        for (const QuadNode& xq : x_nodes) {
            const ExtensionValue e = bubble_extension_all(n, gamma, static_cast<double>(rn.x / delta),
                                                          static_cast<double>(xq.x / delta), ext);
            const long double w = amp * e.w, wr = amp * e.w_r / delta, wn = amp * e.w_n / delta;
            // The extension's step-2h differences are squared relative to the value scale (quadratic
            // convergence of double-exponential rules, checked against the closed form at g = 1/2).
            const long double scale = std::fabs(e.w) + std::fabs(e.w_r) + std::fabs(e.w_n);
            auto sq = [&](long double d) -> long double { return scale > 0 ? d * d / scale : d; };
            const long double ew = amp * sq(e.err_w), er = amp * sq(e.err_r) / delta, en = amp * sq(e.err_n) / delta;
            const long double base = rn.w * xq.w * sphere * std::pow(rn.x, static_cast<long double>(n - 1));
            for (std::size_t q = 0; q < keys.size(); ++q) {
                const FKey& k = keys[q];
                long double f = 0, fe = 0;
                if (k.kind == 1) {
                    f = w * w;
                    fe = 2 * std::fabs(w) * ew;
                }
                if (k.kind == 2 || k.kind == 4) {
                    f += wr * wr;
                    fe += 2 * std::fabs(wr) * er;
                }
                if (k.kind == 3 || k.kind == 4) {
                    f += wn * wn;
                    fe += 2 * std::fabs(wn) * en;
                }
                const long double wgt = base * std::pow(xq.x, k.alpha - 2 * g) * std::pow(rn.x, static_cast<long double>(k.beta));
                acc[q].fine += wgt * f;
                if (rn.coarse && xq.coarse) acc[q].coarse += 4 * wgt * f;
                acc[q].ext_err += wgt * fe;
            }
        }
    }
    std::vector<NumericValue> out;
    for (const Acc& a : acc) {
        const long double d = std::fabs(a.fine - a.coarse);
        out.push_back({static_cast<double>(a.fine), static_cast<double>(d * d / std::fabs(a.fine) + a.ext_err)});
    }
    return out;
}

}  // namespace

std::string to_string(OracleMethod m) { return m == OracleMethod::PoissonPhysical ? "poisson_physical" : "fourier_fd"; }

std::vector<NumericValue> f_integral_oracle_batch(const std::vector<FKey>& keys, int n, double gamma,
                                                  OracleMethod method, const OracleOptions& opt) {
    check_keys(keys, method);
    if (!(gamma > 0 && gamma < 1) || !(n > 4 * gamma - 1)) throw ParameterError("f_integral_oracle: need 0 < g < 1, n > 4g - 1");
    if (!(opt.delta > 0)) throw ParameterError("f_integral_oracle: delta must be positive");
    if (method == OracleMethod::FourierFd && opt.delta != 1)
        throw ParameterError("f_integral_oracle: dilation is only supported by poisson_physical");
    std::vector<NumericValue> out =
        method == OracleMethod::FourierFd ? fourier_fd(keys, n, gamma) : poisson_physical(keys, n, gamma, opt.delta);
    const double tol = method == OracleMethod::FourierFd ? kFourierTolerance : kPoissonTolerance;
    for (std::size_t q = 0; q < out.size(); ++q) {
        const double rel = out[q].error / std::fabs(out[q].value);
        if (opt.enforce_tolerance && !(rel <= tol)) {
            std::ostringstream os;
            os << "f_integral_oracle(" << to_string(method) << "): " << describe(keys[q]) << " error estimate " << rel
               << " exceeds " << tol;
            throw QuadratureError(os.str(), rel);
        }
    }
    return out;
}

NumericValue f_integral_oracle(const FKey& key, int n, double gamma, OracleMethod method, const OracleOptions& opt) {
    return f_integral_oracle_batch({key}, n, gamma, method, opt).front();
}

NumericValue f_unit_numeric(int n, double gamma) {
    const NumericValue a = moment_numeric(MomentKind::A, n, gamma, 1);
    const NumericValue b = moment_numeric(MomentKind::B, n, gamma, 2);
    const double s = static_cast<double>(sphere_measure(n));
    return {s * a.value * b.value, s * (std::fabs(a.error * b.value) + std::fabs(a.value * b.error))};
}

}  // namespace bubble
