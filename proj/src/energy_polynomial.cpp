#include "bubble/energy_polynomial.hpp"

#include <sstream>

namespace bubble {

Rational bracket_product(int N, int m) {
    if (m < 1) throw std::invalid_argument("bracket_product: m must be at least 1");
    Rational r = 1;
    for (int k = 1; k <= m - 1; ++k) {
        const int factor = (2 * k + 3) * (N - 2 * (k + 1));
        if (factor == 0) {
            std::ostringstream os;
            os << "bracket_product: zero denominator N - 2(k+1) = 0 at N = " << N << ", k = " << k;
            throw std::domain_error(os.str());
        }
        r /= factor;
    }
    return r;
}

void require_dimension(int n, const Rational& gamma, int d0) {
    if (!(Rational(n) > 2 * gamma + 4 * (d0 + 1))) {
        std::ostringstream os;
        os << "dimension constraint violated: n > 2*gamma + 4(d0+1) fails for n = " << n << ", gamma = " << to_string(gamma)
           << ", d0 = " << d0;
        throw DimensionError(os.str());
    }
}

namespace {

enum class Weight { Density, Gradient, TangentialGradient };

// Pairs a radial average sum_k c_k s^k with F values. Density terms scale as
// delta^(alpha+beta+1) and gradient terms as delta^(alpha+beta-1), with t = delta^2.
Poly pair_with_f(const Poly& avg, Weight w, int alpha, FEngine& e) {
    std::vector<Rational> out;
    for (int k = 0; k <= avg.degree(); ++k) {
        const Rational& c = avg.coeffs()[k];
        if (c == 0) continue;
        const int beta = 2 * k;
        int kind = 1;
        int tpow = (alpha + beta + 1) / 2;
        if (w != Weight::Density) {
            kind = (w == Weight::Gradient) ? 4 : 2;
            tpow = (alpha + beta - 1) / 2;
        }
        if (static_cast<int>(out.size()) <= tpow) out.resize(tpow + 1, Rational(0));
        out[tpow] += c * e.f({kind, alpha, beta});
    }
    return Poly(std::move(out), 't');
}

int degree_of(const std::vector<Rational>& f) { return static_cast<int>(f.size()) - 1; }

Rational density_prefactor(int n, const Rational& g) { return rat(3, 2) * ((n - 1) * (n - 1) - (1 - 2 * g) * (1 - 2 * g)); }

Rational normal_prefactor(int n, const Rational& g) { return (n + 1) * (g - rat(1, 2)) - 2 * (g * g - rat(1, 4)); }

}  // namespace

Poly combine_blocks(int n, const Rational& gamma, int d0, const EnergyBlocks& b) {
    const int N = n + 1;
    Poly acc = b.p1 * density_prefactor(n, gamma);
    for (int m = 1; m <= static_cast<int>(b.p2.size()); ++m)
        acc += b.p2[m - 1] * ((1 - 2 * gamma) * bracket_product(N, m));
    for (int m = 1; m <= static_cast<int>(b.p3.size()); ++m)
        acc += b.p3[m - 1] * (normal_prefactor(n, gamma) * bracket_product(N, m + 1) * (2 * m + 3));
    (void)d0;
    return acc * (Rational(-1) / (24 * n * (n - 1)));
}

EnergyPoly assemble_P(FEngine& engine, const std::vector<Rational>& f) {
    const int n = engine.n();
    const Rational& g = engine.gamma();
    const int d0 = degree_of(f);
    require_dimension(n, g, d0);
    const int top = 2 * d0 + 2;
    const auto avgs = [&] {
        std::vector<Poly> v;
        for (int m = 0; m <= top; ++m) v.push_back(sphere_average_radial(f, n, m, Family::G).scalar);
        return v;
    }();
    EnergyPoly out;
    out.n = n;
    out.gamma = g;
    out.d0 = d0;
    out.f = f;
    // P_1 <- S_0 with weight xN^(1-2g); P_{2m} <- S_{m-1} with gradient weight xN^(1+2m-2g);
    // P_{3m} <- S_m with density weight xN^(1+2m-2g).
    out.blocks.p1 = pair_with_f(avgs[0], Weight::Density, 1, engine);
    for (int m = 1; m <= 2 * d0 + 2; ++m) out.blocks.p2.push_back(pair_with_f(avgs[m - 1], Weight::Gradient, 1 + 2 * m, engine));
    for (int m = 1; m <= 2 * d0 + 1; ++m) out.blocks.p3.push_back(pair_with_f(avgs[m], Weight::Density, 1 + 2 * m, engine));
    out.P = combine_blocks(n, g, d0, out.blocks);
    return out;
}

EnergyPoly assemble_P(int n, const Rational& gamma, const std::vector<Rational>& f) {
    FEngine e(n, gamma);
    return assemble_P(e, f);
}

namespace {
Poly combine_hessian(int n, const Rational& gamma, const HessianBlocks& b) {
    EnergyBlocks eb{b.p1, b.p2, b.p3};
    // -24n(n-1) P~ = -24n(n-1) P~_0 + (same combination as the energy).
    return combine_blocks(n, gamma, 0, eb) + b.p0;
}
}  // namespace

HessianPolyPair assemble_P_tilde(FEngine& engine, const std::vector<Rational>& f) {
    const int n = engine.n();
    const Rational& g = engine.gamma();
    const int d0 = degree_of(f);
    require_dimension(n, g, d0);
    const int top = 2 * d0 + 1;
    std::vector<RadialAverage> avgs;
    for (int m = 0; m <= top; ++m) avgs.push_back(sphere_average_radial(f, n, m, Family::GTilde));
    HessianPolyPair out;
    out.n = n;
    out.gamma = g;
    out.d0 = d0;
    out.f = f;
    // Hessian of the h-h gradient term: f^2 sum_l H_il H_jl |x|^-2 |grad W|^2, sphere value W~ s/(2n(n+2)).
    const Poly fp = Poly(f, 's');
    const Rational N(n);
    const Poly f2s = fp * fp * Poly::monomial(1 / (2 * N * (N + 2)), 1, 's');
    out.blocks1.p0 = pair_with_f(f2s, Weight::TangentialGradient, 1, engine);
    out.blocks2.p0 = Poly({}, 't');
    auto fill = [&](HessianBlocks& hb, bool tilde) {
        auto pick = [&](int m) -> const Poly& { return tilde ? avgs[m].w_tilde : avgs[m].delta_norm; };
        hb.p1 = pair_with_f(pick(0), Weight::Density, 1, engine);
        for (int m = 1; m <= 2 * d0 + 1; ++m) hb.p2.push_back(pair_with_f(pick(m - 1), Weight::Gradient, 1 + 2 * m, engine));
        for (int m = 1; m <= 2 * d0; ++m) hb.p3.push_back(pair_with_f(pick(m), Weight::Density, 1 + 2 * m, engine));
    };
    fill(out.blocks1, true);
    fill(out.blocks2, false);
    out.p_tilde_1 = combine_hessian(n, g, out.blocks1);
    out.p_tilde_2 = combine_hessian(n, g, out.blocks2);
    return out;
}

HessianPolyPair assemble_P_tilde(int n, const Rational& gamma, const std::vector<Rational>& f) {
    FEngine e(n, gamma);
    return assemble_P_tilde(e, f);
}

EnergyBlocks printed_blocks_d1(int n, const Rational& a0, const Rational& a1, const FSource& F) {
    const Rational N(n);
    auto f1 = [&](int a, int b) { return F({1, a, b}); };
    auto f4 = [&](int a, int b) { return F({4, a, b}); };
    EnergyBlocks b;
    const Rational inv = 1 / (N * (N + 2));
    // P_1, P_31, P_32, P_33 as printed; the P_2m blocks substitute F1(alpha,beta) -> F4(alpha+2,beta).
    auto p1 = [&](auto F_) {
        return Poly({0, 0, a0 * a0 * (N + 2) * F_(1, 2) * inv, 2 * a0 * a1 * (N + 4) * F_(1, 4) * inv,
                     a1 * a1 * (N + 8) * F_(1, 6) * inv},
                    't');
    };
    auto p31 = [&](auto F_) {
        return Poly({0, 0, 2 * a0 * a0 * N * (N + 2) * F_(3, 0) * inv, 8 * a0 * a1 * (N + 2) * (N + 4) * F_(3, 2) * inv,
                     6 * a1 * a1 * (N + 4) * (N + 8) * F_(3, 4) * inv},
                    't');
    };
    auto p32 = [&](auto F_) {
        return Poly({0, 0, 0, 16 * a0 * a1 * (N + 4) * F_(5, 0) / N, 24 * a1 * a1 * (N + 4) * (N + 8) * F_(5, 2) / N}, 't');
    };
    auto p33 = [&](auto F_) { return Poly({0, 0, 0, 0, 48 * a1 * a1 * (N + 4) * (N + 8) * F_(7, 0)}, 't'); };
    auto shifted = [&](int a, int bb) { return f4(a + 2, bb); };
    b.p1 = p1(f1);
    b.p3 = {p31(f1), p32(f1), p33(f1)};
    b.p2 = {p1(shifted), p31(shifted), p32(shifted), p33(shifted)};
    return b;
}

BoundaryReport boundary_consistency_check(int N, int m_min, int m_max) {
    BoundaryReport rep;
    auto note = [&](bool ok, const std::string& what) {
        rep.ok = rep.ok && ok;
        rep.lines.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
    };
    const Rational Nq(N);
    const Rational lhs = Rational(-2) / (Nq - 2) * (1 / (48 * (Nq - 1)));
    const Rational rhs = Rational(-1) / (24 * (Nq - 1) * (Nq - 2));
    note(lhs == rhs, "prefactor -2/(N-2) * 1/(48(N-1)) = " + to_string(lhs) + " vs -1/(24(N-1)(N-2)) = " + to_string(rhs));
    for (int m = m_min; m <= m_max; ++m) {
        const Rational bm = bracket_product(N, m);
        const Rational bn = bracket_product(N, m + 1);
        const Rational step = Rational((2 * m + 3) * (N - 2 * (m + 1)));
        // Laplacian of C_{2m} against C_{2(m+1)}.
        note(bm == step * bn, "Delta C_" + std::to_string(2 * m) + " = (2m+3)(N-2(m+1)) C_" + std::to_string(2 * m + 2));
        // Leading recursion D_{2(m+1)} = Delta D_{2m} / ((2m+3)(N-2(m+1))) with D_{2m} = bracket(m)/(48(N-1)) Delta^{m-1}.
        const Rational d_m = bm / (48 * (Nq - 1));
        const Rational d_next = bn / (48 * (Nq - 1));
        note(d_next == d_m / step, "D_" + std::to_string(2 * m + 2) + " leading coefficient telescopes");
        // C_{2m} equals -2/(N-2) times the z coefficient.
        const Rational c_m = Rational(-1) / (24 * (Nq - 1) * (Nq - 2)) * bm;
        note(c_m == Rational(-2) / (Nq - 2) * d_m, "C_" + std::to_string(2 * m) + " = -2/(N-2) * z coefficient");
    }
    return rep;
}

}  // namespace bubble
