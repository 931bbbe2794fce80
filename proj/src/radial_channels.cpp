#include "bubble/weyl_tensor.hpp"

#include <stdexcept>

namespace bubble {

namespace {

// For G(r) = p(r^2): G'' + (c/r) G' = 4 s p'' + (2 + 2c) p'.
Poly radial_op(const Poly& p, int c) {
    Poly d1 = p.derive();
    Poly d2 = d1.derive();
    return Poly::monomial(4, 1, 's') * d2 + d1 * Rational(2 + 2 * c);
}

Poly spoly(const std::vector<Rational>& c) { return Poly(c, 's'); }

ChannelSet tilde_from_scalar(const ChannelSet& g) {
    const Poly& g1 = g.channels[0];
    const Poly& g2 = g.channels[1];
    const Poly& g3 = g.channels[2];
    ChannelSet t;
    t.channels = {
        g1.derive() * Rational(2),           // delta sum (dH)^2
        g2.derive() * Rational(2),           // delta sum H^2
        g3.derive() * Rational(2),           // delta |W|^2
        g2.derive() * Rational(4),           // x_i H d_j H + (i<->j)
        g2 * Rational(2),                    // d_i H d_j H
        g1.derive() * Rational(4),           // x_i d_k H d_jk H + (i<->j)
        g1 * Rational(2),                    // W~_ij
        g1.derive().derive() * Rational(4),  // x_i x_j sum (dH)^2
        g2.derive().derive() * Rational(4),  // x_i x_j sum H^2
        g3.derive().derive() * Rational(4),  // x_i x_j |W|^2
        g2 * Rational(2),                    // H d_ij H
    };
    return t;
}

}  // namespace

std::vector<ChannelSet> g_recursion(const std::vector<Rational>& f_coeffs, int n, int m_max, Family family) {
    if (f_coeffs.empty()) throw std::invalid_argument("g_recursion: empty f");
    const int d0 = static_cast<int>(f_coeffs.size()) - 1;
    if (d0 > 4) throw std::invalid_argument("g_recursion: degree above 4");
    if (m_max < 0 || m_max > 2 * d0 + 2) throw std::invalid_argument("g_recursion: m_max out of range");
    const Poly f = spoly(f_coeffs);
    const Poly fp = f.derive();
    const Poly s = Poly::monomial(1, 1, 's');
    ChannelSet base;
    base.channels = {f * f, f * fp * Rational(8) + s * fp * fp * Rational(4), Poly({}, 's')};
    std::vector<ChannelSet> out;
    ChannelSet cur = base;
    for (int m = 0; m <= m_max; ++m) {
        out.push_back(family == Family::G ? cur : tilde_from_scalar(cur));
        ChannelSet next;
        next.channels = {radial_op(cur.channels[0], n + 3) + cur.channels[1] * Rational(2),
                         radial_op(cur.channels[1], n + 7),
                         radial_op(cur.channels[2], n - 1) + cur.channels[0] * Rational(2)};
        cur = std::move(next);
    }
    return out;
}

RadialAverage sphere_average_radial(const std::vector<Rational>& f_coeffs, int n, int m, Family family) {
    const auto sets = g_recursion(f_coeffs, n, m, family);
    const ChannelSet& c = sets.back();
    const Rational N(n);
    const Poly s1 = Poly::monomial(1, 1, 's');
    const Poly s2 = Poly::monomial(1, 2, 's');
    const Poly s3 = Poly::monomial(1, 3, 's');
    RadialAverage avg{Poly({}, 's'), Poly({}, 's'), Poly({}, 's')};
    if (family == Family::G) {
        // sum (dH)^2 averages to |W|^2 r^2 / n; sum H^2 to |W|^2 r^4 / (2n(n+2)).
        avg.scalar = c.channels[0] * s1 * (1 / N) + c.channels[1] * s2 * (1 / (2 * N * (N + 2))) + c.channels[2];
        return avg;
    }
    const auto& g = c.channels;
    const Rational a2 = 1 / (N * (N + 2));
    const Rational a3 = 1 / (N * (N + 2) * (N + 4));
    avg.w_tilde = g[3] * s2 * (2 * a2) + g[4] * s1 * (1 / N) + g[5] * s1 * (2 / N) + g[6] + g[7] * s2 * (2 * a2) +
                  g[8] * s3 * (2 * a3);
    avg.delta_norm = g[0] * s1 * (1 / N) + g[1] * s2 * (a2 / 2) + g[2] + g[7] * s2 * a2 + g[8] * s3 * (a3 / 2) +
                     g[9] * s1 * (1 / N);
    return avg;
}

}  // namespace bubble
