// Printed closed forms for the weighted bubble integrals, transcribed verbatim
// (including factors that the engine later flags as misprints).
#include "bubble/fourier_engine.hpp"

namespace bubble {

namespace {

struct Ctx {
    Rational n, g;
    Rational mg(int k) const { return n - 2 * g - k; }  // n - 2g - k
    Rational pg(int k) const { return n + 2 * g - k; }  // n + 2g - k
    Rational nk(int k) const { return n - k; }
    Rational e() const { return 1 - 4 * g * g; }  // (1-2g)(1+2g)
    Rational gm(int k) const { return Rational(k * k) - g * g; }  // k^2 - g^2
};

Rational sq(const Rational& x) { return x * x; }

}  // namespace

std::vector<FKey> tabulated_keys() {
    return {{1, 1, 2}, {1, 1, 4}, {1, 1, 6}, {2, 3, 2}, {3, 3, 2}, {1, 3, 0}, {1, 3, 2}, {1, 3, 4}, {1, 5, 0},
            {1, 5, 2}, {1, 7, 0}, {2, 1, 2}, {2, 1, 4}, {2, 1, 6}, {2, 3, 4}, {2, 3, 6}, {2, 5, 0}, {2, 5, 2},
            {2, 5, 4}, {2, 7, 0}, {2, 7, 2}, {2, 9, 0}, {3, 3, 4}, {3, 3, 6}, {3, 5, 0}, {3, 5, 2}, {3, 5, 4},
            {3, 7, 0}, {3, 7, 2}, {3, 9, 0}};
}

std::optional<Rational> f_integral_table(const FKey& key, int n_int, const Rational& gamma) {
    const Ctx c{Rational(n_int), gamma};
    const Rational& n = c.n;
    const Rational& g = c.g;
    const Rational one_g2 = c.gm(1);
    const Rational four_g2 = c.gm(2);
    const Rational nine_g2 = c.gm(3);
    const Rational den4 = c.nk(4) * c.mg(4) * c.pg(4);
    const Rational den46 = c.nk(4) * c.nk(6) * c.mg(4) * c.pg(4) * c.mg(6) * c.pg(6);
    const Rational den468 = c.nk(4) * c.nk(6) * c.nk(8) * c.mg(4) * c.pg(4) * c.mg(6) * c.pg(6) * c.mg(8) * c.pg(8);
    // Printed variant with (n - 2g + 4) in place of (n + 2g - 4).
    const Rational alt = n - 2 * g + 4;
    const Rational den4_alt = c.nk(4) * c.mg(4) * alt;
    const Rational den46_alt = c.nk(4) * c.nk(6) * c.mg(4) * alt * c.mg(6) * c.pg(6);
    const Rational den468_alt = c.nk(4) * c.nk(6) * c.nk(8) * c.mg(4) * alt * c.mg(6) * c.pg(6) * c.mg(8) * c.pg(8);

    auto R1_14 = [&]() -> Rational { return c.e() * (10 * n * n - 80 * n + 177 - 12 * g * g); };
    auto R1_16 = [&]() -> Rational {
        return c.e() * (35 * pow_int(n, 4) - 700 * pow_int(n, 3) + 5299 * n * n - 17990 * n + 23469 + 80 * pow_int(g, 4) -
                        4 * g * g * (21 * n * n - 210 * n + 611));
    };
    auto R3_32 = [&]() -> Rational { return (1 - 2 * g) * (3 * n - 14 - 2 * g * (n + 2)); };
    auto R1_34 = [&]() -> Rational { return c.e() * (14 * n * n - 140 * n + 377 - 12 * g * g); };
    auto R2_14 = [&]() -> Rational { return c.e() * (10 * n * n - 40 * n + 57 - 12 * g * g); };
    auto R2_16 = [&]() -> Rational {
        return c.e() * (35 * pow_int(n, 4) - 420 * pow_int(n, 3) + 1939 * n * n - 4074 * n + 3645 + 80 * pow_int(g, 4) -
                        4 * g * g * (21 * n * n - 126 * n + 275));
    };
    auto R2_34 = [&]() -> Rational { return c.e() * (14 * n * n - 84 * n + 153 - 12 * g * g); };
    auto R2_36 = [&]() -> Rational {
        return c.e() * (9 * (7 * pow_int(n, 4) - 112 * pow_int(n, 3) + 685 * n * n - 1896 * n + 2105) + 80 * pow_int(g, 4) -
                        4 * g * g * (27 * n * n - 216 * n + 575));
    };
    auto R2_54 = [&]() -> Rational { return c.e() * (6 * n * n - 48 * n + 99 - 4 * g * g); };
    auto R3_34 = [&]() -> Rational {
        return (1 - 2 * g) * (42 * pow_int(n, 3) - 532 * n * n + 2103 * n - 2844 + 24 * pow_int(g, 3) * (n + 4) -
                              84 * g * g * (n - 4) - 14 * g * (2 * pow_int(n, 3) - 12 * n * n + 15 * n + 36));
    };
    auto R3_36 = [&]() -> Rational {
        return (1 - 2 * g) *
               (9 * (21 * pow_int(n, 5) - 518 * pow_int(n, 4) + 4931 * pow_int(n, 3) - 22922 * n * n + 52567 * n - 48810) -
                160 * pow_int(g, 5) * (n + 6) + 80 * pow_int(g, 4) * (11 * n - 42) +
                8 * pow_int(g, 3) * (27 * pow_int(n, 3) - 162 * n * n - 97 * n + 2550) -
                g * g * (756 * pow_int(n, 3) - 10584 * n * n + 50308 * n - 82200) -
                18 * g * (7 * pow_int(n, 5) - 126 * pow_int(n, 4) + 861 * pow_int(n, 3) - 2534 * n * n + 2153 * n + 2730));
    };
    auto R3_52 = [&]() -> Rational { return (1 - 2 * g) * ((3 * n - 22) - 2 * g * (n + 2)); };
    auto R3_54 = [&]() -> Rational {
        return (1 - 2 * g) * (3 * (6 * pow_int(n, 3) - 104 * n * n + 543 * n - 892) + 8 * pow_int(g, 3) * (n + 4) -
                              4 * g * g * (3 * pow_int(n, 3) + 7 * n - 44) + 2 * g * (48 * n * n - 83 * n - 116));
    };
    auto R3_72 = [&]() -> Rational { return (1 - 2 * g) * (3 * (n - 10) - 2 * g * (n + 2)); };

    const int kind = key.kind, a = key.alpha, b = key.beta;
    if (kind == 1 && a == 1 && b == 2) return n * (3 * sq(n - 3) + c.e()) / (3 * den4);
    if (kind == 1 && a == 1 && b == 4)
        return n * (n + 2) * (15 * sq(n - 3) * sq(n - 5) + R1_14()) / (15 * den46);
    if (kind == 1 && a == 1 && b == 6)
        return n * (n + 2) * (n + 4) * (35 * sq(n - 3) * sq(n - 5) * sq(n - 7) + R1_16()) / (35 * den468);
    if (kind == 2 && a == 3 && b == 2) return one_g2 * 2 * (n + 2) * (5 * (n - 1) * (n - 3) + c.e()) / (15 * den4);
    if (kind == 3 && a == 3 && b == 2)
        return 2 * (1 - g) * (2 - g) * (5 * (n - 1) * (n - 2) * (n - 3) - R3_32()) / (15 * den4);

    if (kind == 1 && a == 3 && b == 0) return 8 * (n - 3) * one_g2 / (3 * den4_alt);
    if (kind == 1 && a == 3 && b == 2)
        return 8 * (n - 3) * n * one_g2 * (5 * (n - 3) * (n - 5) + c.e()) / (15 * den46_alt);
    if (kind == 1 && a == 3 && b == 4)
        return 8 * (n - 3) * n * (n + 2) * one_g2 * (35 * (n - 3) * sq(n - 5) * (n - 7) + R1_34()) / (105 * den468_alt);
    if (kind == 1 && a == 5 && b == 0) return 128 * (n - 5) * (n - 3) * four_g2 * one_g2 / (15 * den46);
    if (kind == 1 && a == 5 && b == 2)
        return 128 * (n - 5) * (n - 3) * n * four_g2 * one_g2 * (7 * (n - 3) * (n - 7) + c.e()) / (105 * den468_alt);
    if (kind == 1 && a == 7 && b == 0)
        return 1024 * (n - 7) * (n - 5) * (n - 3) * nine_g2 * four_g2 * one_g2 / (35 * den468_alt);

    if (kind == 2 && a == 1 && b == 2) return (n + 2) * (3 * sq(n - 1) + c.e()) / (12 * (n - 1));
    if (kind == 2 && a == 1 && b == 4)
        return (n + 2) * (n + 4) * (15 * sq(n - 1) * sq(n - 3) + R2_14()) / (60 * (n - 1) * den4);
    if (kind == 2 && a == 1 && b == 6)
        return (n + 2) * (n + 4) * (n + 6) * (35 * sq(n - 1) * sq(n - 3) * sq(n - 5) + R2_16()) / (140 * (n - 1) * den46);
    if (kind == 2 && a == 3 && b == 4)
        return 2 * (n + 2) * (n + 4) * one_g2 * (35 * (n - 1) * sq(n - 3) * (n - 5) + R2_34()) / (105 * den46);
    if (kind == 2 && a == 3 && b == 6)
        return 2 * (n + 2) * (n + 4) * (n + 6) * one_g2 * (105 * (n - 1) * sq(n - 3) * sq(n - 5) * (n - 7) + R2_36()) /
               (315 * den468);
    if (kind == 2 && a == 5 && b == 0) return 32 * (n - 3) * four_g2 * one_g2 / (15 * den4);
    if (kind == 2 && a == 5 && b == 2)
        return 32 * (n - 3) * (n + 2) * four_g2 * one_g2 * (7 * (n - 1) * (n - 5) + c.e()) / (105 * den46);
    if (kind == 2 && a == 5 && b == 4)
        return 32 * (n - 3) * (n + 2) * (n + 4) * four_g2 * one_g2 * (21 * (n - 1) * (n - 3) * (n - 5) * (n - 7) + R2_54()) /
               (315 * den468);
    if (kind == 2 && a == 7 && b == 0) return 256 * (n - 5) * (n - 3) * nine_g2 * four_g2 * one_g2 / (35 * den46);
    if (kind == 2 && a == 7 && b == 2)
        return 256 * (n - 5) * (n - 3) * (n + 2) * nine_g2 * four_g2 * one_g2 * (9 * (n - 1) * (n - 7) + c.e()) /
               (315 * den468);
    if (kind == 2 && a == 9 && b == 0)
        return 8192 * (n - 7) * (n - 5) * (n - 3) * c.gm(4) * nine_g2 * four_g2 * one_g2 / (315 * den468);

    if (kind == 3 && a == 3 && b == 4)
        return 2 * (n + 2) * (2 - g) * (1 - g) * (35 * (n - 1) * sq(n - 3) * (n - 4) * (n - 5) - R3_34()) / (105 * den46);
    if (kind == 3 && a == 3 && b == 6)
        return 2 * (n + 2) * (n + 4) * (2 - g) * (1 - g) *
               (105 * (n - 1) * sq(n - 3) * sq(n - 5) * (n - 6) * (n - 7) - R3_36()) / (315 * den468);
    if (kind == 3 && a == 5 && b == 0) return 32 * (n - 3) * (3 - g) * (2 - g) * one_g2 / (15 * den4);
    if (kind == 3 && a == 5 && b == 2)
        return 32 * (n - 3) * (3 - g) * (2 - g) * one_g2 * (7 * (n - 1) * (n - 2) * (n - 5) - R3_52()) / (105 * den46);
    if (kind == 3 && a == 5 && b == 4)
        return 32 * (n - 3) * (n + 2) * (3 - g) * (2 - g) * one_g2 *
               (21 * (n - 7) * (n - 5) * (n - 4) * (n - 3) * (n - 1) - R3_54()) / (315 * den468);
    if (kind == 3 && a == 7 && b == 0)
        return 256 * (n - 5) * (n - 3) * (4 - g) * (3 - g) * four_g2 * one_g2 / (35 * den46);
    if (kind == 3 && a == 7 && b == 2)
        return 256 * (n - 5) * (n - 3) * (4 - g) * (3 - g) * four_g2 * one_g2 * (9 * (n - 7) * (n - 2) * (n - 1) - R3_72()) /
               (315 * den468);
    if (kind == 3 && a == 9 && b == 0)
        return 8192 * (n - 7) * (n - 5) * (n - 3) * (5 - g) * (4 - g) * nine_g2 * four_g2 * one_g2 / (315 * den468);
    return std::nullopt;
}

}  // namespace bubble
