#include "bubble/critical_analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

namespace bubble {

std::vector<Rational> f_family(int d0, const Rational& a0) {
    if (d0 == 1) return {a0, Rational(-1)};
    if (d0 == 4)
        return {a0, rat(-713925, 100), rat(146178, 100), rat(-882178, 10000), Rational(1)};
    throw std::invalid_argument("f_family: d0 must be 1 or 4");
}

int auto_d0(int n) { return n >= 52 ? 1 : 4; }

namespace {

Rational p_prime_at_one(FEngine& e, int d0, const Rational& a0) {
    return assemble_P(e, f_family(d0, a0)).P.derive().eval(Rational(1));
}

}  // namespace

QuadraticQ extract_Q(FEngine& e, int d0) {
    require_dimension(e.n(), e.gamma(), d0);
    const Rational y0 = p_prime_at_one(e, d0, Rational(0));
    const Rational y1 = p_prime_at_one(e, d0, Rational(1));
    const Rational y2 = p_prime_at_one(e, d0, Rational(2));
    QuadraticQ q;
    q.n = e.n();
    q.gamma = e.gamma();
    q.d0 = d0;
    q.b0 = y0;
    q.b2 = (y2 - 2 * y1 + y0) / 2;
    q.b1 = y1 - y0 - q.b2;
    const Rational y3 = p_prime_at_one(e, d0, Rational(3));
    if (q.eval(Rational(3)) != y3)
        throw InterpolationError("extract_Q: P'(1) is not quadratic in a0 (check at a0 = 3 failed)");
    return q;
}

QuadraticQ extract_Q(int n, const Rational& gamma, int d0) {
    FEngine e(n, gamma);
    return extract_Q(e, d0);
}

Rational disc_Q(int n, const Rational& gamma, int d0) { return extract_Q(n, gamma, d0).disc(); }

QuadExt select_a0(const QuadraticQ& q) {
    const Rational d = q.disc();
    if (sign(d) < 0) {
        std::ostringstream os;
        os << "no real critical coefficient: disc(Q) < 0 at n = " << q.n << ", gamma = " << to_string(q.gamma) << ", d0 = " << q.d0;
        throw NoCriticalCoefficient(os.str());
    }
    if (q.b2 == 0) throw NoCriticalCoefficient("select_a0: Q is not quadratic (b2 = 0)");
    const Rational inv = 1 / (2 * q.b2);
    return QuadExt(-q.b1 * inv, -inv, d);
}

QuadExt select_a0(int n, const Rational& gamma, int d0) { return select_a0(extract_Q(n, gamma, d0)); }

namespace {

// Coefficients of a polynomial whose coefficients are affine-quadratic in a0, evaluated at a0 in Q(sqrt d).
// Interpolates each coefficient through a0 = 0, 1, 2.
QuadExt eval_quadratic_in_a0(const Rational& y0, const Rational& y1, const Rational& y2, const QuadExt& a0) {
    const Rational c2 = (y2 - 2 * y1 + y0) / 2;
    const Rational c1 = y1 - y0 - c2;
    return QuadExt::rational(y0, a0.radicand()) + a0 * c1 + a0 * a0 * c2;
}

}  // namespace

MinimizerReport check_minimizer(int n, const Rational& gamma, std::optional<int> d0_opt) {
    const int d0 = d0_opt.value_or(auto_d0(n));
    FEngine e(n, gamma);
    const QuadraticQ q = extract_Q(e, d0);
    MinimizerReport rep;
    rep.n = n;
    rep.gamma = gamma;
    rep.d0 = d0;
    rep.a0_selected = select_a0(q);
    const QuadExt& a = rep.a0_selected;
    // Every quantity below is a quadratic polynomial in a0 since h is linear in f.
    Rational d1[3], d2[3], t1[3], t2[3];
    for (int k = 0; k < 3; ++k) {
        const auto f = f_family(d0, Rational(k));
        const Poly P = assemble_P(e, f).P;
        d1[k] = P.derive().eval(Rational(1));
        d2[k] = P.derive().derive().eval(Rational(1));
        const auto H = assemble_P_tilde(e, f);
        t1[k] = H.p_tilde_1.eval(Rational(1));
        t2[k] = H.p_tilde_2.eval(Rational(1));
    }
    rep.p1 = eval_quadratic_in_a0(d1[0], d1[1], d1[2], a);
    rep.p2 = eval_quadratic_in_a0(d2[0], d2[1], d2[2], a);
    rep.pt1 = eval_quadratic_in_a0(t1[0], t1[1], t1[2], a);
    rep.pt2 = eval_quadratic_in_a0(t2[0], t2[1], t2[2], a);
    rep.c1_ok = rep.p1.sign() == 0;
    rep.c2_ok = rep.p2.sign() > 0;
    rep.c3_ok = rep.pt1.sign() > 0 && rep.pt2.sign() > 0;
    return rep;
}

Interval find_gamma_star(const Rational& width) {
    auto sign_of = [](const Rational& g) { return sign(disc_Q(24, g, 4)); };
    return root_isolate(sign_of, rat(1, 2), rat(99, 100), width);
}

std::vector<SweepRow> sweep(const SweepOptions& opt) {
    struct Cell {
        int n;
        Rational gamma;
    };
    std::vector<Cell> cells;
    for (int n = opt.n_min; n <= opt.n_max; ++n)
        for (int k = 1; k <= opt.grid_count; ++k) cells.push_back({n, rat(k, opt.grid_count + 1)});
    std::vector<SweepRow> rows(cells.size());
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (size_t i = next++; i < cells.size(); i = next++) {
            SweepRow& r = rows[i];
            r.n = cells[i].n;
            r.gamma = cells[i].gamma;
            r.d0 = opt.fixed_d0.value_or(auto_d0(r.n));
            try {
                FEngine e(r.n, r.gamma);
                const QuadraticQ q = extract_Q(e, r.d0);
                r.disc_sign = sign(q.disc());
                if (opt.with_conditions && r.disc_sign > 0) r.conditions = check_minimizer(r.n, r.gamma, r.d0);
            } catch (const DimensionError& ex) {
                r.infeasible = ex.what();
            }
        }
    };
    const int threads = std::max(1, opt.threads);
    std::vector<std::thread> pool;
    for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream os;
    os << "n,gamma,d0,disc_sign,c1,c2,c3\n";
    for (const auto& r : rows) {
        os << r.n << ',' << to_string(r.gamma) << ',' << r.d0 << ',';
        if (!r.infeasible.empty()) {
            os << "infeasible,,,\n";
            continue;
        }
        os << r.disc_sign << ',';
        if (r.conditions)
            os << r.conditions->c1_ok << ',' << r.conditions->c2_ok << ',' << r.conditions->c3_ok;
        else
            os << ",,";
        os << '\n';
    }
    return os.str();
}

int n_of_gamma(const Rational& gamma) {
    int n0 = 52;
    for (int n = 51; n >= 1; --n) {
        if (!(Rational(n) > 2 * gamma + 20)) break;
        if (sign(disc_Q(n, gamma, 4)) <= 0) break;
        n0 = n;
    }
    return n0;
}

std::vector<FigurePoint> figure1(int samples) {
    std::vector<FigurePoint> pts;
    std::vector<Rational> vals;
    for (int k = 1; k < samples; ++k) {
        const Rational g = rat(k, samples);
        pts.push_back({g, 0.0});
        vals.push_back(disc_Q(24, g, 4));
    }
    double scale = 0;
    for (const auto& v : vals) scale = std::max(scale, std::fabs(to_double(v)));
    for (size_t i = 0; i < pts.size(); ++i) pts[i].disc_normalized = scale > 0 ? to_double(vals[i]) / scale : 0.0;
    return pts;
}

}  // namespace bubble
