#include "bubble/moment_reduction.hpp"

#include <sstream>

namespace bubble {

namespace {

Rational value_of(const Exponent& e, const Rational& gamma) { return Rational(e.int_part) + gamma * e.gamma_mult; }

// ODE coefficient a in f'' + (a/t) f' - f = 0.
Rational ode_coefficient(Side side, const Rational& gamma) { return side == Side::Phi ? Rational(1 - 2 * gamma) : Rational(1 + 2 * gamma); }

// Power of t in f^(j) near 0: phi ~ 1, phi' ~ t^(2g-1); what ~ t^(-2g), what' ~ t^(-2g-1).
Rational leading_power(Side side, const Rational& gamma, int deriv) {
    if (side == Side::Phi) return deriv == 0 ? Rational(0) : Rational(2 * gamma - 1);
    return deriv == 0 ? Rational(-2 * gamma) : Rational(-2 * gamma - 1);
}

std::string exponent_text(const Exponent& e) {
    std::ostringstream os;
    os << e.int_part;
    if (e.gamma_mult > 0) os << "+" << e.gamma_mult << "g";
    if (e.gamma_mult < 0) os << e.gamma_mult << "g";
    return os.str();
}

void require_convergent(int n, const Rational& gamma, const MomentKey& key, const char* context) {
    std::string v = convergence_violation(n, gamma, key);
    if (!v.empty()) throw DivergenceError(std::string(context) + ": " + describe(key) + " diverges at 0, needs " + v);
}

// I(eta) = ratio(eta) * I(eta - 2), from multiplying the ODE by t^eta f and integrating twice.
Rational descent_ratio(const Rational& eta, const Rational& a) {
    Rational h = (eta + 1) / 2;
    if (h == a) throw DivergenceError("descent ratio: (eta+1)/2 equals the ODE coefficient");
    Rational c = h / (h - a);
    Rational den = 1 + c;
    Rational num = (eta - a) * (eta - 1) / 2;
    if (den == 0 || num == 0) throw DivergenceError("descent ratio degenerate at eta = " + to_string(eta));
    return num / den;
}

Rational reduce_square(int n, const Rational& gamma, Side side, Exponent eta) {
    Exponent base = side == Side::Phi ? phi_base_exponent() : what_base_exponent(n);
    if (eta.gamma_mult != base.gamma_mult || (eta.int_part - base.int_part) % 2 != 0) {
        throw ParityError("exponent " + exponent_text(eta) + " cannot descend to base " + exponent_text(base));
    }
    Rational a = ode_coefficient(side, gamma);
    Rational coeff = 1;
    while (eta.int_part > base.int_part) {
        coeff *= descent_ratio(value_of(eta, gamma), a);
        eta.int_part -= 2;
    }
    while (eta.int_part < base.int_part) {
        eta.int_part += 2;
        coeff /= descent_ratio(value_of(eta, gamma), a);
    }
    return coeff;
}

}  // namespace

std::string describe(const MomentKey& key) {
    std::ostringstream os;
    os << (key.side == Side::Phi ? "phi" : "what") << "[t^(" << exponent_text(key.eta) << ") d" << key.j << " d"
       << key.jp << "]";
    return os.str();
}

Exponent phi_base_exponent() { return {1, -2}; }
Exponent what_base_exponent(int n) { return {n - 3, 2}; }

std::string convergence_violation(int n, const Rational& gamma, const MomentKey& key) {
    (void)n;
    Rational p = value_of(key.eta, gamma) + leading_power(key.side, gamma, key.j) + leading_power(key.side, gamma, key.jp);
    if (p > -1) return {};
    std::ostringstream os;
    os << exponent_text(key.eta) << " + (" << to_string(leading_power(key.side, gamma, key.j) + leading_power(key.side, gamma, key.jp))
       << ") > -1";
    return os.str();
}

Rational reduce_moment(int n, const Rational& gamma, const MomentKey& key) {
    MomentKey k = key;
    if (k.j > k.jp) std::swap(k.j, k.jp);
    require_convergent(n, gamma, k, "moment");
    Rational eta = value_of(k.eta, gamma);
    Rational a = ode_coefficient(k.side, gamma);
    if (k.j == 0 && k.jp == 0) return reduce_square(n, gamma, k.side, k.eta);
    if (k.j == 0 && k.jp == 1) {
        // int f f' t^eta = -(eta/2) int f^2 t^(eta-1); boundary term f^2 t^eta must vanish at 0.
        MomentKey lower{k.side, {k.eta.int_part - 1, k.eta.gamma_mult}, 0, 0};
        require_convergent(n, gamma, lower, "integration by parts boundary term");
        return -eta / 2 * reduce_square(n, gamma, k.side, lower.eta);
    }
    // int f'^2 t^eta = ((eta+1)/2) / ((eta+1)/2 - a) int f^2 t^eta.
    MomentKey same{k.side, k.eta, 0, 0};
    require_convergent(n, gamma, same, "derivative moment boundary term");
    Rational h = (eta + 1) / 2;
    if (h == a) throw DivergenceError("derivative moment: (eta+1)/2 equals the ODE coefficient");
    return h / (h - a) * reduce_square(n, gamma, k.side, k.eta);
}

namespace {
MomentValue wrap(int n, const Rational& gamma, const MomentKey& key, Side expected) {
    if (key.side != expected) throw std::invalid_argument("moment key has the wrong side");
    MomentValue v;
    std::string viol = convergence_violation(n, gamma, key);
    if (!viol.empty()) {
        v.convergent = false;
        v.violated_condition = viol;
        return v;
    }
    v.coeff = reduce_moment(n, gamma, key);
    v.convergent = true;
    return v;
}
}  // namespace

MomentValue reduce_phi_moment(int n, const Rational& gamma, const MomentKey& key) { return wrap(n, gamma, key, Side::Phi); }

MomentValue reduce_what_moment(int n, const Rational& gamma, const MomentKey& key) { return wrap(n, gamma, key, Side::What); }

Rational MomentTable::get(const MomentKey& key) const {
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
    }
    Rational v = reduce_moment(n_, gamma_, key);
    std::lock_guard<std::mutex> lock(mu_);
    cache_.emplace(key, v);
    return v;
}

}  // namespace bubble
