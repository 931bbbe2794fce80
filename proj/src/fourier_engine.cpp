#include "bubble/fourier_engine.hpp"

#include <sstream>
#include <stdexcept>

namespace bubble {

TermSum TermSum::bubble(int n, const Rational& gamma) {
    TermSum t(n, gamma);
    t.add(TermKey{0, 0, 0, 0}, 1);
    return t;
}

void TermSum::add(const TermKey& key, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.emplace(key, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

void TermSum::add(const TermSum& other, const Rational& scale) {
    if (other.n_ != n_ || other.gamma_ != gamma_) throw std::invalid_argument("TermSum context mismatch");
    for (const auto& [k, c] : other.terms_) add(k, c * scale);
}

TermSum TermSum::scaled(const Rational& c) const {
    TermSum out(n_, gamma_);
    out.add(*this, c);
    return out;
}

TermSum TermSum::d_rho() const {
    TermSum out(n_, gamma_);
    const Rational aw = 1 + 2 * gamma_;
    const Rational ap = 1 - 2 * gamma_;
    for (const auto& [k, c] : terms_) {
        if (k.rho_pow != 0) out.add({k.rho_pow - 1, k.xn_pow, k.what_deriv, k.phi_deriv}, c * k.rho_pow);
        if (k.what_deriv == 0) {
            out.add({k.rho_pow, k.xn_pow, 1, k.phi_deriv}, c);
        } else {
            out.add({k.rho_pow, k.xn_pow, 0, k.phi_deriv}, c);
            out.add({k.rho_pow - 1, k.xn_pow, 1, k.phi_deriv}, -aw * c);
        }
        if (k.phi_deriv == 0) {
            out.add({k.rho_pow, k.xn_pow + 1, k.what_deriv, 1}, c);
        } else {
            out.add({k.rho_pow, k.xn_pow + 1, k.what_deriv, 0}, c);
            out.add({k.rho_pow - 1, k.xn_pow, k.what_deriv, 1}, -ap * c);
        }
    }
    return out;
}

TermSum TermSum::d_xn() const {
    TermSum out(n_, gamma_);
    const Rational ap = 1 - 2 * gamma_;
    for (const auto& [k, c] : terms_) {
        if (k.xn_pow != 0) out.add({k.rho_pow, k.xn_pow - 1, k.what_deriv, k.phi_deriv}, c * k.xn_pow);
        if (k.phi_deriv == 0) {
            out.add({k.rho_pow + 1, k.xn_pow, k.what_deriv, 1}, c);
        } else {
            out.add({k.rho_pow + 1, k.xn_pow, k.what_deriv, 0}, c);
            out.add({k.rho_pow, k.xn_pow - 1, k.what_deriv, 1}, -ap * c);
        }
    }
    return out;
}

TermSum TermSum::times_rho(int p) const {
    TermSum out(n_, gamma_);
    for (const auto& [k, c] : terms_) out.add({k.rho_pow + p, k.xn_pow, k.what_deriv, k.phi_deriv}, c);
    return out;
}

TermSum TermSum::laplacian() const {
    TermSum d = d_rho();
    TermSum out = d.d_rho();
    out.add(d.times_rho(-1), Rational(n_ - 1));
    return out;
}

std::vector<ProfileTerm> TermSum::terms() const {
    std::vector<ProfileTerm> v;
    v.reserve(terms_.size());
    for (const auto& [k, c] : terms_) v.push_back({c, k});
    return v;
}

std::string TermSum::str() const {
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << "(" << to_string(c) << ")*rho^" << k.rho_pow << "*xN^" << k.xn_pow << "*w" << std::string(k.what_deriv, '\'')
           << "*phi" << std::string(k.phi_deriv, '\'');
    }
    if (first) os << "0";
    return os.str();
}

TermSum apply_operator(const TermSum& input, OperatorKind op, int m) {
    switch (op) {
        case OperatorKind::RadialLaplacian:
            return input.laplacian();
        case OperatorKind::LaplacianPower: {
            if (m < 0) throw std::invalid_argument("laplacian power must be nonnegative");
            TermSum t = input;
            for (int i = 0; i < m; ++i) t = t.laplacian();
            return t;
        }
        case OperatorKind::VectorGradContraction: {
            if (m < 0) throw std::invalid_argument("vector contraction order must be nonnegative");
            TermSum s = apply_operator(input, OperatorKind::LaplacianPower, m).scaled(m % 2 ? -1 : 1);
            TermSum v = s.times_rho(1);
            if (m > 0) {
                TermSum prev = apply_operator(input, OperatorKind::LaplacianPower, m - 1).scaled((m - 1) % 2 ? -1 : 1);
                v.add(prev.d_rho(), Rational(-2 * m));
            }
            return v;
        }
        case OperatorKind::NormalDerivContraction: {
            if (m < 0) throw std::invalid_argument("normal contraction order must be nonnegative");
            return apply_operator(input.d_xn(), OperatorKind::LaplacianPower, m).scaled(m % 2 ? -1 : 1);
        }
    }
    throw std::logic_error("unknown operator");
}

Rational integrate_pair(const TermSum& a, const TermSum& b, PairWeight w, const MomentTable* table) {
    if (a.n() != b.n() || a.gamma() != b.gamma()) throw std::invalid_argument("integrate_pair: context mismatch");
    std::optional<MomentTable> local;
    if (!table) {
        local.emplace(a.n(), a.gamma());
        table = &*local;
    }
    const int n = a.n();
    Rational total = 0;
    const auto ta = a.terms();
    const auto tb = b.terms();
    for (const auto& x : ta) {
        for (const auto& y : tb) {
            const int A = x.key.rho_pow + y.key.rho_pow;
            const int B = x.key.xn_pow + y.key.xn_pow;
            // t = rho xN splits the double integral into a phi moment times a what moment.
            MomentKey phi{Side::Phi, {w.alpha + B, -2}, x.key.phi_deriv, y.key.phi_deriv};
            MomentKey what{Side::What, {A + n - 2 + w.extra_rho_pow - w.alpha - B, 2}, x.key.what_deriv, y.key.what_deriv};
            Rational mp, mw;
            try {
                mp = table->get(phi);
                mw = table->get(what);
            } catch (const DivergenceError& e) {
                std::ostringstream os;
                os << "integrate_pair: term pair (rho^" << x.key.rho_pow << " xN^" << x.key.xn_pow << ", rho^" << y.key.rho_pow
                   << " xN^" << y.key.xn_pow << ") " << e.what();
                throw DivergenceError(os.str());
            }
            total += x.coeff * y.coeff * mp * mw;
        }
    }
    return total;
}

std::string describe(const FKey& key) {
    std::ostringstream os;
    os << "F" << key.kind << "(" << key.alpha << "," << key.beta << ")";
    return os.str();
}

FEngine::FEngine(int n, Rational gamma) : n_(n), gamma_(gamma), table_(n, gamma) {}

const TermSum& FEngine::scalar_power(int k) {
    if (scalar_.empty()) scalar_.push_back(TermSum::bubble(n_, gamma_));
    while (static_cast<int>(scalar_.size()) <= k) scalar_.push_back(scalar_.back().laplacian().scaled(-1));
    return scalar_[k];
}

const TermSum& FEngine::vector_power(int k) {
    while (static_cast<int>(vector_.size()) <= k) {
        int m = static_cast<int>(vector_.size());
        TermSum v = scalar_power(m).times_rho(1);
        if (m > 0) v.add(scalar_power(m - 1).d_rho(), Rational(-2 * m));
        vector_.push_back(std::move(v));
    }
    return vector_[k];
}

const TermSum& FEngine::normal_power(int k) {
    if (normal_.empty()) normal_.push_back(TermSum::bubble(n_, gamma_).d_xn());
    while (static_cast<int>(normal_.size()) <= k) normal_.push_back(normal_.back().laplacian().scaled(-1));
    return normal_[k];
}

Rational FEngine::f(const FKey& key) {
    if (key.alpha < 1 || key.alpha % 2 == 0) throw std::invalid_argument("F integral: alpha must be odd positive");
    if (key.beta < 0 || key.beta % 2 != 0) throw std::invalid_argument("F integral: beta must be even nonnegative");
    if (key.kind < 1 || key.kind > 4) throw std::invalid_argument("F integral: kind must be 1..4");
    std::lock_guard<std::mutex> lock(mu_);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    const int k = key.beta / 2;
    const int k1 = k / 2;
    const int k2 = k - k1;
    const PairWeight w{key.alpha, 0};
    Rational value;
    switch (key.kind) {
        case 1:
            value = integrate_pair(scalar_power(k1), scalar_power(k2), w, &table_);
            break;
        case 2:
            value = integrate_pair(vector_power(k1), vector_power(k2), w, &table_);
            break;
        case 3:
            value = integrate_pair(normal_power(k1), normal_power(k2), w, &table_);
            break;
        default:
            value = integrate_pair(vector_power(k1), vector_power(k2), w, &table_) +
                    integrate_pair(normal_power(k1), normal_power(k2), w, &table_);
    }
    cache_.emplace(key, value);
    return value;
}

Rational f_integral_exact(const FKey& key, int n, const Rational& gamma) {
    FEngine e(n, gamma);
    return e.f(key);
}

}  // namespace bubble
