#include "bubble/exact_algebra.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace bubble {

Rational rat(long p, long q) {
    if (q == 0) throw std::domain_error("rational with zero denominator");
    Rational r(p, q);
    r.canonicalize();
    return r;
}

Rational parse_rational(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty rational literal");
    auto dot = s.find('.');
    if (dot != std::string::npos) {
        if (s.find('/') != std::string::npos) throw std::invalid_argument("bad rational literal: " + s);
        std::string digits = s.substr(0, dot) + s.substr(dot + 1);
        std::size_t frac = s.size() - dot - 1;
        Rational r;
        if (r.get_num().set_str(digits, 10) != 0) throw std::invalid_argument("bad rational literal: " + s);
        mpz_class den;
        mpz_ui_pow_ui(den.get_mpz_t(), 10, frac);
        r.get_den() = den;
        r.canonicalize();
        return r;
    }
    Rational r;
    if (r.set_str(s, 10) != 0) throw std::invalid_argument("bad rational literal: " + s);
    if (r.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
    r.canonicalize();
    return r;
}

std::string to_string(const Rational& x) {
    return x.get_num().get_str() + "/" + x.get_den().get_str();
}

double to_double(const Rational& x) { return x.get_d(); }

int sign(const Rational& x) { return sgn(x); }

Rational pow_int(const Rational& x, int k) {
    if (k < 0) return 1 / pow_int(x, -k);
    Rational r = 1;
    for (int i = 0; i < k; ++i) r *= x;
    return r;
}

Poly::Poly(std::vector<Rational> coeffs, char var) : coeffs_(std::move(coeffs)), var_(var) { trim(); }

Poly Poly::constant(const Rational& c, char var) { return Poly({c}, var); }

Poly Poly::monomial(const Rational& c, int k, char var) {
    std::vector<Rational> v(k + 1, Rational(0));
    v[k] = c;
    return Poly(std::move(v), var);
}

Rational Poly::coeff(int k) const {
    if (k < 0 || k > degree()) return 0;
    return coeffs_[k];
}

void Poly::trim() {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

void Poly::check_var(const Poly& o) const {
    if (var_ != o.var_ && !is_zero() && !o.is_zero())
        throw std::invalid_argument(std::string("polynomial variable mismatch: ") + var_ + " vs " + o.var_);
}

Poly Poly::operator+(const Poly& o) const {
    check_var(o);
    std::vector<Rational> v(std::max(coeffs_.size(), o.coeffs_.size()), Rational(0));
    for (std::size_t i = 0; i < coeffs_.size(); ++i) v[i] += coeffs_[i];
    for (std::size_t i = 0; i < o.coeffs_.size(); ++i) v[i] += o.coeffs_[i];
    return Poly(std::move(v), is_zero() ? o.var_ : var_);
}

Poly Poly::operator-(const Poly& o) const { return *this + o * Rational(-1); }

Poly Poly::operator*(const Poly& o) const {
    check_var(o);
    if (is_zero() || o.is_zero()) return Poly({}, var_);
    std::vector<Rational> v(coeffs_.size() + o.coeffs_.size() - 1, Rational(0));
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
        for (std::size_t j = 0; j < o.coeffs_.size(); ++j) v[i + j] += coeffs_[i] * o.coeffs_[j];
    return Poly(std::move(v), var_);
}

Poly Poly::operator*(const Rational& c) const {
    std::vector<Rational> v(coeffs_);
    for (auto& x : v) x *= c;
    return Poly(std::move(v), var_);
}

bool Poly::operator==(const Poly& o) const { return coeffs_ == o.coeffs_; }

Poly Poly::derive() const {
    if (coeffs_.size() <= 1) return Poly({}, var_);
    std::vector<Rational> v(coeffs_.size() - 1);
    for (std::size_t i = 1; i < coeffs_.size(); ++i) v[i - 1] = coeffs_[i] * static_cast<long>(i);
    return Poly(std::move(v), var_);
}

Rational Poly::eval(const Rational& x) const {
    Rational acc = 0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

Poly Poly::with_var(char v) const { return Poly(coeffs_, v); }

std::string Poly::str() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int k = degree(); k >= 0; --k) {
        if (coeffs_[k] == 0) continue;
        if (!first) os << " + ";
        first = false;
        os << "(" << to_string(coeffs_[k]) << ")";
        if (k >= 1) os << "*" << var_;
        if (k >= 2) os << "^" << k;
    }
    return os.str();
}

QuadExt::QuadExt(Rational base, Rational coeff_sqrt, Rational radicand)
    : base_(std::move(base)), coeff_(std::move(coeff_sqrt)), rad_(std::move(radicand)) {
    if (rad_ < 0) throw std::domain_error("negative radicand");
}

QuadExt QuadExt::rational(const Rational& x, const Rational& radicand) { return QuadExt(x, 0, radicand); }

void QuadExt::check_field(const QuadExt& o) const {
    if (rad_ != o.rad_) throw std::invalid_argument("quadratic field mismatch");
}

QuadExt QuadExt::operator+(const QuadExt& o) const {
    check_field(o);
    return QuadExt(base_ + o.base_, coeff_ + o.coeff_, rad_);
}

QuadExt QuadExt::operator-(const QuadExt& o) const {
    check_field(o);
    return QuadExt(base_ - o.base_, coeff_ - o.coeff_, rad_);
}

QuadExt QuadExt::operator*(const QuadExt& o) const {
    check_field(o);
    return QuadExt(base_ * o.base_ + coeff_ * o.coeff_ * rad_, base_ * o.coeff_ + coeff_ * o.base_, rad_);
}

QuadExt QuadExt::operator*(const Rational& c) const { return QuadExt(base_ * c, coeff_ * c, rad_); }

QuadExt QuadExt::operator+(const Rational& c) const { return QuadExt(base_ + c, coeff_, rad_); }

int QuadExt::sign() const {
    int sa = sgn(base_);
    int sb = (rad_ == 0) ? 0 : sgn(coeff_);
    if (sb == 0) return sa;
    if (sa == 0 || sa == sb) return sb;
    Rational a2 = base_ * base_;
    Rational b2d = coeff_ * coeff_ * rad_;
    if (a2 > b2d) return sa;
    if (a2 < b2d) return sb;
    return 0;
}

double QuadExt::approx() const { return base_.get_d() + coeff_.get_d() * std::sqrt(rad_.get_d()); }

std::string QuadExt::str() const {
    return to_string(base_) + " + (" + to_string(coeff_) + ")*sqrt(" + to_string(rad_) + ")";
}

QuadExt quad_field_eval(const Poly& p, const QuadExt& x) {
    QuadExt acc = QuadExt::rational(0, x.radicand());
    const auto& c = p.coeffs();
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
    return acc;
}

Interval root_isolate(const std::function<int(const Rational&)>& sign_of, Rational lo, Rational hi,
                      const Rational& width) {
    if (width <= 0) throw std::invalid_argument("root_isolate: width must be positive");
    if (lo > hi) std::swap(lo, hi);
    int slo = sign_of(lo);
    int shi = sign_of(hi);
    if (slo == 0) return {lo, lo, true};
    if (shi == 0) return {hi, hi, true};
    if (slo == shi) throw std::domain_error("root_isolate: endpoints have the same sign");
    while (hi - lo > width) {
        Rational mid = (lo + hi) / 2;
        int sm = sign_of(mid);
        if (sm == 0) return {mid, mid, true};
        if (sm == slo)
            lo = mid;
        else
            hi = mid;
    }
    return {lo, hi, false};
}

}  // namespace bubble
