#pragma once

#include <gmpxx.h>

#include <functional>
#include <string>
#include <vector>

namespace bubble {

// Canonical reduced rational; GMP keeps every arithmetic result reduced.
using Rational = mpq_class;

Rational rat(long p, long q = 1);
// Parses "p/q", "p" or a finite decimal such as "0.94".
Rational parse_rational(const std::string& s);
std::string to_string(const Rational& x);
double to_double(const Rational& x);
int sign(const Rational& x);
Rational pow_int(const Rational& x, int k);

// Dense univariate polynomial; coeffs[k] multiplies var^k, no trailing zeros.
class Poly {
public:
    Poly() = default;
    explicit Poly(std::vector<Rational> coeffs, char var = 't');
    static Poly constant(const Rational& c, char var = 't');
    static Poly monomial(const Rational& c, int k, char var = 't');

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const { return coeffs_.empty(); }
    char var() const { return var_; }
    const std::vector<Rational>& coeffs() const { return coeffs_; }
    Rational coeff(int k) const;

    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    Poly operator*(const Rational& c) const;
    Poly& operator+=(const Poly& o) { return *this = *this + o; }
    bool operator==(const Poly& o) const;

    Poly derive() const;
    Rational eval(const Rational& x) const;
    Poly with_var(char v) const;
    std::string str() const;

private:
    void trim();
    void check_var(const Poly& o) const;

    std::vector<Rational> coeffs_;
    char var_ = 't';
};

// base + coeff_sqrt * sqrt(radicand), radicand >= 0.
class QuadExt {
public:
    QuadExt() = default;
    QuadExt(Rational base, Rational coeff_sqrt, Rational radicand);
    static QuadExt rational(const Rational& x, const Rational& radicand);

    const Rational& base() const { return base_; }
    const Rational& coeff_sqrt() const { return coeff_; }
    const Rational& radicand() const { return rad_; }

    QuadExt operator+(const QuadExt& o) const;
    QuadExt operator-(const QuadExt& o) const;
    QuadExt operator*(const QuadExt& o) const;
    QuadExt operator*(const Rational& c) const;
    QuadExt operator+(const Rational& c) const;

    // Exact sign, decided by comparing base^2 with coeff^2 * radicand.
    int sign() const;
    double approx() const;
    std::string str() const;

private:
    void check_field(const QuadExt& o) const;

    Rational base_{0};
    Rational coeff_{0};
    Rational rad_{0};
};

QuadExt quad_field_eval(const Poly& p, const QuadExt& x);

struct Interval {
    Rational lo;
    Rational hi;
    bool exact_zero = false;
};

// Bisection on a sign-evaluable function; probes are midpoints of the current bracket.
Interval root_isolate(const std::function<int(const Rational&)>& sign_of, Rational lo, Rational hi,
                      const Rational& width);

}  // namespace bubble
