#pragma once

#include "bubble/exact_algebra.hpp"
#include "bubble/moment_reduction.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace bubble {

// rho^rho_pow * xN^xn_pow * what^(what_deriv)(rho) * phi^(phi_deriv)(rho xN)
struct TermKey {
    int rho_pow = 0;
    int xn_pow = 0;
    int what_deriv = 0;
    int phi_deriv = 0;
    auto operator<=>(const TermKey&) const = default;
};

struct ProfileTerm {
    Rational coeff;
    TermKey key;
};

// Canonical sum of profile terms: sorted by key, zero coefficients pruned.
class TermSum {
public:
    TermSum(int n, Rational gamma) : n_(n), gamma_(std::move(gamma)) {}
    // The Fourier transform of the extended bubble: what(rho) phi(rho xN).
    static TermSum bubble(int n, const Rational& gamma);

    void add(const TermKey& key, const Rational& c);
    void add(const TermSum& other, const Rational& scale = 1);
    TermSum scaled(const Rational& c) const;

    // d/drho; second derivatives are eliminated through the profile ODEs.
    TermSum d_rho() const;
    // d/dxN.
    TermSum d_xn() const;
    // Radial Laplacian in R^n: g'' + (n-1)/rho g'.
    TermSum laplacian() const;
    TermSum times_rho(int k) const;

    std::vector<ProfileTerm> terms() const;
    std::size_t size() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }
    int n() const { return n_; }
    const Rational& gamma() const { return gamma_; }
    bool operator==(const TermSum& o) const { return terms_ == o.terms_; }
    std::string str() const;

private:
    int n_;
    Rational gamma_;
    std::map<TermKey, Rational> terms_;
};

enum class OperatorKind { RadialLaplacian, LaplacianPower, VectorGradContraction, NormalDerivContraction };

// RadialLaplacian: Delta T. LaplacianPower(m): Delta^m T.
// VectorGradContraction(m): V_m with (-Delta)^m (xi_i T) = (xi_i / rho) V_m.
// NormalDerivContraction(m): (-Delta)^m (d/dxN T).
TermSum apply_operator(const TermSum& input, OperatorKind op, int m = 1);

struct PairWeight {
    int alpha = 1;
    int extra_rho_pow = 0;
};

// Coefficient of |S^{n-1}| A_1 B_2 in int int xN^(alpha-2g) a b rho^(n-1+extra) drho dxN.
Rational integrate_pair(const TermSum& a, const TermSum& b, PairWeight w, const MomentTable* table = nullptr);

struct FKey {
    int kind = 1;
    int alpha = 1;
    int beta = 0;
    auto operator<=>(const FKey&) const = default;
};

std::string describe(const FKey& key);

// Per-(n, gamma) engine with memoized operator chains and F values.
class FEngine {
public:
    FEngine(int n, Rational gamma);
    Rational f(const FKey& key);
    int n() const { return n_; }
    const Rational& gamma() const { return gamma_; }

private:
    const TermSum& scalar_power(int k);  // (-Delta)^k What
    const TermSum& vector_power(int k);  // V_k for xi_i What
    const TermSum& normal_power(int k);  // (-Delta)^k d_N What

    int n_;
    Rational gamma_;
    MomentTable table_;
    std::mutex mu_;
    std::vector<TermSum> scalar_, vector_, normal_;
    std::map<FKey, Rational> cache_;
};

Rational f_integral_exact(const FKey& key, int n, const Rational& gamma);

// Printed closed forms, evaluated verbatim. Returns nullopt for keys without a printed formula.
std::optional<Rational> f_integral_table(const FKey& key, int n, const Rational& gamma);
std::vector<FKey> tabulated_keys();

}  // namespace bubble
