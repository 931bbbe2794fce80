#pragma once

#include "bubble/exact_algebra.hpp"

#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>

namespace bubble {

enum class Side { Phi, What };

// Exponent int_part + gamma_mult * gamma, kept symbolic until evaluation.
struct Exponent {
    long int_part = 0;
    long gamma_mult = 0;
    auto operator<=>(const Exponent&) const = default;
};

// Moment of t^eta f^(j) f^(j') over (0, inf); f = phi or what.
struct MomentKey {
    Side side = Side::Phi;
    Exponent eta;
    int j = 0;
    int jp = 0;
    auto operator<=>(const MomentKey&) const = default;
};

std::string describe(const MomentKey& key);

struct MomentValue {
    Rational coeff;  // multiple of A_1 (phi side) or B_2 (what side)
    bool convergent = false;
    std::string violated_condition;
};

class DivergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Base exponents: A_1 integrates t^(1-2g) phi^2, B_2 integrates rho^(n-3+2g) what^2.
Exponent phi_base_exponent();
Exponent what_base_exponent(int n);

// Returns an empty string when the moment converges at 0, else the violated inequality.
std::string convergence_violation(int n, const Rational& gamma, const MomentKey& key);

// Exact reduction to the base moment. Throws DivergenceError / ParityError.
Rational reduce_moment(int n, const Rational& gamma, const MomentKey& key);

MomentValue reduce_phi_moment(int n, const Rational& gamma, const MomentKey& key);
MomentValue reduce_what_moment(int n, const Rational& gamma, const MomentKey& key);

// Memoizing front end for a fixed (n, gamma); safe for concurrent callers.
class MomentTable {
public:
    MomentTable(int n, Rational gamma) : n_(n), gamma_(std::move(gamma)) {}
    Rational get(const MomentKey& key) const;
    int n() const { return n_; }
    const Rational& gamma() const { return gamma_; }

private:
    int n_;
    Rational gamma_;
    mutable std::mutex mu_;
    mutable std::map<MomentKey, Rational> cache_;
};

}  // namespace bubble
