#pragma once

#include "bubble/energy_polynomial.hpp"
#include "bubble/exact_algebra.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace bubble {

// f family used for a given d0, with a0 left free: d0 = 1 is a0 - s, d0 = 4 is the lower-dimensional quartic.
std::vector<Rational> f_family(int d0, const Rational& a0);

// Policy used in the dimension table: d0 = 4 for n <= 51, d0 = 1 from 52 on.
int auto_d0(int n);

// Q(a0) = P'(1) = b0 + b1 a0 + b2 a0^2.
struct QuadraticQ {
    Rational b0, b1, b2;
    int n = 0;
    Rational gamma;
    int d0 = 0;
    Rational disc() const { return b1 * b1 - 4 * b0 * b2; }
    Rational eval(const Rational& a0) const { return b0 + a0 * (b1 + a0 * b2); }
};

class InterpolationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NoCriticalCoefficient : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

QuadraticQ extract_Q(FEngine& engine, int d0);
QuadraticQ extract_Q(int n, const Rational& gamma, int d0);
Rational disc_Q(int n, const Rational& gamma, int d0);

// (-b1 - sqrt(disc)) / (2 b2) as an element of Q(sqrt(disc)).
QuadExt select_a0(const QuadraticQ& q);
QuadExt select_a0(int n, const Rational& gamma, int d0);

struct MinimizerReport {
    int n = 0;
    Rational gamma;
    int d0 = 0;
    bool c1_ok = false, c2_ok = false, c3_ok = false;
    QuadExt a0_selected;
    QuadExt p1, p2, pt1, pt2;  // P'(1), P''(1), P~_1(1), P~_2(1) at the selected a0
    bool all() const { return c1_ok && c2_ok && c3_ok; }
};

MinimizerReport check_minimizer(int n, const Rational& gamma, std::optional<int> d0 = std::nullopt);

// Bisection for the sign change of gamma -> disc_Q(24, gamma, 4) on [1/2, 99/100].
Interval find_gamma_star(const Rational& width);

struct SweepRow {
    int n = 0;
    Rational gamma;
    int d0 = 0;
    int disc_sign = 0;
    std::optional<MinimizerReport> conditions;  // filled when disc > 0 and requested
    std::string infeasible;                     // violated precondition, if any
};

struct SweepOptions {
    int n_min = 24, n_max = 51;
    int grid_count = 99;             // gamma = k / (grid_count + 1)
    std::optional<int> fixed_d0;     // auto policy when empty
    bool with_conditions = false;
    int threads = 1;
};

std::vector<SweepRow> sweep(const SweepOptions& opt);
std::string sweep_csv(const std::vector<SweepRow>& rows);

// Smallest n0 with disc_Q(n, gamma, 4) > 0 for every n0 <= n <= 51.
int n_of_gamma(const Rational& gamma);

struct FigurePoint {
    Rational gamma;
    double disc_normalized;
};
// disc_Q(24, k/200, 4) for k = 1..199, scaled by the largest magnitude.
std::vector<FigurePoint> figure1(int samples = 200);

}  // namespace bubble
