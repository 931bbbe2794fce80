#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bubble {

// K_nu(t) with an underflow flag; the value is 0 when underflow is set (t > 700).
struct BesselValue {
    double value = 0;
    bool underflow = false;
};

BesselValue bessel_k(double order, double t);

// Extended-precision kernels used by the oracles.
// Returns (K_nu(t), K_{nu+1}(t)) scaled by e^t; nu >= 0, t > 0.
std::pair<long double, long double> bessel_k_pair_scaled(long double order, long double t);
long double bessel_k_ld(long double order, long double t);

struct PaperConstants {
    double c_ng = 0;
    double p_ng = 0;
    double kappa_gamma = 0;
    double d1 = 0;
    double d2 = 0;
    double sphere_measure = 0;  // |S^{n-1}|
};

PaperConstants paper_constants(int n, double gamma);
long double log_d2(int n, long double gamma);
long double log_c_ng(int n, long double gamma);
long double sphere_measure(int n);  // |S^{n-1}| = 2 pi^{n/2} / Gamma(n/2)

struct ProfilePoint {
    double phi = 0;
    double phi_prime = 0;
    double what = 0;
    double what_prime = 0;
};

class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, double estimate) : std::runtime_error(what), estimate_(estimate) {}
    double estimate() const { return estimate_; }

private:
    double estimate_;
};

// phi = d1 t^g K_g(t), what = d2 t^-g K_g(t). Requires n > 4g - 1 and t > 0.
ProfilePoint eval_profiles(int n, double gamma, double t);

// Long-double profile values; what carries the d2 factor unless unit_d2 is set.
long double phi_ld(long double gamma, long double t);
long double phi_prime_ld(long double gamma, long double t);
long double what_ld(int n, long double gamma, long double rho, bool unit_d2 = false);
long double what_prime_ld(int n, long double gamma, long double rho, bool unit_d2 = false);

struct NumericValue {
    double value = 0;
    double error = 0;
};

enum class ProfileSide { Phi, What };

// int_0^inf t^eta f^(j) f^(jp) dt for f = phi or what; what without the d2 factor.
NumericValue profile_moment(ProfileSide side, int n, double gamma, double eta, int j, int jp);

enum class MomentKind { A, B };

// A_alpha = int t^(alpha-2g) phi^(j) phi^(jp), B_alpha = int rho^(-alpha+2g) what^(j) what^(jp) rho^(n-1).
// Throws DivergenceError naming the failed exponent inequality.
NumericValue moment_numeric(MomentKind kind, int n, double gamma, int alpha, int j = 0, int jp = 0);

// Boundary bubble w_1(r) = c_{n,g} (1 + r^2)^{-(n-2g)/2}.
double bubble_boundary(int n, double gamma, double r);

enum class ExtensionDeriv { None, R, N };

struct ExtensionValue {
    long double w = 0;
    long double w_r = 0;
    long double w_n = 0;
    // Absolute level-difference estimates (step halving in both quadrature variables).
    long double err_w = 0;
    long double err_r = 0;
    long double err_n = 0;
};

// Steps of the radial and angular double-exponential rules; the error estimate compares against step 2h.
// prune > 0 skips nodes whose contribution is bounded by prune * (|W| + |W_r| + |W_N|).
struct ExtensionOptions {
    double h_radial = 1.0 / 32;
    double h_angle = 1.0 / 32;
    double prune = 1e-16;
};

// W_1(r, xN) and its first derivatives from the Poisson-kernel convolution, radially reduced.
ExtensionValue bubble_extension_all(int n, double gamma, double r, double xn, const ExtensionOptions& opt = {});
NumericValue bubble_extension(int n, double gamma, double r, double xn, ExtensionDeriv deriv = ExtensionDeriv::None);

// Nodes and weights of the double-exponential rule on (0, inf): x = exp(pi/2 sinh t),
// t = k h with k h in [t_lo, t_hi]. Halving h keeps every old node.
struct QuadNode {
    long double x;
    long double w;
    bool coarse;  // node of the rule with step 2h
};
std::vector<QuadNode> de_half_line(long double h, long double t_lo, long double t_hi);

}  // namespace bubble
