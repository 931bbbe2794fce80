#pragma once

#include "bubble/fourier_engine.hpp"
#include "bubble/special_functions.hpp"

#include <string>
#include <vector>

namespace bubble {

// Two numeric evaluations of F_{k,n,g}(alpha, beta), independent of the symbolic engine.
// PoissonPhysical integrates the defining integral over (|xbar|, xN) with the numerically extended bubble.
// FourierFd integrates the Fourier side, with the radial Laplacians taken by finite differences of
// what(rho) phi(rho xN).
enum class OracleMethod { PoissonPhysical, FourierFd };

std::string to_string(OracleMethod m);

// Relative error targets the oracles are validated against.
inline constexpr double kPoissonTolerance = 1e-3;
inline constexpr double kFourierTolerance = 1e-6;

struct OracleOptions {
    // Dilation W_delta(x) = delta^{-(n-2g)/2} W(x / delta); PoissonPhysical only.
    double delta = 1;
    // When set, an error estimate above the method tolerance raises QuadratureError.
    bool enforce_tolerance = true;
};

// Keys of kind 1..4 (4 = 2 + 3) with beta even. PoissonPhysical requires alpha + beta <= 10 and
// FourierFd beta <= 10. One grid is shared by all keys of a call. Throws ParameterError on bad input
// and QuadratureError when the estimate exceeds the method tolerance.
std::vector<NumericValue> f_integral_oracle_batch(const std::vector<FKey>& keys, int n, double gamma,
                                                  OracleMethod method, const OracleOptions& opt = {});
NumericValue f_integral_oracle(const FKey& key, int n, double gamma, OracleMethod method,
                               const OracleOptions& opt = {});

// |S^{n-1}| A_1 B_2 with A_1, B_2 from moment_numeric; the unit in which the engine states F values.
NumericValue f_unit_numeric(int n, double gamma);

}  // namespace bubble
