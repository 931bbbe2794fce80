#pragma once

#include "bubble/exact_algebra.hpp"
#include "bubble/fourier_engine.hpp"
#include "bubble/weyl_tensor.hpp"

#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace bubble {

// prod_{k=1}^{m-1} 1/((2k+3)(N-2(k+1))); 1 when m = 1.
Rational bracket_product(int N, int m);

struct EnergyBlocks {
    Poly p1;                  // density block with Sigma (d h)^2
    std::vector<Poly> p2;     // p2[m-1] = gradient block P_{2m}
    std::vector<Poly> p3;     // p3[m-1] = density block P_{3m}
};

struct EnergyPoly {
    Poly P;
    EnergyBlocks blocks;
    int n = 0;
    Rational gamma;
    int d0 = 0;
    std::vector<Rational> f;
    static constexpr const char* unit = "|S^{n-1}| |W|^2 A1 B2";
};

struct HessianBlocks {
    Poly p0;                  // translation of the h-h gradient term
    Poly p1;
    std::vector<Poly> p2;
    std::vector<Poly> p3;
};

struct HessianPolyPair {
    Poly p_tilde_1;  // multiplies W~_ij
    Poly p_tilde_2;  // multiplies delta_ij |W|^2
    HessianBlocks blocks1, blocks2;
    int n = 0;
    Rational gamma;
    int d0 = 0;
    std::vector<Rational> f;
};

class DimensionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Checks n > 2 gamma + 4(d0 + 1).
void require_dimension(int n, const Rational& gamma, int d0);

EnergyPoly assemble_P(FEngine& engine, const std::vector<Rational>& f_coeffs);
EnergyPoly assemble_P(int n, const Rational& gamma, const std::vector<Rational>& f_coeffs);
HessianPolyPair assemble_P_tilde(FEngine& engine, const std::vector<Rational>& f_coeffs);
HessianPolyPair assemble_P_tilde(int n, const Rational& gamma, const std::vector<Rational>& f_coeffs);

// Printed block formulas for d0 = 1 evaluated with an arbitrary F source.
using FSource = std::function<Rational(const FKey&)>;
EnergyBlocks printed_blocks_d1(int n, const Rational& a0, const Rational& a1, const FSource& F);
Poly combine_blocks(int n, const Rational& gamma, int d0, const EnergyBlocks& b);

struct BoundaryReport {
    bool ok = true;
    std::vector<std::string> lines;
};
BoundaryReport boundary_consistency_check(int N, int m_min, int m_max);

}  // namespace bubble
