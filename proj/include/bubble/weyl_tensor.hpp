#pragma once

#include "bubble/exact_algebra.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace bubble {

// Dense rank-4 array, index (i,j,k,l) -> ((i*n + j)*n + k)*n + l.
class Tensor4 {
public:
    Tensor4() = default;
    explicit Tensor4(int dim) : dim_(dim), data_(static_cast<std::size_t>(dim) * dim * dim * dim, Rational(0)) {}
    int dim() const { return dim_; }
    Rational& operator()(int i, int j, int k, int l) { return data_[idx(i, j, k, l)]; }
    const Rational& operator()(int i, int j, int k, int l) const { return data_[idx(i, j, k, l)]; }
    bool operator==(const Tensor4& o) const { return dim_ == o.dim_ && data_ == o.data_; }
    const std::vector<Rational>& data() const { return data_; }

private:
    std::size_t idx(int i, int j, int k, int l) const {
        return ((static_cast<std::size_t>(i) * dim_ + j) * dim_ + k) * dim_ + l;
    }
    int dim_ = 0;
    std::vector<Rational> data_;
};

struct WeylTensor {
    Tensor4 w;
    int dim() const { return w.dim(); }
};

// Splittable 64-bit generator (splitmix64).
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next();
    SplitMix64 split();
    // Rational with denominator in 1..10 and numerator in [-10, 10].
    Rational small_rational();

private:
    std::uint64_t state_;
};

Tensor4 random_tensor(int dim, std::uint64_t seed);
WeylTensor project_weyl(const Tensor4& raw);

struct SymmetryReport {
    bool antisymmetric = true;
    bool pair_symmetric = true;
    bool bianchi = true;
    bool traceless = true;
    bool all() const { return antisymmetric && pair_symmetric && bianchi && traceless; }
};
SymmetryReport check_weyl_symmetries(const Tensor4& w);

using Matrix = std::vector<std::vector<Rational>>;

struct WeylInvariants {
    Rational w_norm_sq;
    Matrix w_tilde;
};
WeylInvariants weyl_invariants(const WeylTensor& W);

// Exact positive-semidefiniteness test by symmetric elimination; also returns leading minors.
bool is_psd(const Matrix& m, std::vector<Rational>* leading_minors = nullptr);

// Sparse multivariate polynomial with exponent vectors.
using Exponents = std::vector<std::uint8_t>;
using MPoly = std::map<Exponents, Rational>;

// Coefficient of |S^{n-1}| in the integral over the unit sphere.
Rational sphere_integrate(const MPoly& p, int dim);
Rational sphere_monomial(const Exponents& e, int dim);

enum class Identity {
    SphereHSq,          // sum int H_pq^2 = (1/(2(n+2))) sum int (d_k H_pq)^2
    XXHSq,              // sum int x_i x_j H_pq^2
    XXGradHSq,          // sum int x_i x_j (d_k H_pq)^2
    XHGradH,            // sum int x_i H_pq d_j H_pq
    GradHGradH,         // sum int d_i H_pq d_j H_pq
    XGradHHessH,        // sum int x_i d_k H_pq d_jk H_pq
    HHessH,             // sum int H_pq d_ij H_pq = 0
    HHContraction,      // sum_l int H_il H_jl
    HessianGram,        // sum d_ik H_pq d_jk H_pq = W~_ij pointwise
    TranslationMoment,  // W_ikjl int x^i x^j (x+tau)^k (x+tau)^l (x.tau)^t = 0
};
std::string identity_name(Identity id, int t = 0);

struct IdentityReport {
    std::string identity;
    int dim = 0;
    std::uint64_t seed = 0;
    bool equal = true;
    Rational lhs;  // first mismatching (or representative) entry
    Rational rhs;
};

IdentityReport verify_identity(Identity id, const WeylTensor& W, int t = 0, const std::vector<Rational>& tau = {});

// Every identity above (energy_exp_b for t = 0..4) on one tensor, sharing intermediate sums.
std::vector<IdentityReport> verify_all_identities(const WeylTensor& W, std::uint64_t seed, const std::vector<Rational>& tau = {});

// Radial channel recursion. Scalar family: G1 multiplies sum (dH)^2, G2 sum H^2, G3 |W|^2.
enum class Family { G, GTilde };

struct ChannelSet {
    std::vector<Poly> channels;  // 3 for G, 11 for GTilde, polynomials in s = r^2
};

constexpr int kTildeChannels = 11;

std::vector<ChannelSet> g_recursion(const std::vector<Rational>& f_coeffs, int n, int m_max, Family family);

// Unit-sphere averages of the channel integrands at radius r (as polynomials in s).
// Scalar family: coefficient of |W|^2. Hessian family: pair (W~ coefficient, delta |W|^2 coefficient).
struct RadialAverage {
    Poly scalar;     // scalar family
    Poly w_tilde;    // Hessian family
    Poly delta_norm; // Hessian family
};
RadialAverage sphere_average_radial(const std::vector<Rational>& f_coeffs, int n, int m, Family family);

}  // namespace bubble
