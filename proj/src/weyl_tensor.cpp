#include "bubble/weyl_tensor.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <tuple>
#include <numeric>
#include <stdexcept>

namespace bubble {

std::uint64_t SplitMix64::next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

SplitMix64 SplitMix64::split() { return SplitMix64(next()); }

Rational SplitMix64::small_rational() {
    const long num = static_cast<long>(next() % 21) - 10;
    const long den = static_cast<long>(next() % 10) + 1;
    return rat(num, den);
}

Tensor4 random_tensor(int dim, std::uint64_t seed) {
    SplitMix64 rng(seed);
    Tensor4 t(dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            for (int k = 0; k < dim; ++k)
                for (int l = 0; l < dim; ++l) t(i, j, k, l) = rng.small_rational();
    return t;
}

WeylTensor project_weyl(const Tensor4& raw) {
    const int n = raw.dim();
    if (n < 2) throw std::invalid_argument("project_weyl: dim must be at least 2");
    WeylTensor out{Tensor4(n)};
    if (n <= 3) return out;
    Tensor4 b(n);
    // Antisymmetry in each pair and pair exchange.
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    Rational v = raw(i, j, k, l) - raw(j, i, k, l) - raw(i, j, l, k) + raw(j, i, l, k);
                    v += raw(k, l, i, j) - raw(l, k, i, j) - raw(k, l, j, i) + raw(l, k, j, i);
                    b(i, j, k, l) = v / 8;
                }
    // The cyclic sum of an antisymmetric, pair-symmetric tensor is totally antisymmetric; remove a third of it.
    Tensor4 c(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    Rational cyc = b(i, j, k, l) + b(i, k, l, j) + b(i, l, j, k);
                    c(i, j, k, l) = b(i, j, k, l) - cyc / 3;
                }
    // Ric_jl = sum_i C_ijil; W = C - (Ric - s g / (2(n-1))) (Kulkarni-Nomizu) g / (n-2).
    std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n, Rational(0)));
    Rational scal = 0;
    for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) {
            for (int i = 0; i < n; ++i) a[j][l] += c(i, j, i, l);
            if (j == l) scal += a[j][l];
        }
    for (int j = 0; j < n; ++j) a[j][j] -= scal / (2 * (n - 1));
    const Rational inv = rat(1, n - 2);
    auto g = [](int p, int q) { return p == q ? 1 : 0; };
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    Rational kn = 0;
                    if (g(j, l)) kn += a[i][k];
                    if (g(i, k)) kn += a[j][l];
                    if (g(j, k)) kn -= a[i][l];
                    if (g(i, l)) kn -= a[j][k];
                    out.w(i, j, k, l) = c(i, j, k, l) - kn * inv;
                }
    return out;
}

SymmetryReport check_weyl_symmetries(const Tensor4& w) {
    const int n = w.dim();
    SymmetryReport r;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    const Rational& v = w(i, j, k, l);
                    if (v != -w(j, i, k, l) || v != -w(i, j, l, k)) r.antisymmetric = false;
                    if (v != w(k, l, i, j)) r.pair_symmetric = false;
                    if (v + w(i, k, l, j) + w(i, l, j, k) != 0) r.bianchi = false;
                }
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            Rational tr = 0;
            for (int i = 0; i < n; ++i) tr += w(i, j, i, k);
            if (tr != 0) r.traceless = false;
        }
    return r;
}

namespace {

using i128 = __int128;

i128 checked_mul(i128 a, i128 b) {
    i128 r;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("int128 overflow in exact tensor arithmetic");
    return r;
}

i128 checked_add(i128 a, i128 b) {
    i128 r;
    if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("int128 overflow in exact tensor arithmetic");
    return r;
}

mpz_class to_mpz(i128 v) {
    const bool neg = v < 0;
    unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1 : static_cast<unsigned __int128>(v);
    mpz_class hi(static_cast<unsigned long>(u >> 64));
    mpz_class lo(static_cast<unsigned long>(u & 0xFFFFFFFFFFFFFFFFULL));
    mpz_class r = (hi << 64) + lo;
    return neg ? mpz_class(-r) : r;
}

i128 from_mpz(const mpz_class& z) {
    if (mpz_sizeinbase(z.get_mpz_t(), 2) > 126) throw std::overflow_error("integer does not fit in int128");
    mpz_class a = abs(z);
    mpz_class hi = a >> 64;
    mpz_class lo = a - (hi << 64);
    i128 r = (static_cast<i128>(hi.get_ui()) << 64) | static_cast<i128>(lo.get_ui());
    return sgn(z) < 0 ? -r : r;
}

// Integer image of a tensor: entries D * W with a common denominator D.
struct ScaledTensor {
    int n = 0;
    std::vector<i128> v;
    mpz_class den = 1;
    i128 operator()(int i, int j, int k, int l) const { return v[((static_cast<size_t>(i) * n + j) * n + k) * n + l]; }
};

ScaledTensor scale(const Tensor4& t) {
    ScaledTensor s;
    s.n = t.dim();
    for (const auto& x : t.data()) s.den = lcm(s.den, mpz_class(x.get_den()));
    s.v.reserve(t.data().size());
    for (const auto& x : t.data()) s.v.push_back(from_mpz(mpz_class(x.get_num() * (s.den / x.get_den()))));
    return s;
}

// Monomial as a sorted list of variable indices (+1), 5 bits per slot, at most 12 factors.
using Key = std::uint64_t;
constexpr int kSlots = 12;

int key_degree(Key k) {
    int d = 0;
    while (k) {
        ++d;
        k >>= 5;
    }
    return d;
}

Key key_from_vars(std::vector<int> vars) {
    if (static_cast<int>(vars.size()) > kSlots) throw std::overflow_error("monomial degree above 12");
    std::sort(vars.begin(), vars.end());
    Key k = 0;
    for (int v : vars) k = (k << 5) | static_cast<Key>(v + 1);
    return k;
}

void key_vars(Key k, std::vector<int>& out) {
    out.clear();
    while (k) {
        out.push_back(static_cast<int>(k & 31) - 1);
        k >>= 5;
    }
    std::reverse(out.begin(), out.end());
}

// Merge of two sorted slot lists.
Key key_mul(Key a, Key b) {
    int va[kSlots], vb[kSlots];
    int na = 0, nb = 0;
    for (; a; a >>= 5) va[na++] = static_cast<int>(a & 31);
    for (; b; b >>= 5) vb[nb++] = static_cast<int>(b & 31);
    if (na + nb > kSlots) throw std::overflow_error("monomial degree above 12");
    // Slots are stored most significant first, so va[na-1] is the smallest variable.
    Key r = 0;
    int i = na - 1, j = nb - 1;
    while (i >= 0 || j >= 0) {
        const int v = (j < 0 || (i >= 0 && va[i] <= vb[j])) ? va[i--] : vb[j--];
        r = (r << 5) | static_cast<Key>(v);
    }
    return r;
}

std::uint32_t key_parity(Key k) {
    std::uint32_t m = 0;
    while (k) {
        m ^= 1u << ((k & 31) - 1);
        k >>= 5;
    }
    return m;
}

// prod (e_i - 1)!! for an even monomial, 0 otherwise.
i128 key_moment_numerator(Key k) {
    if (key_parity(k)) return 0;
    i128 r = 1;
    int run = 0;
    int prev = -1;
    auto flush = [&] {
        for (int e = run - 1; e > 1; e -= 2) r *= e;
    };
    while (k) {
        const int v = static_cast<int>(k & 31);
        if (v != prev) {
            flush();
            run = 0;
            prev = v;
        }
        ++run;
        k >>= 5;
    }
    flush();
    return r;
}

// prod_{k=0}^{d-1} (n + 2k).
mpz_class sphere_denominator(int n, int half_degree) {
    mpz_class d = 1;
    for (int k = 0; k < half_degree; ++k) d *= n + 2 * k;
    return d;
}

// Sparse polynomial with an open-addressing table; zero coefficients may linger and are skipped.
class IPoly {
public:
    IPoly() { rehash(16); }

    void add(Key k, i128 c) {
        if (c == 0) return;
        if (2 * (used_ + 1) > keys_.size()) rehash(2 * keys_.size());
        size_t h = slot(k);
        while (keys_[h] != kEmpty && keys_[h] != k) h = (h + 1) & (keys_.size() - 1);
        if (keys_[h] == kEmpty) {
            keys_[h] = k;
            vals_[h] = c;
            ++used_;
        } else {
            vals_[h] = checked_add(vals_[h], c);
        }
    }
    void add_poly(const IPoly& o, i128 scale = 1) {
        if (scale == 0) return;
        for (const auto& [k, c] : o.entries()) add(k, checked_mul(c, scale));
    }
    i128 coeff(Key k) const {
        size_t h = slot(k);
        while (keys_[h] != kEmpty) {
            if (keys_[h] == k) return vals_[h];
            h = (h + 1) & (keys_.size() - 1);
        }
        return 0;
    }
    std::vector<std::pair<Key, i128>> entries() const {
        std::vector<std::pair<Key, i128>> out;
        out.reserve(used_);
        for (size_t i = 0; i < keys_.size(); ++i)
            if (keys_[i] != kEmpty && vals_[i] != 0) out.push_back({keys_[i], vals_[i]});
        return out;
    }

private:
    static constexpr Key kEmpty = ~Key{0};
    size_t slot(Key k) const { return static_cast<size_t>((k * 0x9E3779B97F4A7C15ULL) >> 20) & (keys_.size() - 1); }
    void rehash(size_t cap) {
        std::vector<Key> ok = std::move(keys_);
        std::vector<i128> ov = std::move(vals_);
        keys_.assign(cap, kEmpty);
        vals_.assign(cap, 0);
        used_ = 0;
        for (size_t i = 0; i < ok.size(); ++i)
            if (ok[i] != kEmpty && ov[i] != 0) add(ok[i], ov[i]);
    }
    std::vector<Key> keys_;
    std::vector<i128> vals_;
    size_t used_ = 0;
};

IPoly mul(const IPoly& a, const IPoly& b) {
    IPoly r;
    const auto eb = b.entries();
    for (const auto& [ka, ca] : a.entries())
        for (const auto& [kb, cb] : eb) r.add(key_mul(ka, kb), checked_mul(ca, cb));
    return r;
}

IPoly derive(const IPoly& p, int var) {
    IPoly r;
    std::vector<int> vs;
    for (const auto& [k, c] : p.entries()) {
        key_vars(k, vs);
        const auto cnt = std::count(vs.begin(), vs.end(), var);
        if (cnt == 0) continue;
        vs.erase(std::find(vs.begin(), vs.end(), var));
        r.add(key_from_vars(vs), checked_mul(c, static_cast<i128>(cnt)));
    }
    return r;
}

IPoly monomial(std::vector<int> vars, i128 c = 1) {
    IPoly p;
    p.add(key_from_vars(std::move(vars)), c);
    return p;
}

// Per-degree integer numerators of a sphere integral; the degree fixes the denominator.
class MomentSum {
public:
    void add(Key k, i128 c) {
        const i128 m = key_moment_numerator(k);
        if (m == 0) return;
        i128& slot = num_[key_degree(k) / 2];
        slot = checked_add(slot, checked_mul(c, m));
    }
    Rational value(int n) const {
        Rational r = 0;
        for (int d = 0; d < kSlots / 2 + 1; ++d)
            if (num_[d] != 0) r += Rational(to_mpz(num_[d]), sphere_denominator(n, d));
        r.canonicalize();
        return r;
    }

private:
    std::array<i128, kSlots / 2 + 1> num_{};
};

// Coefficient of |S^{n-1}| in the sphere integral.
Rational integrate(const IPoly& p, int n) {
    MomentSum acc;
    for (const auto& [k, c] : p.entries()) acc.add(k, c);
    return acc.value(n);
}

// Terms sorted by parity mask, so a product integral only pairs terms with equal masks.
struct Grouped {
    std::vector<std::tuple<std::uint32_t, Key, i128>> t;
    explicit Grouped(const IPoly& p) {
        for (const auto& [k, c] : p.entries()) t.emplace_back(key_parity(k), k, c);
        std::sort(t.begin(), t.end());
    }
};

Rational integrate_product(const IPoly& a, const Grouped& b, int n) {
    MomentSum acc;
    for (const auto& [ka, ca] : a.entries()) {
        const std::uint32_t m = key_parity(ka);
        auto lo = std::lower_bound(b.t.begin(), b.t.end(), std::make_tuple(m, Key{0}, i128{0}),
                                   [](const auto& x, const auto& y) { return std::get<0>(x) < std::get<0>(y); });
        for (auto it = lo; it != b.t.end() && std::get<0>(*it) == m; ++it)
            acc.add(key_mul(ka, std::get<1>(*it)), checked_mul(ca, std::get<2>(*it)));
    }
    return acc.value(n);
}

Rational integrate_product(const IPoly& a, const IPoly& b, int n) { return integrate_product(a, Grouped(b), n); }

// Matrix of integrals of x_i x_j p in one pass: only masks {} and {i, j} contribute.
std::vector<Rational> integrate_xx(const IPoly& p, int n) {
    std::vector<MomentSum> acc(static_cast<size_t>(n) * n);
    for (const auto& [k, c] : p.entries()) {
        const std::uint32_t m = key_parity(k);
        if (m == 0) {
            for (int i = 0; i < n; ++i) acc[i * n + i].add(key_mul(k, key_from_vars({i, i})), c);
        } else if (std::popcount(m) == 2) {
            const int i = std::countr_zero(m);
            const int j = 31 - std::countl_zero(m);
            acc[i * n + j].add(key_mul(k, key_from_vars({i, j})), c);
        }
    }
    std::vector<Rational> out(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) out[i * n + j] = out[j * n + i] = acc[i * n + j].value(n);
    return out;
}

// Vector of integrals of x_i p in one pass.
std::vector<Rational> integrate_x(const IPoly& p, int n) {
    std::vector<MomentSum> acc(n);
    for (const auto& [k, c] : p.entries()) {
        const std::uint32_t m = key_parity(k);
        if (std::popcount(m) == 1) {
            const int i = std::countr_zero(m);
            acc[i].add(key_mul(k, key_from_vars({i})), c);
        }
    }
    std::vector<Rational> out(n);
    for (int i = 0; i < n; ++i) out[i] = acc[i].value(n);
    return out;
}

// H_pq(x) = W_pkql x^k x^l, scaled by the tensor denominator.
std::vector<IPoly> build_H(const ScaledTensor& w) {
    const int n = w.n;
    std::vector<IPoly> H(static_cast<size_t>(n) * n);
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) {
            IPoly& h = H[p * n + q];
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) h.add(key_from_vars({k, l}), w(p, k, q, l));
        }
    return H;
}

struct ScaledInvariants {
    i128 norm_sq = 0;             // D^2 |W|^2
    std::vector<i128> w_tilde;    // D^2 W~, row-major
};

ScaledInvariants scaled_invariants(const ScaledTensor& w) {
    const int n = w.n;
    ScaledInvariants s;
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k)
            for (int j = 0; j < n; ++j)
                for (int l = 0; l < n; ++l) {
                    const i128 v = checked_add(w(i, k, j, l), w(i, l, j, k));
                    s.norm_sq = checked_add(s.norm_sq, checked_mul(v, v));
                }
    // Slices S^i_{kpq} = W_ikpq + W_kqip; W~ is their Gram matrix.
    std::vector<i128> slice(static_cast<size_t>(n) * n * n * n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k)
            for (int p = 0; p < n; ++p)
                for (int q = 0; q < n; ++q)
                    slice[((static_cast<size_t>(i) * n + k) * n + p) * n + q] = checked_add(w(i, k, p, q), w(k, q, i, p));
    const size_t block = static_cast<size_t>(n) * n * n;
    s.w_tilde.assign(static_cast<size_t>(n) * n, 0);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            i128 acc = 0;
            for (size_t t = 0; t < block; ++t) acc = checked_add(acc, checked_mul(slice[i * block + t], slice[j * block + t]));
            s.w_tilde[i * n + j] = s.w_tilde[j * n + i] = acc;
        }
    return s;
}

Rational unscale(i128 v, const mpz_class& den_pow) {
    Rational r(to_mpz(v), den_pow);
    r.canonicalize();
    return r;
}

}  // namespace

WeylInvariants weyl_invariants(const WeylTensor& W) {
    const int n = W.dim();
    const ScaledTensor s = scale(W.w);
    const ScaledInvariants si = scaled_invariants(s);
    const mpz_class d2 = s.den * s.den;
    WeylInvariants out;
    out.w_norm_sq = unscale(si.norm_sq, d2);
    out.w_tilde.assign(n, std::vector<Rational>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out.w_tilde[i][j] = unscale(si.w_tilde[i * n + j], d2);
    return out;
}

bool is_psd(const Matrix& m, std::vector<Rational>* leading_minors) {
    const int n = static_cast<int>(m.size());
    if (leading_minors) {
        leading_minors->clear();
        for (int size = 1; size <= n; ++size) {
            Matrix a(size, std::vector<Rational>(size));
            for (int i = 0; i < size; ++i)
                for (int j = 0; j < size; ++j) a[i][j] = m[i][j];
            Rational det = 1;
            for (int c = 0; c < size; ++c) {
                int piv = c;
                while (piv < size && a[piv][c] == 0) ++piv;
                if (piv == size) {
                    det = 0;
                    break;
                }
                if (piv != c) {
                    std::swap(a[piv], a[c]);
                    det = -det;
                }
                det *= a[c][c];
                for (int r = c + 1; r < size; ++r) {
                    if (a[r][c] == 0) continue;
                    const Rational f = a[r][c] / a[c][c];
                    for (int k = c; k < size; ++k) a[r][k] -= f * a[c][k];
                }
            }
            leading_minors->push_back(det);
        }
    }
    // Symmetric elimination with diagonal pivots: a zero pivot forces a zero row.
    Matrix a = m;
    for (int c = 0; c < n; ++c) {
        if (sign(a[c][c]) < 0) return false;
        if (a[c][c] == 0) {
            for (int k = c + 1; k < n; ++k)
                if (a[c][k] != 0) return false;
            continue;
        }
        for (int r = c + 1; r < n; ++r) {
            if (a[r][c] == 0) continue;
            const Rational f = a[r][c] / a[c][c];
            for (int k = c; k < n; ++k) a[r][k] -= f * a[c][k];
        }
    }
    return true;
}

Rational sphere_monomial(const Exponents& e, int dim) {
    mpz_class num = 1;
    int total = 0;
    for (auto x : e) {
        if (x % 2) return Rational(0);
        for (int k = x - 1; k > 1; k -= 2) num *= k;
        total += x;
    }
    Rational r(num, sphere_denominator(dim, total / 2));
    r.canonicalize();
    return r;
}

Rational sphere_integrate(const MPoly& p, int dim) {
    Rational r = 0;
    for (const auto& [e, c] : p) r += c * sphere_monomial(e, dim);
    return r;
}

std::string identity_name(Identity id, int t) {
    switch (id) {
        case Identity::SphereHSq: return "sphere_h_sq";
        case Identity::XXHSq: return "xx_h_sq";
        case Identity::XXGradHSq: return "xx_grad_h_sq";
        case Identity::XHGradH: return "x_h_grad_h";
        case Identity::GradHGradH: return "grad_h_grad_h";
        case Identity::XGradHHessH: return "x_grad_h_hess_h";
        case Identity::HHessH: return "h_hess_h";
        case Identity::HHContraction: return "hh_contraction";
        case Identity::HessianGram: return "hessian_gram";
        case Identity::TranslationMoment: return "translation_moment.t" + std::to_string(t);
    }
    return "unknown";
}

namespace {

// Per-tensor data shared by all identity checks; expensive sums are built on first use.
class Workspace {
public:
    explicit Workspace(const WeylTensor& W) : n_(W.dim()), s_(scale(W.w)), inv_(weyl_invariants(W)), H_(build_H(s_)) {
        d2_ = s_.den * s_.den;
    }

    int n() const { return n_; }
    const ScaledTensor& scaled() const { return s_; }
    const WeylInvariants& inv() const { return inv_; }
    const IPoly& H(int p, int q) const { return H_[p * n_ + q]; }
    Rational unscale2(const Rational& v) const { return v / Rational(d2_); }
    const mpz_class& d2() const { return d2_; }

    const Grouped& grouped_H(int p, int q) {
        if (grouped_.empty())
            for (const auto& h : H_) grouped_.emplace_back(h);
        return grouped_[p * n_ + q];
    }

    // d_k H_pq at index (p*n+q)*n+k.
    const std::vector<IPoly>& grad() {
        if (grad_.empty()) {
            grad_.resize(static_cast<size_t>(n_) * n_ * n_);
            for (int p = 0; p < n_; ++p)
                for (int q = 0; q < n_; ++q)
                    for (int k = 0; k < n_; ++k) grad_[(p * n_ + q) * n_ + k] = derive(H(p, q), k);
        }
        return grad_;
    }

    // sum_pq H_pq^2, using H_pq = H_qp.
    const IPoly& sum_h_sq() {
        if (!have_hh_) {
            for (int p = 0; p < n_; ++p)
                for (int q = p; q < n_; ++q) hh_.add_poly(square(H(p, q)), p == q ? 1 : 2);
            have_hh_ = true;
        }
        return hh_;
    }

    // sum_kpq (d_k H_pq)^2.
    const IPoly& sum_dh_sq() {
        if (!have_dd_) {
            const auto& g = grad();
            for (int p = 0; p < n_; ++p)
                for (int q = p; q < n_; ++q)
                    for (int k = 0; k < n_; ++k) dd_.add_poly(square(g[(p * n_ + q) * n_ + k]), p == q ? 1 : 2);
            have_dd_ = true;
        }
        return dd_;
    }

private:
    static IPoly square(const IPoly& a) {
        const auto t = a.entries();
        IPoly r;
        for (size_t i = 0; i < t.size(); ++i) {
            r.add(key_mul(t[i].first, t[i].first), checked_mul(t[i].second, t[i].second));
            for (size_t j = i + 1; j < t.size(); ++j)
                r.add(key_mul(t[i].first, t[j].first), checked_mul(2, checked_mul(t[i].second, t[j].second)));
        }
        return r;
    }

    int n_;
    ScaledTensor s_;
    WeylInvariants inv_;
    std::vector<IPoly> H_;
    mpz_class d2_;
    std::vector<IPoly> grad_;
    std::vector<Grouped> grouped_;
    IPoly hh_, dd_;
    bool have_hh_ = false, have_dd_ = false;
};

// Compares an n x n matrix of exact LHS values with alpha W~ + beta |W|^2 delta; reports the first mismatch or entry (0,0).
void compare_matrix(IdentityReport& rep, const std::vector<Rational>& lhs, const WeylInvariants& inv, const Rational& alpha,
                    const Rational& beta, int n) {
    rep.equal = true;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const Rational rhs = alpha * inv.w_tilde[i][j] + (i == j ? Rational(beta * inv.w_norm_sq) : Rational(0));
            const Rational& l = lhs[i * n + j];
            if ((i == 0 && j == 0) || (rep.equal && l != rhs)) {
                rep.lhs = l;
                rep.rhs = rhs;
            }
            if (l != rhs) rep.equal = false;
        }
}

IdentityReport run_identity(Workspace& ws, Identity id, int t, const std::vector<Rational>& tau_in) {
    const int n = ws.n();
    IdentityReport rep;
    rep.identity = identity_name(id, t);
    rep.dim = n;
    const WeylInvariants& inv = ws.inv();
    const Rational N(n);
    std::vector<Rational> lhs(static_cast<size_t>(n) * n);

    switch (id) {
        case Identity::SphereHSq: {
            const Rational hh = ws.unscale2(integrate(ws.sum_h_sq(), n));
            const Rational dh = ws.unscale2(integrate(ws.sum_dh_sq(), n)) / (2 * (N + 2));
            const Rational rhs = inv.w_norm_sq / (2 * N * (N + 2));
            rep.lhs = hh == rhs ? dh : hh;
            rep.rhs = rhs;
            rep.equal = hh == rhs && dh == rhs;
            return rep;
        }
        case Identity::XXHSq:
        case Identity::XXGradHSq: {
            const IPoly& S = id == Identity::XXHSq ? ws.sum_h_sq() : ws.sum_dh_sq();
            lhs = integrate_xx(S, n);
            for (auto& v : lhs) v = ws.unscale2(v);
            if (id == Identity::XXHSq)
                compare_matrix(rep, lhs, inv, 2 / (N * (N + 2) * (N + 4)), 1 / (2 * N * (N + 2) * (N + 4)), n);
            else
                compare_matrix(rep, lhs, inv, 2 / (N * (N + 2)), 1 / (N * (N + 2)), n);
            return rep;
        }
        case Identity::XHGradH: {
            // sum_pq H_pq d_j H_pq = (1/2) d_j sum_pq H_pq^2.
            for (int j = 0; j < n; ++j) {
                const auto col = integrate_x(derive(ws.sum_h_sq(), j), n);
                for (int i = 0; i < n; ++i) lhs[i * n + j] = ws.unscale2(col[i]) / 2;
            }
            compare_matrix(rep, lhs, inv, 1 / (N * (N + 2)), Rational(0), n);
            return rep;
        }
        case Identity::GradHGradH: {
            const auto& g = ws.grad();
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j) {
                    Rational acc = 0;
                    for (int pq = 0; pq < n * n; ++pq) acc += integrate_product(g[pq * n + i], g[pq * n + j], n);
                    lhs[i * n + j] = lhs[j * n + i] = ws.unscale2(acc);
                }
            compare_matrix(rep, lhs, inv, 1 / N, Rational(0), n);
            return rep;
        }
        case Identity::XGradHHessH: {
            const auto& g = ws.grad();
            const ScaledTensor& s = ws.scaled();
            for (int j = 0; j < n; ++j) {
                // d_jk H_pq = W_pjqk + W_pkqj is constant.
                IPoly acc;
                for (int p = 0; p < n; ++p)
                    for (int q = 0; q < n; ++q)
                        for (int k = 0; k < n; ++k)
                            acc.add_poly(g[(p * n + q) * n + k], checked_add(s(p, j, q, k), s(p, k, q, j)));
                const auto col = integrate_x(acc, n);
                for (int i = 0; i < n; ++i) lhs[i * n + j] = ws.unscale2(col[i]);
            }
            compare_matrix(rep, lhs, inv, 1 / N, Rational(0), n);
            return rep;
        }
        case Identity::HHessH: {
            const ScaledTensor& s = ws.scaled();
            std::vector<Rational> mean(static_cast<size_t>(n) * n);
            for (int pq = 0; pq < n * n; ++pq) mean[pq] = integrate(ws.H(pq / n, pq % n), n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    Rational acc = 0;
                    for (int p = 0; p < n; ++p)
                        for (int q = 0; q < n; ++q) {
                            const i128 c = checked_add(s(p, i, q, j), s(p, j, q, i));
                            if (c != 0) acc += Rational(to_mpz(c)) * mean[p * n + q];
                        }
                    lhs[i * n + j] = ws.unscale2(acc);
                }
            compare_matrix(rep, lhs, inv, Rational(0), Rational(0), n);
            return rep;
        }
        case Identity::HHContraction: {
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j) {
                    Rational acc = 0;
                    for (int l = 0; l < n; ++l) acc += integrate_product(ws.H(i, l), ws.grouped_H(j, l), n);
                    lhs[i * n + j] = lhs[j * n + i] = ws.unscale2(acc);
                }
            compare_matrix(rep, lhs, inv, 1 / (2 * N * (N + 2)), Rational(0), n);
            return rep;
        }
        case Identity::HessianGram: {
            const ScaledTensor& s = ws.scaled();
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    i128 acc = 0;
                    for (int k = 0; k < n; ++k)
                        for (int p = 0; p < n; ++p)
                            for (int q = 0; q < n; ++q) {
                                const i128 a = checked_add(s(p, i, q, k), s(p, k, q, i));
                                const i128 b = checked_add(s(p, j, q, k), s(p, k, q, j));
                                acc = checked_add(acc, checked_mul(a, b));
                            }
                    lhs[i * n + j] = unscale(acc, ws.d2());
                }
            compare_matrix(rep, lhs, inv, Rational(1), Rational(0), n);
            return rep;
        }
        case Identity::TranslationMoment: {
            if (t < 0 || t > 4) throw std::invalid_argument("translation_moment: t must be in 0..4");
            std::vector<Rational> tau = tau_in;
            if (tau.empty()) {
                tau.assign(n, Rational(0));
                tau[0] = rat(1, 3);
                if (n > 1) tau[1] = rat(-2, 3);
            }
            if (static_cast<int>(tau.size()) != n) throw std::invalid_argument("translation_moment: tau has wrong length");
            mpz_class tden = 1;
            for (const auto& x : tau) tden = lcm(tden, mpz_class(x.get_den()));
            const i128 T = from_mpz(tden);
            std::vector<i128> ti(n);
            for (int k = 0; k < n; ++k) ti[k] = from_mpz(mpz_class(tau[k].get_num() * (tden / tau[k].get_den())));
            // W_ikjl x^i x^j y^k y^l with y = x + tau equals sum_kl H_kl y^k y^l.
            IPoly a;
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    IPoly yk = monomial({k}, T);
                    yk.add(0, ti[k]);
                    IPoly yl = monomial({l}, T);
                    yl.add(0, ti[l]);
                    a.add_poly(mul(ws.H(k, l), mul(yk, yl)));
                }
            IPoly b = monomial({}, 1);
            IPoly dot;
            for (int k = 0; k < n; ++k) dot.add(key_from_vars({k}), ti[k]);
            for (int e = 0; e < t; ++e) b = mul(b, dot);
            // Scale: D from W and tden^(2 + t) from tau.
            mpz_class den = ws.scaled().den;
            for (int e = 0; e < 2 + t; ++e) den *= tden;
            rep.lhs = integrate_product(a, b, n) / Rational(den);
            rep.rhs = 0;
            rep.equal = rep.lhs == 0;
            return rep;
        }
    }
    return rep;
}

}  // namespace

IdentityReport verify_identity(Identity id, const WeylTensor& W, int t, const std::vector<Rational>& tau) {
    Workspace ws(W);
    return run_identity(ws, id, t, tau);
}

std::vector<IdentityReport> verify_all_identities(const WeylTensor& W, std::uint64_t seed, const std::vector<Rational>& tau) {
    Workspace ws(W);
    std::vector<IdentityReport> out;
    for (Identity id : {Identity::SphereHSq, Identity::XXHSq, Identity::XXGradHSq, Identity::XHGradH, Identity::GradHGradH,
                        Identity::XGradHHessH, Identity::HHessH, Identity::HHContraction, Identity::HessianGram})
        out.push_back(run_identity(ws, id, 0, tau));
    for (int t = 0; t <= 4; ++t) out.push_back(run_identity(ws, Identity::TranslationMoment, t, tau));
    for (auto& r : out) r.seed = seed;
    return out;
}

}  // namespace bubble
