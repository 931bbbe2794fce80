// Acceptance harness: one PASS/FAIL line per criterion, tolerances fixed below.
//   acceptance            run every criterion
//   acceptance 1 4 9      run the listed criteria
//   acceptance --expect-red 3
//                         run one criterion that is known to fail and exit 0 only if it fails with exactly
//                         the documented breakdown (so a regression or a silent fix both show up)
#include "bubble/critical_analysis.hpp"
#include "bubble/energy_polynomial.hpp"
#include "bubble/f_oracle.hpp"
#include "bubble/moment_reduction.hpp"
#include "bubble/verification.hpp"
#include "bubble/weyl_tensor.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <map>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>

using namespace bubble;

namespace {

constexpr double kGammaStarSlack = 1e-5;
constexpr double kOracleFd = kFourierTolerance;       // 1e-6 relative
constexpr double kOraclePhysical = kPoissonTolerance; // 1e-3 relative
constexpr int kFlaggedEntryBudget = 3;
constexpr int kIdentitySeeds = 20;
constexpr std::uint64_t kIdentityBaseSeed = 20240101;

struct Outcome {
    bool pass = false;
    std::string detail;
    // Only meaningful for criteria expected to fail: whether the failure is the documented one.
    bool documented_red = false;
};

std::string dec(double x, int digits = 6) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

Outcome gamma_star() {
    const Interval iv = find_gamma_star(rat(1, 10000000));
    const Rational target = rat(940197, 1000000);
    const Rational slack = rat(1, 100000);
    const bool sign_change = sign(disc_Q(24, iv.lo, 4)) * sign(disc_Q(24, iv.hi, 4)) == -1;
    const bool near = abs(Rational(iv.lo - target)) <= slack && abs(Rational(iv.hi - target)) <= slack;
    const bool narrow = Rational(iv.hi - iv.lo) <= rat(1, 10000000);
    return {sign_change && near && narrow,
            "gamma* in [" + dec(to_double(iv.lo), 12) + ", " + dec(to_double(iv.hi), 12) + "], |bracket - 0.940197| <= " +
                dec(kGammaStarSlack)};
}

Outcome dimension_table() {
    SweepOptions opt;
    opt.n_min = 23;
    opt.n_max = 80;
    opt.grid_count = 99;  // gamma = k/100
    opt.threads = std::max(1u, std::thread::hardware_concurrency());
    const auto rows = sweep(opt);
    std::map<int, std::vector<const SweepRow*>> by_n;
    for (const auto& r : rows) by_n[r.n].push_back(&r);
    std::vector<std::string> bad;
    for (const auto& [n, cells] : by_n) {
        const int want_d0 = n >= 52 ? 1 : 4;
        int changes = 0;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            const SweepRow& c = *cells[i];
            if (c.d0 != want_d0) bad.push_back("d0 at n=" + std::to_string(n));
            if (i > 0 && cells[i - 1]->disc_sign != c.disc_sign) ++changes;
            if (n == 23 && c.disc_sign >= 0) bad.push_back("disc >= 0 at n=23, gamma=" + to_string(c.gamma));
            if (n >= 25 && c.disc_sign <= 0) bad.push_back("disc <= 0 at n=" + std::to_string(n) + ", gamma=" + to_string(c.gamma));
        }
        if (n == 24 && changes != 1) bad.push_back("n=24 has " + std::to_string(changes) + " sign changes");
    }
    std::string detail = std::to_string(rows.size()) + " cells, n = 23..80, gamma = k/100";
    if (!bad.empty()) detail += "; first problem: " + bad.front();
    return {bad.empty(), detail};
}

// The misprints established in the ledger: five F1 keys print a factor (n - 2g + 4), F3(5,4) has a wrong
// remainder term. Every one must be confirmed by both oracles.
const std::set<std::tuple<int, int, int>>& documented_table_errata() {
    static const std::set<std::tuple<int, int, int>> keys{{1, 3, 0}, {1, 3, 2}, {1, 3, 4}, {1, 5, 2}, {1, 7, 0}, {3, 5, 4}};
    return keys;
}

Outcome table_regression() {
    const TableComparison cmp = compare_with_table(true);
    std::set<std::tuple<int, int, int>> keys;
    bool adjudicated = true;
    std::string unresolved;
    for (const auto& e : cmp.mismatches) {
        keys.insert({e.key.kind, e.key.alpha, e.key.beta});
        if (!(e.fourier_sides_with_engine() && e.physical_sides_with_engine())) {
            adjudicated = false;
            if (unresolved.empty()) unresolved = describe(e.key) + " at n=" + std::to_string(e.n) + ", g=" + to_string(e.gamma);
        }
    }
    std::string names;
    for (const auto& [k, a, b] : keys) names += (names.empty() ? "" : " ") + describe(FKey{k, a, b});
    Outcome o;
    o.pass = static_cast<int>(keys.size()) <= kFlaggedEntryBudget && adjudicated;
    o.detail = std::to_string(cmp.compared) + " printed values compared at 5 pairs; " + std::to_string(cmp.mismatches.size()) +
               " mismatches over " + std::to_string(keys.size()) + " distinct keys (budget " + std::to_string(kFlaggedEntryBudget) +
               "): " + names + "; oracles side with engine on all: " + (adjudicated ? "yes" : "no, " + unresolved);
    o.documented_red = !o.pass && adjudicated && keys == documented_table_errata();
    return o;
}

Outcome oracle_agreement() {
    const std::vector<FKey> keys{{1, 1, 0}, {1, 1, 2}, {2, 1, 2}, {4, 3, 0}, {1, 3, 2}};
    const int n = 25;
    const Rational g = rat(1, 2);
    FEngine engine(n, g);
    const double unit = f_unit_numeric(n, 0.5).value;
    const auto fd = f_integral_oracle_batch(keys, n, 0.5, OracleMethod::FourierFd);
    const auto ph = f_integral_oracle_batch(keys, n, 0.5, OracleMethod::PoissonPhysical);
    double worst_fd = 0, worst_ph = 0;
    for (std::size_t i = 0; i < keys.size(); ++i) {
        const double target = to_double(engine.f(keys[i])) * unit;
        worst_fd = std::max(worst_fd, rel(fd[i].value, target));
        worst_ph = std::max(worst_ph, rel(ph[i].value, target));
    }
    return {worst_fd <= kOracleFd && worst_ph <= kOraclePhysical,
            "5 keys at (25, 1/2): fourier_fd worst " + dec(worst_fd) + " <= " + dec(kOracleFd) + ", poisson_physical worst " +
                dec(worst_ph) + " <= " + dec(kOraclePhysical)};
}

Outcome check_lines(const std::vector<CheckLine>& lines) {
    Outcome o{true, ""};
    for (const auto& l : lines) {
        o.pass = o.pass && l.pass;
        o.detail += (o.detail.empty() ? "" : "; ") + l.name + " " + dec(l.measured) + " <= " + dec(l.tolerance);
    }
    return o;
}

Outcome tensor_identities() {
    int rows = 0, unequal = 0;
    std::string first_bad;
    for (int dim : {4, 5, 6, 24}) {
        const IdentityRun run = run_identities(dim, kIdentitySeeds, kIdentityBaseSeed + dim);
        for (const auto& r : run.rows) {
            ++rows;
            if (!r.equal) {
                ++unequal;
                if (first_bad.empty()) first_bad = r.identity + " dim " + std::to_string(dim);
            }
        }
    }
    return {unequal == 0, std::to_string(rows) + " exact comparisons over dims 4, 5, 6, 24 with " + std::to_string(kIdentitySeeds) +
                              " tensors each; unequal: " + std::to_string(unequal) + (first_bad.empty() ? "" : " (" + first_bad + ")")};
}

Outcome polynomial_regression() {
    // gamma = 1/2 is avoided: there the prefactors of P_32 and P_23 in P vanish and a misprint there is invisible.
    const std::vector<std::pair<int, Rational>> pairs{{25, rat(1, 4)}, {52, rat(1, 4)}, {60, rat(4, 5)}};
    const Rational a0 = rat(7, 3), a1 = -1;
    std::vector<std::string> mismatched;
    bool only_cubic_of_p32 = true;
    bool vanishing = true;
    for (const auto& [n, g] : pairs) {
        FEngine e(n, g);
        const EnergyPoly got = assemble_P(e, {a0, a1});
        const EnergyBlocks printed = printed_blocks_d1(n, a0, a1, [&](const FKey& k) { return e.f(k); });
        const Poly printed_P = combine_blocks(n, g, 1, printed);
        vanishing = vanishing && got.P.coeff(0) == 0 && got.P.coeff(1) == 0;
        for (int k = 0; k <= std::max(got.P.degree(), printed_P.degree()); ++k)
            if (got.P.coeff(k) != printed_P.coeff(k)) mismatched.push_back("t^" + std::to_string(k) + " at n=" + std::to_string(n));
        // Block-level breakdown: the printed P_32 (and P_23, built from the same display) differ only in t^3,
        // by exactly the factor n.
        auto only_t3 = [&](const Poly& a, const Poly& b) {
            for (int k = 0; k <= std::max(a.degree(), b.degree()); ++k)
                if (k == 3 ? a.coeff(3) != Rational(n * b.coeff(3)) || a.coeff(3) == b.coeff(3) : a.coeff(k) != b.coeff(k)) return false;
            return true;
        };
        only_cubic_of_p32 = only_cubic_of_p32 && got.blocks.p1 == printed.p1 && got.blocks.p3[0] == printed.p3[0] &&
                            got.blocks.p3[2] == printed.p3[2] && got.blocks.p2[0] == printed.p2[0] &&
                            got.blocks.p2[1] == printed.p2[1] && got.blocks.p2[3] == printed.p2[3] &&
                            only_t3(got.blocks.p3[1], printed.p3[1]) && only_t3(got.blocks.p2[2], printed.p2[2]);
    }
    bool annihilated = true;
    for (int d0 : {1, 4}) {
        std::vector<Rational> f(d0 + 1);
        for (int k = 0; k <= d0; ++k) f[k] = rat(k % 2 ? -(k + 2) : k + 1, k + 3);
        for (int n : {25, 30, 52})
            annihilated = annihilated && sphere_average_radial(f, n, 2 * d0 + 2, Family::G).scalar.is_zero();
    }
    Outcome o;
    o.pass = mismatched.empty() && annihilated && vanishing;
    std::string list;
    for (const auto& m : mismatched) list += (list.empty() ? "" : ", ") + m;
    o.detail = "coefficient mismatches with the printed d0 = 1 blocks: " + (list.empty() ? std::string("none") : list) +
               "; all confined to the t^3 term of P_32/P_23, off by a factor n: " + (only_cubic_of_p32 ? "yes" : "no") +
               "; degree annihilation m = 2d0+2: " + (annihilated ? "yes" : "no") + "; P(0) = P'(0) = 0: " + (vanishing ? "yes" : "no");
    o.documented_red = !o.pass && only_cubic_of_p32 && annihilated && vanishing && mismatched.size() == pairs.size();
    return o;
}

Outcome minimizer_conditions() {
    const MinimizerReport r52 = check_minimizer(52, rat(1, 2));
    const MinimizerReport r30 = check_minimizer(30, rat(1, 2));
    const QuadExt a = select_a0(52, rat(1, 2), 1);
    const bool above = (a - QuadExt(rat(99, 50), 0, a.radicand())).sign() == 1;
    auto flags = [](const MinimizerReport& r) {
        return std::string(r.c1_ok ? "T" : "F") + (r.c2_ok ? "T" : "F") + (r.c3_ok ? "T" : "F");
    };
    return {r52.all() && r30.all() && above, "C1C2C3 at (52, 1/2): " + flags(r52) + ", at (30, 1/2): " + flags(r30) +
                                                   "; a0~(52, 1/2) = " + dec(a.approx()) + " > 99/50 exactly: " + (above ? "yes" : "no")};
}

Outcome boundary() {
    const int N = 26;
    const BoundaryReport rep = boundary_consistency_check(N, 1, 5);
    const Rational lhs = Rational(rat(-2, N - 2) * rat(1, 48 * (N - 1)));
    const Rational rhs = rat(-1, 24 * (N - 1) * (N - 2));
    return {rep.ok && lhs == rhs, std::to_string(rep.lines.size()) + " exact identities for N = 26, m = 1..5 (" +
                                      (rep.ok ? "all hold" : "failure") + "); prefactor " + to_string(lhs) + " = " + to_string(rhs) +
                                      " (N = 27 gives " + to_string(rat(-1, 24 * 26 * 25)) + ")"};
}

const std::vector<std::pair<std::string, std::function<Outcome()>>>& criteria() {
    static const std::vector<std::pair<std::string, std::function<Outcome()>>> list{
        {"gamma* reproduction", gamma_star},
        {"dimension table", dimension_table},
        {"table regression", table_regression},
        {"oracle agreement", oracle_agreement},
        {"moment recursions", [] { return check_lines(moment_recursion_checks()); }},
        {"tensor identities", tensor_identities},
        {"polynomial regression", polynomial_regression},
        {"minimizer conditions", minimizer_conditions},
        {"boundary consistency", boundary},
        {"special functions", [] { return check_lines(bessel_checks()); }},
    };
    return list;
}

Outcome run(int id) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = criteria()[id - 1].second();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << "criterion " << id << " (" << criteria()[id - 1].first << "): " << (o.pass ? "PASS" : "FAIL") << " | " << o.detail
              << " | " << dec(secs) << " s" << std::endl;
    return o;
}

int parse_id(const char* s) {
    const int id = std::atoi(s);
    if (id < 1 || id > static_cast<int>(criteria().size())) {
        std::cerr << "unknown criterion '" << s << "'\n";
        std::exit(1);
    }
    return id;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc == 3 && std::strcmp(argv[1], "--expect-red") == 0) {
        const Outcome o = run(parse_id(argv[2]));
        std::cout << (o.documented_red ? "red as documented" : "NOT the documented failure") << std::endl;
        return o.documented_red ? 0 : 1;
    }
    std::vector<int> ids;
    for (int i = 1; i < argc; ++i) ids.push_back(parse_id(argv[i]));
    if (ids.empty())
        for (int i = 1; i <= static_cast<int>(criteria().size()); ++i) ids.push_back(i);
    int failed = 0;
    for (int id : ids) failed += run(id).pass ? 0 : 1;
    return failed == 0 ? 0 : 2;
}
