// Command-line front end. Exit codes: 0 success, 2 a check failed (report still written), 1 usage error.
#include "bubble/critical_analysis.hpp"
#include "bubble/energy_polynomial.hpp"
#include "bubble/f_oracle.hpp"
#include "bubble/fourier_engine.hpp"
#include "bubble/moment_reduction.hpp"
#include "bubble/special_functions.hpp"
#include "bubble/verification.hpp"
#include "bubble/weyl_tensor.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace bubble;
using json = nlohmann::ordered_json;

namespace {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// 15 significant digits, kept numeric in JSON.
double sig15(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", x);
    return std::strtod(buf, nullptr);
}

std::string dec15(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", x);
    return buf;
}

Rational parse_flag(const std::string& flag, const std::string& text) {
    try {
        return parse_rational(text);
    } catch (const std::exception&) {
        throw UsageError("--" + flag + ": expected a rational p/q or decimal, got '" + text + "'");
    }
}

long parse_int_flag(const std::string& flag, const std::string& text) {
    const Rational r = parse_flag(flag, text);
    if (r.get_den() != 1 || !r.get_num().fits_slong_p()) throw UsageError("--" + flag + ": expected an integer, got '" + text + "'");
    return r.get_num().get_si();
}

json numeric(const NumericValue& v) { return {{"value", sig15(v.value)}, {"error", sig15(v.error)}}; }

json poly_json(const Poly& p) {
    json a = json::array();
    for (int k = 0; k <= std::max(p.degree(), 0); ++k) a.push_back(to_string(p.coeff(k)));
    return a;
}

json quad_json(const QuadExt& q) {
    return {{"base", to_string(q.base())},
            {"coeff_sqrt", to_string(q.coeff_sqrt())},
            {"radicand", to_string(q.radicand())},
            {"sign", q.sign()},
            {"approx", sig15(q.approx())}};
}

std::vector<Rational> parse_list(const std::string& flag, const std::string& text) {
    std::vector<Rational> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_flag(flag, item));
    if (out.empty()) throw UsageError("--" + flag + ": empty coefficient list");
    return out;
}

// Every option of the subcommand with its resolved (given or default) value.
json resolved_config(const CLI::App& sub) {
    json c;
    c["subcommand"] = sub.get_name();
    for (const CLI::Option* opt : sub.get_options()) {
        if (opt->get_lnames().empty() || opt->get_lnames()[0] == "help") continue;
        const std::string name = opt->get_lnames()[0];
        if (opt->get_expected_min() == 0) {
            c[name] = opt->count() > 0;
        } else if (opt->count() > 0) {
            c[name] = opt->results().size() == 1 ? json(opt->results()[0]) : json(opt->results());
        } else {
            c[name] = opt->get_default_str();
        }
    }
    return c;
}

struct Output {
    std::string report_path;
    std::string format = "json";
};

void emit(const Output& out, const std::string& text) {
    if (out.report_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out.report_path, std::ios::binary);
    if (!f) throw UsageError("--report: cannot open '" + out.report_path + "'");
    f << text;
}

void emit_json(const Output& out, json body, const CLI::App& sub) {
    json doc;
    doc["config"] = resolved_config(sub);
    for (auto& [k, v] : body.items()) doc[k] = v;
    emit(out, doc.dump(2) + "\n");
}

std::string fkey_text(const FKey& k) { return describe(k); }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact and numeric verification of bubble energy expansions"};
    app.require_subcommand(1);
    Output out;
    std::string seed_text = "0";

    auto common = [&](CLI::App* s, bool with_format) {
        s->add_option("--report", out.report_path, "Write the report to this path instead of stdout");
        if (with_format) s->add_option("--format", out.format, "Output format")->check(CLI::IsMember({"json", "csv", "text"}))->capture_default_str();
    };

    // verify-bessel
    auto* vb = app.add_subcommand("verify-bessel", "Bessel closed form, recurrence and profile ODE residuals");
    common(vb, false);

    // moments
    std::string m_n = "25", m_gamma = "1/2", m_side = "phi", m_eta_int = "1", m_eta_g = "-2", m_j = "0", m_jp = "0";
    auto* mo = app.add_subcommand("moments", "Exact reduction of a profile moment to A1 or B2");
    mo->add_option("--n", m_n)->capture_default_str();
    mo->add_option("--gamma", m_gamma)->capture_default_str();
    mo->add_option("--side", m_side)->check(CLI::IsMember({"phi", "what"}))->capture_default_str();
    mo->add_option("--eta-int", m_eta_int, "Integer part of the exponent")->capture_default_str();
    mo->add_option("--eta-gamma", m_eta_g, "Multiple of gamma in the exponent")->capture_default_str();
    mo->add_option("--j", m_j)->capture_default_str();
    mo->add_option("--jp", m_jp)->capture_default_str();
    bool m_numeric = false, m_recursions = false;
    mo->add_flag("--numeric", m_numeric, "Cross-check coeff * base against quadrature");
    mo->add_flag("--recursions", m_recursions, "Run the moment recursion checks instead of a single key");
    common(mo, false);

    // f-integral
    std::string f_kind = "1", f_alpha = "1", f_beta = "0", f_n = "25", f_gamma = "1/2", f_oracle = "none";
    auto* fi = app.add_subcommand("f-integral", "F_{k,n,g}(alpha, beta) in units of |S^{n-1}| A1 B2");
    fi->add_option("--kind", f_kind)->capture_default_str();
    fi->add_option("--alpha", f_alpha)->capture_default_str();
    fi->add_option("--beta", f_beta)->capture_default_str();
    fi->add_option("--n", f_n)->capture_default_str();
    fi->add_option("--gamma", f_gamma)->capture_default_str();
    fi->add_option("--oracle", f_oracle, "Numeric cross-check")->check(CLI::IsMember({"none", "fourier_fd", "poisson_physical", "both"}))->capture_default_str();
    common(fi, false);

    // verify-identities
    std::string vi_dim = "5", vi_trials = "3";
    auto* vi = app.add_subcommand("verify-identities", "Exact sphere and translation identities on random Weyl tensors");
    vi->add_option("--dim", vi_dim)->capture_default_str();
    vi->add_option("--trials", vi_trials)->capture_default_str();
    vi->add_option("--seed", seed_text)->capture_default_str();
    common(vi, false);

    // build-p
    std::string bp_n = "25", bp_gamma = "1/2", bp_f, bp_d0, bp_a0 = "2";
    bool bp_hessian = false;
    auto* bp = app.add_subcommand("build-p", "Assemble the energy polynomial P (and optionally P~1, P~2)");
    bp->add_option("--n", bp_n)->capture_default_str();
    bp->add_option("--gamma", bp_gamma)->capture_default_str();
    bp->add_option("--f", bp_f, "Coefficients a0,a1,... of f(s)");
    bp->add_option("--d0", bp_d0, "Use the standard f family of this degree (1 or 4) with --a0")->excludes("--f");
    bp->add_option("--a0", bp_a0)->capture_default_str();
    bp->add_flag("--hessian", bp_hessian, "Also assemble the Hessian polynomials");
    common(bp, false);

    // disc
    std::string d_n = "24", d_gamma = "9/10", d_d0 = "4";
    auto* di = app.add_subcommand("disc", "Q(a0) = P'(1) and its discriminant");
    di->add_option("--n", d_n)->capture_default_str();
    di->add_option("--gamma", d_gamma)->capture_default_str();
    di->add_option("--d0", d_d0)->capture_default_str();
    common(di, false);

    // gamma-star
    std::string gs_width = "1/10000000";
    auto* gs = app.add_subcommand("gamma-star", "Bracket the sign change of disc(Q)(24, gamma)");
    gs->add_option("--width", gs_width)->capture_default_str();
    common(gs, false);

    // sweep
    std::string sw_nmin = "23", sw_nmax = "51", sw_grid = "99", sw_d0 = "auto", sw_threads = "1";
    bool sw_conditions = false;
    auto* sw = app.add_subcommand("sweep", "Discriminant signs over an (n, gamma) grid");
    sw->add_option("--n-min", sw_nmin)->capture_default_str();
    sw->add_option("--n-max", sw_nmax)->capture_default_str();
    sw->add_option("--grid", sw_grid, "gamma = k/(grid+1), k = 1..grid")->capture_default_str();
    sw->add_option("--d0", sw_d0, "auto, 1 or 4")->capture_default_str();
    sw->add_option("--threads", sw_threads)->capture_default_str();
    sw->add_flag("--conditions", sw_conditions, "Also check the minimizer conditions where disc > 0");
    common(sw, true);

    // check-minimizer
    std::string cm_n = "52", cm_gamma = "1/2", cm_d0 = "auto";
    auto* cm = app.add_subcommand("check-minimizer", "Conditions C1-C3 at the selected a0");
    cm->add_option("--n", cm_n)->capture_default_str();
    cm->add_option("--gamma", cm_gamma)->capture_default_str();
    cm->add_option("--d0", cm_d0)->capture_default_str();
    common(cm, false);

    // figure1
    std::string fg_samples = "200";
    auto* fg = app.add_subcommand("figure1", "Normalized disc(Q)(24, k/samples) for k = 1..samples-1");
    fg->add_option("--samples", fg_samples)->capture_default_str();
    common(fg, true);

    // errata
    bool er_no_oracles = false;
    auto* er = app.add_subcommand("errata", "Every engine-vs-printed-table disagreement at the sample pairs");
    er->add_flag("--no-oracles", er_no_oracles, "Skip numeric adjudication");
    common(er, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (vb->parsed()) {
            json checks = json::array();
            bool ok = true;
            for (const CheckLine& l : bessel_checks()) {
                checks.push_back({{"check", l.name}, {"measured", sig15(l.measured)}, {"tolerance", l.tolerance}, {"pass", l.pass}});
                ok = ok && l.pass;
            }
            emit_json(out, {{"checks", checks}, {"pass", ok}}, *vb);
            return ok ? 0 : 2;
        }

        if (mo->parsed()) {
            const int n = parse_int_flag("n", m_n);
            const Rational g = parse_flag("gamma", m_gamma);
            if (m_recursions) {
                json checks = json::array();
                bool ok = true;
                for (const CheckLine& l : moment_recursion_checks()) {
                    checks.push_back({{"check", l.name}, {"measured", sig15(l.measured)}, {"tolerance", l.tolerance}, {"pass", l.pass}});
                    ok = ok && l.pass;
                }
                emit_json(out, {{"checks", checks}, {"pass", ok}}, *mo);
                return ok ? 0 : 2;
            }
            const MomentKey key{m_side == "phi" ? Side::Phi : Side::What,
                                {parse_int_flag("eta-int", m_eta_int), parse_int_flag("eta-gamma", m_eta_g)},
                                static_cast<int>(parse_int_flag("j", m_j)), static_cast<int>(parse_int_flag("jp", m_jp))};
            const MomentValue v = key.side == Side::Phi ? reduce_phi_moment(n, g, key) : reduce_what_moment(n, g, key);
            json body{{"key", describe(key)}, {"n", n}, {"gamma", to_string(g)}, {"convergent", v.convergent}};
            if (!v.convergent) {
                body["violated_condition"] = v.violated_condition;
                emit_json(out, body, *mo);
                return 2;
            }
            body["coeff"] = to_string(v.coeff);
            body["base"] = key.side == Side::Phi ? "A1" : "B2";
            bool ok = true;
            if (m_numeric) {
                const double gd = to_double(g);
                const Exponent base = key.side == Side::Phi ? phi_base_exponent() : what_base_exponent(n);
                const ProfileSide ps = key.side == Side::Phi ? ProfileSide::Phi : ProfileSide::What;
                const NumericValue b = profile_moment(ps, n, gd, base.int_part + base.gamma_mult * gd, 0, 0);
                const NumericValue m = profile_moment(ps, n, gd, key.eta.int_part + key.eta.gamma_mult * gd, key.j, key.jp);
                const double predicted = to_double(v.coeff) * b.value;
                const double gap = std::abs(predicted - m.value) / std::abs(m.value);
                ok = gap <= 1e-8;
                body["numeric"] = {{"quadrature", numeric(m)}, {"coeff_times_base", sig15(predicted)}, {"relative_gap", sig15(gap)},
                                   {"tolerance", 1e-8}, {"pass", ok}};
            }
            emit_json(out, body, *mo);
            return ok ? 0 : 2;
        }

        if (fi->parsed()) {
            const FKey key{static_cast<int>(parse_int_flag("kind", f_kind)), static_cast<int>(parse_int_flag("alpha", f_alpha)),
                           static_cast<int>(parse_int_flag("beta", f_beta))};
            const int n = parse_int_flag("n", f_n);
            const Rational g = parse_flag("gamma", f_gamma);
            const Rational coeff = f_integral_exact(key, n, g);
            json body{{"kind", key.kind}, {"alpha", key.alpha}, {"beta", key.beta}, {"n", n},   {"gamma", to_string(g)},
                      {"coeff", to_string(coeff)}, {"normalization", "sphere*A1*B2"}};
            if (const auto t = f_integral_table(key, n, g)) {
                body["table"] = to_string(*t);
                body["table_agrees"] = *t == coeff;
            }
            bool ok = true;
            if (f_oracle != "none") {
                const double gd = to_double(g);
                const NumericValue unit = f_unit_numeric(n, gd);
                const double target = to_double(coeff) * unit.value;
                json oracles;
                auto run = [&](OracleMethod m, double tol) {
                    const NumericValue v = f_integral_oracle(key, n, gd, m, {1, false});
                    const double gap = std::abs(v.value - target) / std::abs(target);
                    ok = ok && gap <= tol;
                    oracles[to_string(m)] = {{"value", sig15(v.value)}, {"error", sig15(v.error)}, {"relative_gap", sig15(gap)},
                                             {"tolerance", tol}, {"pass", gap <= tol}};
                };
                if (f_oracle == "fourier_fd" || f_oracle == "both") run(OracleMethod::FourierFd, kFourierTolerance);
                if (f_oracle == "poisson_physical" || f_oracle == "both") run(OracleMethod::PoissonPhysical, kPoissonTolerance);
                body["unit"] = numeric(unit);
                body["engine_decimal"] = sig15(target);
                body["oracles"] = oracles;
            }
            emit_json(out, body, *fi);
            return ok ? 0 : 2;
        }

        if (vi->parsed()) {
            const int dim = parse_int_flag("dim", vi_dim);
            const int trials = parse_int_flag("trials", vi_trials);
            if (dim < 2 || trials < 1) throw UsageError("--dim must be at least 2 and --trials at least 1");
            const auto seed = static_cast<std::uint64_t>(parse_int_flag("seed", seed_text));
            const IdentityRun run = run_identities(dim, trials, seed);
            json rows = json::array();
            for (const auto& r : run.rows)
                rows.push_back({{"identity", r.identity}, {"dim", r.dim}, {"seed", r.seed}, {"lhs", to_string(r.lhs)},
                                {"rhs", to_string(r.rhs)}, {"equal", r.equal}});
            emit_json(out, {{"results", rows}, {"pass", run.all_equal()}}, *vi);
            return run.all_equal() ? 0 : 2;
        }

        if (bp->parsed()) {
            const int n = parse_int_flag("n", bp_n);
            const Rational g = parse_flag("gamma", bp_gamma);
            std::vector<Rational> f;
            if (!bp_f.empty()) {
                f = parse_list("f", bp_f);
            } else {
                const int d0 = bp_d0.empty() ? 1 : parse_int_flag("d0", bp_d0);
                if (d0 != 1 && d0 != 4) throw UsageError("--d0: the standard families exist for d0 = 1 and 4");
                f = f_family(d0, parse_flag("a0", bp_a0));
            }
            FEngine engine(n, g);
            const EnergyPoly e = assemble_P(engine, f);
            json fj = json::array();
            for (const auto& c : f) fj.push_back(to_string(c));
            json body{{"n", n}, {"gamma", to_string(g)}, {"d0", e.d0}, {"f", fj}, {"P", poly_json(e.P)}, {"unit", EnergyPoly::unit}};
            if (bp_hessian) {
                const HessianPolyPair h = assemble_P_tilde(engine, f);
                body["P_tilde_1"] = poly_json(h.p_tilde_1);
                body["P_tilde_2"] = poly_json(h.p_tilde_2);
            }
            emit_json(out, body, *bp);
            return 0;
        }

        if (di->parsed()) {
            const int n = parse_int_flag("n", d_n);
            const Rational g = parse_flag("gamma", d_gamma);
            const QuadraticQ q = extract_Q(n, g, parse_int_flag("d0", d_d0));
            const Rational d = q.disc();
            emit_json(out,
                      {{"n", n}, {"gamma", to_string(g)}, {"d0", q.d0}, {"b0", to_string(q.b0)}, {"b1", to_string(q.b1)},
                       {"b2", to_string(q.b2)}, {"disc", to_string(d)}, {"disc_sign", sign(d)}, {"disc_decimal", sig15(to_double(d))}},
                      *di);
            return 0;
        }

        if (gs->parsed()) {
            const Rational w = parse_flag("width", gs_width);
            const Interval iv = find_gamma_star(w);
            const Rational reference = rat(940197, 1000000);
            const bool within = Rational(iv.lo - reference) <= rat(1, 100000) && Rational(reference - iv.hi) <= rat(1, 100000);
            emit_json(out,
                      {{"lo", to_string(iv.lo)},
                       {"hi", to_string(iv.hi)},
                       {"lo_decimal", dec15(to_double(iv.lo))},
                       {"hi_decimal", dec15(to_double(iv.hi))},
                       {"disc_sign_lo", sign(disc_Q(24, iv.lo, 4))},
                       {"disc_sign_hi", sign(disc_Q(24, iv.hi, 4))},
                       {"within_1e-5_of_0.940197", within}},
                      *gs);
            return 0;
        }

        if (sw->parsed()) {
            SweepOptions opt;
            opt.n_min = parse_int_flag("n-min", sw_nmin);
            opt.n_max = parse_int_flag("n-max", sw_nmax);
            opt.grid_count = parse_int_flag("grid", sw_grid);
            opt.threads = parse_int_flag("threads", sw_threads);
            if (sw_d0 != "auto") opt.fixed_d0 = parse_int_flag("d0", sw_d0);
            opt.with_conditions = sw_conditions;
            if (opt.n_min > opt.n_max) throw UsageError("--n-min must not exceed --n-max");
            if (opt.grid_count < 1) throw UsageError("--grid must be at least 1");
            if (opt.threads < 1) throw UsageError("--threads must be at least 1");
            const auto rows = sweep(opt);
            if (out.format == "csv" || out.format == "text") {
                emit(out, sweep_csv(rows));
                return 0;
            }
            json arr = json::array();
            for (const auto& r : rows) {
                json row{{"n", r.n}, {"gamma", to_string(r.gamma)}, {"d0", r.d0}, {"disc_sign", r.disc_sign}};
                if (!r.infeasible.empty()) row["infeasible"] = r.infeasible;
                if (r.conditions) row["conditions"] = {{"c1", r.conditions->c1_ok}, {"c2", r.conditions->c2_ok}, {"c3", r.conditions->c3_ok}};
                arr.push_back(row);
            }
            emit_json(out, {{"rows", arr}}, *sw);
            return 0;
        }

        if (cm->parsed()) {
            const int n = parse_int_flag("n", cm_n);
            const Rational g = parse_flag("gamma", cm_gamma);
            std::optional<int> d0;
            if (cm_d0 != "auto") d0 = parse_int_flag("d0", cm_d0);
            const MinimizerReport r = check_minimizer(n, g, d0);
            emit_json(out,
                      {{"n", n},
                       {"gamma", to_string(g)},
                       {"d0", r.d0},
                       {"a0_selected", quad_json(r.a0_selected)},
                       {"P_prime_1", quad_json(r.p1)},
                       {"P_second_1", quad_json(r.p2)},
                       {"P_tilde_1_at_1", quad_json(r.pt1)},
                       {"P_tilde_2_at_1", quad_json(r.pt2)},
                       {"c1", r.c1_ok},
                       {"c2", r.c2_ok},
                       {"c3", r.c3_ok},
                       {"all", r.all()}},
                      *cm);
            return r.all() ? 0 : 2;
        }

        if (fg->parsed()) {
            const int samples = parse_int_flag("samples", fg_samples);
            if (samples < 2) throw UsageError("--samples must be at least 2");
            const auto pts = figure1(samples);
            if (out.format == "csv" || out.format == "text") {
                std::string csv = "gamma,disc_normalized\n";
                for (const auto& p : pts) csv += dec15(to_double(p.gamma)) + "," + dec15(p.disc_normalized) + "\n";
                emit(out, csv);
                return 0;
            }
            json arr = json::array();
            for (const auto& p : pts) arr.push_back({sig15(to_double(p.gamma)), sig15(p.disc_normalized)});
            emit_json(out, {{"points", arr}}, *fg);
            return 0;
        }

        if (er->parsed()) {
            const TableComparison cmp = compare_with_table(!er_no_oracles);
            json arr = json::array();
            bool adjudicated = true;
            for (const auto& e : cmp.mismatches) {
                json row{{"key", fkey_text(e.key)},
                         {"n", e.n},
                         {"gamma", to_string(e.gamma)},
                         {"engine", to_string(e.engine)},
                         {"table", to_string(e.table)},
                         {"table_over_engine_minus_1", sig15(to_double(Rational(e.table / e.engine)) - 1)}};
                if (e.fourier) {
                    const double unit = e.unit;
                    row["unit"] = sig15(unit);
                    row["fourier_fd"] = numeric(*e.fourier);
                    row["poisson_physical"] = numeric(*e.physical);
                    row["fourier_fd_sides_with_engine"] = e.fourier_sides_with_engine();
                    row["poisson_physical_agrees_with_engine"] = e.physical_sides_with_engine();
                    adjudicated = adjudicated && e.fourier_sides_with_engine() && e.physical_sides_with_engine();
                }
                arr.push_back(row);
            }
            emit_json(out, {{"compared", cmp.compared}, {"mismatches", arr}, {"all_adjudicated_for_engine", adjudicated}}, *er);
            return 0;
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        // Includes ParameterError: a flag value outside the operation's domain.
        std::cerr << "invalid parameter: " << e.what() << "\n";
        return 1;
    } catch (const DimensionError& e) {
        std::cerr << "invalid parameter: " << e.what() << "\n";
        return 1;
    } catch (const DivergenceError& e) {
        std::cerr << "divergent: " << e.what() << "\n";
        return 2;
    } catch (const NoCriticalCoefficient& e) {
        std::cerr << "no critical coefficient: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
