#pragma once

#include <cstdio>
#include <fstream>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bdpe/chain.hpp"
#include "bdpe/config.hpp"
#include "bdpe/csv.hpp"
#include "bdpe/error_analysis.hpp"
#include "bdpe/errors.hpp"
#include "bdpe/metrics.hpp"
#include "bdpe/mm1m.hpp"
#include "bdpe/model.hpp"
#include "bdpe/passage.hpp"
#include "bdpe/poisson.hpp"
#include "bdpe/structure.hpp"

namespace bdpe::cli {

namespace detail {

struct CommonOpts {
    std::string model;
    long long nmax = -1;
    long long N = -1;
    std::string phi_seed = "zero";
    std::string scheme = "exact";
    std::string zeta_mode = "analytic";
    double b0 = 0.0;
    std::string out_path;
    std::string format = "csv";
};

inline void add_common(CLI::App* sub, CommonOpts& o, bool model_required) {
    auto* m = sub->add_option("--model", o.model, "model config path or inline preset mm1m(l,m,t)");
    if (model_required) m->required();
    sub->add_option("--nmax", o.nmax, "last state for the forward scheme");
    sub->add_option("--N", o.N, "frontier for backward/mixed schemes");
    sub->add_option("--phi-seed", o.phi_seed, "backward boundary seed: zero or a number");
    sub->add_option("--scheme", o.scheme)->check(CLI::IsMember({"exact", "forward", "backward", "mixed"}));
    sub->add_option("--zeta-mode", o.zeta_mode, "analytic | summed | perturbed:+k / perturbed:-k");
    sub->add_option("--b0", o.b0, "additive constant for the accumulated column");
    sub->add_option("--out", o.out_path, "output file (default stdout)");
    sub->add_option("--format", o.format)->check(CLI::IsMember({"csv", "tsv"}));
}

inline ParsedConfig resolve_model(const std::string& arg) {
    double l, m, t;
    char tail;
    if (std::sscanf(arg.c_str(), "mm1m(%lf,%lf,%lf%c", &l, &m, &t, &tail) == 4 && tail == ')') {
        ParsedConfig cfg;
        cfg.model = make_mm1m_analytic(l, m, t);
        return cfg;
    }
    if (arg.rfind("mm1m(", 0) == 0) throw ConfigError("malformed inline preset: " + arg);
    return load_config(arg);
}

inline void ensure_ergodic(const BirthDeathModel<double>& model) {
    for (state_t horizon : {state_t(1024), state_t(256), state_t(64), state_t(16), state_t(4)}) {
        try {
            if (!check_ergodicity(model, horizon).condition16_pass)
                throw NonErgodicError("tail birth/death ratio does not stay below 1");
            return;
        } catch (const TabulatedRangeError&) {
            continue;  // arrays shorter than this horizon; retry smaller
        }
    }
}

inline double choose_z(const ChainTables<double>& t, const std::string& mode) {
    if (mode == "analytic") return mean_cost(t, ZetaMode::Analytic);
    if (mode == "summed") return mean_cost(t, ZetaMode::Summed);
    if (mode.rfind("perturbed:", 0) == 0) {
        const std::string k_str = mode.substr(10);
        std::size_t used = 0;
        int k = 0;
        try {
            k = std::stoi(k_str, &used);
        } catch (const std::exception&) {
            throw ConfigError("malformed perturbation count in --zeta-mode " + mode);
        }
        if (used != k_str.size()) throw ConfigError("malformed perturbation count in --zeta-mode " + mode);
        return mean_cost(t, ZetaMode::Perturbed, k);
    }
    throw ConfigError("unknown --zeta-mode " + mode);
}

inline double parse_seed(const std::string& s) {
    if (s == "zero") return 0.0;
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw ConfigError("malformed --phi-seed " + s);
    }
    if (used != s.size()) throw ConfigError("malformed --phi-seed " + s);
    return v;
}

struct Sink {
    std::ofstream file;
    std::ostream* os{nullptr};
    Sink(const std::string& path, std::ostream& fallback) {
        if (path.empty()) {
            os = &fallback;
        } else {
            file.open(path);
            if (!file) throw ConfigError("cannot open output file: " + path);
            os = &file;
        }
    }
};

struct Session {
    ParsedConfig cfg;
    ChainTables<double> tables;
    PassageTables<double> passage;
};

inline Session open_session(const CommonOpts& o, state_t min_stored = 0) {
    Session s{resolve_model(o.model), {}, {}};
    ensure_ergodic(s.cfg.model);
    s.tables = build_tables(s.cfg.model, s.cfg.policy, min_stored);
    s.passage = build_passage(s.tables);
    return s;
}

inline PoissonSolution<double> dispatch_solve(const Session& s, const CommonOpts& o) {
    const double z = choose_z(s.tables, o.zeta_mode);
    if (o.scheme == "exact") return solve_exact(s.tables, s.passage, o.b0, std::optional<double>(z));
    if (o.scheme == "forward") {
        const state_t nmax = o.nmax >= 0 ? state_t(o.nmax) : s.tables.n_star;
        return solve_forward(s.tables, z, nmax, o.b0);
    }
    const state_t N = o.N >= 0 ? state_t(o.N) : default_frontier(s.tables, s.passage);
    const double seed = parse_seed(o.phi_seed);
    if (o.scheme == "backward") return solve_backward(s.tables, z, N, seed, o.b0);
    return solve_mixed(s.tables, s.passage, z, N, seed, o.b0);
}

}  // namespace detail

/// Entry point shared by the binary and the tests; returns the process exit
/// code: 0 success, 2 configuration problem, 3 numeric failure.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    using namespace detail;
    CLI::App app{"birth-death chain performance evaluation"};
    app.require_subcommand(1);

    CommonOpts o;
    std::string repro_which;
    CLI::App* c_steady = app.add_subcommand("steady", "steady-state tables");
    CLI::App* c_passage = app.add_subcommand("passage", "first-passage tables");
    CLI::App* c_solve = app.add_subcommand("solve", "solve for marginal and accumulated values");
    CLI::App* c_errors = app.add_subcommand("errors", "error amplification factors");
    CLI::App* c_metrics = app.add_subcommand("metrics", "bias and asymptotic variance");
    CLI::App* c_structure = app.add_subcommand("structure", "structural condition verdicts");
    CLI::App* c_repro = app.add_subcommand("repro", "regenerate the published experiment tables");
    for (CLI::App* sub : {c_steady, c_passage, c_solve, c_errors, c_metrics, c_structure})
        add_common(sub, o, true);
    add_common(c_repro, o, false);
    c_repro->add_option("which", repro_which, "table1 | table2 | example-metrics")->required();

    try {
        app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return 2;
    }

    try {
        const char sep = (o.format == "tsv") ? '\t' : ',';

        if (c_steady->parsed()) {
            Session s = open_session(o);
            Sink sink(o.out_path, out);
            CsvWriter w(*sink.os, sep);
            w.header({"n", "p", "P", "P_bar", "C", "C_bar", "Z"});
            for (state_t n = 0; n <= s.tables.n_star; ++n)
                w.line({format_number(n), format_number(s.tables.p[std::size_t(n)]),
                        format_number(s.tables.P[std::size_t(n)]), format_number(s.tables.P_bar[std::size_t(n)]),
                        format_number(s.tables.C[std::size_t(n)]), format_number(s.tables.C_bar[std::size_t(n)]),
                        format_number(s.tables.Z[std::size_t(n)])});
            return 0;
        }

        if (c_passage->parsed()) {
            Session s = open_session(o);
            Sink sink(o.out_path, out);
            CsvWriter w(*sink.os, sep);
            w.header({"n", "T_up", "H_up", "T_down", "H_down", "T_0n", "T_n0", "Z_0n", "Z_n0"});
            for (state_t n = 0; n <= s.tables.n_star; ++n)
                w.line({format_number(n), format_number(s.passage.T_up[std::size_t(n)]),
                        format_number(s.passage.H_up[std::size_t(n)]),
                        format_number(s.passage.T_down[std::size_t(n)]),
                        format_number(s.passage.H_down[std::size_t(n)]),
                        format_number(s.passage.T_0n[std::size_t(n)]),
                        format_number(s.passage.T_n0[std::size_t(n)]),
                        format_number(s.passage.Z_0n[std::size_t(n)]),
                        format_number(s.passage.Z_n0[std::size_t(n)])});
            return 0;
        }

        if (c_solve->parsed()) {
            Session s = open_session(o, o.N >= 0 ? state_t(o.N) : 0);
            const PoissonSolution<double> sol = dispatch_solve(s, o);
            Sink sink(o.out_path, out);
            CsvWriter w(*sink.os, sep);
            w.header({"n", "phi", "b", "scheme", "z_mode"});
            for (std::size_t n = 0; n < sol.phi.size(); ++n)
                w.line({format_number(state_t(n)), format_number(sol.phi[n]), format_number(sol.b[n]),
                        o.scheme, o.zeta_mode});
            return 0;
        }

        if (c_errors->parsed()) {
            Session s = open_session(o, o.N >= 0 ? state_t(o.N) : 0);
            const double z = choose_z(s.tables, o.zeta_mode);
            const double base = s.tables.analytic_zeta ? *s.tables.analytic_zeta : s.tables.zeta;
            const double e_abs = z - base;
            ErrorReport<double> rep;
            if (o.scheme == "forward")
                rep = forward_error_factors(s.passage, s.tables, e_abs, o.b0);
            else if (o.scheme == "backward")
                rep = backward_error_factors(s.passage, s.tables, e_abs, o.b0);
            else
                rep = mixed_error_factors(s.passage, s.tables, e_abs, o.b0);
            const PoissonSolution<double> exact = solve_exact(s.tables, s.passage, o.b0);
            CommonOpts approx_opts = o;
            if (approx_opts.scheme == "exact") approx_opts.scheme = "mixed";
            fill_observed(rep, dispatch_solve(s, approx_opts), exact);
            Sink sink(o.out_path, out);
            CsvWriter w(*sink.os, sep);
            w.header({"n", "scheme", "abs_factor", "rel_factor", "b_abs_factor", "b_rel_factor",
                      "predicted_abs_error", "observed_abs_error"});
            for (const auto& r : rep.rows)
                w.line({format_number(r.n), o.scheme, format_number(r.abs_factor),
                        r.rel_suppressed ? std::string("suppressed") : format_number(r.rel_factor),
                        format_number(r.b_abs_factor), format_number(r.b_rel_factor),
                        format_number(r.predicted_abs_error), format_number(r.observed_abs_error)});
            return 0;
        }

        if (c_metrics->parsed()) {
            Session s = open_session(o, o.N >= 0 ? state_t(o.N) : 0);
            const MetricsReport<double> rep = compute_metrics(dispatch_solve(s, o), s.tables);
            Sink sink(o.out_path, out);
            *sink.os << "zeta=" << format_number(rep.zeta) << "\n"
                     << "beta0=" << format_number(rep.beta0) << "\n"
                     << "sigma2=" << format_number(rep.sigma2) << "\n"
                     << "N=" << rep.N_used << "\n"
                     << "scheme=" << o.scheme << "\n";
            return 0;
        }

        if (c_structure->parsed()) {
            Session s = open_session(o);
            const PoissonSolution<double> exact = solve_exact(s.tables, s.passage, o.b0);
            const StructureReport<double> rep =
                structure_report(s.cfg.model, s.tables, s.passage, exact, std::max<state_t>(s.tables.n_star, 3));
            Sink sink(o.out_path, out);
            auto verdict = [](const AssumptionItem& it) {
                return it.pass ? std::string("pass")
                               : "fail(first=" + std::to_string(it.first_violation) + ")";
            };
            *sink.os << "assumption.i_a=" << verdict(rep.assumption.i_a) << "\n"
                     << "assumption.i_b=" << verdict(rep.assumption.i_b) << "\n"
                     << "assumption.ii_a=" << verdict(rep.assumption.ii_a) << "\n"
                     << "assumption.ii_b=" << verdict(rep.assumption.ii_b) << "\n"
                     << "phi_nondecreasing=" << (rep.convexity.is_nondecreasing ? "true" : "false") << "\n"
                     << "appendix_applicable=" << (rep.appendix.applicable ? "true" : "false") << "\n"
                     << "appendix_all_pass=" << (rep.appendix.all() ? "true" : "false") << "\n";
            return 0;
        }

        // repro
        if (o.model.empty()) o.model = "mm1m(0.9,1,0.5)";
        if (repro_which == "table1") {
            Session s = open_session(o);
            const double z0 = choose_z(s.tables, "analytic");
            const double z1 = perturb_ulps(z0, 1);
            const auto fwd0 = solve_forward(s.tables, z0, 29, 0.0);
            const auto fwd1 = solve_forward(s.tables, z1, 29, 0.0);
            Sink sink(o.out_path, out);
            CsvWriter w(*sink.os, sep);
            w.header({"n", "p_n", "phi_hat", "phi_pert"});
            for (state_t n = 0; n <= 29; ++n)
                w.line({format_number(n), format_number(s.tables.p[std::size_t(n)]),
                        format_number(fwd0.phi[std::size_t(n)]), format_number(fwd1.phi[std::size_t(n)])});
            return 0;
        }
        if (repro_which == "table2") {
            const state_t N = o.N >= 0 ? state_t(o.N) : 42;
            Session s = open_session(o, N);
            const double z = choose_z(s.tables, "analytic");
            const auto mixed = solve_mixed(s.tables, s.passage, z, N, 0.0, 0.0);
            const auto exact = solve_exact(s.tables, s.passage, 0.0);
            const auto factors = mixed_error_factors(s.passage, s.tables, 0.0);
            Sink sink(o.out_path, out);
            CsvWriter w(*sink.os, sep);
            w.header({"n", "phi_mixed", "rel_factor", "two53_rel_err", "T_down", "T_up"});
            for (state_t n = 12; n <= 29; ++n) {
                const double phi_exact = exact.phi[std::size_t(n)];
                const double rel_err = std::abs(mixed.phi[std::size_t(n)] - phi_exact) / std::abs(phi_exact);
                w.line({format_number(n), format_number(mixed.phi[std::size_t(n)]),
                        format_number(std::abs(factors.rows[std::size_t(n)].rel_factor)),
                        format_number(std::ldexp(rel_err, 53)),
                        format_number(s.passage.T_down[std::size_t(n)]),
                        format_number(s.passage.T_up[std::size_t(n)])});
            }
            return 0;
        }
        if (repro_which == "example-metrics") {
            const state_t N = o.N >= 0 ? state_t(o.N) : 42;
            Session s = open_session(o, N);
            const double z = choose_z(s.tables, "analytic");
            const auto mixed = solve_mixed(s.tables, s.passage, z, N, 0.0, 0.0);
            const MetricsReport<double> rep = compute_metrics(mixed, s.tables);
            const auto boundary = boundary_functionals(s.cfg.model, s.tables, s.passage);
            Sink sink(o.out_path, out);
            *sink.os << "beta0=" << format_number(rep.beta0) << "\n"
                     << "sigma2=" << format_number(rep.sigma2) << "\n"
                     << "T_p0=" << format_number(boundary.T_p0) << "\n"
                     << "T_10=" << format_number(s.passage.T_n0[1]) << "\n"
                     << "beta1=" << format_number(rep.beta[1]) << "\n";
            return 0;
        }
        err << "unknown repro target: " << repro_which << "\n";
        return 2;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return 2;
    } catch (const TabulatedRangeError& e) {
        err << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::runtime_error& e) {
        err << "numeric failure: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace bdpe::cli
