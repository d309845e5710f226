#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <string>

#include "omegacv/direct.hpp"
#include "omegacv/problem_file.hpp"
#include "omegacv/props.hpp"
#include "omegacv/report.hpp"

using namespace omegacv;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;      // usage, parse or validation errors
constexpr int kExitNumerical = 2;  // numerical failures (also strict-mode warnings)

ElMode mode_from_string(const std::string& mode) {
    if (mode == "omega") return ElMode::omega;
    if (mode == "classical") return ElMode::weighted_classical;
    throw ValidationError("unknown mode '" + mode + "' (use omega or classical)");
}

QuadratureConfig quadrature_from(const ProblemSpec& spec, double tol_flag) {
    QuadratureConfig cfg;
    if (spec.quad_panels) cfg.panels = *spec.quad_panels;
    if (spec.tolerance) cfg.tolerance = *spec.tolerance;
    if (tol_flag > 0.0) cfg.tolerance = tol_flag;
    return cfg;
}

int cmd_derive(const std::string& path, const std::string& mode) {
    if (!mode.empty() && mode != "omega" && mode != "classical")
        throw ValidationError("unknown mode '" + mode + "' (use omega or classical)");
    const ProblemSpec spec = load_problem(path);
    const auto print_form = [&](ElMode m, const char* name) {
        const EulerLagrangeForm form = build_el_residual(spec.problem, m);
        std::cout << "mode: " << name << '\n';
        std::cout << "equation: " << form.note << '\n';
        std::cout << "residual: " << to_string(form.residual) << '\n';
        std::cout << "ypp coefficient: " << to_string(form.ypp_coefficient) << '\n';
    };
    if (mode.empty() || mode == "omega") print_form(ElMode::omega, "omega");
    if (mode.empty()) std::cout << '\n';
    if (mode.empty() || mode == "classical") print_form(ElMode::weighted_classical, "classical");
    return kExitOk;
}

int cmd_solve(const std::string& path, const std::string& mode_name, int mesh_flag,
              double tol_flag, const std::string& out_path, bool strict) {
    const ProblemSpec spec = load_problem(path);
    const ElMode mode = mode_from_string(mode_name);
    const int mesh = mesh_flag > 0 ? mesh_flag : spec.mesh.value_or(200);

    SolverConfig solver_cfg;
    if (tol_flag > 0.0) solver_cfg.residual_tol = tol_flag;

    const EulerLagrangeForm form = build_el_residual(spec.problem, mode);
    const TrajectorySolution traj = solve_el_bvp(spec.problem, form, mesh, solver_cfg);
    const double value = evaluate_functional(spec.problem, traj, quadrature_from(spec, 0.0));

    std::string summary = "solved: mode=" + mode_name + " mesh=" + std::to_string(mesh) +
                          " iterations=" + std::to_string(traj.iterations) +
                          " residual_norm=" + format_significant(traj.residual_norm, 3) +
                          " functional=" + format_double(value);
    if (!out_path.empty()) {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw ValidationError("cannot open output file '" + out_path + "'");
        write_trajectory_csv(out, traj);
        std::cout << summary << '\n';
    } else {
        write_trajectory_csv(std::cout, traj);
        std::cerr << summary << '\n';
    }
    (void)strict;
    return kExitOk;
}

int cmd_verify(const std::string& path, int mesh_flag, double tol_flag,
               std::uint64_t seed_flag, bool seed_given, const std::string& out_path,
               bool strict) {
    const ProblemSpec spec = load_problem(path);
    const int mesh = mesh_flag > 0 ? mesh_flag : spec.mesh.value_or(200);
    const std::uint64_t seed = seed_given ? seed_flag : spec.seed.value_or(42);
    const long samples = spec.convexity_samples.value_or(2000);

    DirectConfig direct_cfg;
    direct_cfg.mesh = mesh;
    const QuadratureConfig quad_cfg = quadrature_from(spec, tol_flag);

    const VerifyReport report = run_verify(spec, mesh, direct_cfg, quad_cfg, samples, seed);
    if (!out_path.empty()) {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw ValidationError("cannot open output file '" + out_path + "'");
        out << report.text;
    }
    std::cout << report.text;
    if (strict && !report.comparison.direct.converged) {
        std::cerr << "strict: direct minimizer did not converge\n";
        return kExitNumerical;
    }
    return kExitOk;
}

int cmd_calc(const std::string& expr_text, const std::string& omega_text, bool deriv,
             bool integral, double at, bool at_given, std::vector<double> interval,
             double tol_flag) {
    if (!deriv && !integral)
        throw ValidationError("nothing to do: pass --deriv and/or --integral");
    if (deriv && !at_given) throw ValidationError("--deriv needs --at X");
    if (integral && interval.size() != 2)
        throw ValidationError("--integral needs --interval A B");

    double lo, hi;
    if (interval.size() == 2) {
        lo = interval[0];
        hi = interval[1];
        if (at_given && (at < lo || at > hi))
            throw ValidationError("--at must lie inside --interval");
    } else {
        lo = at - 1.0;
        hi = at + 1.0;
    }
    const Expr f = parse_or_throw(expr_text);
    const OmegaFunction w(parse_or_throw(omega_text), lo, hi);

    if (deriv) {
        const Expr df = omega_derivative_symbolic(f, w);
        std::cout << "omega derivative: " << to_string(df) << '\n';
        const std::vector<std::string> slots{"x"};
        std::cout << "omega derivative at x=" << format_double(at) << ": "
                  << format_double(CompiledExpr(df, slots)({at})) << '\n';
    }
    if (integral) {
        QuadratureConfig cfg;
        if (tol_flag > 0.0) cfg.tolerance = tol_flag;
        const std::vector<std::string> slots{"x"};
        const CompiledExpr cf(f, slots);
        const auto r = j_omega([&](double x) { return cf({x}); }, w, lo, hi, cfg);
        std::cout << "omega integral over [" << format_double(lo) << ", " << format_double(hi)
                  << "]: " << format_double(r.value) << " (error estimate "
                  << format_significant(r.error_estimate, 3) << ", " << r.panels_used
                  << " panels)\n";
    }
    return kExitOk;
}

int cmd_integrate(const std::string& expr_text, const std::string& omega_text,
                  std::vector<double> interval, double tol_flag, int panels, bool strict) {
    if (interval.size() != 2) throw ValidationError("--interval A B is required");
    const Expr f = parse_or_throw(expr_text);
    const OmegaFunction w(parse_or_throw(omega_text), interval[0], interval[1]);
    QuadratureConfig cfg;
    if (panels > 0) cfg.panels = panels;
    if (tol_flag > 0.0) cfg.tolerance = tol_flag;
    const std::vector<std::string> slots{"x"};
    const CompiledExpr cf(f, slots);
    const auto r = j_omega([&](double x) { return cf({x}); }, w, interval[0], interval[1], cfg);
    std::cout << "value: " << format_double(r.value) << '\n';
    std::cout << "error estimate: " << format_significant(r.error_estimate, 3) << '\n';
    std::cout << "panels: " << r.panels_used << '\n';
    std::cout << "tolerance reached: " << (r.tolerance_reached ? "yes" : "no") << '\n';
    if (strict && !r.tolerance_reached) {
        std::cerr << "strict: quadrature tolerance not reached\n";
        return kExitNumerical;
    }
    return kExitOk;
}

int cmd_props(std::uint64_t seed, bool seed_given, int instances, bool fault, bool strict) {
    PropsConfig cfg;
    if (seed_given) cfg.seed = seed;
    if (instances > 0) cfg.instances = instances;
    cfg.fault_product_rule = fault;
    const auto rows = run_identity_suite(cfg);
    std::cout << render_props_table(rows, cfg);
    bool all_pass = true;
    for (const auto& r : rows) all_pass = all_pass && r.pass;
    if (!all_pass && strict) return kExitNumerical;
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"omegacv: variational problems with a strictly increasing weight function"};
    app.require_subcommand(1);

    std::string path, mode, out_path, expr_text, omega_text, f_text;
    int mesh = 0, panels = 0, instances = 0;
    double tol = 0.0, at = 0.0;
    std::uint64_t seed = 0;
    bool strict = false, deriv = false, integral = false, fault = false;
    std::vector<double> interval;

    auto* derive = app.add_subcommand("derive", "print both stationarity equations");
    derive->add_option("file", path, "problem file")->required();
    derive->add_option("--mode", mode, "omega|classical (default: both)");

    auto* solve = app.add_subcommand("solve", "solve the two-point boundary value problem");
    solve->add_option("file", path, "problem file")->required();
    solve->add_option("--mode", mode, "omega|classical")->required();
    solve->add_option("--mesh", mesh, "mesh intervals (default 200 or the file's mesh)");
    solve->add_option("--tol", tol, "Newton residual tolerance");
    solve->add_option("--out", out_path, "CSV output path (default: stdout)");
    solve->add_flag("--strict", strict, "escalate warnings to exit code 2");

    auto* verify = app.add_subcommand("verify", "audit candidates against the direct method");
    verify->add_option("file", path, "problem file")->required();
    verify->add_option("--mesh", mesh, "mesh intervals (default 200 or the file's mesh)");
    verify->add_option("--tol", tol, "quadrature tolerance");
    auto* verify_seed = verify->add_option("--seed", seed, "convexity sampling seed");
    verify->add_option("--out", out_path, "also write the report to this file");
    verify->add_flag("--strict", strict, "escalate warnings to exit code 2");

    auto* calc = app.add_subcommand("calc", "pointwise operator access");
    calc->add_option("--expr", expr_text, "expression in x")->required();
    calc->add_option("--omega", omega_text, "weight expression in x")->required();
    calc->add_flag("--deriv", deriv, "print the weighted derivative");
    calc->add_flag("--integral", integral, "print the weighted integral");
    auto* calc_at = calc->add_option("--at", at, "evaluation point for --deriv");
    calc->add_option("--interval", interval, "integration interval A B")->expected(2);
    calc->add_option("--tol", tol, "quadrature tolerance");

    auto* integrate_cmd = app.add_subcommand("integrate", "weighted integral of an expression");
    integrate_cmd->add_option("--f", f_text, "integrand expression in x")->required();
    integrate_cmd->add_option("--omega", omega_text, "weight expression in x")->required();
    integrate_cmd->add_option("--interval", interval, "integration interval A B")
        ->required()
        ->expected(2);
    integrate_cmd->add_option("--tol", tol, "quadrature tolerance");
    integrate_cmd->add_option("--panels", panels, "starting panel count");
    integrate_cmd->add_flag("--strict", strict, "escalate warnings to exit code 2");

    auto* props = app.add_subcommand("props", "run the randomized identity suite");
    auto* props_seed = props->add_option("--seed", seed, "suite seed");
    props->add_option("--instances", instances, "instances per identity row");
    props->add_flag("--fault-product-rule", fault,
                    "debug: perturb one product-rule operand by 1.01");
    props->add_flag("--strict", strict, "exit 2 when a row fails");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(derive)) return cmd_derive(path, mode);
        if (app.got_subcommand(solve))
            return cmd_solve(path, mode, mesh, tol, out_path, strict);
        if (app.got_subcommand(verify))
            return cmd_verify(path, mesh, tol, seed, verify_seed->count() > 0, out_path, strict);
        if (app.got_subcommand(calc))
            return cmd_calc(expr_text, omega_text, deriv, integral, at, calc_at->count() > 0,
                            interval, tol);
        if (app.got_subcommand(integrate_cmd))
            return cmd_integrate(f_text, omega_text, interval, tol, panels, strict);
        if (app.got_subcommand(props))
            return cmd_props(seed, props_seed->count() > 0, instances, fault, strict);
    } catch (const DegenerateElError& err) {
        std::cerr << "numerical error: " << err.what() << '\n';
        return kExitNumerical;
    } catch (const NoConvergenceError& err) {
        std::cerr << "numerical error: " << err.what() << '\n';
        return kExitNumerical;
    } catch (const NonFiniteObjectiveError& err) {
        std::cerr << "numerical error: " << err.what() << '\n';
        return kExitNumerical;
    } catch (const DegenerateStepError& err) {
        std::cerr << "numerical error: " << err.what() << '\n';
        return kExitNumerical;
    } catch (const EvalError& err) {
        std::cerr << "numerical error: " << err.what() << '\n';
        return kExitNumerical;
    } catch (const ValidationError& err) {
        std::cerr << "error: " << err.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}
