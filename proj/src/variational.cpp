#include "omegacv/variational.hpp"

#include <algorithm>
#include <cmath>

namespace omegacv {

namespace {

const std::vector<std::string> kLagrangianSlots{"x", "y", "z"};
const std::vector<std::string> kResidualSlots{"x", "y", "yp", "ypp"};
const std::vector<std::string> kXSlot{"x"};

Expr var(const char* name) { return Expr::variable(name); }

// d/dx of G(x, y, yp) along a trajectory: G_x + G_y * yp + G_yp * ypp.
Expr total_x_derivative(const Expr& g) {
    return simplify(differentiate(g, "x") + differentiate(g, "y") * var("yp") +
                    differentiate(g, "yp") * var("ypp"));
}

struct TrajectoryCallable {
    CubicSpline spline;
    const OmegaFunction* w;
    double y(double x) const { return spline.value(x); }
    double z(double x) const { return spline.derivative(x) / w->prime(x); }
};

TrajectoryCallable make_trajectory(const VariationalProblem& p,
                                   const TrajectorySolution& traj) {
    if (traj.mesh.size() != traj.values.size() || traj.mesh.size() < 4)
        throw ValidationError("trajectory needs matching mesh/values with >= 4 nodes");
    if (std::fabs(traj.values.front() - p.y_a) > 1e-9 ||
        std::fabs(traj.values.back() - p.y_b) > 1e-9)
        throw ValidationError("trajectory does not satisfy the boundary conditions");
    return TrajectoryCallable{CubicSpline(traj.mesh, traj.values), &p.omega};
}

struct ClosedFormCallable {
    CompiledExpr y_comp, z_comp;
    double y(double x) const { return y_comp({x}); }
    double z(double x) const { return z_comp({x}); }
};

ClosedFormCallable make_closed_form(const VariationalProblem& p, const Expr& y_of_x) {
    for (const auto& v : y_of_x.free_variables())
        if (v != "x")
            throw ValidationError("closed-form trajectory may depend only on x, found '" + v +
                                  "'");
    const Expr z = simplify(Expr::binary(BinaryOp::div, differentiate(y_of_x, "x"),
                                         p.omega.prime_expr()));
    ClosedFormCallable out{CompiledExpr(y_of_x, kXSlot), CompiledExpr(z, kXSlot)};
    if (std::fabs(out.y(p.a) - p.y_a) > 1e-9 || std::fabs(out.y(p.b) - p.y_b) > 1e-9)
        throw ValidationError("closed-form trajectory does not satisfy the boundary conditions");
    return out;
}

template <class Callable>
double functional_value(const VariationalProblem& p, const Callable& y,
                        const QuadratureConfig& cfg) {
    const CompiledExpr lag(p.lagrangian, kLagrangianSlots);
    return j_omega([&](double x) { return lag({x, y.y(x), y.z(x)}); }, p.omega, p.a, p.b, cfg)
        .value;
}

template <class Callable>
double variation_omega(const VariationalProblem& p, const Callable& y, const Variation& eta,
                       const QuadratureConfig& cfg) {
    const CompiledExpr ly(differentiate(p.lagrangian, "y"), kLagrangianSlots);
    const CompiledExpr lz(differentiate(p.lagrangian, "z"), kLagrangianSlots);
    // (L_y/w') eta + (L_z/w') (eta'/w'), integrated against the weight w'.
    return integrate(
               [&](double x) {
                   const double yv = y.y(x), zv = y.z(x);
                   return ly({x, yv, zv}) * eta.value(x) +
                          lz({x, yv, zv}) * eta.derivative(x) / p.omega.prime(x);
               },
               p.a, p.b, cfg)
        .value;
}

template <class Callable>
double variation_gateaux(const VariationalProblem& p, const Callable& y, const Variation& eta,
                         const QuadratureConfig& cfg) {
    const CompiledExpr ly(differentiate(p.lagrangian, "y"), kLagrangianSlots);
    const CompiledExpr lz(differentiate(p.lagrangian, "z"), kLagrangianSlots);
    return integrate(
               [&](double x) {
                   const double yv = y.y(x), zv = y.z(x);
                   return ly({x, yv, zv}) * eta.value(x) * p.omega.prime(x) +
                          lz({x, yv, zv}) * eta.derivative(x);
               },
               p.a, p.b, cfg)
        .value;
}

}  // namespace

VariationalProblem::VariationalProblem(Expr lagrangian_in, OmegaFunction omega_in, double ya,
                                       double yb)
    : lagrangian(simplify(lagrangian_in)),
      omega(std::move(omega_in)),
      a(omega.a()),
      b(omega.b()),
      y_a(ya),
      y_b(yb) {
    for (const auto& v : lagrangian.free_variables())
        if (v != "x" && v != "y" && v != "z")
            throw ValidationError("Lagrangian may depend only on {x, y, z}, found '" + v + "'");
    if (!(std::isfinite(y_a) && std::isfinite(y_b)))
        throw ValidationError("boundary values must be finite");
}

EulerLagrangeForm build_el_residual(const VariationalProblem& p, ElMode mode) {
    const OmegaFunction& w = p.omega;
    // generalized partials of L in trajectory mode: divide by omega'(x)
    const Expr lz_over_wp =
        omega_partial(p.lagrangian, kLagrangianSlots, 2, w, PartialMode::trajectory);
    const Expr ly = differentiate(p.lagrangian, "y");
    const Expr lz = differentiate(p.lagrangian, "z");

    const Expr z_of_yp = Expr::binary(BinaryOp::div, var("yp"), w.prime_expr());
    auto on_trajectory = [&](const Expr& g) { return simplify(substitute(g, "z", z_of_yp)); };

    EulerLagrangeForm form;
    form.mode = mode;
    if (mode == ElMode::omega) {
        form.residual = simplify(total_x_derivative(on_trajectory(lz_over_wp)) -
                                 on_trajectory(ly));
        form.note = "d/dx[L_z/w'] - L_y (generalized equation scaled by w')";
    } else {
        form.residual = simplify(total_x_derivative(on_trajectory(lz)) -
                                 on_trajectory(ly) * w.prime_expr());
        form.note = "d/dx[L_z] - L_y*w' (classical equation of the weighted integrand)";
    }
    form.ypp_coefficient = differentiate(form.residual, "ypp");
    return form;
}

TrajectorySolution solve_el_bvp(const VariationalProblem& p, const EulerLagrangeForm& form,
                                int n, const SolverConfig& cfg) {
    if (n < 4) throw ValidationError("mesh needs at least 4 intervals");
    const double h = (p.b - p.a) / n;

    const CompiledExpr res(form.residual, kResidualSlots);
    const CompiledExpr res_y(differentiate(form.residual, "y"), kResidualSlots);
    const CompiledExpr res_yp(differentiate(form.residual, "yp"), kResidualSlots);
    const CompiledExpr res_ypp(form.ypp_coefficient, kResidualSlots);

    std::vector<double> mesh(n + 1);
    for (int i = 0; i <= n; ++i) mesh[i] = p.a + i * h;
    mesh[n] = p.b;

    std::vector<double> y(n + 1);
    for (int i = 0; i <= n; ++i)
        y[i] = p.y_a + (p.y_b - p.y_a) * (mesh[i] - p.a) / (p.b - p.a);
    y[0] = p.y_a;
    y[n] = p.y_b;

    auto stencil = [&](const std::vector<double>& v, int i, double& yp, double& ypp) {
        yp = (v[i + 1] - v[i - 1]) / (2.0 * h);
        ypp = (v[i + 1] - 2.0 * v[i] + v[i - 1]) / (h * h);
    };
    auto residual_norm = [&](const std::vector<double>& v) {
        double norm = 0.0;
        for (int i = 1; i < n; ++i) {
            double yp, ypp;
            stencil(v, i, yp, ypp);
            norm = std::max(norm, std::fabs(res({mesh[i], v[i], yp, ypp})));
        }
        return norm;
    };

    TrajectorySolution out;
    out.mesh = mesh;

    std::vector<double> F(n - 1), lower(n - 2), diag(n - 1), upper(n - 2);
    double norm = residual_norm(y);
    int iter = 0;
    while (norm > cfg.residual_tol) {
        if (iter >= cfg.max_iterations)
            throw NoConvergenceError("Newton did not reach the residual tolerance in " +
                                     std::to_string(cfg.max_iterations) +
                                     " iterations (residual " + std::to_string(norm) + ")");
        for (int i = 1; i < n; ++i) {
            double yp, ypp;
            stencil(y, i, yp, ypp);
            const double args[4] = {mesh[i], y[i], yp, ypp};
            const double c_ypp = res_ypp(args);
            if (std::fabs(c_ypp) < 1e-12)
                throw DegenerateElError(
                    "ypp coefficient vanished at x = " + std::to_string(mesh[i]) +
                    " (|coeff| < 1e-12); the collocation row is degenerate");
            F[i - 1] = res(args);
            const double ry = res_y(args);
            const double ryp = res_yp(args);
            diag[i - 1] = ry - 2.0 * c_ypp / (h * h);
            if (i > 1) lower[i - 2] = -ryp / (2.0 * h) + c_ypp / (h * h);
            if (i < n - 1) upper[i - 1] = ryp / (2.0 * h) + c_ypp / (h * h);
        }
        std::vector<double> rhs(n - 1);
        for (int i = 0; i < n - 1; ++i) rhs[i] = -F[i];
        const std::vector<double> delta = solve_tridiagonal(lower, diag, upper, rhs);

        double step = 1.0;
        bool accepted = false;
        std::vector<double> trial(y);
        for (int halving = 0; halving <= cfg.max_halvings; ++halving) {
            for (int i = 1; i < n; ++i) trial[i] = y[i] + step * delta[i - 1];
            double trial_norm;
            try {
                trial_norm = residual_norm(trial);
            } catch (const EvalError&) {
                step *= 0.5;
                continue;  // stepped outside the Lagrangian's domain
            }
            if (trial_norm < norm) {
                y.swap(trial);
                norm = trial_norm;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        ++iter;
        if (!accepted)
            throw NoConvergenceError("line search could not reduce the residual below " +
                                     std::to_string(norm) + " at iteration " +
                                     std::to_string(iter));
    }

    out.values = y;
    out.iterations = iter;
    out.residual_norm = norm;
    out.converged = true;
    out.y_prime.resize(n + 1);
    out.d_omega.resize(n + 1);
    for (int i = 1; i < n; ++i) out.y_prime[i] = (y[i + 1] - y[i - 1]) / (2.0 * h);
    out.y_prime[0] = (-3.0 * y[0] + 4.0 * y[1] - y[2]) / (2.0 * h);
    out.y_prime[n] = (3.0 * y[n] - 4.0 * y[n - 1] + y[n - 2]) / (2.0 * h);
    for (int i = 0; i <= n; ++i) out.d_omega[i] = out.y_prime[i] / p.omega.prime(mesh[i]);
    return out;
}

double evaluate_functional(const VariationalProblem& p, const TrajectorySolution& trajectory,
                           const QuadratureConfig& cfg) {
    return functional_value(p, make_trajectory(p, trajectory), cfg);
}

double evaluate_functional(const VariationalProblem& p, const Expr& y_of_x,
                           const QuadratureConfig& cfg) {
    return functional_value(p, make_closed_form(p, y_of_x), cfg);
}

Variation::Variation(Expr eta, double a, double b) : eta_(simplify(eta)) {
    for (const auto& v : eta_.free_variables())
        if (v != "x")
            throw ValidationError("variation may depend only on x, found '" + v + "'");
    comp_eta_ = CompiledExpr(eta_, kXSlot);
    comp_deta_ = CompiledExpr(differentiate(eta_, "x"), kXSlot);
    if (std::fabs(comp_eta_({a})) > 1e-12 || std::fabs(comp_eta_({b})) > 1e-12)
        throw ValidationError("variation must vanish at both endpoints");
}

double first_variation_omega(const VariationalProblem& p, const TrajectorySolution& y,
                             const Variation& eta, const QuadratureConfig& cfg) {
    return variation_omega(p, make_trajectory(p, y), eta, cfg);
}

double first_variation_omega(const VariationalProblem& p, const Expr& y, const Variation& eta,
                             const QuadratureConfig& cfg) {
    return variation_omega(p, make_closed_form(p, y), eta, cfg);
}

double first_variation_gateaux(const VariationalProblem& p, const TrajectorySolution& y,
                               const Variation& eta, const QuadratureConfig& cfg) {
    return variation_gateaux(p, make_trajectory(p, y), eta, cfg);
}

double first_variation_gateaux(const VariationalProblem& p, const Expr& y, const Variation& eta,
                               const QuadratureConfig& cfg) {
    return variation_gateaux(p, make_closed_form(p, y), eta, cfg);
}

ConvexityReport check_joint_convexity(const Expr& lagrangian, const OmegaFunction& w, Box xbox,
                                      Box ybox, Box zbox, Box deltas, long samples,
                                      std::uint64_t seed) {
    if (samples < 1) throw ValidationError("convexity check needs at least one sample");
    const Expr lag = simplify(lagrangian);
    const CompiledExpr l(lag, kLagrangianSlots);
    const CompiledExpr ly(differentiate(lag, "y"), kLagrangianSlots);
    const CompiledExpr lz(differentiate(lag, "z"), kLagrangianSlots);

    ConvexityReport report;
    report.samples = samples;
    report.seed = seed;
    Random rng(seed);
    for (long s = 0; s < samples; ++s) {
        // draw order is part of the determinism contract
        const double x = rng.uniform(xbox.lo, xbox.hi);
        const double yv = rng.uniform(ybox.lo, ybox.hi);
        const double zv = rng.uniform(zbox.lo, zbox.hi);
        const double y1 = rng.uniform(deltas.lo, deltas.hi);
        const double z1 = rng.uniform(deltas.lo, deltas.hi);
        const double wp = w.prime(x);
        const double lhs = l({x, yv + y1, zv + z1}) - l({x, yv, zv});
        const double rhs = ly({x, yv, zv}) / wp * y1 + lz({x, yv, zv}) / wp * z1;
        if (lhs < rhs - 1e-12)
            report.violations.push_back({x, yv, zv, y1, z1, lhs, rhs});
    }
    return report;
}

bool fundamental_lemma_probe(const Expr& g, const OmegaFunction& w, double a, double b,
                             int subintervals, double tol) {
    if (subintervals < 1) throw ValidationError("need at least one subinterval");
    if (!w.contains(a) || !w.contains(b) || !(a < b))
        throw ValidationError("probe interval must lie inside the weight domain");
    const CompiledExpr cg(simplify(g), kXSlot);

    bool integrals_small = true;
    for (int k = 0; k < subintervals; ++k) {
        const double alpha = a + (b - a) * k / subintervals;
        const double beta = a + (b - a) * (k + 1) / subintervals;
        const auto bump = [&](double x) {
            return (x - alpha) * (x - alpha) * (beta - x) * (beta - x);
        };
        const double integral =
            j_omega([&](double x) { return cg({x}) * bump(x); }, w, alpha, beta, {}).value;
        if (std::fabs(integral) > tol) integrals_small = false;
    }

    double max_abs = 0.0;
    const int grid = 2001;
    for (int i = 0; i < grid; ++i) {
        const double x = a + (b - a) * i / (grid - 1);
        max_abs = std::max(max_abs, std::fabs(cg({x})));
    }
    return integrals_small && max_abs <= tol;
}

double leibniz_defect(const Expr& f, const OmegaFunction& w, double a, double b, double x0,
                      double h, const QuadratureConfig& cfg) {
    for (const auto& v : f.free_variables())
        if (v != "t" && v != "x")
            throw ValidationError("integrand may depend only on {t, x}, found '" + v + "'");
    if (!w.contains(x0 - h) || !w.contains(x0 + h))
        throw ValidationError("x0 +/- h must lie inside the weight domain");
    const std::vector<std::string> slots{"t", "x"};
    const CompiledExpr cf(f, slots);
    const CompiledExpr cfx(differentiate(f, "x"), slots);

    // F(x) = weighted integral over t of f(t, x)
    auto big_f = [&](double x) {
        return j_omega([&](double t) { return cf({t, x}); }, w, a, b, cfg).value;
    };
    const double lhs =
        omega_derivative_numeric([&](double x) { return big_f(x); }, w, x0, h);
    const double rhs =
        j_omega([&](double t) { return cfx({t, x0}); }, w, a, b, cfg).value / w.prime(x0);
    return std::fabs(lhs) - std::fabs(rhs);
}

}  // namespace omegacv
