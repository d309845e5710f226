#include "omegacv/props.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "omegacv/numerics.hpp"
#include "omegacv/quadrature.hpp"

namespace omegacv {

namespace {

const std::vector<std::string> kXSlot{"x"};

Expr num(double v) { return Expr::constant(v); }
Expr x_var() { return Expr::variable("x"); }

// Pool of strictly increasing weights on [0, 1].
const std::vector<const char*> kOmegaPool{
    "x", "2*exp(x/2)", "x + x^3/3", "1.5*x + 0.25", "sinh(x) + 2*x", "ln(x + 2)"};

// Random cubic polynomial, optionally with a smooth transcendental term.
Expr random_smooth(Random& rng) {
    Expr e = num(std::round(rng.uniform(-8, 8)) / 4.0);
    for (int k = 1; k <= 3; ++k) {
        const double c = std::round(rng.uniform(-8, 8)) / 4.0;
        if (c != 0.0) e = e + num(c) * pow(x_var(), num(k));
    }
    switch (rng.pick(3)) {
        case 0:
            e = e + num(std::round(rng.uniform(-4, 4)) / 4.0) *
                        Expr::unary(UnaryOp::sin, num(2) * x_var());
            break;
        case 1:
            e = e + num(std::round(rng.uniform(-4, 4)) / 4.0) *
                        Expr::unary(UnaryOp::exp, x_var() / num(2));
            break;
        default: break;
    }
    return simplify(e);
}

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

struct Suite {
    const PropsConfig& cfg;
    std::vector<PropRow> rows;

    void row(const std::string& name, double tolerance, auto&& defect_of_instance) {
        Random rng(cfg.seed ^ fnv1a(name));
        PropRow r{name, cfg.instances, 0.0, tolerance, false};
        for (int i = 0; i < cfg.instances; ++i)
            r.max_defect = std::max(r.max_defect, defect_of_instance(rng));
        r.pass = r.max_defect <= tolerance;
        rows.push_back(std::move(r));
    }
};

double rel_defect(double lhs, double rhs) {
    return std::fabs(lhs - rhs) / std::max({1.0, std::fabs(lhs), std::fabs(rhs)});
}

OmegaFunction pick_omega(Random& rng) {
    return OmegaFunction(parse_or_throw(kOmegaPool[rng.pick(
                             static_cast<int>(kOmegaPool.size()))]),
                         0.0, 1.0, 101);
}

double eval_at(const Expr& e, double x) { return CompiledExpr(e, kXSlot)({x}); }

}  // namespace

std::vector<PropRow> run_identity_suite(const PropsConfig& cfg) {
    Suite s{cfg, {}};

    s.row("linearity", 1e-9, [&](Random& rng) {
        const OmegaFunction w = pick_omega(rng);
        const Expr f = random_smooth(rng), g = random_smooth(rng);
        const double a = std::round(rng.uniform(-8, 8)) / 4.0;
        const double b = std::round(rng.uniform(-8, 8)) / 4.0;
        const double x0 = rng.uniform(0.1, 0.9);
        const double lhs =
            eval_at(omega_derivative_symbolic(simplify(num(a) * f + num(b) * g), w), x0);
        const double rhs = a * eval_at(omega_derivative_symbolic(f, w), x0) +
                           b * eval_at(omega_derivative_symbolic(g, w), x0);
        return rel_defect(lhs, rhs);
    });

    s.row("power_rule", 1e-9, [&](Random& rng) {
        const OmegaFunction w = pick_omega(rng);
        const double p = std::round(rng.uniform(-8, 12)) / 4.0;
        const double x0 = rng.uniform(0.2, 0.9);
        const double lhs = eval_at(omega_derivative_symbolic(pow(x_var(), num(p)), w), x0);
        const double rhs = p * std::pow(x0, p - 1.0) / w.prime(x0);
        return rel_defect(lhs, rhs);
    });

    s.row("constant_rule", 1e-12, [&](Random& rng) {
        const OmegaFunction w = pick_omega(rng);
        const double c = rng.uniform(-5, 5);
        const double x0 = rng.uniform(0.1, 0.9);
        const double symbolic = eval_at(omega_derivative_symbolic(num(c), w), x0);
        const double numeric =
            omega_derivative_numeric([&](double) { return c; }, w, x0, 1e-3);
        return std::max(std::fabs(symbolic), std::fabs(numeric));
    });

    s.row("product_rule", 1e-9, [&](Random& rng) {
        const OmegaFunction w = pick_omega(rng);
        const Expr f = random_smooth(rng), g = random_smooth(rng);
        const double x0 = rng.uniform(0.1, 0.9);
        const double fault = cfg.fault_product_rule ? 1.01 : 1.0;
        const double df = eval_at(differentiate(f, "x"), x0) / (w.prime(x0) * fault);
        const double dg = eval_at(omega_derivative_symbolic(g, w), x0);
        const double lhs = eval_at(omega_derivative_symbolic(simplify(f * g), w), x0);
        const double rhs = eval_at(f, x0) * dg + eval_at(g, x0) * df;
        return rel_defect(lhs, rhs);
    });

    s.row("quotient_rule", 1e-9, [&](Random& rng) {
        const OmegaFunction w = pick_omega(rng);
        const Expr f = random_smooth(rng);
        Expr g = random_smooth(rng);
        double x0 = rng.uniform(0.1, 0.9);
        double gv = eval_at(g, x0);
        for (int tries = 0; std::fabs(gv) <= 0.1 && tries < 40; ++tries) {
            g = random_smooth(rng);
            x0 = rng.uniform(0.1, 0.9);
            gv = eval_at(g, x0);
        }
        if (std::fabs(gv) <= 0.1) return 0.0;  // skip a degenerate draw
        const double lhs = eval_at(
            omega_derivative_symbolic(Expr::binary(BinaryOp::div, f, g), w), x0);
        const double df = eval_at(omega_derivative_symbolic(f, w), x0);
        const double dg = eval_at(omega_derivative_symbolic(g, w), x0);
        const double rhs = (gv * df - eval_at(f, x0) * dg) / (gv * gv);
        return rel_defect(lhs, rhs);
    });

    s.row("chain_rule", 1e-9, [&](Random& rng) {
        const OmegaFunction w = pick_omega(rng);
        const Expr f = random_smooth(rng), g = random_smooth(rng);
        const double x0 = rng.uniform(0.1, 0.9);
        const Expr composed = simplify(substitute(f, "x", g));
        const double lhs = eval_at(omega_derivative_symbolic(composed, w), x0);
        const double rhs = eval_at(differentiate(f, "x"), eval_at(g, x0)) *
                           eval_at(omega_derivative_symbolic(g, w), x0);
        return rel_defect(lhs, rhs);
    });

    s.row("numeric_matches_symbolic", 1e-6, [&](Random& rng) {
        const OmegaFunction w = pick_omega(rng);
        const Expr f = random_smooth(rng);
        const double x0 = rng.uniform(0.1, 0.9);
        const CompiledExpr cf(f, kXSlot);
        const double numeric =
            omega_derivative_numeric([&](double x) { return cf({x}); }, w, x0, 1e-4);
        const double symbolic = eval_at(omega_derivative_symbolic(f, w), x0);
        return rel_defect(numeric, symbolic);
    });

    s.row("ftc_forward", 1e-9, [&](Random& rng) {
        const OmegaFunction w = pick_omega(rng);
        const Expr f = random_smooth(rng);
        const double t = rng.uniform(0.3, 1.0);
        const double lhs = ftc_forward(f, w, 0.0, t);
        const double rhs = eval_at(f, t) - eval_at(f, 0.0);
        return rel_defect(lhs, rhs);
    });

    s.row("ftc_backward", 1e-8, [&](Random& rng) {
        const OmegaFunction w = pick_omega(rng);
        const Expr f = random_smooth(rng);
        const double t = rng.uniform(0.2, 0.8);
        const double lhs = ftc_backward(f, w, 0.0, t);
        return rel_defect(lhs, eval_at(f, t));
    });

    s.row("integration_by_parts", 1e-9, [&](Random& rng) {
        const OmegaFunction w = pick_omega(rng);
        const Expr f = random_smooth(rng), g = random_smooth(rng);
        return std::fabs(integration_by_parts_defect(f, g, w, 0.0, 1.0));
    });

    s.row("integral_linearity", 1e-10, [&](Random& rng) {
        const OmegaFunction w = pick_omega(rng);
        const Expr f = random_smooth(rng), g = random_smooth(rng);
        const double k1 = std::round(rng.uniform(-8, 8)) / 4.0;
        const double k2 = std::round(rng.uniform(-8, 8)) / 4.0;
        const CompiledExpr cf(f, kXSlot), cg(g, kXSlot);
        const double lhs =
            j_omega([&](double x) { return k1 * cf({x}) + k2 * cg({x}); }, w, 0.0, 1.0).value;
        const double rhs =
            k1 * j_omega([&](double x) { return cf({x}); }, w, 0.0, 1.0).value +
            k2 * j_omega([&](double x) { return cg({x}); }, w, 0.0, 1.0).value;
        return rel_defect(lhs, rhs);
    });

    s.row("positivity", 0.0, [&](Random& rng) {
        const OmegaFunction w = pick_omega(rng);
        const Expr r = random_smooth(rng);
        const CompiledExpr cr(r, kXSlot);
        const double value =
            j_omega([&](double x) { const double v = cr({x}); return v * v; }, w, 0.0, 1.0)
                .value;
        return value >= 0.0 ? 0.0 : -value;
    });

    s.row("monotonicity", 1e-12, [&](Random& rng) {
        const OmegaFunction w = pick_omega(rng);
        const Expr f = random_smooth(rng), r = random_smooth(rng);
        const CompiledExpr cf(f, kXSlot), cr(r, kXSlot);
        // g = f - r^2 <= f pointwise
        const double jf = j_omega([&](double x) { return cf({x}); }, w, 0.0, 1.0).value;
        const double jg =
            j_omega([&](double x) { const double rv = cr({x}); return cf({x}) - rv * rv; }, w,
                    0.0, 1.0)
                .value;
        return std::max(0.0, jg - jf);
    });

    s.row("triangle_inequality", 1e-12, [&](Random& rng) {
        const OmegaFunction w = pick_omega(rng);
        const Expr f = random_smooth(rng);
        const CompiledExpr cf(f, kXSlot);
        const double jf = j_omega([&](double x) { return cf({x}); }, w, 0.0, 1.0).value;
        const double jabs =
            j_omega([&](double x) { return std::fabs(cf({x})); }, w, 0.0, 1.0).value;
        return std::max(0.0, std::fabs(jf) - jabs);
    });

    s.row("fundamental_lemma", 0.0, [&](Random& rng) {
        const OmegaFunction w = pick_omega(rng);
        // zero must probe true; a visibly nonzero g must probe false
        const bool zero_ok = fundamental_lemma_probe(num(0), w, 0.0, 1.0, 8);
        Expr g = random_smooth(rng);
        const Expr nonzero = simplify(g * g + num(0.5));
        const bool nonzero_detected = !fundamental_lemma_probe(nonzero, w, 0.0, 1.0, 8);
        return (zero_ok && nonzero_detected) ? 0.0 : 1.0;
    });

    s.row("leibniz_rule", 1e-7, [&](Random& rng) {
        const OmegaFunction w = pick_omega(rng);
        // f(t, x) smooth in both slots, mildly nonlinear in x
        const double c0 = std::round(rng.uniform(-4, 4)) / 4.0;
        const double c1 = std::round(rng.uniform(-4, 4)) / 4.0;
        const double c2 = std::round(rng.uniform(-4, 4)) / 4.0;
        const Expr t = Expr::variable("t");
        const Expr f = simplify(num(c0) * t + num(c1) * t * x_var() +
                                num(c2) * pow(x_var(), num(2)) * Expr::unary(UnaryOp::sin, t));
        const double x0 = rng.uniform(0.2, 0.8);
        return std::fabs(leibniz_defect(f, w, 0.0, 1.0, x0));
    });

    s.row("identity_reduction", 0.0, [&](Random& rng) {
        const OmegaFunction id = OmegaFunction::identity(0.0, 1.0);
        const Expr f = random_smooth(rng);
        const bool same = structurally_equal(omega_derivative_symbolic(f, id),
                                             differentiate(f, "x"));
        return same ? 0.0 : 1.0;
    });

    return s.rows;
}

std::string render_props_table(std::span<const PropRow> rows, const PropsConfig& cfg) {
    std::ostringstream out;
    out << "identity suite: seed " << cfg.seed << ", " << cfg.instances
        << " instances per row" << (cfg.fault_product_rule ? ", fault injected" : "") << "\n";
    char line[160];
    std::snprintf(line, sizeof(line), "%-26s  %-9s  %-12s  %-10s  %s\n", "identity", "instances",
                  "max defect", "tolerance", "status");
    out << line;
    for (const auto& r : rows) {
        std::snprintf(line, sizeof(line), "%-26s  %-9d  %-12.3e  %-10.1e  %s\n", r.name.c_str(),
                      r.instances, r.max_defect, r.tolerance, r.pass ? "pass" : "FAIL");
        out << line;
    }
    return out.str();
}

}  // namespace omegacv
