#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "omegacv/numerics.hpp"
#include "omegacv/omega.hpp"

using namespace omegacv;

namespace {

OmegaFunction exp_weight(double a = 0.0, double b = 1.0) {
    return OmegaFunction(parse_or_throw("2*exp(x/2)"), a, b);
}

const std::vector<std::string> kXSlot{"x"};

double eval_at(const Expr& e, double x) { return CompiledExpr(e, kXSlot)({x}); }

}  // namespace

TEST_CASE("weight construction validates strict monotonicity") {
    CHECK_NOTHROW(exp_weight());
    CHECK_NOTHROW(OmegaFunction::identity(0.0, 1.0));
    CHECK_THROWS_AS(OmegaFunction(parse_or_throw("-x"), 0.0, 1.0), ValidationError);
    CHECK_THROWS_AS(OmegaFunction(parse_or_throw("x^2"), -1.0, 1.0), ValidationError);  // flat at 0
    CHECK_THROWS_AS(OmegaFunction(parse_or_throw("5"), 0.0, 1.0), ValidationError);
    CHECK_THROWS_AS(OmegaFunction(parse_or_throw("x+q"), 0.0, 1.0), ValidationError);
    CHECK_THROWS_AS(OmegaFunction(parse_or_throw("x"), 1.0, 1.0), ValidationError);

    const OmegaFunction w = exp_weight();
    CHECK(to_string(w.prime_expr()) == "exp(x/2)");
    CHECK(eval_at(w.second_expr(), 0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(w.value(1.0) == doctest::Approx(3.2974425414002563).epsilon(1e-15));
}

TEST_CASE("symbolic weighted derivative") {
    const OmegaFunction w = exp_weight();

    // the weight against itself gives exactly 1
    CHECK(to_string(omega_derivative_symbolic(w.expr(), w)) == "1");

    // power rule shape: p * x^(p-1) / omega'
    const Expr d = omega_derivative_symbolic(parse_or_throw("x^p"), w);
    for (double x : {0.25, 0.5, 0.8}) {
        Env env{{"x", x}, {"p", 1.75}};
        CHECK(evaluate(d, env) ==
              doctest::Approx(1.75 * std::pow(x, 0.75) / std::exp(x / 2)).epsilon(1e-13));
    }

    // hand-checked oracle: f = (1 - e^x)/(1 - e) gives exp(x/2)/(e - 1)
    const Expr f = parse_or_throw("(1 - exp(x))/(1 - e)");
    const Expr df = omega_derivative_symbolic(f, w);
    for (double x : {0.0, 0.3, 0.7, 1.0}) {
        const double expected = std::exp(x / 2) / (std::exp(1.0) - 1.0);
        CHECK(eval_at(df, x) == doctest::Approx(expected).epsilon(1e-13));
    }

    // identity weight reduces to the ordinary derivative structurally
    const OmegaFunction id = OmegaFunction::identity(0.0, 1.0);
    const Expr g = parse_or_throw("sin(x) + x^3");
    CHECK(structurally_equal(omega_derivative_symbolic(g, id), differentiate(g, "x")));
}

TEST_CASE("numeric weighted derivative") {
    const OmegaFunction w = exp_weight();

    for (double h : {1e-2, 1e-4, 1e-6})
        CHECK(omega_derivative_numeric([](double) { return 4.25; }, w, 0.5, h) == 0.0);

    // identity weight: the quotient is the classical central difference
    const OmegaFunction id = OmegaFunction::identity(0.0, 1.0);
    const double cd = omega_derivative_numeric([](double x) { return std::sin(x); }, id, 0.4, 1e-3);
    CHECK(cd == doctest::Approx((std::sin(0.401) - std::sin(0.399)) / 2e-3).epsilon(1e-15));

    // converges to the symbolic value at second order
    const Expr f = parse_or_throw("sin(x)");
    const double exact = eval_at(omega_derivative_symbolic(f, w), 0.3);
    const double e3 = std::fabs(
        omega_derivative_numeric([](double x) { return std::sin(x); }, w, 0.3, 1e-3) - exact);
    const double e4 = std::fabs(
        omega_derivative_numeric([](double x) { return std::sin(x); }, w, 0.3, 1e-4) - exact);
    CHECK(e3 <= 1e-6);
    CHECK(e4 <= 1.2e-2 * e3);  // one decade of h gives about two decades of error

    CHECK_THROWS_AS(
        omega_derivative_numeric([](double x) { return x; }, w, 0.5, 1e-16),
        DegenerateStepError);
    CHECK_THROWS_AS(omega_derivative_numeric([](double x) { return x; }, w, 0.0, 1e-3),
                    ValidationError);
}

TEST_CASE("weighted partial derivatives in both modes") {
    const OmegaFunction w = exp_weight();
    const std::vector<std::string> slots{"x", "y", "z"};
    const Expr f = parse_or_throw("z^2");

    const Expr traj = omega_partial(f, slots, 2, w, PartialMode::trajectory);
    // 2z / omega'(x)
    CHECK(evaluate(traj, Env{{"x", 0.5}, {"z", 1.5}}) ==
          doctest::Approx(3.0 / std::exp(0.25)).epsilon(1e-14));

    const Expr lit = omega_partial(f, slots, 2, w, PartialMode::literal);
    // 2z / omega'(z): the weight argument moves to the slot variable
    CHECK(evaluate(lit, Env{{"z", 1.5}}) ==
          doctest::Approx(3.0 / std::exp(0.75)).epsilon(1e-14));

    CHECK(to_string(omega_partial(f, slots, 1, w, PartialMode::trajectory)) == "0");

    const OmegaFunction id = OmegaFunction::identity(0.0, 1.0);
    CHECK(structurally_equal(omega_partial(f, slots, 2, id, PartialMode::trajectory),
                             omega_partial(f, slots, 2, id, PartialMode::literal)));
    CHECK(to_string(omega_partial(f, slots, 2, id, PartialMode::trajectory)) == "2*z");

    CHECK_THROWS_AS(omega_partial(f, slots, 7, w, PartialMode::literal), ValidationError);
}

TEST_CASE("admissibility diagnostic") {
    // f = x^2, omega = x on [1,2]: ratio 2x/x = 2 is constant
    const OmegaFunction lin(parse_or_throw("x"), 1.0, 2.0);
    const auto constant_ratio = check_admissible(parse_or_throw("x^2"), lin, 101);
    CHECK_FALSE(constant_ratio.is_admissible);
    CHECK(constant_ratio.relative_spread <= 1e-9);

    const auto cubic = check_admissible(parse_or_throw("x^3"), lin, 101);
    CHECK(cubic.is_admissible);

    // ratio exp(x/2) / (2 (e - 1)) is non-constant; denser sampling agrees
    const OmegaFunction w = exp_weight();
    const Expr f = parse_or_throw("(1 - exp(x))/(1 - e)");
    const auto coarse = check_admissible(f, w, 11);
    const auto dense = check_admissible(f, w, 10001);
    CHECK(coarse.is_admissible);
    CHECK(dense.is_admissible);

    // omega = x on [-1, 1] vanishes at a sample; that point is skipped
    const OmegaFunction through_zero(parse_or_throw("x"), -1.0, 1.0);
    const auto skipped = check_admissible(parse_or_throw("x^3"), through_zero, 5);
    CHECK(skipped.skipped.size() == 1);
    CHECK(skipped.witnesses.size() == 4);

    CHECK_THROWS_AS(check_admissible(parse_or_throw("x"), w, 2), ValidationError);
}

TEST_CASE("property: derivative rules hold at random points") {
    const std::vector<const char*> weights{"x", "2*exp(x/2)", "x + x^3/3"};
    Random rng(424242u);

    auto random_poly = [&]() {
        Expr e = Expr::constant(std::round(rng.uniform(-8, 8)) / 4.0);
        for (int k = 1; k <= 3; ++k)
            e = e + Expr::constant(std::round(rng.uniform(-8, 8)) / 4.0) *
                        pow(Expr::variable("x"), Expr::constant(k));
        return simplify(e);
    };

    int product_checked = 0, quotient_checked = 0, chain_checked = 0, linear_checked = 0;
    for (int i = 0; i < 120; ++i) {
        const OmegaFunction w(parse_or_throw(weights[rng.pick(3)]), 0.0, 1.0, 101);
        const Expr f = random_poly(), g = random_poly();
        const double x0 = rng.uniform(0.05, 0.95);
        const double fv = eval_at(f, x0), gv = eval_at(g, x0);
        const double df = eval_at(omega_derivative_symbolic(f, w), x0);
        const double dg = eval_at(omega_derivative_symbolic(g, w), x0);
        auto close = [](double lhs, double rhs) {
            return std::fabs(lhs - rhs) <=
                   1e-9 * std::max({1.0, std::fabs(lhs), std::fabs(rhs)});
        };

        // linearity
        const double a = std::round(rng.uniform(-8, 8)) / 4.0;
        const double b = std::round(rng.uniform(-8, 8)) / 4.0;
        const Expr lin = simplify(Expr::constant(a) * f + Expr::constant(b) * g);
        CHECK(close(eval_at(omega_derivative_symbolic(lin, w), x0), a * df + b * dg));
        ++linear_checked;

        // product rule
        const double dprod = eval_at(omega_derivative_symbolic(simplify(f * g), w), x0);
        CHECK(close(dprod, fv * dg + gv * df));
        ++product_checked;

        // quotient rule, away from small denominators
        if (std::fabs(gv) > 0.1) {
            const double dquot = eval_at(
                omega_derivative_symbolic(Expr::binary(BinaryOp::div, f, g), w), x0);
            CHECK(close(dquot, (gv * df - fv * dg) / (gv * gv)));
            ++quotient_checked;
        }

        // chain rule: f'(g(x)) * D_omega g
        const Expr composed = simplify(substitute(f, "x", g));
        const double dchain = eval_at(omega_derivative_symbolic(composed, w), x0);
        CHECK(close(dchain, eval_at(differentiate(f, "x"), gv) * dg));
        ++chain_checked;
    }
    CHECK(linear_checked >= 100);
    CHECK(product_checked >= 100);
    CHECK(quotient_checked >= 80);
    CHECK(chain_checked >= 100);
}
