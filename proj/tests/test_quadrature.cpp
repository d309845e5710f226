#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "omegacv/numerics.hpp"
#include "omegacv/quadrature.hpp"

using namespace omegacv;

namespace {

OmegaFunction exp_weight(double a = 0.0, double b = 1.0) {
    return OmegaFunction(parse_or_throw("2*exp(x/2)"), a, b);
}

}  // namespace

TEST_CASE("weighted integral of 1 telescopes to omega(b) - omega(a)") {
    const OmegaFunction w = exp_weight();
    const auto r = j_omega([](double) { return 1.0; }, w, 0.0, 1.0);
    CHECK(r.tolerance_reached);
    // 40-digit reference for 2*(e^(1/2) - 1): 1.297442541400256293697301575628327143308
    CHECK(r.value == doctest::Approx(1.2974425414002563).epsilon(1e-13));
    CHECK(r.value == doctest::Approx(w.value(1.0) - w.value(0.0)).epsilon(1e-13));

    const OmegaFunction cubic(parse_or_throw("x + x^3/3"), -0.5, 2.0);
    const auto r2 = j_omega([](double) { return 1.0; }, cubic, -0.5, 2.0);
    CHECK(r2.value == doctest::Approx(cubic.value(2.0) - cubic.value(-0.5)).epsilon(1e-13));
}

TEST_CASE("degenerate and invalid intervals") {
    const OmegaFunction w = exp_weight();
    const auto r = j_omega([](double) { return 1.0; }, w, 0.4, 0.4);
    CHECK(r.value == 0.0);
    CHECK(r.error_estimate == 0.0);
    CHECK_THROWS_AS(j_omega([](double) { return 1.0; }, w, 0.8, 0.2), ValidationError);
    CHECK_THROWS_AS(j_omega([](double) { return 1.0; }, w, -0.5, 0.5), ValidationError);
}

TEST_CASE("positivity: nonnegative integrand gives a nonnegative value") {
    const OmegaFunction w = exp_weight();
    Random rng(1123u);
    for (int i = 0; i < 50; ++i) {
        const double c0 = rng.uniform(-2, 2), c1 = rng.uniform(-2, 2);
        const auto r = j_omega(
            [&](double x) {
                const double v = c0 + c1 * std::sin(3 * x);
                return v * v;
            },
            w, 0.0, 1.0);
        CHECK(r.value >= 0.0);
    }
}

TEST_CASE("fundamental theorem, forward direction") {
    const OmegaFunction w = exp_weight();
    CHECK(ftc_forward(parse_or_throw("x^2"), w, 0.0, 1.0) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(ftc_forward(parse_or_throw("7.5"), w, 0.0, 1.0) == doctest::Approx(0.0));
    // 40-digit reference for sin(1): 0.8414709848078965066525023216302989996226
    CHECK(ftc_forward(parse_or_throw("sin(x)"), w, 0.0, 1.0) ==
          doctest::Approx(0.8414709848078965).epsilon(1e-12));
}

TEST_CASE("fundamental theorem, backward direction") {
    const OmegaFunction w = exp_weight();
    for (double c : {-2.0, 0.25, 3.0})
        CHECK(ftc_backward(Expr::constant(c), w, 0.0, 0.5) == doctest::Approx(c).epsilon(1e-9));
    // 40-digit reference for e^(1/2): 1.648721270700128146848650787814163571654
    CHECK(ftc_backward(parse_or_throw("exp(x)"), w, 0.0, 0.5) ==
          doctest::Approx(1.6487212707001281).epsilon(1e-9));

    const OmegaFunction id = OmegaFunction::identity(0.0, 1.0);
    CHECK(ftc_backward(parse_or_throw("cos(x)"), id, 0.0, 0.5) ==
          doctest::Approx(std::cos(0.5)).epsilon(1e-9));
}

TEST_CASE("integration by parts defect vanishes") {
    const OmegaFunction w = exp_weight();
    // f constant: reduces to the forward fundamental theorem for g
    CHECK(std::fabs(integration_by_parts_defect(parse_or_throw("1"), parse_or_throw("x^3 - x"),
                                                w, 0.0, 1.0)) <= 1e-10);
    CHECK(std::fabs(integration_by_parts_defect(parse_or_throw("x"), parse_or_throw("x"), w,
                                                0.0, 1.0)) <= 1e-9);
    CHECK(std::fabs(integration_by_parts_defect(parse_or_throw("sin(x)"), parse_or_throw("1"),
                                                w, 0.0, 1.0)) <= 1e-10);
}

TEST_CASE("property: integral linearity, monotonicity, triangle inequality") {
    const OmegaFunction w = exp_weight();
    Random rng(5150u);
    for (int i = 0; i < 40; ++i) {
        const double c0 = rng.uniform(-2, 2), c1 = rng.uniform(-2, 2);
        const double d0 = rng.uniform(-2, 2), d1 = rng.uniform(-2, 2);
        auto f = [&](double x) { return c0 + c1 * std::sin(2 * x); };
        auto g = [&](double x) { return d0 + d1 * std::cos(3 * x); };
        const double jf = j_omega(f, w, 0.0, 1.0).value;
        const double jg = j_omega(g, w, 0.0, 1.0).value;

        const double k1 = rng.uniform(-3, 3), k2 = rng.uniform(-3, 3);
        const double jlin =
            j_omega([&](double x) { return k1 * f(x) + k2 * g(x); }, w, 0.0, 1.0).value;
        CHECK(std::fabs(jlin - (k1 * jf + k2 * jg)) <=
              1e-10 * std::max({1.0, std::fabs(jlin), std::fabs(k1 * jf + k2 * jg)}));

        // f >= f - g^2 pointwise
        const double jsmaller =
            j_omega([&](double x) { const double gv = g(x); return f(x) - gv * gv; }, w, 0.0,
                    1.0)
                .value;
        CHECK(jf >= jsmaller - 1e-12);

        const double jabs =
            j_omega([&](double x) { return std::fabs(f(x)); }, w, 0.0, 1.0).value;
        CHECK(std::fabs(jf) <= jabs + 1e-12);
    }
}

TEST_CASE("doubling panels contracts the error estimate at high order") {
    const OmegaFunction w = exp_weight();
    auto wavy = [](double x) { return std::sin(5.0 * x) + 0.3 * std::cos(9.0 * x); };

    const double i1 = integrate_fixed([&](double x) { return wavy(x) * w.prime(x); }, 0.0, 1.0, 1);
    const double i2 = integrate_fixed([&](double x) { return wavy(x) * w.prime(x); }, 0.0, 1.0, 2);
    const double i4 = integrate_fixed([&](double x) { return wavy(x) * w.prime(x); }, 0.0, 1.0, 4);
    const double i8 = integrate_fixed([&](double x) { return wavy(x) * w.prime(x); }, 0.0, 1.0, 8);
    const double e1 = std::fabs(i2 - i1), e2 = std::fabs(i4 - i2), e4 = std::fabs(i8 - i4);
    CHECK(e1 / e2 >= 256.0);
    CHECK(e2 / e4 >= 256.0);
}

TEST_CASE("tolerance-not-reached is reported, not silently dropped") {
    const OmegaFunction w = exp_weight();
    QuadratureConfig cfg;
    cfg.panels = 1;
    cfg.max_doublings = 0;
    cfg.tolerance = 1e-16;
    const auto r = j_omega([](double x) { return std::sin(40.0 * x); }, w, 0.0, 1.0, cfg);
    CHECK_FALSE(r.tolerance_reached);
    CHECK(r.error_estimate > 1e-16);
}

TEST_CASE("spline interpolation error decays at fourth order") {
    auto f = [](double x) { return std::exp(x) * std::sin(2.0 * x); };
    auto fp = [](double x) { return std::exp(x) * (std::sin(2.0 * x) + 2.0 * std::cos(2.0 * x)); };
    double prev_err = 0.0;
    for (int n : {16, 32, 64}) {
        std::vector<double> xs(n + 1), ys(n + 1);
        for (int i = 0; i <= n; ++i) {
            xs[i] = static_cast<double>(i) / n;
            ys[i] = f(xs[i]);
        }
        CubicSpline s(xs, ys);
        double err = 0.0, derr = 0.0;
        for (int k = 0; k <= 1000; ++k) {
            const double x = k / 1000.0;
            err = std::max(err, std::fabs(s.value(x) - f(x)));
            derr = std::max(derr, std::fabs(s.derivative(x) - fp(x)));
        }
        if (prev_err > 0.0) CHECK(prev_err / err >= 12.0);  // ~2^4 with slack
        CHECK(derr <= 60.0 * err / ((xs[1] - xs[0])));
        prev_err = err;
    }
    CHECK(prev_err <= 1e-6);
}

TEST_CASE("tridiagonal solver reproduces known solutions") {
    // -u'' = 1 on a 5-point grid, u(0)=u(1)=0: u = x(1-x)/2
    const int n = 4;
    const double h = 1.0 / n;
    std::vector<double> lower(n - 2, -1.0 / (h * h)), upper(n - 2, -1.0 / (h * h));
    std::vector<double> diag(n - 1, 2.0 / (h * h)), rhs(n - 1, 1.0);
    const auto u = solve_tridiagonal(lower, diag, upper, rhs);
    for (int i = 1; i < n; ++i) {
        const double x = i * h;
        CHECK(u[i - 1] == doctest::Approx(x * (1.0 - x) / 2.0).epsilon(1e-12));
    }
    CHECK_THROWS_AS(solve_tridiagonal(std::vector<double>{1.0}, std::vector<double>{0.0, 1.0},
                                      std::vector<double>{1.0}, std::vector<double>{1.0, 1.0}),
                    ValidationError);
}
