#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "omegacv/direct.hpp"
#include "omegacv/numerics.hpp"

using namespace omegacv;

namespace {

VariationalProblem exp_problem() {
    return VariationalProblem(parse_or_throw("z^2"),
                              OmegaFunction(parse_or_throw("2*exp(x/2)"), 0.0, 1.0), 0.0, 1.0);
}

VariationalProblem identity_problem(const char* lagrangian, double ya, double yb) {
    return VariationalProblem(parse_or_throw(lagrangian), OmegaFunction::identity(0.0, 1.0), ya,
                              yb);
}

// 1/(2 (e^{1/2} - 1)) to 40 digits: 0.7707470412683991420655517222362573191702
constexpr double kTrueMinimum = 0.7707470412683991;

}  // namespace

TEST_CASE("identity weight, L = z^2: the minimizer is the straight line") {
    const VariationalProblem p = identity_problem("z^2", 0.0, 1.0);
    DirectConfig cfg;
    cfg.mesh = 64;
    const auto traj = minimize_discretized(p, cfg);
    CHECK(traj.converged);
    for (std::size_t i = 0; i < traj.mesh.size(); ++i)
        CHECK(std::fabs(traj.values[i] - traj.mesh[i]) <= 1e-9);
    CHECK(discrete_objective(p, traj.values, cfg.mesh) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("flagship problem converges to the weighted-classical extremal") {
    const VariationalProblem p = exp_problem();
    DirectConfig cfg;
    cfg.mesh = 200;
    const auto traj = minimize_discretized(p, cfg);

    // discrete minimum sits ~2e-7 above the continuum value at n = 200
    const double value = discrete_objective(p, traj.values, cfg.mesh);
    CHECK(value == doctest::Approx(kTrueMinimum).epsilon(2e-6));

    double dev = 0.0;
    for (std::size_t i = 0; i < traj.mesh.size(); ++i) {
        const double exact = (std::exp(traj.mesh[i] / 2) - 1.0) / (std::exp(0.5) - 1.0);
        dev = std::max(dev, std::fabs(traj.values[i] - exact));
    }
    CHECK(dev <= 1e-5);
    CHECK(traj.values.front() == 0.0);
    CHECK(traj.values.back() == 1.0);
}

TEST_CASE("identity weight with forcing: y = (x^2 - x)/2 at n = 256") {
    const VariationalProblem p = identity_problem("z^2/2 + y", 0.0, 0.0);
    DirectConfig cfg;
    cfg.mesh = 256;
    const auto traj = minimize_discretized(p, cfg);
    double dev = 0.0;
    for (std::size_t i = 0; i < traj.mesh.size(); ++i) {
        const double x = traj.mesh[i];
        dev = std::max(dev, std::fabs(traj.values[i] - (x * x - x) / 2.0));
    }
    CHECK(dev <= 5e-3);
}

TEST_CASE("analytic gradient matches central finite differences") {
    const VariationalProblem p = exp_problem();
    const int n = 48;
    std::vector<double> y(n + 1);
    Random rng(3211u);
    for (int i = 0; i <= n; ++i) {
        const double x = static_cast<double>(i) / n;
        y[i] = x + 0.2 * std::sin(3.0 * x) * x * (1 - x) + rng.uniform(-0.01, 0.01);
    }
    y[0] = 0.0;
    y[n] = 1.0;

    const auto grad = discrete_gradient(p, y, n);
    const double h = 1e-6;
    for (int trial = 0; trial < 10; ++trial) {
        const int j = 1 + rng.pick(n - 1);
        std::vector<double> up(y), dn(y);
        up[j] += h;
        dn[j] -= h;
        const double fd =
            (discrete_objective(p, up, n) - discrete_objective(p, dn, n)) / (2 * h);
        CHECK(std::fabs(grad[j] - fd) <= 1e-6 * std::max(1.0, std::fabs(fd)));
    }
    CHECK(grad.front() == 0.0);
    CHECK(grad.back() == 0.0);
}

TEST_CASE("objective is non-increasing across iteration budgets") {
    const VariationalProblem p = exp_problem();
    double prev = 1e300;
    for (long cap : {1, 2, 4, 8, 16, 32, 64, 128, 512}) {
        DirectConfig cfg;
        cfg.mesh = 64;
        cfg.max_iterations = cap;
        const auto traj = minimize_discretized(p, cfg);
        const double value = discrete_objective(p, traj.values, cfg.mesh);
        CHECK(value <= prev + 1e-15);
        prev = value;
    }
}

TEST_CASE("functional value converges at second order as the mesh doubles") {
    const VariationalProblem p = exp_problem();
    std::vector<double> errors;
    for (int n : {64, 128, 256}) {
        DirectConfig cfg;
        cfg.mesh = n;
        const auto traj = minimize_discretized(p, cfg);
        errors.push_back(
            std::fabs(discrete_objective(p, traj.values, n) - kTrueMinimum));
    }
    const double order1 = std::log2(errors[0] / errors[1]);
    const double order2 = std::log2(errors[1] / errors[2]);
    CHECK(order1 >= 1.9);
    CHECK(order2 >= 1.9);
}

TEST_CASE("error paths") {
    // z = -1 on the initial interpolant, so ln(z) fails immediately
    const VariationalProblem bad(parse_or_throw("ln(z)"), OmegaFunction::identity(0.0, 1.0),
                                 1.0, 0.0);
    DirectConfig cfg;
    cfg.mesh = 8;
    CHECK_THROWS_AS(minimize_discretized(bad, cfg), NonFiniteObjectiveError);

    const VariationalProblem p = exp_problem();
    DirectConfig capped;
    capped.mesh = 64;
    capped.max_iterations = 3;
    const auto traj = minimize_discretized(p, capped);
    CHECK_FALSE(traj.converged);
    CHECK_FALSE(traj.warning.empty());

    DirectConfig tiny;
    tiny.mesh = 2;
    CHECK_THROWS_AS(minimize_discretized(p, tiny), ValidationError);
}

TEST_CASE("comparison report orders candidates against the direct minimum") {
    const VariationalProblem p = exp_problem();
    std::vector<std::pair<std::string, TrajectorySolution>> candidates;
    candidates.emplace_back("omega_el",
                            solve_el_bvp(p, build_el_residual(p, ElMode::omega), 200));
    candidates.emplace_back(
        "classical_el", solve_el_bvp(p, build_el_residual(p, ElMode::weighted_classical), 200));

    DirectConfig cfg;
    cfg.mesh = 200;
    const auto report = compare(p, candidates, cfg);

    // 40-digit oracle values: 0.78615816720257307 and 0.77074704126839914
    CHECK(report.candidate_values[0].second == doctest::Approx(0.7861581672).epsilon(1e-6));
    CHECK(report.candidate_values[1].second == doctest::Approx(0.7707470413).epsilon(1e-6));
    CHECK(report.direct_value == doctest::Approx(kTrueMinimum).epsilon(1e-4));
    CHECK(report.direct_value <= report.candidate_values[0].second + 1e-6);
    CHECK(report.direct_value <= report.candidate_values[1].second + 1e-6);

    // each candidate satisfies its own equation and not the other
    CHECK(report.residuals[0].omega_mode <= 1e-6);
    CHECK(report.residuals[0].classical_mode > 1e-2);
    CHECK(report.residuals[1].classical_mode <= 1e-6);
    CHECK(report.residuals[1].omega_mode > 1e-2);

    bool found_finding = false;
    for (const auto& line : report.verdicts)
        found_finding = found_finding || line.find("finding: candidate 'omega_el'") == 0;
    CHECK(found_finding);
}

TEST_CASE("a candidate equal to the direct minimizer shows no gap") {
    const VariationalProblem p = exp_problem();
    DirectConfig cfg;
    cfg.mesh = 100;
    const auto direct = minimize_discretized(p, cfg);
    std::vector<std::pair<std::string, TrajectorySolution>> candidates{{"direct_copy", direct}};
    const auto report = compare(p, candidates, cfg);
    CHECK(std::fabs(report.candidate_values[0].second - report.direct_value) <= 1e-10);
}

TEST_CASE("identity weight, L = z^2: all routes agree on the straight line") {
    const VariationalProblem p = identity_problem("z^2", 0.0, 1.0);
    std::vector<std::pair<std::string, TrajectorySolution>> candidates;
    candidates.emplace_back("omega_el",
                            solve_el_bvp(p, build_el_residual(p, ElMode::omega), 64));
    candidates.emplace_back(
        "classical_el", solve_el_bvp(p, build_el_residual(p, ElMode::weighted_classical), 64));
    DirectConfig cfg;
    cfg.mesh = 64;
    const auto report = compare(p, candidates, cfg);
    CHECK(report.candidate_values[0].second == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(report.candidate_values[1].second == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(report.direct_value == doctest::Approx(1.0).epsilon(1e-9));
}
