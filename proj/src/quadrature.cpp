#include "omegacv/quadrature.hpp"

#include <cmath>

namespace omegacv {

namespace {

// 5-point Gauss-Legendre nodes and weights on [-1, 1].
constexpr double kNode1 = 0.5384693101056831;   // sqrt(5 - 2*sqrt(10/7)) / 3
constexpr double kNode2 = 0.9061798459386640;   // sqrt(5 + 2*sqrt(10/7)) / 3
constexpr double kW0 = 0.5688888888888889;      // 128/225
constexpr double kW1 = 0.47862867049936647;     // (322 + 13*sqrt(70)) / 900
constexpr double kW2 = 0.23692688505618908;     // (322 - 13*sqrt(70)) / 900

constexpr double kNodes[5] = {-kNode2, -kNode1, 0.0, kNode1, kNode2};
constexpr double kWeights[5] = {kW2, kW1, kW0, kW1, kW2};

void check_domain(const OmegaFunction& w, double a, double b) {
    if (!(a <= b)) throw ValidationError("integration bounds must satisfy a <= b");
    if (!w.contains(a) || !w.contains(b))
        throw ValidationError("integration interval must lie inside the weight domain");
}

}  // namespace

double integrate_fixed(const std::function<double(double)>& f, double a, double b, int panels) {
    if (panels < 1) throw ValidationError("panel count must be >= 1");
    const double h = (b - a) / panels;
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double mid = a + (p + 0.5) * h;
        const double half = 0.5 * h;
        double panel = 0.0;
        for (int k = 0; k < 5; ++k) panel += kWeights[k] * f(mid + half * kNodes[k]);
        total += panel * half;
    }
    return total;
}

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureConfig& cfg) {
    if (cfg.panels < 1) throw ValidationError("panel count must be >= 1");
    if (a == b) return {0.0, 0.0, cfg.panels, true};

    int panels = cfg.panels;
    double coarse = integrate_fixed(f, a, b, panels);
    QuadratureResult result;
    for (int level = 0; level <= cfg.max_doublings; ++level) {
        const double fine = integrate_fixed(f, a, b, 2 * panels);
        result.value = fine;
        result.error_estimate = std::fabs(fine - coarse);
        result.panels_used = 2 * panels;
        if (result.error_estimate <= cfg.tolerance) {
            result.tolerance_reached = true;
            return result;
        }
        coarse = fine;
        panels *= 2;
    }
    result.tolerance_reached = false;
    return result;
}

QuadratureResult j_omega(const std::function<double(double)>& f, const OmegaFunction& w,
                         double a, double b, const QuadratureConfig& cfg) {
    check_domain(w, a, b);
    return integrate([&](double s) { return f(s) * w.prime(s); }, a, b, cfg);
}

double ftc_forward(const Expr& f, const OmegaFunction& w, double a, double t,
                   const QuadratureConfig& cfg) {
    const Expr df = omega_derivative_symbolic(f, w);
    const std::vector<std::string> slots{OmegaFunction::variable()};
    const CompiledExpr comp(df, slots);
    return j_omega([&](double s) { return comp({s}); }, w, a, t, cfg).value;
}

double ftc_backward(const Expr& f, const OmegaFunction& w, double a, double t, double h,
                    const QuadratureConfig& cfg) {
    if (!(h > 0.0)) throw ValidationError("step must be positive");
    if (!w.contains(t - h) || !w.contains(t + h))
        throw ValidationError("t +/- h must lie inside the weight domain");
    if (!w.contains(a)) throw ValidationError("anchor a must lie inside the weight domain");
    const std::vector<std::string> slots{OmegaFunction::variable()};
    const CompiledExpr comp(f, slots);
    // J(f, a, t+h) - J(f, a, t-h) collapses to the short integral over
    // [t-h, t+h]; evaluating it directly avoids cancellation between two
    // full-length quadratures.
    const double num =
        j_omega([&](double s) { return comp({s}); }, w, t - h, t + h, cfg).value;
    const double denom = w.value(t + h) - w.value(t - h);
    if (std::fabs(denom) < 1e-14)
        throw DegenerateStepError("weight increment below 1e-14; step too small");
    return num / denom;
}

double integration_by_parts_defect(const Expr& f, const Expr& g, const OmegaFunction& w,
                                   double a, double b, const QuadratureConfig& cfg) {
    const std::vector<std::string> slots{OmegaFunction::variable()};
    const CompiledExpr cf(f, slots), cg(g, slots);
    const CompiledExpr cdf(omega_derivative_symbolic(f, w), slots);
    const CompiledExpr cdg(omega_derivative_symbolic(g, w), slots);

    const double lhs = j_omega([&](double s) { return cf({s}) * cdg({s}); }, w, a, b, cfg).value;
    const double rhs = j_omega([&](double s) { return cg({s}) * cdf({s}); }, w, a, b, cfg).value;
    const double boundary = cf({b}) * cg({b}) - cf({a}) * cg({a});
    return lhs - boundary + rhs;
}

}  // namespace omegacv
