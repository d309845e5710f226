#include "omegacv/omega.hpp"

#include <algorithm>
#include <cmath>

namespace omegacv {

namespace {

const std::vector<std::string> kOmegaSlots{"x"};

std::string format_point(double x) { return std::to_string(x); }

}  // namespace

const std::string& OmegaFunction::variable() {
    static const std::string var = "x";
    return var;
}

OmegaFunction::OmegaFunction(Expr omega, double a, double b, int positivity_samples)
    : omega_(simplify(omega)),
      prime_(differentiate(omega_, variable())),
      second_(differentiate(prime_, variable())),
      a_(a),
      b_(b),
      samples_(positivity_samples) {
    if (!(std::isfinite(a) && std::isfinite(b) && a < b))
        throw ValidationError("weight function domain must satisfy a < b");
    if (samples_ < 2) throw ValidationError("positivity check needs at least 2 samples");
    for (const auto& v : omega_.free_variables())
        if (v != variable())
            throw ValidationError("weight function may depend only on '" + variable() +
                                  "', found '" + v + "'");
    comp_omega_ = CompiledExpr(omega_, kOmegaSlots);
    comp_prime_ = CompiledExpr(prime_, kOmegaSlots);
    comp_second_ = CompiledExpr(second_, kOmegaSlots);

    for (int i = 0; i < samples_; ++i) {
        const double x = a_ + (b_ - a_) * i / (samples_ - 1);
        double dp;
        try {
            dp = comp_prime_({x});
        } catch (const EvalError& err) {
            throw ValidationError("weight derivative not evaluable at x = " + format_point(x) +
                                  ": " + err.what());
        }
        if (!(dp > 0.0))
            throw ValidationError("weight function is not strictly increasing: omega'(" +
                                  format_point(x) + ") = " + std::to_string(dp) + " <= 0");
    }
}

OmegaFunction OmegaFunction::identity(double a, double b) {
    return OmegaFunction(Expr::variable(variable()), a, b);
}

Expr omega_derivative_symbolic(const Expr& f, const OmegaFunction& w) {
    return simplify(Expr::binary(BinaryOp::div, differentiate(f, OmegaFunction::variable()),
                                 w.prime_expr()));
}

double omega_derivative_numeric(const std::function<double(double)>& f, const OmegaFunction& w,
                                double x0, double h) {
    if (!(h > 0.0)) throw ValidationError("step must be positive");
    if (!w.contains(x0 - h) || !w.contains(x0 + h))
        throw ValidationError("x0 +/- h must lie inside the weight domain");
    const double denom = w.value(x0 + h) - w.value(x0 - h);
    if (std::fabs(denom) < 1e-14)
        throw DegenerateStepError("weight increment below 1e-14; step too small");
    return (f(x0 + h) - f(x0 - h)) / denom;
}

Expr omega_partial(const Expr& f, std::span<const std::string> slots, std::size_t slot,
                   const OmegaFunction& w, PartialMode mode) {
    if (slot >= slots.size())
        throw ValidationError("unknown slot index " + std::to_string(slot));
    if (slots.empty()) throw ValidationError("empty slot list");
    const std::string& eval_var =
        mode == PartialMode::literal ? slots[slot] : slots.front();
    const Expr prime_at =
        substitute(w.prime_expr(), OmegaFunction::variable(), Expr::variable(eval_var));
    return simplify(
        Expr::binary(BinaryOp::div, differentiate(f, slots[slot]), prime_at));
}

AdmissibilityReport check_admissible(const Expr& f, const OmegaFunction& w, int samples) {
    if (samples < 3) throw ValidationError("admissibility check needs at least 3 samples");
    const Expr fprime = differentiate(f, OmegaFunction::variable());
    const CompiledExpr comp_fprime(fprime, kOmegaSlots);

    AdmissibilityReport report;
    double lo = 0.0, hi = 0.0, scale = 0.0;
    bool any = false;
    for (int i = 0; i < samples; ++i) {
        const double x = w.a() + (w.b() - w.a()) * i / (samples - 1);
        const double om = w.value(x);
        if (std::fabs(om) < 1e-12) {
            report.skipped.push_back(x);
            continue;
        }
        const double ratio = comp_fprime({x}) / om;
        report.witnesses.emplace_back(x, ratio);
        if (!any) {
            lo = hi = ratio;
            any = true;
        } else {
            lo = std::min(lo, ratio);
            hi = std::max(hi, ratio);
        }
        scale = std::max(scale, std::fabs(ratio));
    }
    if (!any)
        throw ValidationError("weight function vanishes at every sample point; "
                              "the ratio f'/omega is undefined on the whole grid");
    report.spread = hi - lo;
    report.relative_spread = report.spread / std::max(1.0, scale);
    report.is_admissible = report.relative_spread > 1e-9;
    return report;
}

}  // namespace omegacv
