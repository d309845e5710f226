#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "omegacv/expr.hpp"

namespace omegacv {

/// Raised when a symmetric difference quotient has a vanishing denominator.
class DegenerateStepError : public Error {
public:
    using Error::Error;
};

// Validated weight function for the generalized derivative: an expression
// in x that is strictly increasing on [a, b]. Construction certifies
// omega' > 0 by dense sampling (endpoints included) and keeps the exact
// symbolic first and second derivatives.
class OmegaFunction {
public:
    OmegaFunction(Expr omega, double a, double b, int positivity_samples = 10001);
    static OmegaFunction identity(double a, double b);

    const Expr& expr() const { return omega_; }
    const Expr& prime_expr() const { return prime_; }
    const Expr& second_expr() const { return second_; }
    double a() const { return a_; }
    double b() const { return b_; }
    int positivity_samples() const { return samples_; }
    bool contains(double x, double slack = 1e-12) const {
        return x >= a_ - slack && x <= b_ + slack;
    }

    double value(double x) const { return comp_omega_({x}); }
    double prime(double x) const { return comp_prime_({x}); }
    double second(double x) const { return comp_second_({x}); }

    static const std::string& variable();  // "x"

private:
    Expr omega_, prime_, second_;
    CompiledExpr comp_omega_, comp_prime_, comp_second_;
    double a_, b_;
    int samples_;
};

struct AdmissibilityReport {
    bool is_admissible = false;
    double spread = 0.0;            // max - min of f'(x)/omega(x) over kept samples
    double relative_spread = 0.0;   // spread scaled by max(1, max |ratio|)
    std::vector<std::pair<double, double>> witnesses;  // (x, f'(x)/omega(x))
    std::vector<double> skipped;    // sample points where omega(x) = 0
};

/// Symbolic generalized derivative: simplify(f'(x) / omega'(x)).
Expr omega_derivative_symbolic(const Expr& f, const OmegaFunction& w);

/// Symmetric difference quotient (f(x0+h) - f(x0-h)) / (omega(x0+h) - omega(x0-h)).
double omega_derivative_numeric(const std::function<double(double)>& f, const OmegaFunction& w,
                                double x0, double h);

// Two readings of the generalized partial derivative, exposed explicitly:
// `literal` divides by omega' evaluated at the slot's own variable;
// `trajectory` divides by omega' evaluated at the independent variable
// (the first slot). The variational solver uses trajectory mode.
enum class PartialMode { literal, trajectory };

Expr omega_partial(const Expr& f, std::span<const std::string> slots, std::size_t slot,
                   const OmegaFunction& w, PartialMode mode);

/// Samples f'(x)/omega(x) on a uniform grid; admissible when the ratio is
/// not constant within 1e-9 relative spread. Points where omega vanishes
/// are skipped and recorded.
AdmissibilityReport check_admissible(const Expr& f, const OmegaFunction& w, int samples = 101);

}  // namespace omegacv
