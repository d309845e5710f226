#pragma once

#include <functional>

#include "omegacv/omega.hpp"

namespace omegacv {

struct QuadratureConfig {
    int panels = 64;           // starting panel count, >= 1
    double tolerance = 1e-10;  // target |I_2n - I_n|
    int max_doublings = 10;    // refinement limit
};

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;  // |I_2n - I_n| at the accepted level
    int panels_used = 0;
    bool tolerance_reached = true;  // false = warning: doubling limit exhausted
};

/// Composite 5-point Gauss-Legendre rule with a fixed panel count.
/// Panels accumulate left to right, so results are reproducible run to run.
double integrate_fixed(const std::function<double(double)>& f, double a, double b, int panels);

/// Panel-doubling refinement of integrate_fixed down to cfg.tolerance.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureConfig& cfg = {});

/// The weighted integral of f over [a, b]: quadrature of f(s) * omega'(s).
QuadratureResult j_omega(const std::function<double(double)>& f, const OmegaFunction& w,
                         double a, double b, const QuadratureConfig& cfg = {});

/// Integrates the symbolic generalized derivative of f against the weight;
/// equals f(t) - f(a) up to quadrature error.
double ftc_forward(const Expr& f, const OmegaFunction& w, double a, double t,
                   const QuadratureConfig& cfg = {});

/// Symmetric difference quotient of t -> j_omega(f, a, t); equals f(t) up
/// to C*h^2 plus quadrature error.
double ftc_backward(const Expr& f, const OmegaFunction& w, double a, double t, double h = 1e-5,
                    const QuadratureConfig& cfg = {});

/// J(f * D_omega g) - [f g]_a^b + J(g * D_omega f); vanishes when the
/// integration-by-parts identity holds.
double integration_by_parts_defect(const Expr& f, const Expr& g, const OmegaFunction& w,
                                   double a, double b, const QuadratureConfig& cfg = {});

}  // namespace omegacv
