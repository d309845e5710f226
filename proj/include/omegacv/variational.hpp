#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "omegacv/numerics.hpp"
#include "omegacv/omega.hpp"
#include "omegacv/quadrature.hpp"

namespace omegacv {

/// The second-order collocation row lost its ypp coefficient.
class DegenerateElError : public Error {
public:
    using Error::Error;
};

/// Newton iteration exhausted its budget without meeting the residual
/// tolerance.
class NoConvergenceError : public Error {
public:
    using Error::Error;
};

// Fixed-endpoint problem for the weighted functional: minimize the
// weighted integral of L(x, y(x), D_omega y(x)) over [a, b] subject to
// y(a) = y_a, y(b) = y_b. The Lagrangian is an expression in (x, y, z)
// with z standing for the generalized derivative of y.
struct VariationalProblem {
    Expr lagrangian;
    OmegaFunction omega;
    double a, b, y_a, y_b;

    VariationalProblem(Expr lagrangian, OmegaFunction omega, double y_a, double y_b);
};

// Which stationarity equation to enforce.
//   omega:     d/dx [ L_z(x, y, yp/w') / w'(x) ] = L_y(x, y, yp/w'),
//              the reduced generalized equation under trajectory-mode
//              partials, multiplied through by w'(x) > 0.
//   weighted_classical:
//              d/dx [ L_z(x, y, yp/w') ] = L_y(x, y, yp/w') * w'(x),
//              the classical equation of the weighted integrand, i.e. the
//              true stationarity condition of the functional (audit form).
enum class ElMode { omega, weighted_classical };

struct EulerLagrangeForm {
    ElMode mode;
    Expr residual;          // expression in (x, y, yp, ypp); zero on solutions
    Expr ypp_coefficient;   // d residual / d ypp, for regularity checks
    std::string note;
};

struct SolverConfig {
    double residual_tol = 1e-10;  // infinity norm target for the residual
    int max_iterations = 50;
    int max_halvings = 30;
};

struct TrajectorySolution {
    std::vector<double> mesh;
    std::vector<double> values;
    std::vector<double> y_prime;   // central differences, one-sided at the ends
    std::vector<double> d_omega;   // y' / omega'(x)
    double residual_norm = 0.0;    // solver: ||F||_inf; direct method: ||grad||_inf
    int iterations = 0;
    bool converged = true;
    std::string warning;
};

EulerLagrangeForm build_el_residual(const VariationalProblem& p, ElMode mode);

/// Damped-Newton collocation on a uniform mesh with second-order central
/// stencils; boundary rows are pinned exactly to the boundary data.
TrajectorySolution solve_el_bvp(const VariationalProblem& p, const EulerLagrangeForm& form,
                                int mesh_intervals, const SolverConfig& cfg = {});

/// Weighted functional value of a discrete trajectory (piecewise-cubic
/// interpolation) or of a closed-form y(x).
double evaluate_functional(const VariationalProblem& p, const TrajectorySolution& trajectory,
                           const QuadratureConfig& cfg = {});
double evaluate_functional(const VariationalProblem& p, const Expr& y_of_x,
                           const QuadratureConfig& cfg = {});

// Admissible variation: an expression in x vanishing at both endpoints.
class Variation {
public:
    Variation(Expr eta, double a, double b);  // validates |eta(a)|, |eta(b)| <= 1e-12
    const Expr& expr() const { return eta_; }
    double value(double x) const { return comp_eta_({x}); }
    double derivative(double x) const { return comp_deta_({x}); }

private:
    Expr eta_;
    CompiledExpr comp_eta_, comp_deta_;
};

/// First variation in the generalized sense (trajectory-mode partials):
/// integral of L_y * eta + L_z * eta' / omega'. Vanishes at solutions of
/// the omega-mode equation.
double first_variation_omega(const VariationalProblem& p, const TrajectorySolution& y,
                             const Variation& eta, const QuadratureConfig& cfg = {});
double first_variation_omega(const VariationalProblem& p, const Expr& y, const Variation& eta,
                             const QuadratureConfig& cfg = {});

/// Exact Gateaux derivative of the weighted functional: integral of
/// L_y * eta * omega' + L_z * eta'. Vanishes at solutions of the
/// weighted-classical equation.
double first_variation_gateaux(const VariationalProblem& p, const TrajectorySolution& y,
                               const Variation& eta, const QuadratureConfig& cfg = {});
double first_variation_gateaux(const VariationalProblem& p, const Expr& y, const Variation& eta,
                               const QuadratureConfig& cfg = {});

struct Box {
    double lo = 0.0, hi = 0.0;
};

struct ConvexityViolation {
    double x, y, z, y1, z1, lhs, rhs;
};

struct ConvexityReport {
    long samples = 0;
    std::uint64_t seed = 0;
    std::vector<ConvexityViolation> violations;
    bool violated() const { return !violations.empty(); }
};

/// Monte-Carlo check of the joint-convexity gradient inequality with
/// generalized partials: L(x, y+y1, z+z1) - L(x, y, z) >=
/// (L_y / omega'(x)) y1 + (L_z / omega'(x)) z1 - 1e-12. Deterministic for
/// a fixed seed; reports "no violation found", never "proved convex".
ConvexityReport check_joint_convexity(const Expr& lagrangian, const OmegaFunction& w, Box xbox,
                                      Box ybox, Box zbox, Box deltas, long samples,
                                      std::uint64_t seed);

/// Splits [a, b] into subintervals and integrates g against the quartic
/// bump (x - alpha)^2 (beta - x)^2 on each. True when every bump integral
/// and the dense-grid maximum of |g| stay below tol; a g that is genuinely
/// nonzero beyond tol must trip some bump integral.
bool fundamental_lemma_probe(const Expr& g, const OmegaFunction& w, double a, double b,
                             int subintervals, double tol = 1e-10);

/// Defect of differentiation under the weighted integral sign for
/// f(t, x): |numeric D_omega of F at x0| - |weighted integral over t of
/// f_x(t, x0) / omega'(x0)| with F(x) the weighted integral of f(., x).
double leibniz_defect(const Expr& f, const OmegaFunction& w, double a, double b, double x0,
                      double h = 1e-4, const QuadratureConfig& cfg = {});

}  // namespace omegacv
