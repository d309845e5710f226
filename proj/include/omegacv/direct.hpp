#pragma once

#include <string>
#include <utility>
#include <vector>

#include "omegacv/variational.hpp"

namespace omegacv {

/// The discrete objective evaluated to a non-finite value at an accepted
/// iterate.
class NonFiniteObjectiveError : public Error {
public:
    using Error::Error;
};

// Direct minimization of the discretized weighted functional over
// piecewise-linear trajectories: per-cell midpoint rule, analytic
// gradient, steepest descent with Armijo backtracking. The trial step is
// chosen spectrally (Barzilai-Borwein) and then backtracked, so accepted
// steps always decrease the objective.
struct DirectConfig {
    int mesh = 200;                    // intervals, >= 4
    double grad_tolerance = 1e-8;      // infinity norm of the gradient
    long max_iterations = 20000;
    double armijo_constant = 1e-4;
    double backtracking_factor = 0.5;
};

TrajectorySolution minimize_discretized(const VariationalProblem& p,
                                        const DirectConfig& cfg = {});

/// Discrete objective and its analytic gradient on interior nodes, exposed
/// for finite-difference audits of the gradient.
double discrete_objective(const VariationalProblem& p, std::span<const double> values, int n);
std::vector<double> discrete_gradient(const VariationalProblem& p,
                                      std::span<const double> values, int n);

struct ComparisonReport {
    std::vector<std::pair<std::string, double>> candidate_values;
    double direct_value = 0.0;
    TrajectorySolution direct;
    // per-candidate infinity-norm residuals under both stationarity modes
    struct Residuals {
        std::string label;
        double omega_mode = 0.0;
        double classical_mode = 0.0;
    };
    std::vector<Residuals> residuals;
    std::vector<std::string> verdicts;
    double comparison_tolerance = 1e-6;
};

/// Evaluates every candidate and the direct minimizer under shared
/// quadrature settings and asserts the ordering invariant
/// direct <= candidate + tolerance.
ComparisonReport compare(const VariationalProblem& p,
                         std::span<const std::pair<std::string, TrajectorySolution>> candidates,
                         const DirectConfig& cfg = {}, const QuadratureConfig& quad = {},
                         double comparison_tolerance = 1e-6);

}  // namespace omegacv
