#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "omegacv/variational.hpp"

namespace omegacv {

// A problem file is a strict line-oriented key = value format:
//
//   lagrangian = <expression in x, y, z>
//   omega      = <expression in x>
//   interval   = <a> <b>
//   boundary   = <y_a> <y_b>
//   # optional overrides:
//   mesh = <n>          quad_panels = <k>        seed = <u64>
//   tol = <t>           convexity_samples = <m>
//   convexity_box = <x_lo> <x_hi> <y_lo> <y_hi> <z_lo> <z_hi> <d_lo> <d_hi>
//
// '#' starts a comment, blank lines are ignored, keys are case-sensitive,
// duplicate or unknown keys are errors. All expression and domain
// validation happens at load time.
struct ProblemSpec {
    std::string lagrangian_text;
    std::string omega_text;
    VariationalProblem problem;

    std::optional<int> mesh;
    std::optional<int> quad_panels;
    std::optional<std::uint64_t> seed;
    std::optional<double> tolerance;
    std::optional<long> convexity_samples;
    std::optional<std::array<double, 8>> convexity_box;
};

ProblemSpec load_problem(const std::string& path);

/// Same parser on in-memory text; `origin` labels error messages.
ProblemSpec parse_problem_text(const std::string& text, const std::string& origin);

}  // namespace omegacv
