#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "omegacv/direct.hpp"
#include "omegacv/problem_file.hpp"

namespace omegacv {

/// Shortest representation that round-trips exactly (std::to_chars).
std::string format_double(double v);

/// Fixed significant-digit formatting ("%.*g") for aligned tables.
std::string format_significant(double v, int digits);

// Rectangular table of reals with deterministic rendering.
struct OutputTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    int precision = 12;  // significant digits

    void add_row(std::vector<double> row);
    std::string render() const;
};

/// CSV with '.' decimal separator, ',' field separator, LF line endings,
/// a header row and shortest round-trip number formatting.
void write_csv(std::ostream& out, const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows);

void write_trajectory_csv(std::ostream& out, const TrajectorySolution& trajectory);

struct VerifyReport {
    ComparisonReport comparison;
    ConvexityReport convexity;
    std::string text;  // deterministic rendering
};

/// Full audit of a problem: solves both stationarity modes, runs the
/// direct minimizer, compares functional values, and samples the
/// joint-convexity inequality.
VerifyReport run_verify(const ProblemSpec& spec, int mesh, const DirectConfig& direct_cfg,
                        const QuadratureConfig& quad_cfg, long convexity_samples,
                        std::uint64_t seed);

}  // namespace omegacv
