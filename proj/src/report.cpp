#include "omegacv/report.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>

namespace omegacv {

std::string format_double(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, end);
}

std::string format_significant(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
    return buf;
}

void OutputTable::add_row(std::vector<double> row) {
    if (row.size() != columns.size())
        throw ValidationError("table row width does not match the column count");
    rows.push_back(std::move(row));
}

std::string OutputTable::render() const {
    std::vector<std::vector<std::string>> cells;
    cells.reserve(rows.size());
    std::vector<std::size_t> width(columns.size());
    for (std::size_t c = 0; c < columns.size(); ++c) width[c] = columns[c].size();
    for (const auto& row : rows) {
        std::vector<std::string> line;
        line.reserve(row.size());
        for (std::size_t c = 0; c < row.size(); ++c) {
            line.push_back(format_significant(row[c], precision));
            width[c] = std::max(width[c], line.back().size());
        }
        cells.push_back(std::move(line));
    }
    std::ostringstream out;
    for (std::size_t c = 0; c < columns.size(); ++c) {
        out << columns[c] << std::string(width[c] - columns[c].size(), ' ');
        out << (c + 1 < columns.size() ? "  " : "");
    }
    out << '\n';
    for (const auto& line : cells) {
        for (std::size_t c = 0; c < line.size(); ++c) {
            out << line[c] << std::string(width[c] - line[c].size(), ' ');
            out << (c + 1 < line.size() ? "  " : "");
        }
        out << '\n';
    }
    return out.str();
}

void write_csv(std::ostream& out, const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows) {
    for (std::size_t c = 0; c < columns.size(); ++c)
        out << columns[c] << (c + 1 < columns.size() ? "," : "");
    out << '\n';
    for (const auto& row : rows) {
        if (row.size() != columns.size())
            throw ValidationError("CSV row width does not match the column count");
        for (std::size_t c = 0; c < row.size(); ++c)
            out << format_double(row[c]) << (c + 1 < row.size() ? "," : "");
        out << '\n';
    }
}

void write_trajectory_csv(std::ostream& out, const TrajectorySolution& t) {
    std::vector<std::vector<double>> rows;
    rows.reserve(t.mesh.size());
    for (std::size_t i = 0; i < t.mesh.size(); ++i)
        rows.push_back({t.mesh[i], t.values[i], t.y_prime[i], t.d_omega[i]});
    write_csv(out, {"x", "y", "y_prime", "d_omega_y"}, rows);
}

VerifyReport run_verify(const ProblemSpec& spec, int mesh, const DirectConfig& direct_cfg,
                        const QuadratureConfig& quad_cfg, long convexity_samples,
                        std::uint64_t seed) {
    const VariationalProblem& p = spec.problem;

    std::vector<std::pair<std::string, TrajectorySolution>> candidates;
    std::vector<std::string> solve_notes;
    for (const auto& [mode, label] :
         {std::pair{ElMode::omega, std::string("omega_el")},
          std::pair{ElMode::weighted_classical, std::string("classical_el")}}) {
        try {
            const EulerLagrangeForm form = build_el_residual(p, mode);
            candidates.emplace_back(label, solve_el_bvp(p, form, mesh));
        } catch (const Error& err) {
            solve_notes.push_back(label + ": no candidate (" + std::string(err.what()) + ")");
        }
    }

    VerifyReport report{
        compare(p, candidates, direct_cfg, quad_cfg),
        check_joint_convexity(
            p.lagrangian, p.omega,
            spec.convexity_box ? Box{(*spec.convexity_box)[0], (*spec.convexity_box)[1]}
                               : Box{p.a, p.b},
            spec.convexity_box ? Box{(*spec.convexity_box)[2], (*spec.convexity_box)[3]}
                               : Box{-2.0, 2.0},
            spec.convexity_box ? Box{(*spec.convexity_box)[4], (*spec.convexity_box)[5]}
                               : Box{-2.0, 2.0},
            spec.convexity_box ? Box{(*spec.convexity_box)[6], (*spec.convexity_box)[7]}
                               : Box{-1.0, 1.0},
            convexity_samples, seed),
        {}};

    std::ostringstream out;
    out << "lagrangian: " << spec.lagrangian_text << '\n';
    out << "omega: " << spec.omega_text << '\n';
    out << "interval: [" << format_double(p.a) << ", " << format_double(p.b) << "]"
        << "  boundary: " << format_double(p.y_a) << " -> " << format_double(p.y_b) << '\n';
    out << "mesh: " << mesh << "  direct mesh: " << direct_cfg.mesh
        << "  quad panels: " << quad_cfg.panels << "  seed: " << seed << '\n';
    out << '\n';

    out << "candidate      value                 residual(omega)  residual(classical)\n";
    for (std::size_t i = 0; i < report.comparison.candidate_values.size(); ++i) {
        const auto& [label, value] = report.comparison.candidate_values[i];
        const auto& res = report.comparison.residuals[i];
        char line[160];
        std::snprintf(line, sizeof(line), "%-13s  %-20.15g  %-15.3e  %-15.3e\n", label.c_str(),
                      value, res.omega_mode, res.classical_mode);
        out << line;
    }
    {
        char line[160];
        std::snprintf(line, sizeof(line), "%-13s  %-20.15g  (gradient norm %.3e, %d iterations)\n",
                      "direct", report.comparison.direct_value,
                      report.comparison.direct.residual_norm,
                      report.comparison.direct.iterations);
        out << line;
    }
    if (!report.comparison.direct.warning.empty())
        out << "direct note: " << report.comparison.direct.warning << '\n';
    for (const auto& note : solve_notes) out << note << '\n';
    out << '\n';
    for (const auto& verdict : report.comparison.verdicts) out << verdict << '\n';

    out << '\n';
    if (report.convexity.violated()) {
        const auto& v = report.convexity.violations.front();
        out << "convexity: violated (" << report.convexity.violations.size() << " of "
            << report.convexity.samples << " samples, seed " << report.convexity.seed
            << "); first violation at x=" << format_significant(v.x, 6)
            << " y=" << format_significant(v.y, 6) << " z=" << format_significant(v.z, 6)
            << " y1=" << format_significant(v.y1, 6) << " z1=" << format_significant(v.z1, 6)
            << " lhs=" << format_significant(v.lhs, 6) << " rhs=" << format_significant(v.rhs, 6)
            << '\n';
        out << "convexity note: the sufficiency test does not certify the omega_el candidate "
               "as a global minimizer on this box\n";
    } else {
        out << "convexity: no-violation-found (" << report.convexity.samples << " samples, seed "
            << report.convexity.seed << ")\n";
    }

    report.text = out.str();
    return report;
}

}  // namespace omegacv
