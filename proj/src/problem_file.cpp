#include "omegacv/problem_file.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

namespace omegacv {

namespace {

struct RawEntry {
    std::string value;
    int line;
};

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
    return std::string(s.substr(b, e - b));
}

[[noreturn]] void fail(const std::string& origin, int line, const std::string& message) {
    throw ValidationError(origin + ":" + std::to_string(line) + ": " + message);
}

std::vector<double> parse_reals(const std::string& origin, int line, const std::string& key,
                                const std::string& value, std::size_t expect) {
    std::istringstream in(value);
    std::vector<double> out;
    double v;
    while (in >> v) out.push_back(v);
    std::string tail;
    if (!in.eof() || (in >> tail)) {
        if (!in.eof()) fail(origin, line, "key '" + key + "' holds a malformed number");
    }
    if (out.size() != expect)
        fail(origin, line, "key '" + key + "' needs " + std::to_string(expect) +
                               " numbers, found " + std::to_string(out.size()));
    return out;
}

long parse_integer(const std::string& origin, int line, const std::string& key,
                   const std::string& value) {
    long out = 0;
    const char* first = value.data();
    const char* last = value.data() + value.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc() || ptr != last)
        fail(origin, line, "key '" + key + "' needs an integer, found '" + value + "'");
    return out;
}

Expr parse_expression(const std::string& origin, int line, const std::string& key,
                      const std::string& text) {
    auto r = parse(text);
    if (!r.ok())
        fail(origin, line, "key '" + key + "': " + r.error().message());
    return r.value();
}

}  // namespace

ProblemSpec parse_problem_text(const std::string& text, const std::string& origin) {
    static const std::vector<std::string> known{
        "lagrangian", "omega",      "interval",          "boundary",     "mesh",
        "quad_panels", "seed",      "convexity_samples", "convexity_box", "tol"};

    std::map<std::string, RawEntry> entries;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        const std::string line = trim(raw);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            fail(origin, lineno, "expected 'key = value', found '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) fail(origin, lineno, "missing key before '='");
        if (std::find(known.begin(), known.end(), key) == known.end())
            fail(origin, lineno, "unknown key '" + key + "'");
        if (entries.count(key))
            fail(origin, lineno, "duplicate key '" + key + "' (first on line " +
                                     std::to_string(entries[key].line) + ")");
        if (value.empty()) fail(origin, lineno, "key '" + key + "' has no value");
        entries[key] = {value, lineno};
    }

    for (const char* required : {"lagrangian", "omega", "interval", "boundary"})
        if (!entries.count(required))
            throw ValidationError(origin + ": missing required key '" + std::string(required) +
                                  "'");

    const auto& lag_entry = entries.at("lagrangian");
    const auto& omega_entry = entries.at("omega");
    const Expr lagrangian =
        parse_expression(origin, lag_entry.line, "lagrangian", lag_entry.value);
    const Expr omega_expr = parse_expression(origin, omega_entry.line, "omega", omega_entry.value);

    const auto& interval_entry = entries.at("interval");
    const auto interval =
        parse_reals(origin, interval_entry.line, "interval", interval_entry.value, 2);
    if (!(interval[0] < interval[1]))
        fail(origin, interval_entry.line, "interval needs a < b");
    const auto& boundary_entry = entries.at("boundary");
    const auto boundary =
        parse_reals(origin, boundary_entry.line, "boundary", boundary_entry.value, 2);

    // weight validation (positivity of omega') happens here, at load time
    OmegaFunction w = [&] {
        try {
            return OmegaFunction(omega_expr, interval[0], interval[1]);
        } catch (const ValidationError& err) {
            fail(origin, omega_entry.line, err.what());
        }
    }();
    VariationalProblem problem = [&] {
        try {
            return VariationalProblem(lagrangian, std::move(w), boundary[0], boundary[1]);
        } catch (const ValidationError& err) {
            fail(origin, lag_entry.line, err.what());
        }
    }();

    ProblemSpec spec{lag_entry.value, omega_entry.value, std::move(problem),
                     std::nullopt,   std::nullopt,      std::nullopt,
                     std::nullopt,   std::nullopt,      std::nullopt};

    if (auto it = entries.find("mesh"); it != entries.end()) {
        const long n = parse_integer(origin, it->second.line, "mesh", it->second.value);
        if (n < 4) fail(origin, it->second.line, "mesh needs at least 4 intervals");
        spec.mesh = static_cast<int>(n);
    }
    if (auto it = entries.find("quad_panels"); it != entries.end()) {
        const long k = parse_integer(origin, it->second.line, "quad_panels", it->second.value);
        if (k < 1) fail(origin, it->second.line, "quad_panels must be positive");
        spec.quad_panels = static_cast<int>(k);
    }
    if (auto it = entries.find("seed"); it != entries.end()) {
        std::uint64_t s = 0;
        const auto& v = it->second.value;
        auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), s);
        if (ec != std::errc() || ptr != v.data() + v.size())
            fail(origin, it->second.line, "seed needs an unsigned integer");
        spec.seed = s;
    }
    if (auto it = entries.find("tol"); it != entries.end()) {
        const auto vals = parse_reals(origin, it->second.line, "tol", it->second.value, 1);
        if (!(vals[0] > 0.0)) fail(origin, it->second.line, "tol must be positive");
        spec.tolerance = vals[0];
    }
    if (auto it = entries.find("convexity_samples"); it != entries.end()) {
        const long m =
            parse_integer(origin, it->second.line, "convexity_samples", it->second.value);
        if (m < 1) fail(origin, it->second.line, "convexity_samples must be positive");
        spec.convexity_samples = m;
    }
    if (auto it = entries.find("convexity_box"); it != entries.end()) {
        const auto vals =
            parse_reals(origin, it->second.line, "convexity_box", it->second.value, 8);
        std::array<double, 8> box{};
        std::copy(vals.begin(), vals.end(), box.begin());
        for (int k = 0; k < 8; k += 2)
            if (!(box[k] <= box[k + 1]))
                fail(origin, it->second.line, "convexity_box bounds must satisfy lo <= hi");
        spec.convexity_box = box;
    }
    return spec;
}

ProblemSpec load_problem(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open problem file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_problem_text(buffer.str(), path);
}

}  // namespace omegacv
