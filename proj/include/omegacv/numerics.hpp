#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "omegacv/expr.hpp"

namespace omegacv {

/// Thomas algorithm. lower/upper have size n-1, diag and rhs size n.
/// Throws ValidationError on a vanishing pivot.
std::vector<double> solve_tridiagonal(std::span<const double> lower,
                                      std::span<const double> diag,
                                      std::span<const double> upper,
                                      std::span<const double> rhs);

// Not-a-knot cubic spline on a uniform ascending mesh with at least four
// nodes. Fourth-order accurate for smooth data, which keeps interpolation
// error out of functional values and first variations.
class CubicSpline {
public:
    CubicSpline(std::span<const double> xs, std::span<const double> ys);
    double value(double x) const;
    double derivative(double x) const;

private:
    std::size_t cell(double x) const;
    std::vector<double> xs_, ys_, moments_;
    double h_;
};

// Seeded uniform draws with an explicit bit mapping, so sequences are
// reproducible across platforms and standard library versions.
class Random {
public:
    explicit Random(std::uint64_t seed) : gen_(seed) {}
    double unit() { return (gen_() >> 11) * 0x1.0p-53; }  // [0, 1)
    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
    int pick(int n) { return static_cast<int>(gen_() % static_cast<std::uint64_t>(n)); }

private:
    std::mt19937_64 gen_;
};

}  // namespace omegacv
