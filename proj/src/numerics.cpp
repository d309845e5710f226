#include "omegacv/numerics.hpp"

#include <algorithm>
#include <cmath>

namespace omegacv {

std::vector<double> solve_tridiagonal(std::span<const double> lower,
                                      std::span<const double> diag,
                                      std::span<const double> upper,
                                      std::span<const double> rhs) {
    const std::size_t n = diag.size();
    if (rhs.size() != n || lower.size() + 1 != n || upper.size() + 1 != n)
        throw ValidationError("tridiagonal system size mismatch");
    std::vector<double> c(n, 0.0), d(n, 0.0);
    double pivot = diag[0];
    if (std::fabs(pivot) < 1e-300) throw ValidationError("tridiagonal pivot vanished");
    c[0] = n > 1 ? upper[0] / pivot : 0.0;
    d[0] = rhs[0] / pivot;
    for (std::size_t i = 1; i < n; ++i) {
        pivot = diag[i] - lower[i - 1] * c[i - 1];
        if (std::fabs(pivot) < 1e-300) throw ValidationError("tridiagonal pivot vanished");
        if (i + 1 < n) c[i] = upper[i] / pivot;
        d[i] = (rhs[i] - lower[i - 1] * d[i - 1]) / pivot;
    }
    for (std::size_t i = n - 1; i-- > 0;) d[i] -= c[i] * d[i + 1];
    return d;
}

CubicSpline::CubicSpline(std::span<const double> xs, std::span<const double> ys)
    : xs_(xs.begin(), xs.end()), ys_(ys.begin(), ys.end()) {
    const std::size_t m = xs_.size();
    if (m < 4 || ys_.size() != m)
        throw ValidationError("spline needs at least four nodes and matching values");
    h_ = xs_[1] - xs_[0];
    if (!(h_ > 0.0)) throw ValidationError("spline mesh must be ascending");
    for (std::size_t i = 1; i + 1 < m; ++i)
        if (std::fabs((xs_[i + 1] - xs_[i]) - h_) > 1e-9 * std::max(1.0, std::fabs(h_)))
            throw ValidationError("spline mesh must be uniform");

    const std::size_t n = m - 1;  // cells
    moments_.assign(m, 0.0);
    // second differences divided by h^2
    auto delta = [&](std::size_t i) {
        return (ys_[i + 1] - 2.0 * ys_[i] + ys_[i - 1]) / (h_ * h_);
    };
    // Not-a-knot: continuity of the third derivative across the first and
    // last interior nodes pins the adjacent moments directly.
    moments_[1] = delta(1);
    moments_[n - 1] = delta(n - 1);
    if (n >= 4) {
        const std::size_t unknowns = n - 3;  // moments 2 .. n-2
        std::vector<double> lo(unknowns > 0 ? unknowns - 1 : 0, 1.0 / 6.0);
        std::vector<double> di(unknowns, 2.0 / 3.0);
        std::vector<double> up(unknowns > 0 ? unknowns - 1 : 0, 1.0 / 6.0);
        std::vector<double> rhs(unknowns);
        for (std::size_t k = 0; k < unknowns; ++k) {
            const std::size_t i = k + 2;
            rhs[k] = delta(i);
            if (i == 2) rhs[k] -= moments_[1] / 6.0;
            if (i == n - 2) rhs[k] -= moments_[n - 1] / 6.0;
        }
        if (unknowns > 0) {
            auto sol = solve_tridiagonal(lo, di, up, rhs);
            for (std::size_t k = 0; k < unknowns; ++k) moments_[k + 2] = sol[k];
        }
    }
    moments_[0] = 2.0 * moments_[1] - moments_[2];
    moments_[n] = 2.0 * moments_[n - 1] - moments_[n - 2];
}

std::size_t CubicSpline::cell(double x) const {
    const std::size_t n = xs_.size() - 1;
    if (x <= xs_.front()) return 0;
    if (x >= xs_.back()) return n - 1;
    auto idx = static_cast<std::size_t>((x - xs_.front()) / h_);
    return std::min(idx, n - 1);
}

double CubicSpline::value(double x) const {
    const std::size_t i = cell(x);
    const double t = x - xs_[i];
    const double b = (ys_[i + 1] - ys_[i]) / h_ - h_ * (2.0 * moments_[i] + moments_[i + 1]) / 6.0;
    const double c = moments_[i] / 2.0;
    const double d = (moments_[i + 1] - moments_[i]) / (6.0 * h_);
    return ys_[i] + t * (b + t * (c + t * d));
}

double CubicSpline::derivative(double x) const {
    const std::size_t i = cell(x);
    const double t = x - xs_[i];
    const double b = (ys_[i + 1] - ys_[i]) / h_ - h_ * (2.0 * moments_[i] + moments_[i + 1]) / 6.0;
    const double c = moments_[i] / 2.0;
    const double d = (moments_[i + 1] - moments_[i]) / (6.0 * h_);
    return b + t * (2.0 * c + 3.0 * t * d);
}

}  // namespace omegacv
