#pragma once

// Shared scalar kernels for tree evaluation, compiled evaluation and
// constant folding. nullopt marks a domain error or a non-finite result;
// the caller decides whether to throw or to keep the subtree unfolded.

#include <cmath>
#include <optional>

#include "omegacv/expr.hpp"

namespace omegacv::detail {

inline double sign_of(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

inline std::optional<double> apply_unary(UnaryOp op, double x) {
    double r;
    switch (op) {
        case UnaryOp::neg:  r = -x; break;
        case UnaryOp::exp:  r = std::exp(x); break;
        case UnaryOp::ln:
            if (x <= 0.0) return std::nullopt;
            r = std::log(x);
            break;
        case UnaryOp::sin:  r = std::sin(x); break;
        case UnaryOp::cos:  r = std::cos(x); break;
        case UnaryOp::tan:  r = std::tan(x); break;
        case UnaryOp::sinh: r = std::sinh(x); break;
        case UnaryOp::cosh: r = std::cosh(x); break;
        case UnaryOp::tanh: r = std::tanh(x); break;
        case UnaryOp::sqrt:
            if (x < 0.0) return std::nullopt;
            r = std::sqrt(x);
            break;
        case UnaryOp::abs:  r = std::fabs(x); break;
        case UnaryOp::sign: r = sign_of(x); break;
        default: return std::nullopt;
    }
    if (!std::isfinite(r)) return std::nullopt;
    return r;
}

inline std::optional<double> apply_binary(BinaryOp op, double a, double b) {
    double r;
    switch (op) {
        case BinaryOp::add: r = a + b; break;
        case BinaryOp::sub: r = a - b; break;
        case BinaryOp::mul: r = a * b; break;
        case BinaryOp::div:
            if (b == 0.0) return std::nullopt;
            r = a / b;
            break;
        case BinaryOp::pow: r = std::pow(a, b); break;
        default: return std::nullopt;
    }
    if (!std::isfinite(r)) return std::nullopt;
    return r;
}

const char* unary_name(UnaryOp op);
const char* binary_symbol(BinaryOp op);

}  // namespace omegacv::detail
