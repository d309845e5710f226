#include <cmath>
#include <vector>

#include "omegacv/expr.hpp"
#include "scalar_ops.hpp"

namespace omegacv {

namespace {

bool is_const(const Expr& e, double& out) {
    if (e.kind() != ExprKind::constant) return false;
    out = e.constant_value();
    return true;
}

// Flattens a chain of multiplications, merging constant factors. Returns
// false when merging would produce a non-finite constant.
bool collect_factors(const Expr& e, double& factor, std::vector<Expr>& rest) {
    double c;
    if (is_const(e, c)) {
        const double f = factor * c;
        if (!std::isfinite(f)) return false;
        factor = f;
        return true;
    }
    if (e.kind() == ExprKind::binary && e.binary_op() == BinaryOp::mul)
        return collect_factors(e.lhs(), factor, rest) && collect_factors(e.rhs(), factor, rest);
    rest.push_back(e);
    return true;
}

Expr rebuild_product(double factor, std::vector<Expr> rest) {
    if (factor == 0.0) return Expr::constant(0.0);
    if (rest.empty()) return Expr::constant(factor);
    Expr acc = std::move(rest.front());
    for (std::size_t i = 1; i < rest.size(); ++i)
        acc = Expr::binary(BinaryOp::mul, std::move(acc), std::move(rest[i]));
    if (factor == 1.0) return acc;
    return Expr::binary(BinaryOp::mul, Expr::constant(factor), std::move(acc));
}

Expr simplify_product(Expr e) {
    double factor = 1.0;
    std::vector<Expr> rest;
    if (!collect_factors(e, factor, rest)) return e;
    return rebuild_product(factor, std::move(rest));
}

Expr simplify_unary(UnaryOp op, Expr child) {
    double c;
    if (is_const(child, c)) {
        if (auto r = detail::apply_unary(op, c)) return Expr::constant(*r);
        return Expr::unary(op, std::move(child));  // domain error stays symbolic
    }
    if (op == UnaryOp::neg && child.kind() == ExprKind::unary &&
        child.unary_op() == UnaryOp::neg)
        return child.child();
    return Expr::unary(op, std::move(child));
}

Expr simplify_binary(BinaryOp op, Expr a, Expr b) {
    double ca = 0.0, cb = 0.0;
    const bool la = is_const(a, ca);
    const bool lb = is_const(b, cb);
    if (la && lb) {
        // 0^0 is deliberately left unfolded
        if (!(op == BinaryOp::pow && ca == 0.0 && cb == 0.0)) {
            if (auto r = detail::apply_binary(op, ca, cb)) return Expr::constant(*r);
        }
        return Expr::binary(op, std::move(a), std::move(b));
    }
    switch (op) {
        case BinaryOp::add:
            if (la && ca == 0.0) return b;
            if (lb && cb == 0.0) return a;
            break;
        case BinaryOp::sub:
            if (lb && cb == 0.0) return a;
            if (la && ca == 0.0) return simplify_unary(UnaryOp::neg, std::move(b));
            break;
        case BinaryOp::mul:
            return simplify_product(Expr::binary(BinaryOp::mul, std::move(a), std::move(b)));
        case BinaryOp::div:
            if (lb && cb == 1.0) return a;
            if (la && ca == 0.0) return Expr::constant(0.0);
            if (structurally_equal(a, b)) return Expr::constant(1.0);
            break;
        case BinaryOp::pow:
            if (lb && cb == 1.0) return a;
            if (lb && cb == 0.0 && !a.is_constant(0.0)) return Expr::constant(1.0);
            break;
    }
    return Expr::binary(op, std::move(a), std::move(b));
}

}  // namespace

Expr simplify(const Expr& e) {
    switch (e.kind()) {
        case ExprKind::constant:
        case ExprKind::named_constant:
        case ExprKind::variable:
            return e;
        case ExprKind::unary:
            return simplify_unary(e.unary_op(), simplify(e.child()));
        case ExprKind::binary:
            return simplify_binary(e.binary_op(), simplify(e.lhs()), simplify(e.rhs()));
    }
    return e;
}

}  // namespace omegacv
