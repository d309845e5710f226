#include "omegacv/expr.hpp"

namespace omegacv {

namespace {

Expr c(double v) { return Expr::constant(v); }

Expr d(const Expr& e, std::string_view var) {
    switch (e.kind()) {
        case ExprKind::constant:
        case ExprKind::named_constant:
            return c(0);
        case ExprKind::variable:
            return c(e.variable_name() == var ? 1 : 0);
        case ExprKind::unary: {
            const Expr& u = e.child();
            Expr du = d(u, var);
            switch (e.unary_op()) {
                case UnaryOp::neg:  return -std::move(du);
                case UnaryOp::exp:  return Expr::unary(UnaryOp::exp, u) * du;
                case UnaryOp::ln:   return du / u;
                case UnaryOp::sin:  return Expr::unary(UnaryOp::cos, u) * du;
                case UnaryOp::cos:  return -(Expr::unary(UnaryOp::sin, u) * du);
                case UnaryOp::tan:
                    return (c(1) + pow(Expr::unary(UnaryOp::tan, u), c(2))) * du;
                case UnaryOp::sinh: return Expr::unary(UnaryOp::cosh, u) * du;
                case UnaryOp::cosh: return Expr::unary(UnaryOp::sinh, u) * du;
                case UnaryOp::tanh:
                    return (c(1) - pow(Expr::unary(UnaryOp::tanh, u), c(2))) * du;
                case UnaryOp::sqrt:
                    return du / (c(2) * Expr::unary(UnaryOp::sqrt, u));
                case UnaryOp::abs:
                    // kink convention: abs'(u) = sign(u) * u', sign(0) = 0
                    return Expr::unary(UnaryOp::sign, u) * du;
                case UnaryOp::sign:
                    return c(0);  // flat away from the jump
            }
            return c(0);
        }
        case ExprKind::binary: {
            const Expr& u = e.lhs();
            const Expr& v = e.rhs();
            switch (e.binary_op()) {
                case BinaryOp::add: return d(u, var) + d(v, var);
                case BinaryOp::sub: return d(u, var) - d(v, var);
                case BinaryOp::mul: return d(u, var) * v + u * d(v, var);
                case BinaryOp::div:
                    return (d(u, var) * v - u * d(v, var)) / pow(v, c(2));
                case BinaryOp::pow:
                    if (!v.depends_on(var))
                        return v * pow(u, v - c(1)) * d(u, var);
                    if (!u.depends_on(var))
                        return pow(u, v) * Expr::unary(UnaryOp::ln, u) * d(v, var);
                    return pow(u, v) *
                           (d(v, var) * Expr::unary(UnaryOp::ln, u) + v * d(u, var) / u);
            }
            return c(0);
        }
    }
    return c(0);
}

}  // namespace

Expr differentiate(const Expr& e, std::string_view var) { return simplify(d(e, var)); }

}  // namespace omegacv
