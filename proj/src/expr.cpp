#include "omegacv/expr.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <utility>

#include "scalar_ops.hpp"

namespace omegacv {

struct Expr::Node {
    ExprKind kind;
    double value = 0.0;            // constant
    NamedConst named = NamedConst::pi;
    std::string name;              // variable
    UnaryOp uop = UnaryOp::neg;
    BinaryOp bop = BinaryOp::add;
    std::vector<Expr> kids;        // empty, {child} or {lhs, rhs}
};

Expr::Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Expr::Expr() {
    auto n = std::make_shared<Node>();
    n->kind = ExprKind::constant;
    n->value = 0.0;
    node_ = std::move(n);
}

Expr Expr::constant(double value) {
    auto n = std::make_shared<Node>();
    n->kind = ExprKind::constant;
    n->value = value;
    return Expr(std::move(n));
}

Expr Expr::named(NamedConst c) {
    auto n = std::make_shared<Node>();
    n->kind = ExprKind::named_constant;
    n->named = c;
    return Expr(std::move(n));
}

Expr Expr::variable(std::string name) {
    auto n = std::make_shared<Node>();
    n->kind = ExprKind::variable;
    n->name = std::move(name);
    return Expr(std::move(n));
}

Expr Expr::unary(UnaryOp op, Expr child) {
    auto n = std::make_shared<Node>();
    n->kind = ExprKind::unary;
    n->uop = op;
    n->kids.push_back(std::move(child));
    return Expr(std::move(n));
}

Expr Expr::binary(BinaryOp op, Expr lhs, Expr rhs) {
    auto n = std::make_shared<Node>();
    n->kind = ExprKind::binary;
    n->bop = op;
    n->kids.push_back(std::move(lhs));
    n->kids.push_back(std::move(rhs));
    return Expr(std::move(n));
}

ExprKind Expr::kind() const { return node_->kind; }
double Expr::constant_value() const { return node_->value; }
NamedConst Expr::named_value() const { return node_->named; }
const std::string& Expr::variable_name() const { return node_->name; }
UnaryOp Expr::unary_op() const { return node_->uop; }
const Expr& Expr::child() const { return node_->kids[0]; }
BinaryOp Expr::binary_op() const { return node_->bop; }
const Expr& Expr::lhs() const { return node_->kids[0]; }
const Expr& Expr::rhs() const { return node_->kids[1]; }

bool Expr::is_constant(double value) const {
    return node_->kind == ExprKind::constant && node_->value == value;
}

bool Expr::depends_on(std::string_view var) const {
    switch (kind()) {
        case ExprKind::constant:
        case ExprKind::named_constant: return false;
        case ExprKind::variable: return variable_name() == var;
        case ExprKind::unary: return child().depends_on(var);
        case ExprKind::binary: return lhs().depends_on(var) || rhs().depends_on(var);
    }
    return false;
}

namespace {
void collect_variables(const Expr& e, std::set<std::string>& out) {
    switch (e.kind()) {
        case ExprKind::constant:
        case ExprKind::named_constant: break;
        case ExprKind::variable: out.insert(e.variable_name()); break;
        case ExprKind::unary: collect_variables(e.child(), out); break;
        case ExprKind::binary:
            collect_variables(e.lhs(), out);
            collect_variables(e.rhs(), out);
            break;
    }
}
}  // namespace

std::set<std::string> Expr::free_variables() const {
    std::set<std::string> out;
    collect_variables(*this, out);
    return out;
}

Expr operator+(Expr a, Expr b) { return Expr::binary(BinaryOp::add, std::move(a), std::move(b)); }
Expr operator-(Expr a, Expr b) { return Expr::binary(BinaryOp::sub, std::move(a), std::move(b)); }
Expr operator*(Expr a, Expr b) { return Expr::binary(BinaryOp::mul, std::move(a), std::move(b)); }
Expr operator/(Expr a, Expr b) { return Expr::binary(BinaryOp::div, std::move(a), std::move(b)); }
Expr operator-(Expr a) { return Expr::unary(UnaryOp::neg, std::move(a)); }
Expr pow(Expr base, Expr exponent) {
    return Expr::binary(BinaryOp::pow, std::move(base), std::move(exponent));
}

bool structurally_equal(const Expr& a, const Expr& b) {
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
        case ExprKind::constant: return a.constant_value() == b.constant_value();
        case ExprKind::named_constant: return a.named_value() == b.named_value();
        case ExprKind::variable: return a.variable_name() == b.variable_name();
        case ExprKind::unary:
            return a.unary_op() == b.unary_op() && structurally_equal(a.child(), b.child());
        case ExprKind::binary:
            return a.binary_op() == b.binary_op() && structurally_equal(a.lhs(), b.lhs()) &&
                   structurally_equal(a.rhs(), b.rhs());
    }
    return false;
}

namespace detail {

const char* unary_name(UnaryOp op) {
    switch (op) {
        case UnaryOp::neg:  return "-";
        case UnaryOp::exp:  return "exp";
        case UnaryOp::ln:   return "ln";
        case UnaryOp::sin:  return "sin";
        case UnaryOp::cos:  return "cos";
        case UnaryOp::tan:  return "tan";
        case UnaryOp::sinh: return "sinh";
        case UnaryOp::cosh: return "cosh";
        case UnaryOp::tanh: return "tanh";
        case UnaryOp::sqrt: return "sqrt";
        case UnaryOp::abs:  return "abs";
        case UnaryOp::sign: return "sign";
    }
    return "?";
}

const char* binary_symbol(BinaryOp op) {
    switch (op) {
        case BinaryOp::add: return "+";
        case BinaryOp::sub: return "-";
        case BinaryOp::mul: return "*";
        case BinaryOp::div: return "/";
        case BinaryOp::pow: return "^";
    }
    return "?";
}

}  // namespace detail

double evaluate(const Expr& e, const Env& env) {
    switch (e.kind()) {
        case ExprKind::constant: return e.constant_value();
        case ExprKind::named_constant:
            return e.named_value() == NamedConst::pi ? std::numbers::pi : std::numbers::e;
        case ExprKind::variable: {
            auto it = env.find(e.variable_name());
            if (it == env.end())
                throw EvalError("unbound variable '" + e.variable_name() + "'");
            return it->second;
        }
        case ExprKind::unary: {
            const double x = evaluate(e.child(), env);
            auto r = detail::apply_unary(e.unary_op(), x);
            if (!r)
                throw EvalError(std::string("domain error in ") +
                                detail::unary_name(e.unary_op()) + "(" + std::to_string(x) + ")");
            return *r;
        }
        case ExprKind::binary: {
            const double a = evaluate(e.lhs(), env);
            const double b = evaluate(e.rhs(), env);
            auto r = detail::apply_binary(e.binary_op(), a, b);
            if (!r) {
                if (e.binary_op() == BinaryOp::div && b == 0.0)
                    throw EvalError("division by zero");
                throw EvalError(std::string("domain error in '") +
                                detail::binary_symbol(e.binary_op()) + "'");
            }
            return *r;
        }
    }
    throw EvalError("corrupt expression node");
}

Expr substitute(const Expr& e, std::string_view var, const Expr& replacement) {
    switch (e.kind()) {
        case ExprKind::constant:
        case ExprKind::named_constant: return e;
        case ExprKind::variable: return e.variable_name() == var ? replacement : e;
        case ExprKind::unary:
            return Expr::unary(e.unary_op(), substitute(e.child(), var, replacement));
        case ExprKind::binary:
            return Expr::binary(e.binary_op(), substitute(e.lhs(), var, replacement),
                                substitute(e.rhs(), var, replacement));
    }
    return e;
}

// -------- printing --------
//
// Precedence levels: add/sub 1, mul/div 2, unary minus 3, pow 4, atom 5.
// Negative constants print like applications of unary minus (level 3) so
// that output always re-parses to the identical tree.

namespace {

int print_level(const Expr& e) {
    switch (e.kind()) {
        case ExprKind::constant: return e.constant_value() < 0 ? 3 : 5;
        case ExprKind::named_constant:
        case ExprKind::variable: return 5;
        case ExprKind::unary: return e.unary_op() == UnaryOp::neg ? 3 : 5;
        case ExprKind::binary:
            switch (e.binary_op()) {
                case BinaryOp::add:
                case BinaryOp::sub: return 1;
                case BinaryOp::mul:
                case BinaryOp::div: return 2;
                case BinaryOp::pow: return 4;
            }
    }
    return 5;
}

std::string format_number(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, end);
}

void print_expr(const Expr& e, std::string& out);

void print_child(const Expr& e, int min_level, std::string& out) {
    if (print_level(e) < min_level) {
        out += '(';
        print_expr(e, out);
        out += ')';
    } else {
        print_expr(e, out);
    }
}

void print_expr(const Expr& e, std::string& out) {
    switch (e.kind()) {
        case ExprKind::constant:
            out += format_number(e.constant_value());
            return;
        case ExprKind::named_constant:
            out += e.named_value() == NamedConst::pi ? "pi" : "e";
            return;
        case ExprKind::variable:
            out += e.variable_name();
            return;
        case ExprKind::unary:
            if (e.unary_op() == UnaryOp::neg) {
                out += '-';
                // parenthesize a nested minus for readability
                print_child(e.child(), e.child().kind() == ExprKind::unary &&
                                               e.child().unary_op() == UnaryOp::neg
                                           ? 5
                                           : 3,
                            out);
            } else {
                out += detail::unary_name(e.unary_op());
                out += '(';
                print_expr(e.child(), out);
                out += ')';
            }
            return;
        case ExprKind::binary: {
            const BinaryOp op = e.binary_op();
            const int level = print_level(e);
            switch (op) {
                case BinaryOp::add:
                case BinaryOp::sub:
                    print_child(e.lhs(), level, out);
                    out += detail::binary_symbol(op);
                    print_child(e.rhs(), level + 1, out);  // left-assoc
                    return;
                case BinaryOp::mul:
                case BinaryOp::div:
                    print_child(e.lhs(), level, out);
                    out += detail::binary_symbol(op);
                    print_child(e.rhs(), level + 1, out);
                    return;
                case BinaryOp::pow:
                    print_child(e.lhs(), 5, out);  // ^ binds tighter than unary minus
                    out += '^';
                    print_child(e.rhs(), 4, out);  // right-assoc; parenthesized signs
                    return;
            }
        }
    }
}

}  // namespace

std::string to_string(const Expr& e) {
    std::string out;
    print_expr(e, out);
    return out;
}

const Expr& ParseResult::value() const {
    if (!ok()) throw ValidationError(std::get<ParseError>(v_).message());
    return std::get<Expr>(v_);
}

const ParseError& ParseResult::error() const {
    if (ok()) throw ValidationError("parse succeeded; no error to report");
    return std::get<ParseError>(v_);
}

Expr parse_or_throw(std::string_view text) {
    auto r = parse(text);
    return r.value();
}

}  // namespace omegacv
