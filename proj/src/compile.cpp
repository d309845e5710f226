#include <algorithm>
#include <numbers>

#include "omegacv/expr.hpp"
#include "scalar_ops.hpp"

namespace omegacv {

namespace {

constexpr int kInlineStack = 64;

}  // namespace

CompiledExpr::CompiledExpr(const Expr& e, std::span<const std::string> slots)
    : nslots_(slots.size()) {
    int depth = 0;
    // postfix emission; depth tracked so evaluation can use a flat stack
    auto emit = [&](auto&& self, const Expr& node) -> void {
        switch (node.kind()) {
            case ExprKind::constant:
                tape_.push_back({Op::push_const, 0, node.constant_value()});
                ++depth;
                break;
            case ExprKind::named_constant:
                tape_.push_back({Op::push_const, 0,
                                 node.named_value() == NamedConst::pi ? std::numbers::pi
                                                                      : std::numbers::e});
                ++depth;
                break;
            case ExprKind::variable: {
                auto it = std::find(slots.begin(), slots.end(), node.variable_name());
                if (it == slots.end())
                    throw EvalError("expression depends on unbound variable '" +
                                    node.variable_name() + "'");
                tape_.push_back({Op::push_arg, static_cast<int>(it - slots.begin()), 0.0});
                ++depth;
                break;
            }
            case ExprKind::unary: {
                self(self, node.child());
                Op op;
                switch (node.unary_op()) {
                    case UnaryOp::neg:  op = Op::neg; break;
                    case UnaryOp::exp:  op = Op::exp; break;
                    case UnaryOp::ln:   op = Op::ln; break;
                    case UnaryOp::sin:  op = Op::sin; break;
                    case UnaryOp::cos:  op = Op::cos; break;
                    case UnaryOp::tan:  op = Op::tan; break;
                    case UnaryOp::sinh: op = Op::sinh; break;
                    case UnaryOp::cosh: op = Op::cosh; break;
                    case UnaryOp::tanh: op = Op::tanh; break;
                    case UnaryOp::sqrt: op = Op::sqrt; break;
                    case UnaryOp::abs:  op = Op::abs; break;
                    case UnaryOp::sign: op = Op::sign; break;
                    default: throw EvalError("unknown unary op");
                }
                tape_.push_back({op, 0, 0.0});
                break;
            }
            case ExprKind::binary: {
                self(self, node.lhs());
                self(self, node.rhs());
                Op op;
                switch (node.binary_op()) {
                    case BinaryOp::add: op = Op::add; break;
                    case BinaryOp::sub: op = Op::sub; break;
                    case BinaryOp::mul: op = Op::mul; break;
                    case BinaryOp::div: op = Op::div; break;
                    case BinaryOp::pow: op = Op::pow; break;
                    default: throw EvalError("unknown binary op");
                }
                tape_.push_back({op, 0, 0.0});
                --depth;
                break;
            }
        }
        max_depth_ = std::max(max_depth_, depth);
    };
    emit(emit, e);
}

double CompiledExpr::operator()(std::span<const double> args) const {
    if (args.size() != nslots_) throw EvalError("wrong number of arguments");
    if (tape_.empty()) return 0.0;

    double inline_stack[kInlineStack];
    std::vector<double> heap_stack;
    double* st = inline_stack;
    if (max_depth_ > kInlineStack) {
        heap_stack.resize(static_cast<std::size_t>(max_depth_));
        st = heap_stack.data();
    }

    int top = -1;
    for (const Ins& ins : tape_) {
        switch (ins.op) {
            case Op::push_const: st[++top] = ins.value; continue;
            case Op::push_arg:   st[++top] = args[static_cast<std::size_t>(ins.slot)]; continue;
            default: break;
        }
        if (ins.op >= Op::add) {
            const double b = st[top--];
            const double a = st[top];
            BinaryOp bop;
            switch (ins.op) {
                case Op::add: bop = BinaryOp::add; break;
                case Op::sub: bop = BinaryOp::sub; break;
                case Op::mul: bop = BinaryOp::mul; break;
                case Op::div: bop = BinaryOp::div; break;
                default:      bop = BinaryOp::pow; break;
            }
            auto r = detail::apply_binary(bop, a, b);
            if (!r)
                throw EvalError(std::string("domain error in '") + detail::binary_symbol(bop) +
                                "' during compiled evaluation");
            st[top] = *r;
        } else {
            UnaryOp uop;
            switch (ins.op) {
                case Op::neg:  uop = UnaryOp::neg; break;
                case Op::exp:  uop = UnaryOp::exp; break;
                case Op::ln:   uop = UnaryOp::ln; break;
                case Op::sin:  uop = UnaryOp::sin; break;
                case Op::cos:  uop = UnaryOp::cos; break;
                case Op::tan:  uop = UnaryOp::tan; break;
                case Op::sinh: uop = UnaryOp::sinh; break;
                case Op::cosh: uop = UnaryOp::cosh; break;
                case Op::tanh: uop = UnaryOp::tanh; break;
                case Op::sqrt: uop = UnaryOp::sqrt; break;
                case Op::abs:  uop = UnaryOp::abs; break;
                default:       uop = UnaryOp::sign; break;
            }
            auto r = detail::apply_unary(uop, st[top]);
            if (!r)
                throw EvalError(std::string("domain error in ") + detail::unary_name(uop) +
                                " during compiled evaluation");
            st[top] = *r;
        }
    }
    return st[0];
}

}  // namespace omegacv
