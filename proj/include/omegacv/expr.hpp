#pragma once

#include <cstddef>
#include <initializer_list>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace omegacv {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Evaluation failure: unbound variable, domain error, overflow.
class EvalError : public Error {
public:
    using Error::Error;
};

/// Construction-time contract violation (bad domain, bad weight, bad input file).
class ValidationError : public Error {
public:
    using Error::Error;
};

enum class ExprKind { constant, named_constant, variable, unary, binary };

enum class NamedConst { pi, e };

enum class UnaryOp { neg, exp, ln, sin, cos, tan, sinh, cosh, tanh, sqrt, abs, sign };

enum class BinaryOp { add, sub, mul, div, pow };

// Immutable scalar expression tree over named real variables. Copies are
// cheap (shared structure); nodes are never mutated after construction.
class Expr {
public:
    Expr();  // the constant 0

    static Expr constant(double value);
    static Expr named(NamedConst c);
    static Expr variable(std::string name);
    static Expr unary(UnaryOp op, Expr child);
    static Expr binary(BinaryOp op, Expr lhs, Expr rhs);

    ExprKind kind() const;
    double constant_value() const;
    NamedConst named_value() const;
    const std::string& variable_name() const;
    UnaryOp unary_op() const;
    const Expr& child() const;
    BinaryOp binary_op() const;
    const Expr& lhs() const;
    const Expr& rhs() const;

    bool is_constant(double value) const;
    bool depends_on(std::string_view var) const;
    std::set<std::string> free_variables() const;

private:
    struct Node;
    explicit Expr(std::shared_ptr<const Node> node);
    std::shared_ptr<const Node> node_;
};

Expr operator+(Expr a, Expr b);
Expr operator-(Expr a, Expr b);
Expr operator*(Expr a, Expr b);
Expr operator/(Expr a, Expr b);
Expr operator-(Expr a);
Expr pow(Expr base, Expr exponent);

bool structurally_equal(const Expr& a, const Expr& b);

using Env = std::map<std::string, double, std::less<>>;

/// Evaluates in IEEE double precision. Throws EvalError for unbound
/// variables and for domain errors (ln/sqrt of a negative argument,
/// division by zero, non-finite results); never silently returns NaN.
double evaluate(const Expr& e, const Env& env);

/// Replaces every occurrence of `var` by `replacement`.
Expr substitute(const Expr& e, std::string_view var, const Expr& replacement);

/// Constant folding and identity elimination (x+0, x*1, x*0, x^1, x^0 with
/// 0^0 left unfolded). Idempotent; preserves values wherever both sides
/// are defined.
Expr simplify(const Expr& e);

/// Exact symbolic derivative, returned simplified. abs differentiates to
/// sign(u)*u' with sign(0) = 0 by convention.
Expr differentiate(const Expr& e, std::string_view var);

/// Prints so that parse(to_string(simplify(e))) is structurally identical
/// to simplify(e).
std::string to_string(const Expr& e);

struct ParseError {
    std::size_t offset = 0;   // byte offset into the input text
    std::string expected;
    std::string found;
    std::string message() const;
};

class ParseResult {
public:
    ParseResult(Expr value) : v_(std::move(value)) {}
    ParseResult(ParseError error) : v_(std::move(error)) {}
    bool ok() const { return std::holds_alternative<Expr>(v_); }
    const Expr& value() const;
    const ParseError& error() const;

private:
    std::variant<Expr, ParseError> v_;
};

// Grammar (precedence low to high): +- < */ < unary minus < ^ (right-assoc).
//   expr  := term (("+"|"-") term)*
//   term  := unary (("*"|"/") unary)*
//   unary := "-" unary | power
//   power := atom ("^" unary)?
//   atom  := NUMBER | IDENT | FUNC "(" expr ")" | "(" expr ")"
// Reserved functions: exp ln sin cos tan sinh cosh tanh sqrt abs sign.
// Reserved constants: pi, e. No implicit multiplication.
ParseResult parse(std::string_view text);

/// parse() that throws ValidationError with the ParseError message.
Expr parse_or_throw(std::string_view text);

// Expression flattened to a postfix tape over a fixed slot list, for fast
// repeated evaluation in solver loops. Construction fails on variables
// outside the slot list.
class CompiledExpr {
public:
    CompiledExpr() = default;
    CompiledExpr(const Expr& e, std::span<const std::string> slots);

    double operator()(std::span<const double> args) const;
    double operator()(std::initializer_list<double> args) const {
        return (*this)(std::span<const double>(args.begin(), args.size()));
    }
    std::size_t slot_count() const { return nslots_; }

private:
    enum class Op : unsigned char {
        push_const, push_arg,
        neg, exp, ln, sin, cos, tan, sinh, cosh, tanh, sqrt, abs, sign,
        add, sub, mul, div, pow
    };
    struct Ins {
        Op op;
        int slot = 0;
        double value = 0.0;
    };
    std::vector<Ins> tape_;
    int max_depth_ = 0;
    std::size_t nslots_ = 0;
};

}  // namespace omegacv
