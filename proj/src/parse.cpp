#include <cctype>
#include <charconv>
#include <optional>

#include "omegacv/expr.hpp"

namespace omegacv {

std::string ParseError::message() const {
    return "parse error at offset " + std::to_string(offset) + ": expected " + expected +
           ", found " + found;
}

namespace {

enum class TokKind { number, ident, plus, minus, star, slash, caret, lparen, rparen, end };

struct Token {
    TokKind kind;
    std::size_t offset;
    std::string_view text;
    double number = 0.0;
};

struct LexFail {
    std::size_t offset;
    std::string found;
};

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) {}

    // Returns nullopt and fills fail_ on a malformed token.
    std::optional<Token> next() {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
        const std::size_t start = pos_;
        if (pos_ >= text_.size()) return Token{TokKind::end, start, "end of input"};
        const char c = text_[pos_];
        switch (c) {
            case '+': ++pos_; return Token{TokKind::plus, start, text_.substr(start, 1)};
            case '-': ++pos_; return Token{TokKind::minus, start, text_.substr(start, 1)};
            case '*': ++pos_; return Token{TokKind::star, start, text_.substr(start, 1)};
            case '/': ++pos_; return Token{TokKind::slash, start, text_.substr(start, 1)};
            case '^': ++pos_; return Token{TokKind::caret, start, text_.substr(start, 1)};
            case '(': ++pos_; return Token{TokKind::lparen, start, text_.substr(start, 1)};
            case ')': ++pos_; return Token{TokKind::rparen, start, text_.substr(start, 1)};
            default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return lex_number(start);
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t end = pos_ + 1;
            while (end < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_'))
                ++end;
            Token t{TokKind::ident, start, text_.substr(start, end - start)};
            pos_ = end;
            return t;
        }
        fail_ = LexFail{start, "'" + std::string(1, c) + "'"};
        return std::nullopt;
    }

    const LexFail& fail() const { return fail_; }

private:
    std::optional<Token> lex_number(std::size_t start) {
        std::size_t end = pos_;
        bool digits = false;
        while (end < text_.size() && std::isdigit(static_cast<unsigned char>(text_[end]))) {
            ++end;
            digits = true;
        }
        if (end < text_.size() && text_[end] == '.') {
            ++end;
            while (end < text_.size() && std::isdigit(static_cast<unsigned char>(text_[end]))) {
                ++end;
                digits = true;
            }
        }
        if (!digits) {
            fail_ = LexFail{start, "'.'"};
            return std::nullopt;
        }
        // Exponent only when at least one digit follows; otherwise the 'e'
        // is left for the next token (it may be the Euler constant).
        if (end < text_.size() && (text_[end] == 'e' || text_[end] == 'E')) {
            std::size_t p = end + 1;
            if (p < text_.size() && (text_[p] == '+' || text_[p] == '-')) ++p;
            if (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]))) {
                ++p;
                while (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]))) ++p;
                end = p;
            }
        }
        Token t{TokKind::number, start, text_.substr(start, end - start)};
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + end, v);
        if (ec != std::errc() || ptr != text_.data() + end) {
            fail_ = LexFail{start, "'" + std::string(t.text) + "'"};
            return std::nullopt;
        }
        t.number = v;
        pos_ = end;
        return t;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    LexFail fail_{};
};

std::optional<UnaryOp> function_by_name(std::string_view name) {
    if (name == "exp") return UnaryOp::exp;
    if (name == "ln") return UnaryOp::ln;
    if (name == "sin") return UnaryOp::sin;
    if (name == "cos") return UnaryOp::cos;
    if (name == "tan") return UnaryOp::tan;
    if (name == "sinh") return UnaryOp::sinh;
    if (name == "cosh") return UnaryOp::cosh;
    if (name == "tanh") return UnaryOp::tanh;
    if (name == "sqrt") return UnaryOp::sqrt;
    if (name == "abs") return UnaryOp::abs;
    if (name == "sign") return UnaryOp::sign;
    return std::nullopt;
}

class Parser {
public:
    explicit Parser(std::string_view text) : lexer_(text) { advance(); }

    ParseResult run() {
        auto e = parse_expr();
        if (!e) return take_error();
        if (lex_failed_ || cur_.kind != TokKind::end) return fail("end of input");
        return *e;
    }

private:
    void advance() {
        auto t = lexer_.next();
        if (!t) {
            lex_failed_ = true;
            cur_ = Token{TokKind::end, lexer_.fail().offset, "?"};
        } else {
            cur_ = *t;
        }
    }

    ParseResult fail(std::string expected) {
        if (!error_) {
            if (lex_failed_)
                error_ = ParseError{lexer_.fail().offset, std::move(expected), lexer_.fail().found};
            else
                error_ = ParseError{cur_.offset, std::move(expected),
                                    cur_.kind == TokKind::end ? "end of input"
                                                              : "'" + std::string(cur_.text) + "'"};
        }
        return *error_;
    }

    ParseError take_error() {
        if (!error_) fail("expression");
        return *error_;
    }

    std::optional<Expr> parse_expr() {
        auto left = parse_term();
        if (!left) return std::nullopt;
        while (cur_.kind == TokKind::plus || cur_.kind == TokKind::minus) {
            const BinaryOp op = cur_.kind == TokKind::plus ? BinaryOp::add : BinaryOp::sub;
            advance();
            auto right = parse_term();
            if (!right) return std::nullopt;
            left = Expr::binary(op, std::move(*left), std::move(*right));
        }
        return left;
    }

    std::optional<Expr> parse_term() {
        auto left = parse_unary();
        if (!left) return std::nullopt;
        while (cur_.kind == TokKind::star || cur_.kind == TokKind::slash) {
            const BinaryOp op = cur_.kind == TokKind::star ? BinaryOp::mul : BinaryOp::div;
            advance();
            auto right = parse_unary();
            if (!right) return std::nullopt;
            left = Expr::binary(op, std::move(*left), std::move(*right));
        }
        return left;
    }

    std::optional<Expr> parse_unary() {
        if (cur_.kind == TokKind::minus) {
            advance();
            auto operand = parse_unary();
            if (!operand) return std::nullopt;
            // A minus applied directly to a numeric literal folds into a
            // negative constant, so printed trees re-parse identically.
            if (operand->kind() == ExprKind::constant)
                return Expr::constant(-operand->constant_value());
            return Expr::unary(UnaryOp::neg, std::move(*operand));
        }
        return parse_power();
    }

    std::optional<Expr> parse_power() {
        auto base = parse_atom();
        if (!base) return std::nullopt;
        if (cur_.kind == TokKind::caret) {
            advance();
            auto exponent = parse_unary();  // right-associative; sign allowed
            if (!exponent) return std::nullopt;
            return Expr::binary(BinaryOp::pow, std::move(*base), std::move(*exponent));
        }
        return base;
    }

    std::optional<Expr> parse_atom() {
        switch (cur_.kind) {
            case TokKind::number: {
                Expr e = Expr::constant(cur_.number);
                advance();
                return e;
            }
            case TokKind::ident: {
                const std::string name(cur_.text);
                advance();
                if (auto fn = function_by_name(name)) {
                    if (cur_.kind != TokKind::lparen) {
                        fail("'(' after function name '" + name + "'");
                        return std::nullopt;
                    }
                    advance();
                    auto arg = parse_expr();
                    if (!arg) return std::nullopt;
                    if (cur_.kind != TokKind::rparen) {
                        fail("')'");
                        return std::nullopt;
                    }
                    advance();
                    return Expr::unary(*fn, std::move(*arg));
                }
                if (cur_.kind == TokKind::lparen) {
                    fail("a known function name before '(', got '" + name + "'");
                    return std::nullopt;
                }
                if (name == "pi") return Expr::named(NamedConst::pi);
                if (name == "e") return Expr::named(NamedConst::e);
                return Expr::variable(name);
            }
            case TokKind::lparen: {
                advance();
                auto inner = parse_expr();
                if (!inner) return std::nullopt;
                if (cur_.kind != TokKind::rparen) {
                    fail("')'");
                    return std::nullopt;
                }
                advance();
                return inner;
            }
            default:
                fail("a number, variable, function call or '('");
                return std::nullopt;
        }
    }

    Lexer lexer_;
    Token cur_{TokKind::end, 0, ""};
    bool lex_failed_ = false;
    std::optional<ParseError> error_;
};

}  // namespace

ParseResult parse(std::string_view text) { return Parser(text).run(); }

}  // namespace omegacv
