#include "hypfred/expr.hpp"

#include <charconv>
#include <numbers>
#include <optional>

namespace hypfred::expr {
namespace {

// Binding powers. Unary minus sits between '*' and '^'.
constexpr int kAdditive = 10;
constexpr int kMultiplicative = 20;
constexpr int kUnary = 25;
constexpr int kPower = 30;

std::optional<UnaryOp> function_named(std::string_view id) {
    if (id == "sin") return UnaryOp::sin;
    if (id == "cos") return UnaryOp::cos;
    if (id == "tan") return UnaryOp::tan;
    if (id == "exp") return UnaryOp::exp;
    if (id == "log") return UnaryOp::log;
    if (id == "sqrt") return UnaryOp::sqrt;
    if (id == "abs") return UnaryOp::abs;
    return std::nullopt;
}

class Parser {
public:
    Parser(std::vector<Token> tokens, std::size_t end_offset)
        : tokens_(std::move(tokens)), end_offset_(end_offset) {}

    Expr parse_all() {
        Expr e = parse_expression(0);
        if (!at_end()) throw ParseError(peek().position, "end of input, found '" + peek().lexeme + "'");
        return e;
    }

private:
    bool at_end() const { return pos_ >= tokens_.size(); }
    const Token& peek() const { return tokens_[pos_]; }
    std::size_t here() const { return at_end() ? end_offset_ : peek().position; }

    bool next_is(TokenKind kind, std::string_view lexeme) const {
        return !at_end() && peek().kind == kind && peek().lexeme == lexeme;
    }

    void expect_paren(char which, const char* description) {
        if (!next_is(TokenKind::paren, std::string_view(&which, 1))) throw ParseError(here(), description);
        ++pos_;
    }

    Expr parse_expression(int min_bp) {
        Expr lhs = parse_prefix();
        while (!at_end()) {
            const Token& tok = peek();
            if (tok.kind != TokenKind::op) break;
            const char op = tok.lexeme[0];
            int lbp = 0;
            int rbp = 0;
            BinaryOp bop{};
            switch (op) {
            case '+': lbp = kAdditive; rbp = kAdditive + 1; bop = BinaryOp::add; break;
            case '-': lbp = kAdditive; rbp = kAdditive + 1; bop = BinaryOp::sub; break;
            case '*': lbp = kMultiplicative; rbp = kMultiplicative + 1; bop = BinaryOp::mul; break;
            case '/': lbp = kMultiplicative; rbp = kMultiplicative + 1; bop = BinaryOp::div; break;
            case '^': lbp = kPower; rbp = kPower - 1; bop = BinaryOp::pow; break;
            default: break;
            }
            if (lbp <= min_bp) break;
            ++pos_;
            Expr rhs = parse_expression(rbp);
            lhs = Expr::binary(bop, lhs, rhs);
        }
        return lhs;
    }

    Expr parse_prefix() {
        if (at_end()) throw ParseError(end_offset_, "expression");
        const Token tok = peek();
        ++pos_;
        switch (tok.kind) {
        case TokenKind::number: {
            double value = 0.0;
            const char* first = tok.lexeme.data();
            const char* last = first + tok.lexeme.size();
            auto [ptr, ec] = std::from_chars(first, last, value);
            if (ec != std::errc() || ptr != last) throw ParseError(tok.position, "a representable number");
            return Expr::constant(value);
        }
        case TokenKind::identifier: {
            if (tok.lexeme == "x") return Expr::variable(Variable::x);
            if (tok.lexeme == "t") return Expr::variable(Variable::t);
            if (tok.lexeme == "pi") return Expr::constant(std::numbers::pi);
            if (tok.lexeme == "e") return Expr::constant(std::numbers::e);
            if (auto fn = function_named(tok.lexeme)) {
                expect_paren('(', "'(' after function name");
                Expr arg = parse_expression(0);
                expect_paren(')', "')' to close function call (unclosed parenthesis)");
                return Expr::unary(*fn, arg);
            }
            throw ParseError(tok.position, "x, t, pi, e or a known function, found '" + tok.lexeme + "'");
        }
        case TokenKind::op:
            if (tok.lexeme == "-") return Expr::unary(UnaryOp::neg, parse_expression(kUnary));
            if (tok.lexeme == "+") return parse_expression(kUnary);
            throw ParseError(tok.position, "operand, found '" + tok.lexeme + "'");
        case TokenKind::paren:
            if (tok.lexeme == "(") {
                Expr inner = parse_expression(0);
                expect_paren(')', "')' (unclosed parenthesis)");
                return inner;
            }
            throw ParseError(tok.position, "operand, found ')'");
        case TokenKind::comma:
            break;
        }
        throw ParseError(tok.position, "operand, found ','");
    }

    std::vector<Token> tokens_;
    std::size_t end_offset_;
    std::size_t pos_ = 0;
};

} // namespace

Expr parse(std::string_view source) {
    Parser parser(tokenize(source), source.size());
    return parser.parse_all();
}

} // namespace hypfred::expr
