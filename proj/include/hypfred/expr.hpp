#pragma once

// Coefficient expressions in the variables x and t.
//
// Grammar, loosest to tightest binding:
//   sum     := product (('+' | '-') product)*
//   product := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := atom ('^' unary)?            (right associative)
//   atom    := number | 'x' | 't' | 'pi' | 'e' | fn '(' sum ')' | '(' sum ')'
// with fn one of sin, cos, tan, exp, log, sqrt, abs.

#include "hypfred/error.hpp"

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace hypfred::expr {

enum class TokenKind { number, identifier, op, paren, comma };

struct Token {
    TokenKind kind;
    std::string lexeme;
    std::size_t position;
};

enum class Variable { x, t };
enum class UnaryOp { neg, sin, cos, tan, exp, log, sqrt, abs };
enum class BinaryOp { add, sub, mul, div, pow };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Constant {
    double value;
};
struct VariableRef {
    Variable var;
};
struct Unary {
    UnaryOp op;
    NodePtr child;
};
struct Binary {
    BinaryOp op;
    NodePtr lhs;
    NodePtr rhs;
};

struct Node {
    std::variant<Constant, VariableRef, Unary, Binary> data;
};

/// Immutable expression tree. Subtrees are shared, never mutated.
class Expr {
public:
    Expr();  // the constant 0
    explicit Expr(NodePtr root);

    static Expr constant(double value);
    static Expr variable(Variable var);
    static Expr unary(UnaryOp op, const Expr& child);
    static Expr binary(BinaryOp op, const Expr& lhs, const Expr& rhs);

    const Node& root() const { return *root_; }
    const NodePtr& node() const { return root_; }

    /// Value when the tree contains no variables and evaluates cleanly.
    std::optional<double> constant_value() const;
    bool is_zero() const;

    double operator()(double x, double t) const;

private:
    NodePtr root_;
};

/// Domain violation during evaluation; carries the node that failed.
class EvalError : public Error {
public:
    EvalError(NodePtr node, const std::string& what) : Error("evaluation error: " + what), node_(std::move(node)) {}
    const NodePtr& node() const noexcept { return node_; }

private:
    NodePtr node_;
};

std::vector<Token> tokenize(std::string_view source);
Expr parse(std::string_view source);
double evaluate(const Expr& e, double x, double t);
Expr differentiate(const Expr& e, Variable var);

/// Fully parenthesized text that parses back to an identical tree.
std::string print(const Expr& e);

/// Replaces every occurrence of `var` by the constant `value`.
Expr substitute(const Expr& e, Variable var, double value);

const char* name(UnaryOp op);
bool references(const Expr& e, Variable var);

// Builders with literal constant folding and the 0/1 identities.
Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr pow(const Expr& base, const Expr& exponent);
Expr apply(UnaryOp op, const Expr& arg);

/// Flat postfix form of an Expr for repeated evaluation in hot loops.
/// Produces bit-identical results to evaluate().
class CompiledExpr {
public:
    CompiledExpr() = default;
    explicit CompiledExpr(const Expr& e);

    double operator()(double x, double t) const;

    bool is_constant() const { return constant_.has_value(); }
    bool is_zero() const { return constant_ && *constant_ == 0.0; }
    const Expr& source() const { return source_; }

private:
    enum class Code : unsigned char { constant, var_x, var_t, unary, binary };
    struct Instr {
        Code code;
        unsigned char op;
        double value;
        NodePtr node;
    };

    Expr source_;
    std::vector<Instr> program_;
    std::size_t depth_ = 0;
    std::optional<double> constant_ = 0.0;
};

} // namespace hypfred::expr
