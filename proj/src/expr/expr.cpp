#include "hypfred/expr.hpp"
#include "expr_detail.hpp"

#include <charconv>
#include <cmath>

namespace hypfred::expr {

namespace detail {

double apply_unary(UnaryOp op, double v, const NodePtr& node) {
    double r = 0.0;
    switch (op) {
    case UnaryOp::neg: return -v;
    case UnaryOp::sin: r = std::sin(v); break;
    case UnaryOp::cos: r = std::cos(v); break;
    case UnaryOp::tan: r = std::tan(v); break;
    case UnaryOp::exp: r = std::exp(v); break;
    case UnaryOp::log:
        if (!(v > 0.0)) throw EvalError(node, "log of non-positive value");
        r = std::log(v);
        break;
    case UnaryOp::sqrt:
        if (v < 0.0) throw EvalError(node, "sqrt of negative value");
        r = std::sqrt(v);
        break;
    case UnaryOp::abs: return std::fabs(v);
    }
    if (!std::isfinite(r)) throw EvalError(node, std::string(name(op)) + " produced a non-finite value");
    return r;
}

double apply_binary(BinaryOp op, double a, double b, const NodePtr& node) {
    double r = 0.0;
    switch (op) {
    case BinaryOp::add: r = a + b; break;
    case BinaryOp::sub: r = a - b; break;
    case BinaryOp::mul: r = a * b; break;
    case BinaryOp::div:
        if (b == 0.0) throw EvalError(node, "division by zero");
        r = a / b;
        break;
    case BinaryOp::pow:
        if (a < 0.0 && b != std::floor(b)) throw EvalError(node, "negative base with non-integer exponent");
        if (a == 0.0 && b < 0.0) throw EvalError(node, "zero raised to a negative power");
        r = std::pow(a, b);
        break;
    }
    if (!std::isfinite(r)) throw EvalError(node, "non-finite intermediate value");
    return r;
}

} // namespace detail

const char* name(UnaryOp op) {
    switch (op) {
    case UnaryOp::neg: return "-";
    case UnaryOp::sin: return "sin";
    case UnaryOp::cos: return "cos";
    case UnaryOp::tan: return "tan";
    case UnaryOp::exp: return "exp";
    case UnaryOp::log: return "log";
    case UnaryOp::sqrt: return "sqrt";
    case UnaryOp::abs: return "abs";
    }
    return "?";
}

Expr::Expr() : Expr(constant(0.0)) {}

Expr::Expr(NodePtr root) : root_(std::move(root)) {
    if (!root_) throw Error("Expr: null root");
}

Expr Expr::constant(double value) { return Expr(std::make_shared<const Node>(Node{Constant{value}})); }

Expr Expr::variable(Variable var) { return Expr(std::make_shared<const Node>(Node{VariableRef{var}})); }

Expr Expr::unary(UnaryOp op, const Expr& child) {
    return Expr(std::make_shared<const Node>(Node{Unary{op, child.node()}}));
}

Expr Expr::binary(BinaryOp op, const Expr& lhs, const Expr& rhs) {
    return Expr(std::make_shared<const Node>(Node{Binary{op, lhs.node(), rhs.node()}}));
}

std::optional<double> Expr::constant_value() const {
    if (references(*this, Variable::x) || references(*this, Variable::t)) return std::nullopt;
    try {
        return evaluate(*this, 0.0, 0.0);
    } catch (const EvalError&) {
        return std::nullopt;
    }
}

bool Expr::is_zero() const {
    auto v = constant_value();
    return v && *v == 0.0;
}

double Expr::operator()(double x, double t) const { return evaluate(*this, x, t); }

namespace {

double eval_node(const NodePtr& n, double x, double t) {
    return std::visit(
        [&](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Constant>) {
                return d.value;
            } else if constexpr (std::is_same_v<T, VariableRef>) {
                return d.var == Variable::x ? x : t;
            } else if constexpr (std::is_same_v<T, Unary>) {
                return detail::apply_unary(d.op, eval_node(d.child, x, t), n);
            } else {
                const double a = eval_node(d.lhs, x, t);
                const double b = eval_node(d.rhs, x, t);
                return detail::apply_binary(d.op, a, b, n);
            }
        },
        n->data);
}

bool node_references(const Node& n, Variable var) {
    return std::visit(
        [&](const auto& d) -> bool {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Constant>) {
                return false;
            } else if constexpr (std::is_same_v<T, VariableRef>) {
                return d.var == var;
            } else if constexpr (std::is_same_v<T, Unary>) {
                return node_references(*d.child, var);
            } else {
                return node_references(*d.lhs, var) || node_references(*d.rhs, var);
            }
        },
        n.data);
}

char symbol(BinaryOp op) {
    switch (op) {
    case BinaryOp::add: return '+';
    case BinaryOp::sub: return '-';
    case BinaryOp::mul: return '*';
    case BinaryOp::div: return '/';
    case BinaryOp::pow: return '^';
    }
    return '?';
}

void print_node(const Node& n, std::string& out) {
    std::visit(
        [&](const auto& d) {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Constant>) {
                char buf[64];
                auto res = std::to_chars(buf, buf + sizeof buf, std::fabs(d.value));
                const std::string digits(buf, res.ptr);
                if (std::signbit(d.value)) {
                    out += "(-" + digits + ")";
                } else {
                    out += digits;
                }
            } else if constexpr (std::is_same_v<T, VariableRef>) {
                out += d.var == Variable::x ? "x" : "t";
            } else if constexpr (std::is_same_v<T, Unary>) {
                if (d.op == UnaryOp::neg) {
                    out += "(-";
                    print_node(*d.child, out);
                    out += ")";
                } else {
                    out += name(d.op);
                    out += "(";
                    print_node(*d.child, out);
                    out += ")";
                }
            } else {
                out += "(";
                print_node(*d.lhs, out);
                out += ' ';
                out += symbol(d.op);
                out += ' ';
                print_node(*d.rhs, out);
                out += ")";
            }
        },
        n.data);
}

Expr substitute_node(const Expr& e, Variable var, double value) {
    return std::visit(
        [&](const auto& d) -> Expr {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Constant>) {
                return e;
            } else if constexpr (std::is_same_v<T, VariableRef>) {
                return d.var == var ? Expr::constant(value) : e;
            } else if constexpr (std::is_same_v<T, Unary>) {
                return apply(d.op, substitute_node(Expr(d.child), var, value));
            } else {
                Expr a = substitute_node(Expr(d.lhs), var, value);
                Expr b = substitute_node(Expr(d.rhs), var, value);
                switch (d.op) {
                case BinaryOp::add: return a + b;
                case BinaryOp::sub: return a - b;
                case BinaryOp::mul: return a * b;
                case BinaryOp::div: return a / b;
                case BinaryOp::pow: return pow(a, b);
                }
                return Expr::binary(d.op, a, b);
            }
        },
        e.root().data);
}

} // namespace

double evaluate(const Expr& e, double x, double t) { return eval_node(e.node(), x, t); }

bool references(const Expr& e, Variable var) { return node_references(e.root(), var); }

std::string print(const Expr& e) {
    std::string out;
    print_node(e.root(), out);
    return out;
}

Expr substitute(const Expr& e, Variable var, double value) { return substitute_node(e, var, value); }

// ---------------------------------------------------------------------------
// Builders

namespace {

std::optional<double> literal(const Expr& e) {
    if (const auto* c = std::get_if<Constant>(&e.root().data)) return c->value;
    return std::nullopt;
}

// Folds a binary op on two literals when the result is an ordinary number.
std::optional<Expr> fold(BinaryOp op, const Expr& a, const Expr& b) {
    auto la = literal(a);
    auto lb = literal(b);
    if (!la || !lb) return std::nullopt;
    try {
        return Expr::constant(detail::apply_binary(op, *la, *lb, nullptr));
    } catch (const EvalError&) {
        return std::nullopt;
    }
}

bool is_literal(const Expr& e, double v) {
    auto l = literal(e);
    return l && *l == v;
}

} // namespace

Expr operator+(const Expr& a, const Expr& b) {
    if (auto f = fold(BinaryOp::add, a, b)) return *f;
    if (is_literal(a, 0.0)) return b;
    if (is_literal(b, 0.0)) return a;
    return Expr::binary(BinaryOp::add, a, b);
}

Expr operator-(const Expr& a, const Expr& b) {
    if (auto f = fold(BinaryOp::sub, a, b)) return *f;
    if (is_literal(b, 0.0)) return a;
    if (is_literal(a, 0.0)) return -b;
    return Expr::binary(BinaryOp::sub, a, b);
}

Expr operator*(const Expr& a, const Expr& b) {
    if (auto f = fold(BinaryOp::mul, a, b)) return *f;
    if (is_literal(a, 0.0) || is_literal(b, 0.0)) return Expr::constant(0.0);
    if (is_literal(a, 1.0)) return b;
    if (is_literal(b, 1.0)) return a;
    return Expr::binary(BinaryOp::mul, a, b);
}

Expr operator/(const Expr& a, const Expr& b) {
    if (auto f = fold(BinaryOp::div, a, b)) return *f;
    if (is_literal(b, 1.0)) return a;
    return Expr::binary(BinaryOp::div, a, b);
}

Expr operator-(const Expr& a) {
    if (auto l = literal(a)) return Expr::constant(-*l);
    return Expr::unary(UnaryOp::neg, a);
}

Expr pow(const Expr& base, const Expr& exponent) {
    if (auto f = fold(BinaryOp::pow, base, exponent)) return *f;
    if (is_literal(exponent, 1.0)) return base;
    if (is_literal(exponent, 0.0)) return Expr::constant(1.0);
    return Expr::binary(BinaryOp::pow, base, exponent);
}

Expr apply(UnaryOp op, const Expr& arg) {
    if (op == UnaryOp::neg) return -arg;
    if (auto l = literal(arg)) {
        try {
            return Expr::constant(detail::apply_unary(op, *l, nullptr));
        } catch (const EvalError&) {
        }
    }
    return Expr::unary(op, arg);
}

} // namespace hypfred::expr
