#include "hypfred/expr.hpp"

namespace hypfred::expr {
namespace {

Expr d(const Expr& e, Variable var);

Expr d_unary(const Unary& u, Variable var) {
    const Expr arg(u.child);
    const Expr da = d(arg, var);
    switch (u.op) {
    case UnaryOp::neg: return -da;
    case UnaryOp::sin: return apply(UnaryOp::cos, arg) * da;
    case UnaryOp::cos: return -apply(UnaryOp::sin, arg) * da;
    case UnaryOp::tan: return da / pow(apply(UnaryOp::cos, arg), Expr::constant(2.0));
    case UnaryOp::exp: return apply(UnaryOp::exp, arg) * da;
    case UnaryOp::log: return da / arg;
    case UnaryOp::sqrt: return da / (Expr::constant(2.0) * apply(UnaryOp::sqrt, arg));
    case UnaryOp::abs: throw DiffError("abs is not differentiable");
    }
    throw DiffError("unsupported unary node");
}

Expr d_binary(const Binary& b, Variable var) {
    const Expr f(b.lhs);
    const Expr g(b.rhs);
    switch (b.op) {
    case BinaryOp::add: return d(f, var) + d(g, var);
    case BinaryOp::sub: return d(f, var) - d(g, var);
    case BinaryOp::mul: return d(f, var) * g + f * d(g, var);
    case BinaryOp::div: return (d(f, var) * g - f * d(g, var)) / pow(g, Expr::constant(2.0));
    case BinaryOp::pow: {
        const Expr df = d(f, var);
        if (!references(g, Variable::x) && !references(g, Variable::t)) {
            return g * pow(f, g - Expr::constant(1.0)) * df;
        }
        // f^g * (g' log f + g f'/f)
        const Expr dg = d(g, var);
        return pow(f, g) * (dg * apply(UnaryOp::log, f) + g * df / f);
    }
    }
    throw DiffError("unsupported binary node");
}

Expr d(const Expr& e, Variable var) {
    return std::visit(
        [&](const auto& n) -> Expr {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Constant>) {
                return Expr::constant(0.0);
            } else if constexpr (std::is_same_v<T, VariableRef>) {
                return Expr::constant(n.var == var ? 1.0 : 0.0);
            } else if constexpr (std::is_same_v<T, Unary>) {
                return d_unary(n, var);
            } else {
                return d_binary(n, var);
            }
        },
        e.root().data);
}

} // namespace

Expr differentiate(const Expr& e, Variable var) { return d(e, var); }

} // namespace hypfred::expr
