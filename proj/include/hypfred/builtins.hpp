#pragma once

#include "hypfred/expr.hpp"
#include "hypfred/problem.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace hypfred {

struct Builtin {
    std::string name;
    std::string summary;
    ProblemData data;
    /// Exact solution, one expression per component; empty when unknown.
    std::vector<expr::Expr> exact;
};

/// example13, pure-forcing, manufactured-wellposed, levy-pass.
const std::vector<Builtin>& builtins();

/// Throws ValidationError for an unknown name.
const Builtin& builtin(std::string_view name);

/// Pieces of the manufactured problem, exposed so the derivation of f can be
/// checked independently.
struct ManufacturedParts {
    std::vector<expr::Expr> exact;
    /// W_j(x,t) = sum_k int_0^x g_jk(y,t) u_k(y,t) dy, written out by hand.
    std::vector<expr::Expr> volterra;
    /// sum_k g_jk(x,t) u_k(x,t): the x-derivative W_j must have.
    std::vector<expr::Expr> volterra_integrand;
    ProblemData data;
};

ManufacturedParts manufactured_wellposed();

/// Explicit time-periodic kernel pair of the resonant two-speed system:
/// u1 = sin(pi x/2) F(l (t - pi x/2)), u2 = cos(pi x/2) F(...), F = sin or cos.
std::vector<expr::Expr> resonant_mode(int l, bool cosine = false);

} // namespace hypfred
