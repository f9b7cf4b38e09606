#include "hypfred/builtins.hpp"
#include "hypfred/error.hpp"

#include <string>

namespace hypfred {
namespace {

using expr::Expr;
using expr::Variable;

Expr p(std::string_view s) { return expr::parse(s); }

Builtin make_example13() {
    ProblemData d = ProblemData::zeros(2, 1);
    d.a = {p("2/pi"), p("2/pi")};
    d.b[0][1] = p("-1");
    d.b[1][0] = p("1");
    d.description = "two equal speeds 2/pi, antisymmetric coupling b12 = -1, b21 = 1, no forcing; "
                    "resonant: every l gives a periodic kernel pair";
    return {"example13", "resonant two-speed system with equal speeds (infinite-dimensional kernel)", d, {}};
}

Builtin make_pure_forcing() {
    ProblemData d = ProblemData::zeros(1, 1);
    d.f = {p("1")};
    d.description = "single transport equation u_t + u_x = 1 with u(0,t) = 0";
    return {"pure-forcing", "n = 1, a = 1, all couplings zero, f = 1; solution u = x", d, {p("x")}};
}

Builtin make_levy_pass() {
    ProblemData d = ProblemData::zeros(2, 1);
    d.a = {p("1 + 0.5*sin(x + t)"), p("-1")};
    d.b[0][1] = p("(-1 - (1 + 0.5*sin(x + t)))*cos(t)");
    d.b[1][0] = p("((1 + 0.5*sin(x + t)) + 1)*sin(t)");
    d.r[0][0] = p("0.2");
    d.f = {p("cos(t)"), p("sin(t)")};
    d.description = "variable speed against a constant one, couplings proportional to the speed gap, "
                    "one boundary integral";
    return {"levy-pass", "couplings of the form (a_k - a_j) times a bounded factor", d, {}};
}

} // namespace

ManufacturedParts manufactured_wellposed() {
    ManufacturedParts mp;
    ProblemData& d = mp.data;
    d = ProblemData::zeros(2, 1);
    d.a = {p("1"), p("-1")};
    d.b = {{p("1"), p("0.5*cos(t)")}, {p("-0.5"), p("1")}};
    d.g[0][0] = p("0.25");
    d.g[1][1] = p("0.25");
    // No boundary-trace coupling: h feeds a line of nodes into the interior,
    // which the discrete 2-norm weights with the grid, so sigma_min would drift.
    d.description = "manufactured well-posed system with exact solution u1 = x sin t, u2 = (1 - x) cos t";

    mp.exact = {p("x*sin(t)"), p("(1 - x)*cos(t)")};
    mp.volterra = {p("0.125*x^2*sin(t)"), p("0.25*(x - 0.5*x^2)*cos(t)")};
    for (int j = 0; j < 2; ++j) {
        Expr integrand;
        for (int k = 0; k < 2; ++k) integrand = integrand + d.g[j][k] * mp.exact[k];
        mp.volterra_integrand.push_back(integrand);
    }

    // f_j = d_t u_j + a_j d_x u_j + sum_k b_jk u_k + W_j - sum_k h_jk u_k(1 - x_k, t)
    for (int j = 0; j < 2; ++j) {
        Expr f = expr::differentiate(mp.exact[j], Variable::t) + d.a[j] * expr::differentiate(mp.exact[j], Variable::x);
        for (int k = 0; k < 2; ++k) f = f + d.b[j][k] * mp.exact[k];
        f = f + mp.volterra[j];
        for (int k = 0; k < 2; ++k) {
            const double trace_at = k < d.m ? 1.0 : 0.0;
            f = f - d.h[j][k] * expr::substitute(mp.exact[k], Variable::x, trace_at);
        }
        d.f[j] = f;
    }
    return mp;
}

std::vector<Expr> resonant_mode(int l, bool cosine) {
    const std::string phase = (cosine ? "cos(" : "sin(") + std::to_string(l) + "*(t - (pi/2)*x))";
    return {p("sin((pi/2)*x)*" + phase), p("cos((pi/2)*x)*" + phase)};
}

const std::vector<Builtin>& builtins() {
    static const std::vector<Builtin> list = [] {
        ManufacturedParts mp = manufactured_wellposed();
        return std::vector<Builtin>{
            make_example13(),
            make_pure_forcing(),
            {"manufactured-wellposed",
             "n = 2, a = (1, -1), Levy-compliant couplings, exact u1 = x sin t, u2 = (1 - x) cos t",
             mp.data, mp.exact},
            make_levy_pass(),
        };
    }();
    return list;
}

const Builtin& builtin(std::string_view name) {
    for (const Builtin& b : builtins()) {
        if (b.name == name) return b;
    }
    throw ValidationError("unknown built-in problem '" + std::string(name) + "'");
}

} // namespace hypfred
