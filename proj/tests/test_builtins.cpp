#include "hypfred/builtins.hpp"
#include "hypfred/convergence.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace hypfred;
using expr::Variable;

namespace {

constexpr double kPi = std::numbers::pi;

const double kXs[] = {0.0, 0.21, 0.5, 0.77, 1.0};
const double kTs[] = {0.0, 0.9, 2.4, 4.1, 6.0};

} // namespace

TEST(Builtins, ListingIsCompleteAndValid) {
    std::vector<std::string> names;
    for (const Builtin& b : builtins()) {
        names.push_back(b.name);
        EXPECT_FALSE(b.summary.empty());
        EXPECT_NO_THROW(ProblemSpec{b.data}) << b.name;
        if (!b.exact.empty()) EXPECT_EQ(static_cast<int>(b.exact.size()), b.data.n);
    }
    EXPECT_EQ(names, (std::vector<std::string>{"example13", "pure-forcing", "manufactured-wellposed", "levy-pass"}));
    EXPECT_THROW(builtin("nope"), ValidationError);
}

TEST(Builtins, ResonantExampleCoefficients) {
    const ProblemData& d = builtin("example13").data;
    EXPECT_EQ(d.n, 2);
    EXPECT_EQ(d.m, 1);
    for (double x : kXs) {
        for (double t : kTs) {
            EXPECT_DOUBLE_EQ(d.a[0](x, t), 2 / kPi);
            EXPECT_DOUBLE_EQ(d.a[1](x, t), 2 / kPi);
            EXPECT_EQ(d.b[0][1](x, t), -1.0);
            EXPECT_EQ(d.b[1][0](x, t), 1.0);
            EXPECT_EQ(d.f[0](x, t), 0.0);
        }
    }
}

TEST(Builtins, ResonantModesSatisfyTheHomogeneousSystem) {
    // u1_t + (2/pi) u1_x - u2 = 0, u2_t + (2/pi) u2_x + u1 = 0, u1(0) = 0, u2(1) = 0
    for (int l : {1, 2, 3}) {
        for (bool cosine : {false, true}) {
            const auto u = resonant_mode(l, cosine);
            const expr::Expr e1 = expr::differentiate(u[0], Variable::t) +
                                  expr::Expr::constant(2 / kPi) * expr::differentiate(u[0], Variable::x) - u[1];
            const expr::Expr e2 = expr::differentiate(u[1], Variable::t) +
                                  expr::Expr::constant(2 / kPi) * expr::differentiate(u[1], Variable::x) + u[0];
            for (double x : kXs) {
                for (double t : kTs) {
                    EXPECT_NEAR(e1(x, t), 0.0, 1e-13);
                    EXPECT_NEAR(e2(x, t), 0.0, 1e-13);
                    EXPECT_NEAR(u[0](0.0, t), 0.0, 1e-15);
                    EXPECT_NEAR(u[1](1.0, t), 0.0, 1e-15);
                    EXPECT_NEAR(u[0](x, t + 2 * kPi), u[0](x, t), 1e-12);
                }
            }
        }
    }
}

TEST(Manufactured, BoundaryValuesVanish) {
    const ManufacturedParts parts = manufactured_wellposed();
    EXPECT_TRUE(expr::substitute(parts.exact[0], Variable::x, 0.0).is_zero());
    EXPECT_TRUE(expr::substitute(parts.exact[1], Variable::x, 1.0).is_zero());
}

TEST(Manufactured, VolterraTermIsTheIntegralOfItsIntegrand) {
    const ManufacturedParts parts = manufactured_wellposed();
    for (int j = 0; j < 2; ++j) {
        const expr::Expr dw = expr::differentiate(parts.volterra[static_cast<std::size_t>(j)], Variable::x);
        for (double x : kXs) {
            for (double t : kTs) {
                EXPECT_NEAR(dw(x, t), parts.volterra_integrand[static_cast<std::size_t>(j)](x, t), 1e-15);
                EXPECT_EQ(parts.volterra[static_cast<std::size_t>(j)](0.0, t), 0.0);
            }
        }
    }
}

TEST(Manufactured, ForcingMatchesHandDerivation) {
    const ProblemData& d = manufactured_wellposed().data;
    for (double x : kXs) {
        for (double t : kTs) {
            const double s = std::sin(t), c = std::cos(t);
            const double f1 = x * c + s + x * s + 0.5 * c * (1 - x) * c + 0.125 * x * x * s;
            const double f2 = -(1 - x) * s + c - 0.5 * x * s + (1 - x) * c + 0.25 * (x - x * x / 2) * c;
            EXPECT_NEAR(d.f[0](x, t), f1, 1e-14);
            EXPECT_NEAR(d.f[1](x, t), f2, 1e-14);
        }
    }
}

TEST(Manufactured, ExactSolutionHasSmallDiscreteResidual) {
    const Builtin& b = builtin("manufactured-wellposed");
    const StudyTable t = residual_study(ProblemSpec(b.data), b.exact, {Grid(17, 16), Grid(33, 32)});
    EXPECT_GE(*t.rows.back().order, 1.8);
    EXPECT_LE(t.rows.back().value, 1e-2);
}
