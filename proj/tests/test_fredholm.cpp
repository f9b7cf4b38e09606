#include "hypfred/builtins.hpp"
#include "hypfred/convergence.hpp"
#include "hypfred/fredholm.hpp"
#include "hypfred/levy.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

using namespace hypfred;
using expr::parse;

namespace {

ProblemSpec builtin_spec(const char* name) { return ProblemSpec(builtin(name).data); }

Eigen::VectorXd random_vector(Eigen::Index n, unsigned seed) {
    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = dist(gen);
    return v;
}

GridFunction as_grid(const Grid& g, int n, const Eigen::VectorXd& v) {
    return GridFunction(g, n, std::vector<double>(v.data(), v.data() + v.size()));
}

double orthonormality_error(const Eigen::MatrixXd& q) {
    return (q.transpose() * q - Eigen::MatrixXd::Identity(q.cols(), q.cols())).cwiseAbs().maxCoeff();
}

} // namespace

TEST(Assemble, ZeroProblemIsIdentity) {
    const OperatorMatrix m = assemble(ProblemSpec(ProblemData::zeros(2, 1)), Grid(5, 4));
    EXPECT_EQ(m.a, Eigen::MatrixXd::Identity(40, 40));
    EXPECT_EQ(m.rhs, Eigen::VectorXd::Zero(40));
    const Eigen::VectorXd s = singular_spectrum(m);
    EXPECT_EQ(s, Eigen::VectorXd::Ones(40));
}

TEST(Assemble, MatrixIsIdentityMinusOperator) {
    for (const char* name : {"example13", "manufactured-wellposed", "levy-pass"}) {
        const Discretization disc(builtin_spec(name), Grid(9, 8));
        const OperatorMatrix m = assemble(disc);
        for (unsigned s = 0; s < 5; ++s) {
            const Eigen::VectorXd u = random_vector(m.size(), s);
            const GridFunction ku = disc.apply_K(as_grid(disc.grid(), m.n, u));
            const Eigen::VectorXd au = m.a * u;
            for (Eigen::Index i = 0; i < m.size(); ++i) EXPECT_NEAR(au(i), u(i) - ku.values()[i], 1e-12) << name;
        }
        const GridFunction f = disc.apply_F();
        for (Eigen::Index i = 0; i < m.size(); ++i) EXPECT_EQ(m.rhs(i), f.values()[i]);
    }
}

TEST(Assemble, DeterministicAcrossThreadCounts) {
    const ProblemSpec p = builtin_spec("levy-pass");
    const OperatorMatrix a = assemble(p, Grid(9, 8), {.threads = 1});
    const OperatorMatrix b = assemble(p, Grid(9, 8), {.threads = 1});
    const OperatorMatrix c = assemble(p, Grid(9, 8), {.threads = 4});
    EXPECT_TRUE((a.a.array() == b.a.array()).all());
    EXPECT_TRUE((a.a.array() == c.a.array()).all());
    EXPECT_TRUE((a.rhs.array() == c.rhs.array()).all());
}

TEST(Assemble, CapacityLimit) {
    EXPECT_THROW(assemble(builtin_spec("example13"), Grid(9, 8), {.dense_limit = 100}), CapacityError);
}

TEST(Assemble, ResonantOperatorNormIsGridStable) {
    const double coarse = assemble(builtin_spec("example13"), Grid(16, 16)).k_norm_inf();
    const double fine = assemble(builtin_spec("example13"), Grid(32, 32)).k_norm_inf();
    EXPECT_GT(coarse, 0.0);
    EXPECT_LE(std::fabs(fine - coarse), 0.1 * coarse);
}

TEST(Spectrum, InvariantUnderNodePermutation) {
    const OperatorMatrix m = assemble(builtin_spec("manufactured-wellposed"), Grid(9, 8));
    std::vector<int> perm(static_cast<std::size_t>(m.size()));
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), std::mt19937(3));
    Eigen::PermutationMatrix<Eigen::Dynamic> p(m.size());
    for (Eigen::Index i = 0; i < m.size(); ++i) p.indices()(i) = perm[static_cast<std::size_t>(i)];
    OperatorMatrix permuted = m;
    permuted.a = p * m.a * p.transpose();
    EXPECT_LE((singular_spectrum(permuted) - singular_spectrum(m)).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Alternative, ZeroProblemHasZeroSolution) {
    const FredholmReport r = solve_alternative(assemble(ProblemSpec(ProblemData::zeros(1, 1)), Grid(5, 4)));
    EXPECT_TRUE(r.unique);
    EXPECT_EQ(r.kernel_dim, 0);
    EXPECT_EQ(sup_norm(r.solution), 0.0);
}

TEST(Alternative, PureForcingSolution) {
    const Grid g(9, 8);
    const ProblemSpec p = builtin_spec("pure-forcing");
    const FredholmReport r = solve_alternative(assemble(p, g));
    ASSERT_TRUE(r.unique);
    for (int i = 0; i < g.nx(); ++i) {
        for (int q = 0; q < g.nt(); ++q) EXPECT_NEAR(r.solution.at(0, i, q), g.x(i), 1e-14);
    }
    EXPECT_LE(residual(p, g, r.solution), 1e-12);
    EXPECT_NEAR(r.tau, 100.0 * 72 * std::numeric_limits<double>::epsilon() * r.sigma_max, 1e-25);
}

TEST(Alternative, UniqueBranchResidual) {
    for (const char* name : {"manufactured-wellposed", "levy-pass"}) {
        const Discretization disc(builtin_spec(name), Grid(17, 16));
        const OperatorMatrix m = assemble(disc);
        const FredholmReport r = solve_alternative(m);
        ASSERT_TRUE(r.unique) << name;
        EXPECT_GT(r.sigma_min, r.tau);
        EXPECT_EQ(r.defect, 0.0);
        EXPECT_LE(residual(disc, r.solution), 1e-10 * (1 + r.a_norm_inf) * sup_norm(r.solution)) << name;
        EXPECT_LE(r.solve_residual, 1e-10 * (1 + r.a_norm_inf) * sup_norm(r.solution));
    }
}

TEST(Alternative, ResonantBranchKernelAndCokernel) {
    const OperatorMatrix m = assemble(builtin_spec("example13"), Grid(33, 32));
    AlternativeOptions opts;
    opts.tau = 1e-2;
    const FredholmReport r = solve_alternative(m, opts);
    EXPECT_FALSE(r.unique);
    EXPECT_GE(r.kernel_dim, 3);
    EXPECT_EQ(r.kernel.cols(), r.kernel_dim);
    EXPECT_LE(orthonormality_error(r.kernel), 1e-10);
    EXPECT_LE(orthonormality_error(r.cokernel), 1e-10);
    for (int c = 0; c < r.kernel_dim; ++c) {
        EXPECT_LE((m.a * r.kernel.col(c)).norm(), *opts.tau * r.kernel.col(c).norm());
        EXPECT_LE((r.cokernel.col(c).transpose() * m.a).norm(), *opts.tau * r.cokernel.col(c).norm());
    }
    const Eigen::Index n = r.singular_values.size();
    EXPECT_EQ((r.singular_values.array() < *opts.tau).count(), r.kernel_dim);
    EXPECT_EQ(r.sigma_min, r.singular_values(n - 1));
    EXPECT_EQ(r.defect, 0.0);  // no forcing
    EXPECT_EQ(sup_norm(r.solution), 0.0);
}

TEST(Alternative, PartialSpectrumPathAgreesWithFullSvd) {
    ProblemData d = builtin("example13").data;
    d.f = {parse("cos(t)*x"), parse("sin(2*t)")};
    const OperatorMatrix m = assemble(ProblemSpec(d), Grid(17, 16));
    AlternativeOptions full;
    full.tau = 1e-2;
    AlternativeOptions partial = full;
    partial.full_svd_limit = 0;
    const FredholmReport a = solve_alternative(m, full);
    const FredholmReport b = solve_alternative(m, partial);
    EXPECT_TRUE(a.spectrum_complete);
    EXPECT_FALSE(b.spectrum_complete);
    ASSERT_EQ(a.kernel_dim, b.kernel_dim);
    EXPECT_GE(a.kernel_dim, 1);
    EXPECT_NEAR(a.sigma_max, b.sigma_max, 1e-10 * a.sigma_max);
    EXPECT_NEAR(a.sigma_min, b.sigma_min, 1e-9 * a.sigma_max);
    EXPECT_NEAR(a.defect, b.defect, 1e-8 * std::max(1.0, a.defect));
    EXPECT_GT(a.defect, 0.0);
    // Same kernel subspace: projections agree.
    const Eigen::MatrixXd pa = a.kernel * a.kernel.transpose();
    const Eigen::MatrixXd pb = b.kernel * b.kernel.transpose();
    EXPECT_LE((pa - pb).cwiseAbs().maxCoeff(), 1e-6);
    for (std::size_t i = 0; i < a.solution.size(); ++i) {
        EXPECT_NEAR(a.solution.values()[i], b.solution.values()[i], 1e-7 * sup_norm(a.solution));
    }
    // Solutions are orthogonal to the kernel and solve the deflated system.
    const Eigen::Map<const Eigen::VectorXd> u(b.solution.values().data(), m.size());
    EXPECT_LE((b.kernel.transpose() * u).norm(), 1e-8 * u.norm());
}

TEST(Alternative, ValidatesTolerance) {
    AlternativeOptions opts;
    opts.tau = -1.0;
    EXPECT_THROW(solve_alternative(assemble(builtin_spec("pure-forcing"), Grid(5, 4)), opts), RangeError);
}

TEST(Alternative, SmallestSingularValueBothPaths) {
    const OperatorMatrix m = assemble(builtin_spec("manufactured-wellposed"), Grid(9, 8));
    const double full = smallest_singular_value(m);
    const double partial = smallest_singular_value(m, {0});
    EXPECT_NEAR(full, partial, 1e-10);
}

TEST(Residual, ZeroFunctionWithoutForcing) {
    const Grid g(9, 8);
    EXPECT_EQ(residual(builtin_spec("example13"), g, GridFunction(g, 2)), 0.0);
}

TEST(Levy, ResonantExampleFailsBothPairs) {
    const LevyReport r = check_levy(builtin_spec("example13"), Grid(9, 8));
    EXPECT_FALSE(r.pass);
    ASSERT_EQ(r.pairs.size(), 2u);
    for (const LevyPair& p : r.pairs) {
        EXPECT_FALSE(p.pass);
        EXPECT_EQ(p.bound, 0.0);
        EXPECT_NEAR(p.worst_excess, 1.0 - 1e-8, 1e-15);
        EXPECT_EQ(p.x, Grid(9, 8).x(p.i));
        EXPECT_EQ(p.t, Grid(9, 8).t(p.q));
    }
    EXPECT_EQ(r.pairs[0].j, 0);
    EXPECT_EQ(r.pairs[0].k, 1);
    EXPECT_EQ(r.pairs[1].j, 1);
}

TEST(Levy, ProportionalCouplingPasses) {
    ProblemData d = ProblemData::zeros(2, 1);
    d.a = {parse("1"), parse("-2")};
    d.b[0][1] = parse("(-2 - 1)*cos(t)");
    d.b[1][0] = parse("(1 + 2)*sin(x)");
    const LevyReport r = check_levy(ProblemSpec(d), Grid(17, 16));
    EXPECT_TRUE(r.pass);
    EXPECT_NEAR(r.pairs[0].bound, 1.0, 1e-12);
    for (const char* name : {"levy-pass", "manufactured-wellposed", "pure-forcing"}) {
        EXPECT_TRUE(check_levy(builtin_spec(name), Grid(17, 16)).pass) << name;
    }
}

TEST(Levy, ZeroCouplingHasZeroBound) {
    const LevyReport r = check_levy(ProblemSpec(ProblemData::zeros(3, 1)), Grid(5, 4));
    EXPECT_TRUE(r.pass);
    EXPECT_EQ(r.pairs.size(), 6u);
    for (const LevyPair& p : r.pairs) EXPECT_EQ(p.bound, 0.0);
    EXPECT_EQ(r.delta, 1e-6);
}

TEST(Levy, GapBelowDeltaIsExcludedFromTheBound) {
    // Coupling that grows like 1/gap near x = 0.5 for a speed gap closing there.
    ProblemData d = ProblemData::zeros(2, 1);
    d.a = {parse("1"), parse("1 + (x - 0.5)^2")};
    d.b[0][1] = parse("1");
    const LevyReport r = check_levy(ProblemSpec(d), Grid(17, 4), {.delta = 0.01});
    EXPECT_FALSE(r.pass);
    EXPECT_EQ(r.pairs[0].x, 0.5);
}

TEST(Convergence, ZeroCouplingIsExact) {
    const StudyTable t = convergence_study(builtin_spec("pure-forcing"), builtin("pure-forcing").exact,
                                           {Grid(5, 4), Grid(9, 8), Grid(17, 16)});
    EXPECT_TRUE(t.exact);
    for (const StudyRow& r : t.rows) {
        EXPECT_LE(r.value, 1e-13);
        EXPECT_FALSE(r.order.has_value());
    }
}

TEST(Convergence, ManufacturedSecondOrder) {
    const Builtin& b = builtin("manufactured-wellposed");
    const StudyTable t = convergence_study(ProblemSpec(b.data), b.exact, {Grid(9, 8), Grid(17, 16), Grid(33, 32)});
    EXPECT_EQ(t.quantity, StudyQuantity::error);
    ASSERT_TRUE(t.rows.back().order.has_value());
    EXPECT_GE(*t.rows.back().order, 1.8);
}

TEST(Convergence, ResonantSigmaTrendDecreases) {
    const StudyTable t = convergence_study(builtin_spec("example13"), std::nullopt, {Grid(9, 8), Grid(17, 16), Grid(33, 32)});
    EXPECT_EQ(t.quantity, StudyQuantity::sigma_min);
    for (std::size_t i = 1; i < t.rows.size(); ++i) EXPECT_LT(t.rows[i].value, t.rows[i - 1].value);
}

TEST(Convergence, ResonantModeResidualOrder) {
    const StudyTable t = residual_study(builtin_spec("example13"), resonant_mode(1), {Grid(17, 16), Grid(33, 32), Grid(65, 64)});
    for (std::size_t i = 1; i < t.rows.size(); ++i) {
        EXPECT_LT(t.rows[i].value, t.rows[i - 1].value);
        EXPECT_GE(*t.rows[i].order, 1.8);
    }
}

TEST(Convergence, GridsMustRefine) {
    const ProblemSpec p = builtin_spec("pure-forcing");
    EXPECT_THROW(check_refining({Grid(9, 8), Grid(9, 16)}), RangeError);
    EXPECT_THROW(check_refining({Grid(9, 8), Grid(17, 24)}), RangeError);
    EXPECT_THROW(check_refining({}), RangeError);
    EXPECT_NO_THROW(check_refining({Grid(9, 8), Grid(16, 16)}));
    EXPECT_THROW(residual_study(p, {parse("x"), parse("x")}, {Grid(5, 4)}), RangeError);
}
