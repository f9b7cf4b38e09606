#pragma once

#include "hypfred/expr.hpp"

#include <optional>
#include <string>
#include <vector>

namespace hypfred {

using ExprMatrix = std::vector<std::vector<expr::Expr>>;

/// Raw coefficient data of the periodic boundary value problem
///
///   d_t u_j + a_j d_x u_j + sum_k b_jk u_k + sum_k int_0^x g_jk(y,t) u_k(y,t) dy
///       = sum_k h_jk u_k(1 - x_k, t) + f_j,
///   u_j(x_j, t) = sum_k int_0^1 r_jk(x,t) u_k(x,t) dx,
///
/// with x_j = 0 for the first m components and x_j = 1 for the rest.
/// Components are 0-based here; component j < m enters at x = 0.
struct ProblemData {
    int n = 1;
    int m = 0;
    std::vector<expr::Expr> a;
    ExprMatrix b;
    ExprMatrix g;
    ExprMatrix h;
    ExprMatrix r;
    std::vector<expr::Expr> f;
    /// false switches the inner integral of the g-term from [0,x] to [0,1].
    bool volterra = true;
    std::string description;

    /// n x n zero matrices, zero forcing and unit speeds.
    static ProblemData zeros(int n, int m);
};

/// Validated problem with compiled coefficients.
///
/// Construction checks that every coefficient evaluates on a sample grid,
/// that each speed stays away from zero, and that every coefficient is
/// 2 pi-periodic in t to 1e-10.
class ProblemSpec {
public:
    static constexpr double kDegenerateSpeed = 1e-10;
    static constexpr double kPeriodicityTolerance = 1e-10;

    explicit ProblemSpec(ProblemData data);

    int n() const noexcept { return data_.n; }
    int m() const noexcept { return data_.m; }
    bool volterra() const noexcept { return data_.volterra; }
    const ProblemData& data() const noexcept { return data_; }

    /// Boundary abscissa x_j where component j receives its boundary condition.
    double boundary(int j) const noexcept { return j < data_.m ? 0.0 : 1.0; }

    const expr::CompiledExpr& a(int j) const { return a_[idx(j)]; }
    const expr::CompiledExpr& b(int j, int k) const { return b_[pair(j, k)]; }
    const expr::CompiledExpr& g(int j, int k) const { return g_[pair(j, k)]; }
    const expr::CompiledExpr& h(int j, int k) const { return h_[pair(j, k)]; }
    const expr::CompiledExpr& r(int j, int k) const { return r_[pair(j, k)]; }
    const expr::CompiledExpr& f(int j) const { return f_[idx(j)]; }

    /// d a_j / dx and d a_j / dt. Throw DiffError when a_j is not differentiable.
    const expr::CompiledExpr& a_dx(int j) const;
    const expr::CompiledExpr& a_dt(int j) const;

    /// True when some r_jk is not identically zero.
    bool has_boundary_integrals() const noexcept { return has_r_; }

private:
    std::size_t idx(int j) const;
    std::size_t pair(int j, int k) const;

    ProblemData data_;
    std::vector<expr::CompiledExpr> a_, b_, g_, h_, r_, f_;
    std::vector<std::optional<expr::CompiledExpr>> a_dx_, a_dt_;
    bool has_r_ = false;
};

} // namespace hypfred
