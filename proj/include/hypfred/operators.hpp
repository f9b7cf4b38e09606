#pragma once

#include "hypfred/characteristics.hpp"
#include "hypfred/grid.hpp"
#include "hypfred/problem.hpp"

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace hypfred {

/// Row of the discrete operator K = R + B + G + H at one node, as weights on
/// flattened node indices, plus the forcing value (F f) at that node.
struct Stencil {
    std::vector<std::pair<std::size_t, double>> entries;  ///< sorted by index, indices distinct
    double constant = 0.0;

    bool empty() const noexcept { return entries.empty(); }
    /// Linear part applied to flattened nodal values.
    double apply(std::span<const double> u) const;
};

/// Which parts of K a computation includes.
struct OperatorMask {
    bool r = true;
    bool b = true;
    bool g = true;
    bool h = true;

    static OperatorMask only_r() { return {true, false, false, false}; }
    static OperatorMask only_b() { return {false, true, false, false}; }
    static OperatorMask only_g() { return {false, false, true, false}; }
    static OperatorMask only_h() { return {false, false, false, true}; }
};

struct DiscretizationOptions {
    int substeps = 4;
    int threads = 1;
};

/// Nystrom discretization of the integral form on a periodic grid.
///
/// Construction traces the characteristic of every component from every grid
/// node to its boundary abscissa x_j and keeps the curves for reuse. After
/// that the object is read-only and safe to share between threads.
///
/// xi-integrals use the trapezoid rule on the RK4 samples of the cached
/// curve; u between nodes is bilinear, and on-grid abscissae use the
/// t-direction only.
class Discretization {
public:
    Discretization(ProblemSpec problem, Grid grid, DiscretizationOptions options = {});

    const ProblemSpec& problem() const noexcept { return problem_; }
    const Grid& grid() const noexcept { return grid_; }
    const DiscretizationOptions& options() const noexcept { return options_; }
    std::size_t unknowns() const noexcept { return grid_.size(problem_.n()); }

    /// Characteristic of component j from node (x_i, t_q) to x_j.
    const CharacteristicCurve& curve(NodeIndex node) const;

    GridFunction apply_R(const GridFunction& u) const { return apply(u, OperatorMask::only_r()); }
    GridFunction apply_B(const GridFunction& u) const { return apply(u, OperatorMask::only_b()); }
    GridFunction apply_G(const GridFunction& u) const { return apply(u, OperatorMask::only_g()); }
    GridFunction apply_H(const GridFunction& u) const { return apply(u, OperatorMask::only_h()); }
    GridFunction apply_K(const GridFunction& u) const { return apply(u, OperatorMask{}); }
    GridFunction apply(const GridFunction& u, OperatorMask mask) const;
    GridFunction apply_F() const;

    Stencil stencil_row(NodeIndex node, OperatorMask mask = {}) const;

    /// Adds scale * (row of K at `node`) into a dense row of length unknowns().
    /// Touched indices are appended to `touched` the first time they are hit,
    /// as flagged in `marks`.
    void accumulate_row(NodeIndex node, OperatorMask mask, double scale, std::span<double> row,
                        std::vector<std::size_t>& touched, std::vector<char>& marks) const;

    double forcing_at(NodeIndex node) const;

private:
    template <typename Sink>
    void visit_row(NodeIndex node, OperatorMask mask, Sink& sink) const;

    void check(const GridFunction& u) const;

    ProblemSpec problem_;
    Grid grid_;
    DiscretizationOptions options_;
    std::vector<CharacteristicCurve> curves_;
};

// Convenience wrappers that build a throwaway Discretization.
GridFunction apply_R(const ProblemSpec& p, const Grid& grid, const GridFunction& u);
GridFunction apply_B(const ProblemSpec& p, const Grid& grid, const GridFunction& u);
GridFunction apply_G(const ProblemSpec& p, const Grid& grid, const GridFunction& u);
GridFunction apply_H(const ProblemSpec& p, const Grid& grid, const GridFunction& u);
GridFunction apply_F(const ProblemSpec& p, const Grid& grid);

} // namespace hypfred
