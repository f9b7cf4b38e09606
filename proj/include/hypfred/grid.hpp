#pragma once

#include "hypfred/error.hpp"

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <numbers>
#include <span>
#include <vector>

namespace hypfred {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Collocation grid on [0,1] x [0,2pi).
///
/// x-nodes x_i = i/(Nx-1) include both boundaries. t-nodes t_q = 2 pi q / Nt
/// are periodic: node Nt is node 0 and is not stored.
class Grid {
public:
    Grid(int nx, int nt);

    int nx() const noexcept { return nx_; }
    int nt() const noexcept { return nt_; }
    int cells() const noexcept { return nx_ - 1; }
    double hx() const noexcept { return 1.0 / static_cast<double>(nx_ - 1); }
    double ht() const noexcept { return kTwoPi / static_cast<double>(nt_); }
    double x(int i) const noexcept { return static_cast<double>(i) / static_cast<double>(nx_ - 1); }
    double t(int q) const noexcept { return kTwoPi * static_cast<double>(q) / static_cast<double>(nt_); }

    /// Number of unknowns for an n-component function.
    std::size_t size(int n) const noexcept {
        return static_cast<std::size_t>(n) * static_cast<std::size_t>(nx_) * static_cast<std::size_t>(nt_);
    }

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    int nx_;
    int nt_;
};

struct NodeIndex {
    int j;  ///< component, 0-based
    int i;  ///< x-index
    int q;  ///< t-index
    friend bool operator==(const NodeIndex&, const NodeIndex&) = default;
};

/// Component-major, then x, then t.
std::size_t flatten(const Grid& grid, int n, NodeIndex idx);
NodeIndex unflatten(const Grid& grid, int n, std::size_t index);

/// Linear weights on the enclosing x-cell.
struct SpaceWeights {
    int i0;
    int i1;
    double w0;
    double w1;
};

/// Linear weights on the enclosing t-cell, wrapped periodically.
struct TimeWeights {
    int q0;
    int q1;
    double w0;
    double w1;
};

/// Throws RangeError if x lies outside [0,1] by more than 1e-12; clamps otherwise.
SpaceWeights space_weights(const Grid& grid, double x);
TimeWeights time_weights(const Grid& grid, double t);

class GridFunction {
public:
    GridFunction(Grid grid, int n);
    GridFunction(Grid grid, int n, std::vector<double> values);

    const Grid& grid() const noexcept { return grid_; }
    int components() const noexcept { return n_; }
    std::size_t size() const noexcept { return values_.size(); }

    double& at(int j, int i, int q) { return values_[flatten(grid_, n_, {j, i, q})]; }
    double at(int j, int i, int q) const { return values_[flatten(grid_, n_, {j, i, q})]; }

    std::span<double> values() noexcept { return values_; }
    std::span<const double> values() const noexcept { return values_; }

private:
    Grid grid_;
    int n_;
    std::vector<double> values_;
};

/// Nodal samples of a scalar function.
GridFunction sample(const std::function<double(double, double)>& fn, const Grid& grid);

/// Nodal samples of an n-component function, one callable per component.
GridFunction sample(const std::vector<std::function<double(double, double)>>& fns, const Grid& grid);

/// Bilinear interpolation of component j (0-based); t is reduced modulo 2 pi.
double interpolate(const GridFunction& g, int j, double x, double t);

double sup_norm(const GridFunction& g);
double sup_norm(std::span<const double> values);

/// Rows "j,i,q,x,t,value" in flattened order; j is written 1-based.
void write_csv(std::ostream& out, const GridFunction& g);

} // namespace hypfred
