#include "hypfred/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>

namespace hypfred {
namespace {

// Coordinates computed in floating point land a few ulps off the nodes; pull
// them back so that node queries hit stored values exactly.
double snap_to_node(double s) {
    const double r = std::nearbyint(s);
    if (std::fabs(s - r) <= 8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::fabs(s))) return r;
    return s;
}

} // namespace

Grid::Grid(int nx, int nt) : nx_(nx), nt_(nt) {
    if (nx < 3) throw RangeError("grid: Nx must be >= 3, got " + std::to_string(nx));
    if (nt < 4) throw RangeError("grid: Nt must be >= 4, got " + std::to_string(nt));
}

std::size_t flatten(const Grid& grid, int n, NodeIndex idx) {
    if (idx.j < 0 || idx.j >= n || idx.i < 0 || idx.i >= grid.nx() || idx.q < 0 || idx.q >= grid.nt()) {
        throw RangeError("flatten: node (" + std::to_string(idx.j) + "," + std::to_string(idx.i) + "," +
                         std::to_string(idx.q) + ") out of range");
    }
    return (static_cast<std::size_t>(idx.j) * static_cast<std::size_t>(grid.nx()) + static_cast<std::size_t>(idx.i)) *
               static_cast<std::size_t>(grid.nt()) +
           static_cast<std::size_t>(idx.q);
}

NodeIndex unflatten(const Grid& grid, int n, std::size_t index) {
    if (index >= grid.size(n)) throw RangeError("unflatten: index " + std::to_string(index) + " out of range");
    const auto nt = static_cast<std::size_t>(grid.nt());
    const auto nx = static_cast<std::size_t>(grid.nx());
    const int q = static_cast<int>(index % nt);
    const int i = static_cast<int>((index / nt) % nx);
    const int j = static_cast<int>(index / (nt * nx));
    return {j, i, q};
}

SpaceWeights space_weights(const Grid& grid, double x) {
    constexpr double kSlack = 1e-12;
    if (!(x >= -kSlack && x <= 1.0 + kSlack)) {
        throw RangeError("interpolation abscissa " + std::to_string(x) + " outside [0,1]");
    }
    x = std::clamp(x, 0.0, 1.0);
    const double s = snap_to_node(x * static_cast<double>(grid.cells()));
    int i0 = static_cast<int>(std::floor(s));
    i0 = std::clamp(i0, 0, grid.cells() - 1);
    const double frac = s - static_cast<double>(i0);
    return {i0, i0 + 1, 1.0 - frac, frac};
}

TimeWeights time_weights(const Grid& grid, double t) {
    const double s = snap_to_node(t / grid.ht());
    const double fl = std::floor(s);
    const double frac = s - fl;
    const long long nt = grid.nt();
    long long q0 = static_cast<long long>(fl) % nt;
    if (q0 < 0) q0 += nt;
    const long long q1 = (q0 + 1) % nt;
    return {static_cast<int>(q0), static_cast<int>(q1), 1.0 - frac, frac};
}

GridFunction::GridFunction(Grid grid, int n) : grid_(grid), n_(n), values_(grid.size(n), 0.0) {
    if (n < 1) throw RangeError("grid function needs at least one component");
}

GridFunction::GridFunction(Grid grid, int n, std::vector<double> values)
    : grid_(grid), n_(n), values_(std::move(values)) {
    if (n < 1) throw RangeError("grid function needs at least one component");
    if (values_.size() != grid_.size(n_)) throw RangeError("grid function: value count does not match grid");
}

GridFunction sample(const std::function<double(double, double)>& fn, const Grid& grid) {
    return sample(std::vector<std::function<double(double, double)>>{fn}, grid);
}

GridFunction sample(const std::vector<std::function<double(double, double)>>& fns, const Grid& grid) {
    GridFunction g(grid, static_cast<int>(fns.size()));
    for (int j = 0; j < g.components(); ++j) {
        for (int i = 0; i < grid.nx(); ++i) {
            for (int q = 0; q < grid.nt(); ++q) g.at(j, i, q) = fns[static_cast<std::size_t>(j)](grid.x(i), grid.t(q));
        }
    }
    return g;
}

double interpolate(const GridFunction& g, int j, double x, double t) {
    if (j < 0 || j >= g.components()) throw RangeError("interpolate: component out of range");
    const SpaceWeights sw = space_weights(g.grid(), x);
    const TimeWeights tw = time_weights(g.grid(), t);
    // Exact at nodes: zero weights contribute nothing.
    double v = 0.0;
    if (sw.w0 != 0.0) v += sw.w0 * (tw.w0 * g.at(j, sw.i0, tw.q0) + tw.w1 * g.at(j, sw.i0, tw.q1));
    if (sw.w1 != 0.0) v += sw.w1 * (tw.w0 * g.at(j, sw.i1, tw.q0) + tw.w1 * g.at(j, sw.i1, tw.q1));
    return v;
}

double sup_norm(std::span<const double> values) {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::fabs(v));
    return m;
}

double sup_norm(const GridFunction& g) { return sup_norm(g.values()); }

void write_csv(std::ostream& out, const GridFunction& g) {
    out << "j,i,q,x,t,value\n";
    const Grid& grid = g.grid();
    char buf[128];
    for (int j = 0; j < g.components(); ++j) {
        for (int i = 0; i < grid.nx(); ++i) {
            for (int q = 0; q < grid.nt(); ++q) {
                std::snprintf(buf, sizeof buf, "%d,%d,%d,%.17g,%.17g,%.17g\n", j + 1, i, q, grid.x(i), grid.t(q),
                              g.at(j, i, q));
                out << buf;
            }
        }
    }
}

} // namespace hypfred
