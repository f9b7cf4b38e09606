#include "hypfred/operators.hpp"
#include "hypfred/parallel.hpp"

#include <algorithm>

namespace hypfred {
namespace {

// Evaluates the row functional on a concrete grid function through
// interpolate(), i.e. without going through stencil weights.
class ValueSink {
public:
    explicit ValueSink(const GridFunction& u) : u_(u) {}

    void on_column(int k, int, double x, double t, const TimeWeights&, double w) {
        value += w * interpolate(u_, k, x, t);
    }
    void on_point(int k, double x, double t, const SpaceWeights&, const TimeWeights&, double w) {
        value += w * interpolate(u_, k, x, t);
    }

    double value = 0.0;

private:
    const GridFunction& u_;
};

// Scatters the row functional into a dense row as interpolation weights.
class RowSink {
public:
    RowSink(const Grid& grid, int n, double scale, std::span<double> row, std::vector<std::size_t>& touched,
            std::vector<char>& marks)
        : grid_(grid), n_(n), scale_(scale), row_(row), touched_(touched), marks_(marks) {}

    void on_column(int k, int i, double, double, const TimeWeights& tw, double w) {
        add(k, i, tw.q0, w * tw.w0);
        add(k, i, tw.q1, w * tw.w1);
    }
    void on_point(int k, double, double, const SpaceWeights& sw, const TimeWeights& tw, double w) {
        if (sw.w0 != 0.0) on_column(k, sw.i0, 0.0, 0.0, tw, w * sw.w0);
        if (sw.w1 != 0.0) on_column(k, sw.i1, 0.0, 0.0, tw, w * sw.w1);
    }

private:
    void add(int k, int i, int q, double w) {
        if (w == 0.0) return;
        const std::size_t idx = flatten(grid_, n_, {k, i, q});
        if (!marks_[idx]) {
            marks_[idx] = 1;
            touched_.push_back(idx);
        }
        row_[idx] += scale_ * w;
    }

    const Grid& grid_;
    int n_;
    double scale_;
    std::span<double> row_;
    std::vector<std::size_t>& touched_;
    std::vector<char>& marks_;
};

// Trapezoid weights for int_{x_j}^{x} along a curve traced from x to x_j.
std::vector<double> curve_weights(const CharacteristicCurve& curve) {
    const auto& s = curve.samples;
    std::vector<double> w(s.size(), 0.0);
    for (std::size_t k = 0; k + 1 < s.size(); ++k) {
        const double half = 0.5 * (s[k + 1].xi - s[k].xi);
        w[k] -= half;
        w[k + 1] -= half;
    }
    return w;
}

double node_weight(const Grid& grid, int i) {
    return (i == 0 || i == grid.nx() - 1) ? 0.5 * grid.hx() : grid.hx();
}

} // namespace

double Stencil::apply(std::span<const double> u) const {
    double v = 0.0;
    for (const auto& [idx, w] : entries) v += w * u[idx];
    return v;
}

Discretization::Discretization(ProblemSpec problem, Grid grid, DiscretizationOptions options)
    : problem_(std::move(problem)), grid_(grid), options_(options) {
    const std::size_t count = unknowns();
    curves_.resize(count);
    const TraceSettings settings = TraceSettings::for_grid(grid_, options_.substeps);
    // Each slot has exactly one writer.
    parallel_for(count, options_.threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t idx = begin; idx < end; ++idx) {
            const NodeIndex node = unflatten(grid_, problem_.n(), idx);
            curves_[idx] = trace(problem_, node.j, grid_.x(node.i), grid_.t(node.q), problem_.boundary(node.j), settings);
        }
    });
}

const CharacteristicCurve& Discretization::curve(NodeIndex node) const {
    return curves_[flatten(grid_, problem_.n(), node)];
}

void Discretization::check(const GridFunction& u) const {
    if (u.components() != problem_.n() || !(u.grid() == grid_)) {
        throw RangeError("grid function does not match the discretization (components or grid)");
    }
}

template <typename Sink>
void Discretization::visit_row(NodeIndex node, OperatorMask mask, Sink& sink) const {
    const ProblemSpec& p = problem_;
    const int n = p.n();
    const int j = node.j;
    const CharacteristicCurve& cv = curve(node);
    const int last = grid_.nx() - 1;

    if (mask.r && p.has_boundary_integrals()) {
        const CurveSample& end = cv.back();
        const TimeWeights tw = time_weights(grid_, end.omega);
        for (int k = 0; k < n; ++k) {
            const auto& r = p.r(j, k);
            if (r.is_zero()) continue;
            for (int i = 0; i <= last; ++i) {
                const double y = grid_.x(i);
                sink.on_column(k, i, y, end.omega, tw, end.c * node_weight(grid_, i) * r(y, end.omega));
            }
        }
    }

    if (cv.samples.size() < 2 || !(mask.b || mask.g || mask.h)) return;
    const std::vector<double> qw = curve_weights(cv);

    for (std::size_t s = 0; s < cv.samples.size(); ++s) {
        const CurveSample& smp = cv.samples[s];
        const double base = qw[s] * smp.d;
        if (base == 0.0) continue;
        const double xi = smp.xi;
        const double om = smp.omega;
        const TimeWeights tw = time_weights(grid_, om);
        const SpaceWeights sw = space_weights(grid_, xi);

        if (mask.b) {
            for (int k = 0; k < n; ++k) {
                if (k == j) continue;
                const auto& b = p.b(j, k);
                if (b.is_zero()) continue;
                sink.on_point(k, xi, om, sw, tw, -base * b(xi, om));
            }
        }

        if (mask.h) {
            for (int k = 0; k < n; ++k) {
                const auto& h = p.h(j, k);
                if (h.is_zero()) continue;
                // Trace at 1 - x_k.
                const int col = p.boundary(k) == 0.0 ? last : 0;
                sink.on_column(k, col, grid_.x(col), om, tw, base * h(xi, om));
            }
        }

        if (mask.g) {
            // Inner integral over [0, xi] (Volterra) or [0, 1]: full cells up to
            // node `top`, then the clipped cell [y_top, xi].
            int top = last;
            double tail = 0.0;
            if (p.volterra()) {
                if (sw.w1 == 1.0) {
                    top = sw.i1;
                } else {
                    top = sw.i0;
                    tail = xi - grid_.x(top);
                }
            }
            for (int k = 0; k < n; ++k) {
                const auto& g = p.g(j, k);
                if (g.is_zero()) continue;
                if (top > 0) {
                    for (int i = 0; i <= top; ++i) {
                        const double y = grid_.x(i);
                        const double wy = (i == 0 || i == top) ? 0.5 * grid_.hx() : grid_.hx();
                        sink.on_column(k, i, y, om, tw, -base * wy * g(y, om));
                    }
                }
                if (tail > 0.0 && sw.w1 != 0.0) {
                    const double y = grid_.x(top);
                    sink.on_column(k, top, y, om, tw, -base * 0.5 * tail * g(y, om));
                    sink.on_point(k, xi, om, sw, tw, -base * 0.5 * tail * g(xi, om));
                }
            }
        }
    }
}

GridFunction Discretization::apply(const GridFunction& u, OperatorMask mask) const {
    check(u);
    GridFunction out(grid_, problem_.n());
    auto values = out.values();
    parallel_for(values.size(), options_.threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t idx = begin; idx < end; ++idx) {
            ValueSink sink(u);
            visit_row(unflatten(grid_, problem_.n(), idx), mask, sink);
            values[idx] = sink.value;
        }
    });
    return out;
}

double Discretization::forcing_at(NodeIndex node) const {
    const CharacteristicCurve& cv = curve(node);
    const auto& f = problem_.f(node.j);
    if (f.is_zero() || cv.samples.size() < 2) return 0.0;
    const std::vector<double> qw = curve_weights(cv);
    double v = 0.0;
    for (std::size_t s = 0; s < cv.samples.size(); ++s) {
        const CurveSample& smp = cv.samples[s];
        v += qw[s] * smp.d * f(smp.xi, smp.omega);
    }
    return v;
}

GridFunction Discretization::apply_F() const {
    GridFunction out(grid_, problem_.n());
    auto values = out.values();
    parallel_for(values.size(), options_.threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t idx = begin; idx < end; ++idx) values[idx] = forcing_at(unflatten(grid_, problem_.n(), idx));
    });
    return out;
}

void Discretization::accumulate_row(NodeIndex node, OperatorMask mask, double scale, std::span<double> row,
                                    std::vector<std::size_t>& touched, std::vector<char>& marks) const {
    RowSink sink(grid_, problem_.n(), scale, row, touched, marks);
    visit_row(node, mask, sink);
}

Stencil Discretization::stencil_row(NodeIndex node, OperatorMask mask) const {
    std::vector<double> row(unknowns(), 0.0);
    std::vector<char> marks(unknowns(), 0);
    std::vector<std::size_t> touched;
    accumulate_row(node, mask, 1.0, row, touched, marks);
    std::sort(touched.begin(), touched.end());
    Stencil st;
    st.entries.reserve(touched.size());
    for (std::size_t idx : touched) st.entries.emplace_back(idx, row[idx]);
    st.constant = forcing_at(node);
    return st;
}

GridFunction apply_R(const ProblemSpec& p, const Grid& grid, const GridFunction& u) {
    return Discretization(p, grid).apply_R(u);
}
GridFunction apply_B(const ProblemSpec& p, const Grid& grid, const GridFunction& u) {
    return Discretization(p, grid).apply_B(u);
}
GridFunction apply_G(const ProblemSpec& p, const Grid& grid, const GridFunction& u) {
    return Discretization(p, grid).apply_G(u);
}
GridFunction apply_H(const ProblemSpec& p, const Grid& grid, const GridFunction& u) {
    return Discretization(p, grid).apply_H(u);
}
GridFunction apply_F(const ProblemSpec& p, const Grid& grid) { return Discretization(p, grid).apply_F(); }

} // namespace hypfred
