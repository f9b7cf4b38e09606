#pragma once

#include "hypfred/grid.hpp"
#include "hypfred/problem.hpp"

#include <vector>

namespace hypfred {

/// Resolution of a traced characteristic: `substeps` RK4 steps per x-cell.
struct TraceSettings {
    int cells = 64;
    int substeps = 4;

    static TraceSettings for_grid(const Grid& grid, int substeps = 4) { return {grid.cells(), substeps}; }
};

/// One point (xi, omega_j(xi), c_j(xi), d_j(xi)) of a characteristic.
struct CurveSample {
    double xi;
    double omega;
    double c;
    double d;
};

/// Characteristic of component j through (x, t), sampled from xi = x to xi = xi_end.
struct CharacteristicCurve {
    int j = 0;
    double x = 0.0;
    double t = 0.0;
    double xi_end = 0.0;
    double step = 0.0;  ///< signed RK4 step in xi
    std::vector<CurveSample> samples;

    const CurveSample& front() const { return samples.front(); }
    const CurveSample& back() const { return samples.back(); }
};

/// Integrates d omega / d xi = 1 / a_j(xi, omega), omega(x) = t, together with
/// log c = int_x^xi (b_jj / a_j)(eta, omega(eta)) d eta, by classical RK4.
///
/// Throws TraceError when |a_j| drops below 1e-10 along the way and
/// RangeError when x or xi_end leave [0,1].
CharacteristicCurve trace(const ProblemSpec& p, int j, double x, double t, double xi_end, TraceSettings settings);

/// d omega_j(xi, x, t) / dx and d omega_j(xi, x, t) / dt via the exponential
/// representation, with the exponent integrated by trapezoid along the curve.
double partial_x_omega(const ProblemSpec& p, int j, double xi, double x, double t, TraceSettings settings);
double partial_t_omega(const ProblemSpec& p, int j, double xi, double x, double t, TraceSettings settings);

/// The abscissa xi at which the characteristic through (x, t) reaches time z.
/// Throws RangeError when z is not attained for xi in [0,1].
double inverse_omega(const ProblemSpec& p, int j, double z, double x, double t, TraceSettings settings);

/// d/dt of inverse_omega(tau, x, t) at fixed tau and x:
///   -a_k(x,t) * exp( int_t^tau d_x a_k(inverse_omega(rho, x, t), rho) d rho ).
double partial3_inverse_omega(const ProblemSpec& p, int k, double tau, double x, double t, TraceSettings settings);

} // namespace hypfred
