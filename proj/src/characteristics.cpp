#include "hypfred/characteristics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hypfred {
namespace {

struct Slope {
    double omega;  // 1 / a
    double log_c;  // b_jj / a
};

class CurveField {
public:
    CurveField(const ProblemSpec& p, int j) : a_(p.a(j)), b_(p.b(j, j)), j_(j) {}

    Slope operator()(double xi, double omega) const {
        const double a = checked_speed(xi, omega);
        return {1.0 / a, b_.is_zero() ? 0.0 : b_(xi, omega) / a};
    }

    double checked_speed(double xi, double omega) const {
        const double a = a_(xi, omega);
        if (!(std::fabs(a) >= ProblemSpec::kDegenerateSpeed)) {
            throw TraceError("speed a[" + std::to_string(j_ + 1) + "] degenerates at xi=" + std::to_string(xi) +
                             ", t=" + std::to_string(omega));
        }
        return a;
    }

private:
    const expr::CompiledExpr& a_;
    const expr::CompiledExpr& b_;
    int j_;
};

struct State {
    double omega;
    double log_c;
};

State rk4_step(const CurveField& field, double xi, State y, double h) {
    const Slope k1 = field(xi, y.omega);
    const Slope k2 = field(xi + 0.5 * h, y.omega + 0.5 * h * k1.omega);
    const Slope k3 = field(xi + 0.5 * h, y.omega + 0.5 * h * k2.omega);
    const Slope k4 = field(xi + h, y.omega + h * k3.omega);
    return {y.omega + h / 6.0 * (k1.omega + 2.0 * k2.omega + 2.0 * k3.omega + k4.omega),
            y.log_c + h / 6.0 * (k1.log_c + 2.0 * k2.log_c + 2.0 * k3.log_c + k4.log_c)};
}

void check_unit_interval(double v, const char* what) {
    if (!(v >= 0.0 && v <= 1.0)) throw RangeError(std::string(what) + " = " + std::to_string(v) + " outside [0,1]");
}

// Trapezoid of phi(sample) d(coordinate) along the stored samples.
template <typename Coord, typename Phi>
double trapezoid_along(const CharacteristicCurve& curve, Coord coord, Phi phi) {
    double sum = 0.0;
    const auto& s = curve.samples;
    if (s.size() < 2) return 0.0;
    double prev = phi(s[0]);
    for (std::size_t k = 1; k < s.size(); ++k) {
        const double cur = phi(s[k]);
        sum += 0.5 * (coord(s[k]) - coord(s[k - 1])) * (prev + cur);
        prev = cur;
    }
    return sum;
}

// Exponent int_xi^x (d_t a / a^2)(eta, omega(eta)) d eta shared by both partials.
double time_sensitivity(const ProblemSpec& p, int j, double xi, double x, double t, TraceSettings settings) {
    const CharacteristicCurve curve = trace(p, j, x, t, xi, settings);
    const expr::CompiledExpr& a = p.a(j);
    const expr::CompiledExpr& a_dt = p.a_dt(j);
    const double forward = trapezoid_along(
        curve, [](const CurveSample& s) { return s.xi; },
        [&](const CurveSample& s) {
            const double av = a(s.xi, s.omega);
            return a_dt(s.xi, s.omega) / (av * av);
        });
    return std::exp(-forward);
}

// Locates z on the sampled curve and refines with Newton on a single RK4 step
// from the bracketing sample.
double invert_on_curve(const ProblemSpec& p, const CharacteristicCurve& curve, double z) {
    const auto& s = curve.samples;
    const CurveField field(p, curve.j);
    const bool increasing = s.back().omega > s.front().omega;
    auto before = [&](double omega) { return increasing ? omega < z : omega > z; };

    // Bisection over sample indices for the segment [lo, lo+1] containing z.
    std::size_t lo = 0;
    std::size_t hi = s.size() - 1;
    if (s.size() == 1 || s.front().omega == z) return s.front().xi;
    while (hi - lo > 1) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (before(s[mid].omega)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    const CurveSample& left = s[lo];
    const CurveSample& right = s[hi];
    if (right.omega == z) return right.xi;

    auto omega_at = [&](double xi) {
        return rk4_step(field, left.xi, {left.omega, 0.0}, xi - left.xi).omega;
    };

    // omega is monotone in xi; `rising` is the sign of d omega / d xi.
    const bool rising = (right.omega - left.omega) / (right.xi - left.xi) > 0.0;
    double a_lo = std::min(left.xi, right.xi);
    double a_hi = std::max(left.xi, right.xi);
    double xi = left.xi + (z - left.omega) / (right.omega - left.omega) * (right.xi - left.xi);
    for (int it = 0; it < 60; ++it) {
        const double w = omega_at(xi);
        const double res = w - z;
        if (std::fabs(res) <= 1e-12) break;
        // Keep a bracket in case Newton overshoots.
        if ((res < 0.0) == rising) {
            a_lo = xi;
        } else {
            a_hi = xi;
        }
        double next = xi - res * field.checked_speed(xi, w);
        if (!(next > a_lo && next < a_hi)) next = 0.5 * (a_lo + a_hi);
        if (next == xi) break;
        xi = next;
    }
    return xi;
}

} // namespace

CharacteristicCurve trace(const ProblemSpec& p, int j, double x, double t, double xi_end, TraceSettings settings) {
    check_unit_interval(x, "x");
    check_unit_interval(xi_end, "xi_end");
    if (settings.cells < 1 || settings.substeps < 1) throw RangeError("trace: invalid resolution");
    const CurveField field(p, j);

    CharacteristicCurve curve;
    curve.j = j;
    curve.x = x;
    curve.t = t;
    curve.xi_end = xi_end;

    const double length = std::fabs(xi_end - x);
    if (length == 0.0) {
        curve.samples.push_back({x, t, 1.0, 1.0 / field.checked_speed(x, t)});
        return curve;
    }
    // The 1e-9 slack keeps anchors sitting on grid nodes from gaining a cell.
    const double cells = std::ceil(length * settings.cells - 1e-9);
    const int steps = settings.substeps * std::max(1, static_cast<int>(cells));
    const double h = (xi_end - x) / steps;
    curve.step = h;
    curve.samples.reserve(static_cast<std::size_t>(steps) + 1);

    State y{t, 0.0};
    double xi = x;
    curve.samples.push_back({xi, y.omega, 1.0, 1.0 / field.checked_speed(xi, y.omega)});
    for (int s = 1; s <= steps; ++s) {
        y = rk4_step(field, xi, y, h);
        xi = s == steps ? xi_end : x + s * h;
        const double c = std::exp(y.log_c);
        curve.samples.push_back({xi, y.omega, c, c / field.checked_speed(xi, y.omega)});
    }
    return curve;
}

double partial_t_omega(const ProblemSpec& p, int j, double xi, double x, double t, TraceSettings settings) {
    return time_sensitivity(p, j, xi, x, t, settings);
}

double partial_x_omega(const ProblemSpec& p, int j, double xi, double x, double t, TraceSettings settings) {
    return -time_sensitivity(p, j, xi, x, t, settings) / p.a(j)(x, t);
}

double inverse_omega(const ProblemSpec& p, int j, double z, double x, double t, TraceSettings settings) {
    const CharacteristicCurve to_left = trace(p, j, x, t, 0.0, settings);
    const CharacteristicCurve to_right = trace(p, j, x, t, 1.0, settings);
    const double lo = std::min(to_left.back().omega, to_right.back().omega);
    const double hi = std::max(to_left.back().omega, to_right.back().omega);
    const double slack = 1e-12 * std::max(1.0, std::fabs(z));
    if (!(z >= lo - slack && z <= hi + slack)) {
        throw RangeError("inverse_omega: time " + std::to_string(z) + " not reached on [0,1] (range [" +
                         std::to_string(lo) + ", " + std::to_string(hi) + "])");
    }
    z = std::clamp(z, lo, hi);
    const double to_left_end = to_left.back().omega;
    const bool on_left = (z - t) * (to_left_end - t) > 0.0 || z == to_left_end;
    return invert_on_curve(p, on_left ? to_left : to_right, z);
}

double partial3_inverse_omega(const ProblemSpec& p, int k, double tau, double x, double t, TraceSettings settings) {
    const double xi_tau = inverse_omega(p, k, tau, x, t, settings);
    const CharacteristicCurve curve = trace(p, k, x, t, xi_tau, settings);
    const expr::CompiledExpr& a_dx = p.a_dx(k);
    // int_t^tau of d_x a_k along the curve, in the time variable rho = omega.
    const double exponent = trapezoid_along(
        curve, [](const CurveSample& s) { return s.omega; },
        [&](const CurveSample& s) { return a_dx(s.xi, s.omega); });
    return -p.a(k)(x, t) * std::exp(exponent);
}

} // namespace hypfred
