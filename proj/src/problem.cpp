#include "hypfred/problem.hpp"
#include "hypfred/grid.hpp"

#include <algorithm>
#include <cmath>

namespace hypfred {
namespace {

using expr::CompiledExpr;
using expr::Expr;

constexpr int kSampleNx = 33;
constexpr int kSampleNt = 64;

std::string entry_name(const char* key, int j) { return std::string(key) + "[" + std::to_string(j + 1) + "]"; }
std::string entry_name(const char* key, int j, int k) {
    return std::string(key) + "[" + std::to_string(j + 1) + "][" + std::to_string(k + 1) + "]";
}

template <typename Fn>
void for_sample_points(Fn&& fn) {
    for (int i = 0; i < kSampleNx; ++i) {
        const double x = static_cast<double>(i) / (kSampleNx - 1);
        for (int q = 0; q < kSampleNt; ++q) fn(x, kTwoPi * q / kSampleNt);
    }
}

void check_coefficient(const CompiledExpr& c, const std::string& label) {
    if (c.is_constant()) return;
    for_sample_points([&](double x, double t) {
        double v0 = 0.0;
        double v1 = 0.0;
        try {
            v0 = c(x, t);
            v1 = c(x, t + kTwoPi);
        } catch (const expr::EvalError& e) {
            throw ValidationError(label + ": " + e.what() + " at x=" + std::to_string(x) + ", t=" + std::to_string(t));
        }
        if (std::fabs(v1 - v0) > ProblemSpec::kPeriodicityTolerance * std::max(1.0, std::fabs(v0))) {
            throw ValidationError(label + ": not 2pi-periodic in t (x=" + std::to_string(x) + ", t=" + std::to_string(t) +
                                  ")");
        }
    });
}

void check_speed(const CompiledExpr& a, const std::string& label) {
    double sign = 0.0;
    for_sample_points([&](double x, double t) {
        const double v = a(x, t);
        if (std::fabs(v) <= ProblemSpec::kDegenerateSpeed) {
            throw ValidationError(label + ": speed vanishes at x=" + std::to_string(x) + ", t=" + std::to_string(t));
        }
        const double s = v > 0.0 ? 1.0 : -1.0;
        if (sign != 0.0 && s != sign) {
            throw ValidationError(label + ": speed changes sign, so it vanishes somewhere in the domain");
        }
        sign = s;
    });
}

void check_shape(const ExprMatrix& mtx, int n, const char* key) {
    if (static_cast<int>(mtx.size()) != n) {
        throw ValidationError(std::string(key) + ": expected " + std::to_string(n) + " rows, got " +
                              std::to_string(mtx.size()));
    }
    for (std::size_t j = 0; j < mtx.size(); ++j) {
        if (static_cast<int>(mtx[j].size()) != n) {
            throw ValidationError(std::string(key) + "[" + std::to_string(j + 1) + "]: expected " + std::to_string(n) +
                                  " entries, got " + std::to_string(mtx[j].size()));
        }
    }
}

std::vector<CompiledExpr> compile_matrix(const ExprMatrix& mtx, const char* key) {
    std::vector<CompiledExpr> out;
    for (std::size_t j = 0; j < mtx.size(); ++j) {
        for (std::size_t k = 0; k < mtx[j].size(); ++k) {
            out.emplace_back(mtx[j][k]);
            check_coefficient(out.back(), entry_name(key, static_cast<int>(j), static_cast<int>(k)));
        }
    }
    return out;
}

} // namespace

ProblemData ProblemData::zeros(int n, int m) {
    ProblemData d;
    d.n = n;
    d.m = m;
    d.a.assign(static_cast<std::size_t>(n), Expr::constant(1.0));
    const ExprMatrix z(static_cast<std::size_t>(n), std::vector<Expr>(static_cast<std::size_t>(n)));
    d.b = d.g = d.h = d.r = z;
    d.f.assign(static_cast<std::size_t>(n), Expr());
    return d;
}

ProblemSpec::ProblemSpec(ProblemData data) : data_(std::move(data)) {
    const int n = data_.n;
    if (n < 1) throw ValidationError("n: must be >= 1");
    if (data_.m < 0 || data_.m > n) throw ValidationError("m: must satisfy 0 <= m <= n");
    if (static_cast<int>(data_.a.size()) != n) throw ValidationError("a: expected " + std::to_string(n) + " entries");
    if (static_cast<int>(data_.f.size()) != n) throw ValidationError("f: expected " + std::to_string(n) + " entries");
    check_shape(data_.b, n, "b");
    check_shape(data_.g, n, "g");
    check_shape(data_.h, n, "h");
    check_shape(data_.r, n, "r");

    for (int j = 0; j < n; ++j) {
        a_.emplace_back(data_.a[idx(j)]);
        check_coefficient(a_.back(), entry_name("a", j));
        check_speed(a_.back(), entry_name("a", j));
        f_.emplace_back(data_.f[idx(j)]);
        check_coefficient(f_.back(), entry_name("f", j));
    }
    b_ = compile_matrix(data_.b, "b");
    g_ = compile_matrix(data_.g, "g");
    h_ = compile_matrix(data_.h, "h");
    r_ = compile_matrix(data_.r, "r");
    has_r_ = std::any_of(r_.begin(), r_.end(), [](const CompiledExpr& c) { return !c.is_zero(); });

    for (int j = 0; j < n; ++j) {
        try {
            a_dx_.emplace_back(CompiledExpr(expr::differentiate(data_.a[idx(j)], expr::Variable::x)));
            a_dt_.emplace_back(CompiledExpr(expr::differentiate(data_.a[idx(j)], expr::Variable::t)));
        } catch (const DiffError&) {
            a_dx_.emplace_back(std::nullopt);
            a_dt_.emplace_back(std::nullopt);
        }
    }
}

std::size_t ProblemSpec::idx(int j) const {
    if (j < 0 || j >= data_.n) throw RangeError("component " + std::to_string(j) + " out of range");
    return static_cast<std::size_t>(j);
}

std::size_t ProblemSpec::pair(int j, int k) const { return idx(j) * static_cast<std::size_t>(data_.n) + idx(k); }

const expr::CompiledExpr& ProblemSpec::a_dx(int j) const {
    const auto& d = a_dx_[idx(j)];
    if (!d) throw DiffError(entry_name("a", j) + " is not differentiable");
    return *d;
}

const expr::CompiledExpr& ProblemSpec::a_dt(int j) const {
    const auto& d = a_dt_[idx(j)];
    if (!d) throw DiffError(entry_name("a", j) + " is not differentiable");
    return *d;
}

} // namespace hypfred
