#include "hypfred/fredholm.hpp"
#include "hypfred/error.hpp"
#include "hypfred/linalg.hpp"
#include "hypfred/parallel.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace hypfred {
namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

constexpr double kCertifyFactor = 10.0;

double default_tau(Eigen::Index n, double sigma_max) {
    return 100.0 * static_cast<double>(n) * std::numeric_limits<double>::epsilon() * sigma_max;
}

void finish_solution(const OperatorMatrix& m, const Eigen::VectorXd& u, FredholmReport& report) {
    std::copy(u.data(), u.data() + u.size(), report.solution.values().begin());
    report.solve_residual = (m.a * u - m.rhs).lpNorm<Eigen::Infinity>();
}

void solve_full(const OperatorMatrix& m, const AlternativeOptions& options, FredholmReport& report) {
    auto start = Clock::now();
    const Eigen::VectorXd sigma = linalg::singular_values(m.a);
    report.singular_values = sigma;
    report.sigma_max = sigma(0);
    report.sigma_min = sigma(sigma.size() - 1);
    report.tau = options.tau.value_or(default_tau(m.size(), report.sigma_max));
    report.seconds.spectrum = since(start);

    start = Clock::now();
    if (report.sigma_min > report.tau) {
        const linalg::LuFactorization lu(m.a);
        finish_solution(m, lu.solve(m.rhs), report);
        report.seconds.solve = since(start);
        return;
    }

    const linalg::FullSvd svd = linalg::full_svd(m.a);
    const Eigen::Index n = m.size();
    Eigen::Index rank = 0;
    while (rank < n && svd.sigma(rank) >= report.tau) ++rank;
    const Eigen::Index k = n - rank;
    report.unique = false;
    report.kernel_dim = static_cast<int>(k);
    report.kernel = svd.v.rightCols(k);
    report.cokernel = svd.u.rightCols(k);
    report.defect = (report.cokernel.transpose() * m.rhs).norm();
    const Eigen::VectorXd coeff = (svd.u.leftCols(rank).transpose() * m.rhs).cwiseQuotient(svd.sigma.head(rank));
    finish_solution(m, svd.v.leftCols(rank) * coeff, report);
    report.seconds.solve = since(start);
}

void solve_partial(const OperatorMatrix& m, const AlternativeOptions& options, FredholmReport& report) {
    auto start = Clock::now();
    report.spectrum_complete = false;
    report.sigma_max = linalg::largest_singular_value(m.a);
    report.tau = options.tau.value_or(default_tau(m.size(), report.sigma_max));
    const linalg::LuFactorization lu(m.a);
    if (lu.singular()) throw SpectrumError("matrix is exactly singular; the partial spectrum path needs an LU solve");

    // Cheap certificate first: well above tau means the unique branch, and the
    // block iteration (slow on clustered spectra) is not needed.
    const double estimate = linalg::smallest_singular_value(lu);
    if (estimate > kCertifyFactor * report.tau) {
        report.singular_values.resize(2);
        report.singular_values << report.sigma_max, estimate;
        report.sigma_min = estimate;
        report.seconds.spectrum = since(start);
        start = Clock::now();
        finish_solution(m, lu.solve(m.rhs), report);
        report.seconds.solve = since(start);
        return;
    }

    const Eigen::Index n = m.size();
    int count = 8;
    linalg::SmallestTriplets trip;
    Eigen::Index k = 0;
    for (;;) {
        count = static_cast<int>(std::min<Eigen::Index>(count, n));
        linalg::SubspaceOptions sub;
        sub.threshold = report.tau;
        trip = linalg::smallest_singular_triplets(m.a, lu, count, report.sigma_max, sub);
        if (!trip.converged) {
            throw SpectrumError("subspace iteration did not converge for the " + std::to_string(count) +
                                " smallest singular values");
        }
        k = (trip.sigma.array() < report.tau).count();
        if (k < trip.sigma.size() || count == n) break;
        if (count >= options.max_kernel) {
            throw CapacityError("numerical kernel exceeds " + std::to_string(options.max_kernel) +
                                " vectors; raise the limit or use the full spectrum");
        }
        count = std::min(2 * count, options.max_kernel);
    }
    report.singular_values.resize(trip.sigma.size() + 1);
    report.singular_values(0) = report.sigma_max;
    report.singular_values.tail(trip.sigma.size()) = trip.sigma.reverse();
    report.sigma_min = trip.sigma(0);
    report.seconds.spectrum = since(start);

    start = Clock::now();
    if (k == 0) {
        finish_solution(m, lu.solve(m.rhs), report);
        report.seconds.solve = since(start);
        return;
    }
    // A^{-1} restricted to the complement of the cokernel is the truncated
    // pseudo-inverse; the final projection only removes rounding leakage.
    report.unique = false;
    report.kernel_dim = static_cast<int>(k);
    report.kernel = trip.right.leftCols(k);
    report.cokernel = trip.left.leftCols(k);
    const Eigen::VectorXd weights = report.cokernel.transpose() * m.rhs;
    report.defect = weights.norm();
    Eigen::VectorXd u = lu.solve(m.rhs - report.cokernel * weights);
    u -= report.kernel * (report.kernel.transpose() * u);
    finish_solution(m, u, report);
    report.seconds.solve = since(start);
}

} // namespace

double OperatorMatrix::norm_inf() const { return a.cwiseAbs().rowwise().sum().maxCoeff(); }

double OperatorMatrix::k_norm_inf() const {
    Eigen::MatrixXd k = -a;
    k.diagonal().array() += 1.0;
    return k.cwiseAbs().rowwise().sum().maxCoeff();
}

OperatorMatrix assemble(const Discretization& disc, std::size_t dense_limit) {
    const std::size_t count = disc.unknowns();
    if (count > dense_limit) {
        throw CapacityError("dense operator would have " + std::to_string(count) + " unknowns (limit " +
                            std::to_string(dense_limit) + ")");
    }
    const int n = disc.problem().n();
    const auto size = static_cast<Eigen::Index>(count);
    OperatorMatrix m{disc.grid(), n, Eigen::MatrixXd::Identity(size, size), Eigen::VectorXd::Zero(size)};

    parallel_for(count, disc.options().threads, [&](std::size_t begin, std::size_t end) {
        std::vector<double> row(count, 0.0);
        std::vector<char> marks(count, 0);
        std::vector<std::size_t> touched;
        for (std::size_t idx = begin; idx < end; ++idx) {
            const NodeIndex node = unflatten(disc.grid(), n, idx);
            disc.accumulate_row(node, OperatorMask{}, -1.0, row, touched, marks);
            const auto r = static_cast<Eigen::Index>(idx);
            for (std::size_t c : touched) {
                m.a(r, static_cast<Eigen::Index>(c)) += row[c];
                row[c] = 0.0;
                marks[c] = 0;
            }
            touched.clear();
            m.rhs(r) = disc.forcing_at(node);
        }
    });
    if (!m.a.allFinite() || !m.rhs.allFinite()) throw SpectrumError("assembled operator has non-finite entries");
    return m;
}

OperatorMatrix assemble(const ProblemSpec& p, const Grid& grid, AssemblyOptions options) {
    const Discretization disc(p, grid, {options.substeps, options.threads});
    return assemble(disc, options.dense_limit);
}

Eigen::VectorXd singular_spectrum(const OperatorMatrix& m) { return linalg::singular_values(m.a); }

double smallest_singular_value(const OperatorMatrix& m, SpectrumOptions options) {
    if (m.size() <= options.full_svd_limit) {
        const Eigen::VectorXd sigma = singular_spectrum(m);
        return sigma(sigma.size() - 1);
    }
    const linalg::LuFactorization lu(m.a);
    if (lu.singular()) return 0.0;
    return linalg::smallest_singular_value(lu);
}

FredholmReport solve_alternative(const OperatorMatrix& m, AlternativeOptions options) {
    if (options.tau && !(*options.tau > 0.0)) throw RangeError("kernel tolerance must be positive");
    FredholmReport report(m.grid, m.n);
    report.a_norm_inf = m.norm_inf();
    if (m.size() <= options.full_svd_limit) {
        solve_full(m, options, report);
    } else {
        solve_partial(m, options, report);
    }
    return report;
}

double residual(const Discretization& disc, const GridFunction& u) {
    const GridFunction ku = disc.apply_K(u);
    const GridFunction ff = disc.apply_F();
    double worst = 0.0;
    for (std::size_t idx = 0; idx < u.size(); ++idx) {
        worst = std::max(worst, std::fabs(u.values()[idx] - ku.values()[idx] - ff.values()[idx]));
    }
    return worst;
}

double residual(const ProblemSpec& p, const Grid& grid, const GridFunction& u, int threads) {
    return residual(Discretization(p, grid, {4, threads}), u);
}

} // namespace hypfred
