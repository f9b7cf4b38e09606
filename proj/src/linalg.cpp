#include "hypfred/linalg.hpp"
#include "hypfred/error.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace hypfred::linalg {
namespace {

Eigen::MatrixXd random_block(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> dist;
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index c = 0; c < cols; ++c) {
        for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = dist(gen);
    }
    return m;
}

void require_square(const Eigen::MatrixXd& a, const char* who) {
    if (a.rows() != a.cols() || a.rows() == 0) throw SpectrumError(std::string(who) + ": matrix must be square");
}

} // namespace

LuFactorization::LuFactorization(const Eigen::MatrixXd& a) : lu_(a), pivots_(static_cast<std::size_t>(a.rows())) {
    require_square(a, "LU");
    const auto n = static_cast<lapack_int>(a.rows());
    const lapack_int info = LAPACKE_dgetrf(LAPACK_COL_MAJOR, n, n, lu_.data(), n, pivots_.data());
    if (info < 0) throw SpectrumError("dgetrf failed with info " + std::to_string(info));
    singular_ = info > 0;
}

Eigen::MatrixXd LuFactorization::solve(const Eigen::MatrixXd& b, bool transpose) const {
    if (singular_) throw SpectrumError("LU solve on an exactly singular matrix");
    if (b.rows() != lu_.rows()) throw SpectrumError("LU solve: dimension mismatch");
    Eigen::MatrixXd x = b;
    const auto n = static_cast<lapack_int>(lu_.rows());
    const lapack_int info = LAPACKE_dgetrs(LAPACK_COL_MAJOR, transpose ? 'T' : 'N', n,
                                           static_cast<lapack_int>(x.cols()), lu_.data(), n, pivots_.data(),
                                           x.data(), n);
    if (info != 0) throw SpectrumError("dgetrs failed with info " + std::to_string(info));
    return x;
}

FullSvd full_svd(const Eigen::MatrixXd& a) {
    require_square(a, "SVD");
    const auto n = static_cast<lapack_int>(a.rows());
    Eigen::MatrixXd work = a;
    FullSvd out;
    out.sigma.resize(n);
    out.u.resize(n, n);
    Eigen::MatrixXd vt(n, n);
    const lapack_int info = LAPACKE_dgesdd(LAPACK_COL_MAJOR, 'S', n, n, work.data(), n, out.sigma.data(),
                                           out.u.data(), n, vt.data(), n);
    if (info != 0) throw SpectrumError("dgesdd failed with info " + std::to_string(info));
    out.v = vt.transpose();
    return out;
}

Eigen::VectorXd singular_values(const Eigen::MatrixXd& a) {
    require_square(a, "SVD");
    const auto n = static_cast<lapack_int>(a.rows());
    Eigen::MatrixXd work = a;
    Eigen::VectorXd sigma(n);
    const lapack_int info =
        LAPACKE_dgesdd(LAPACK_COL_MAJOR, 'N', n, n, work.data(), n, sigma.data(), nullptr, 1, nullptr, 1);
    if (info != 0) throw SpectrumError("dgesdd failed with info " + std::to_string(info));
    return sigma;
}

Eigen::MatrixXd orthonormalize(const Eigen::MatrixXd& m) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
    return qr.householderQ() * Eigen::MatrixXd::Identity(m.rows(), m.cols());
}

namespace {

// Largest singular value of the operator x -> apply(x) (transpose: apply_t)
// by Golub-Kahan-Lanczos bidiagonalization with full reorthogonalization.
template <typename Apply, typename ApplyT>
double gkl_largest(Eigen::Index n, Apply&& apply, ApplyT&& apply_t, std::uint64_t seed, Eigen::Index max_steps) {
    max_steps = std::min(n, max_steps);
    Eigen::MatrixXd us(n, max_steps);
    Eigen::MatrixXd vs(n, max_steps + 1);
    vs.col(0) = random_block(n, 1, seed).col(0).normalized();
    std::vector<double> alpha;
    std::vector<double> beta;
    double estimate = 0.0;
    for (Eigen::Index k = 0; k < max_steps; ++k) {
        Eigen::VectorXd u = apply(vs.col(k));
        if (k > 0) u -= beta.back() * us.col(k - 1);
        for (int pass = 0; pass < 2; ++pass) u -= us.leftCols(k) * (us.leftCols(k).transpose() * u);
        alpha.push_back(u.norm());
        if (alpha.back() == 0.0) break;
        us.col(k) = u / alpha.back();

        Eigen::VectorXd v = apply_t(us.col(k));
        v -= alpha.back() * vs.col(k);
        for (int pass = 0; pass < 2; ++pass) v -= vs.leftCols(k + 1) * (vs.leftCols(k + 1).transpose() * v);
        beta.push_back(v.norm());

        const auto m = static_cast<Eigen::Index>(alpha.size());
        Eigen::MatrixXd bidiag = Eigen::MatrixXd::Zero(m, m + 1);
        for (Eigen::Index i = 0; i < m; ++i) {
            bidiag(i, i) = alpha[static_cast<std::size_t>(i)];
            bidiag(i, i + 1) = beta[static_cast<std::size_t>(i)];
        }
        const double next = Eigen::JacobiSVD<Eigen::MatrixXd>(bidiag).singularValues()(0);
        const bool settled = k >= 4 && std::fabs(next - estimate) <= 1e-13 * next;
        estimate = next;
        if (settled || beta.back() <= 1e-14 * estimate) break;
        vs.col(k + 1) = v / beta.back();
    }
    return estimate;
}

} // namespace

double largest_singular_value(const Eigen::MatrixXd& a, std::uint64_t seed) {
    require_square(a, "Lanczos");
    return gkl_largest(
        a.rows(), [&](const Eigen::VectorXd& x) -> Eigen::VectorXd { return a * x; },
        [&](const Eigen::VectorXd& x) -> Eigen::VectorXd { return a.transpose() * x; }, seed, 80);
}

double smallest_singular_value(const LuFactorization& lu, std::uint64_t seed) {
    const double inverse_norm = gkl_largest(
        lu.size(), [&](const Eigen::VectorXd& x) -> Eigen::VectorXd { return lu.solve(x); },
        [&](const Eigen::VectorXd& x) -> Eigen::VectorXd { return lu.solve(x, true); }, seed, 300);
    return 1.0 / inverse_norm;
}

SmallestTriplets smallest_singular_triplets(const Eigen::MatrixXd& a, const LuFactorization& lu, int count,
                                            double sigma_max, SubspaceOptions options) {
    require_square(a, "subspace iteration");
    const Eigen::Index n = a.rows();
    count = static_cast<int>(std::clamp<Eigen::Index>(count, 1, n));
    const Eigen::Index block = std::min<Eigen::Index>(n, count + options.guard);

    Eigen::MatrixXd x = orthonormalize(random_block(n, block, options.seed));
    SmallestTriplets out;
    for (int it = 1; it <= options.max_iterations; ++it) {
        // Rayleigh-Ritz on A^{-T} restricted to span(x): A^{-T} x = Q R, R = Ur S Wr^T.
        // Working with the inverse keeps both singular vectors accurate for tiny sigma.
        const Eigen::MatrixXd y = lu.solve(x, /*transpose=*/true);
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(y);
        const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, block);
        const Eigen::MatrixXd r = qr.matrixQR().topRows(block).triangularView<Eigen::Upper>();
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(r, Eigen::ComputeFullU | Eigen::ComputeFullV);

        out.sigma.resize(count);
        out.left.resize(n, count);
        out.right.resize(n, count);
        for (int i = 0; i < count; ++i) {
            out.sigma(i) = 1.0 / svd.singularValues()(i);  // largest of the inverse first
            out.left.col(i) = q * svd.matrixU().col(i);
            out.right.col(i) = x * svd.matrixV().col(i);
        }
        const Eigen::MatrixXd av = a * out.right;
        out.residual.resize(count);
        for (int i = 0; i < count; ++i) out.residual(i) = (av.col(i) - out.sigma(i) * out.left.col(i)).norm();
        out.iterations = it;
        Eigen::Index need = count;
        if (options.threshold) need = std::min<Eigen::Index>(count, (out.sigma.array() < *options.threshold).count() + 1);
        if (out.residual.head(need).maxCoeff() <= options.tolerance * sigma_max) {
            out.converged = true;
            if (need < count) {
                out.sigma.conservativeResize(need);
                out.left.conservativeResize(Eigen::NoChange, need);
                out.right.conservativeResize(Eigen::NoChange, need);
                out.residual.conservativeResize(need);
            }
            break;
        }
        x = orthonormalize(lu.solve(q));
    }
    return out;
}

} // namespace hypfred::linalg
