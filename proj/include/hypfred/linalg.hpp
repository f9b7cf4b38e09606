#pragma once

// Dense linear algebra on top of LAPACK.

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <vector>

namespace hypfred::linalg {

/// LU with partial pivoting (dgetrf).
class LuFactorization {
public:
    explicit LuFactorization(const Eigen::MatrixXd& a);

    /// True when an exactly zero pivot was met; solves are then unavailable.
    bool singular() const noexcept { return singular_; }
    Eigen::Index size() const noexcept { return lu_.rows(); }

    /// Solves A X = B, or A^T X = B when `transpose` is set.
    Eigen::MatrixXd solve(const Eigen::MatrixXd& b, bool transpose = false) const;

private:
    Eigen::MatrixXd lu_;
    std::vector<int> pivots_;
    bool singular_ = false;
};

struct FullSvd {
    Eigen::VectorXd sigma;  ///< descending
    Eigen::MatrixXd u;
    Eigen::MatrixXd v;
};

/// Full SVD of a square matrix (dgesdd).
FullSvd full_svd(const Eigen::MatrixXd& a);

/// Singular values only, descending.
Eigen::VectorXd singular_values(const Eigen::MatrixXd& a);

/// Largest singular value by Golub-Kahan-Lanczos bidiagonalization with full
/// reorthogonalization.
double largest_singular_value(const Eigen::MatrixXd& a, std::uint64_t seed = 7);

/// Smallest singular value as 1 / ||A^{-1}||_2, by the same bidiagonalization
/// driven with LU solves. Only the value; a cluster's multiplicity is not resolved.
double smallest_singular_value(const LuFactorization& lu, std::uint64_t seed = 7);

struct SmallestTriplets {
    Eigen::VectorXd sigma;  ///< ascending
    Eigen::MatrixXd left;   ///< u_i, orthonormal columns
    Eigen::MatrixXd right;  ///< v_i, orthonormal columns
    Eigen::VectorXd residual;  ///< ||A v_i - sigma_i u_i||
    int iterations = 0;
    bool converged = false;
};

struct SubspaceOptions {
    int guard = 8;          ///< extra block columns beyond the requested count
    int max_iterations = 200;
    double tolerance = 1e-9;  ///< residual relative to sigma_max
    /// When set, only the triplets below it plus the first one above it must
    /// converge; the result is truncated to those.
    std::optional<double> threshold;
    std::uint64_t seed = 11;
};

/// The `count` smallest singular triplets of A by block inverse subspace
/// iteration on (A^T A)^{-1}, using a precomputed LU of A, with
/// Rayleigh-Ritz extraction on A itself.
SmallestTriplets smallest_singular_triplets(const Eigen::MatrixXd& a, const LuFactorization& lu, int count,
                                            double sigma_max, SubspaceOptions options = {});

/// Orthonormal basis of the column span (thin Householder QR).
Eigen::MatrixXd orthonormalize(const Eigen::MatrixXd& m);

} // namespace hypfred::linalg
