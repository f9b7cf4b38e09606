#pragma once

#include "hypfred/grid.hpp"
#include "hypfred/operators.hpp"
#include "hypfred/problem.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <optional>

namespace hypfred {

/// Dense discrete operator equation A u = rhs with A = I - K.
struct OperatorMatrix {
    Grid grid;
    int n;
    Eigen::MatrixXd a;
    Eigen::VectorXd rhs;  ///< flattened F f

    Eigen::Index size() const noexcept { return a.rows(); }
    /// Row-sum norm of A.
    double norm_inf() const;
    /// Row-sum norm of K = I - A.
    double k_norm_inf() const;
};

struct AssemblyOptions {
    std::size_t dense_limit = 20000;
    int threads = 1;
    int substeps = 4;
};

/// Row (j,i,q) of K is Discretization::stencil_row of that node. Rows are
/// built independently, so the result does not depend on the thread count.
/// Throws CapacityError when the number of unknowns exceeds `dense_limit`.
OperatorMatrix assemble(const Discretization& disc, std::size_t dense_limit = 20000);
OperatorMatrix assemble(const ProblemSpec& p, const Grid& grid, AssemblyOptions options = {});

/// Every singular value of A, descending.
Eigen::VectorXd singular_spectrum(const OperatorMatrix& m);

struct SpectrumOptions {
    /// Above this size only the extreme singular values are computed.
    Eigen::Index full_svd_limit = 2500;
};

/// sigma_min(A). Uses the full spectrum up to the limit, otherwise inverse
/// subspace iteration on an LU factorization.
double smallest_singular_value(const OperatorMatrix& m, SpectrumOptions options = {});

struct AlternativeOptions {
    /// Kernel tolerance; default 100 * N * eps * sigma_1.
    std::optional<double> tau;
    Eigen::Index full_svd_limit = 2500;
    /// Largest kernel the partial-spectrum path will chase before giving up.
    int max_kernel = 128;
};

/// Outcome of the discrete Fredholm alternative for A u = rhs.
///
/// Either sigma_min > tau and `solution` is the unique solution, or
/// kernel_dim >= 1 and `solution` is the truncated-SVD least-squares solution,
/// `defect` the 2-norm of the projection of rhs onto the cokernel.
struct FredholmReport {
    FredholmReport(Grid grid, int n) : solution(grid, n) {}

    /// Descending. All N values when spectrum_complete; otherwise sigma_1
    /// followed by the smallest values that were resolved.
    Eigen::VectorXd singular_values;
    bool spectrum_complete = true;
    double sigma_max = 0.0;
    double sigma_min = 0.0;
    double tau = 0.0;
    int kernel_dim = 0;
    Eigen::MatrixXd kernel;    ///< right singular vectors, one per column
    Eigen::MatrixXd cokernel;  ///< left singular vectors, one per column
    bool unique = true;
    GridFunction solution;
    /// ||A u - rhs||_inf of the returned solution.
    double solve_residual = 0.0;
    double defect = 0.0;
    double a_norm_inf = 0.0;

    struct Timings {
        double spectrum = 0.0;
        double solve = 0.0;
    } seconds;
};

FredholmReport solve_alternative(const OperatorMatrix& m, AlternativeOptions options = {});

/// sup over nodes of |u - (R + B + G + H) u - F f|, evaluated through
/// interpolation rather than the assembled matrix.
double residual(const Discretization& disc, const GridFunction& u);
double residual(const ProblemSpec& p, const Grid& grid, const GridFunction& u, int threads = 1);

} // namespace hypfred
