#pragma once

#include "hypfred/expr.hpp"
#include "hypfred/grid.hpp"
#include "hypfred/problem.hpp"

#include <Eigen/Core>

#include <optional>
#include <vector>

namespace hypfred {

enum class StudyQuantity { error, residual, sigma_min };

const char* name(StudyQuantity q);

struct StudyRow {
    Grid grid;
    double value = 0.0;
    /// log2(previous value / value); absent on the first row and when the
    /// table is at rounding level.
    std::optional<double> order;
};

struct StudyTable {
    StudyQuantity quantity = StudyQuantity::error;
    std::vector<StudyRow> rows;
    /// Every value is at rounding level, so orders carry no information.
    bool exact = false;
};

struct StudyOptions {
    int threads = 1;
    Eigen::Index full_svd_limit = 2500;
};

/// Throws RangeError unless each grid doubles Nt and roughly doubles Nx - 1.
void check_refining(const std::vector<Grid>& grids);

/// With `exact`: sup-norm error of the discrete solution against the exact
/// samples. Without: sigma_min(I - K) on each grid.
StudyTable convergence_study(const ProblemSpec& p, const std::optional<std::vector<expr::Expr>>& exact,
                             const std::vector<Grid>& grids, StudyOptions options = {});

/// Discrete integral-form residual of a candidate solution on each grid.
StudyTable residual_study(const ProblemSpec& p, const std::vector<expr::Expr>& candidate,
                          const std::vector<Grid>& grids, StudyOptions options = {});

/// Nodal samples of one expression per component.
GridFunction sample(const std::vector<expr::Expr>& components, const Grid& grid);

} // namespace hypfred
