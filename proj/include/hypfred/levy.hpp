#pragma once

#include "hypfred/grid.hpp"
#include "hypfred/problem.hpp"

#include <optional>
#include <vector>

namespace hypfred {

struct LevyOptions {
    /// Speed gaps below delta are excluded from the bound; default 1e-6 * max|a|.
    std::optional<double> delta;
    double tol = 1e-8;
};

/// Screen of one off-diagonal coupling b_jk against the speed gap a_k - a_j.
struct LevyPair {
    int j = 0;  ///< 0-based
    int k = 0;
    bool pass = true;
    /// sup |b_jk / (a_k - a_j)| over nodes whose gap is at least delta; 0 if none.
    double bound = 0.0;
    /// Largest |b_jk| - (bound + 1) |a_k - a_j| - tol over the grid; pass iff <= 0.
    double worst_excess = 0.0;
    /// Grid node attaining worst_excess.
    int i = 0;
    int q = 0;
    double x = 0.0;
    double t = 0.0;
};

struct LevyReport {
    static constexpr const char* kBanner =
        "necessary-condition screen: a pass means the sampled ratio b_jk/(a_k - a_j) stays bounded on this grid, "
        "not that a continuous quotient exists";

    double delta = 0.0;
    double tol = 0.0;
    bool pass = true;
    std::vector<LevyPair> pairs;  ///< every (j,k) with j != k, row-major
};

LevyReport check_levy(const ProblemSpec& p, const Grid& grid, LevyOptions options = {});

} // namespace hypfred
