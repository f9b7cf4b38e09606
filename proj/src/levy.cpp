#include "hypfred/levy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hypfred {

LevyReport check_levy(const ProblemSpec& p, const Grid& grid, LevyOptions options) {
    const int n = p.n();
    std::vector<double> speeds(grid.size(n));
    double max_speed = 0.0;
    for (std::size_t idx = 0; idx < speeds.size(); ++idx) {
        const NodeIndex node = unflatten(grid, n, idx);
        speeds[idx] = p.a(node.j)(grid.x(node.i), grid.t(node.q));
        max_speed = std::max(max_speed, std::fabs(speeds[idx]));
    }
    auto speed = [&](int j, int i, int q) { return speeds[flatten(grid, n, {j, i, q})]; };

    LevyReport report;
    report.delta = options.delta.value_or(1e-6 * max_speed);
    report.tol = options.tol;
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
            if (j == k) continue;
            LevyPair pair;
            pair.j = j;
            pair.k = k;
            const auto& b = p.b(j, k);
            for (int i = 0; i < grid.nx(); ++i) {
                for (int q = 0; q < grid.nt(); ++q) {
                    const double gap = std::fabs(speed(k, i, q) - speed(j, i, q));
                    if (gap >= report.delta) pair.bound = std::max(pair.bound, std::fabs(b(grid.x(i), grid.t(q))) / gap);
                }
            }
            pair.worst_excess = -std::numeric_limits<double>::infinity();
            for (int i = 0; i < grid.nx(); ++i) {
                for (int q = 0; q < grid.nt(); ++q) {
                    const double gap = std::fabs(speed(k, i, q) - speed(j, i, q));
                    const double excess =
                        std::fabs(b(grid.x(i), grid.t(q))) - (pair.bound + 1.0) * gap - report.tol;
                    if (excess > pair.worst_excess) {
                        pair.worst_excess = excess;
                        pair.i = i;
                        pair.q = q;
                    }
                }
            }
            pair.x = grid.x(pair.i);
            pair.t = grid.t(pair.q);
            pair.pass = pair.worst_excess <= 0.0;
            report.pass = report.pass && pair.pass;
            report.pairs.push_back(pair);
        }
    }
    return report;
}

} // namespace hypfred
