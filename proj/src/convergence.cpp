#include "hypfred/convergence.hpp"
#include "hypfred/error.hpp"
#include "hypfred/fredholm.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hypfred {
namespace {

// Values below this multiple of the solution scale are treated as rounding.
constexpr double kRoundingLevel = 1e-11;

// A negative scale disables the rounding-level test.
void fill_orders(StudyTable& table, double scale) {
    table.exact = scale >= 0.0 && std::all_of(table.rows.begin(), table.rows.end(), [&](const StudyRow& r) {
        return r.value <= kRoundingLevel * std::max(1.0, scale);
    });
    if (table.exact) return;
    for (std::size_t i = 1; i < table.rows.size(); ++i) {
        const double prev = table.rows[i - 1].value;
        const double cur = table.rows[i].value;
        if (prev > 0.0 && cur > 0.0) table.rows[i].order = std::log2(prev / cur);
    }
}

void check_components(const ProblemSpec& p, const std::vector<expr::Expr>& v, const char* what) {
    if (static_cast<int>(v.size()) != p.n()) {
        throw RangeError(std::string(what) + ": expected " + std::to_string(p.n()) + " expressions, got " +
                         std::to_string(v.size()));
    }
}

} // namespace

const char* name(StudyQuantity q) {
    switch (q) {
    case StudyQuantity::error: return "error";
    case StudyQuantity::residual: return "residual";
    case StudyQuantity::sigma_min: return "sigma_min";
    }
    return "?";
}

GridFunction sample(const std::vector<expr::Expr>& components, const Grid& grid) {
    const int n = static_cast<int>(components.size());
    GridFunction g(grid, n);
    for (int j = 0; j < n; ++j) {
        const expr::CompiledExpr e(components[static_cast<std::size_t>(j)]);
        for (int i = 0; i < grid.nx(); ++i) {
            for (int q = 0; q < grid.nt(); ++q) g.at(j, i, q) = e(grid.x(i), grid.t(q));
        }
    }
    return g;
}

void check_refining(const std::vector<Grid>& grids) {
    if (grids.empty()) throw RangeError("a study needs at least one grid");
    for (std::size_t i = 1; i < grids.size(); ++i) {
        const Grid& a = grids[i - 1];
        const Grid& b = grids[i];
        const double ratio = static_cast<double>(b.cells()) / static_cast<double>(a.cells());
        if (b.nt() != 2 * a.nt() || ratio < 1.5 || ratio > 2.5) {
            throw RangeError("grids must refine: Nt doubles and Nx-1 roughly doubles (" + std::to_string(a.nx()) + "x" +
                             std::to_string(a.nt()) + " -> " + std::to_string(b.nx()) + "x" + std::to_string(b.nt()) +
                             ")");
        }
    }
}

StudyTable convergence_study(const ProblemSpec& p, const std::optional<std::vector<expr::Expr>>& exact,
                             const std::vector<Grid>& grids, StudyOptions options) {
    check_refining(grids);
    if (exact) check_components(p, *exact, "exact solution");
    StudyTable table;
    table.quantity = exact ? StudyQuantity::error : StudyQuantity::sigma_min;
    double scale = 0.0;
    for (const Grid& grid : grids) {
        const OperatorMatrix m = assemble(p, grid, {.threads = options.threads});
        StudyRow row{grid, 0.0, std::nullopt};
        if (exact) {
            AlternativeOptions alt;
            alt.full_svd_limit = options.full_svd_limit;
            const FredholmReport report = solve_alternative(m, alt);
            const GridFunction ref = sample(*exact, grid);
            scale = std::max(scale, sup_norm(ref));
            for (std::size_t idx = 0; idx < ref.size(); ++idx) {
                row.value = std::max(row.value, std::fabs(report.solution.values()[idx] - ref.values()[idx]));
            }
        } else {
            row.value = smallest_singular_value(m, {options.full_svd_limit});
        }
        table.rows.push_back(row);
    }
    fill_orders(table, exact ? scale : -1.0);
    return table;
}

StudyTable residual_study(const ProblemSpec& p, const std::vector<expr::Expr>& candidate,
                          const std::vector<Grid>& grids, StudyOptions options) {
    check_refining(grids);
    check_components(p, candidate, "candidate solution");
    StudyTable table;
    table.quantity = StudyQuantity::residual;
    double scale = 0.0;
    for (const Grid& grid : grids) {
        const GridFunction u = sample(candidate, grid);
        scale = std::max(scale, sup_norm(u));
        table.rows.push_back({grid, residual(p, grid, u, options.threads), std::nullopt});
    }
    fill_orders(table, scale);
    return table;
}

} // namespace hypfred
