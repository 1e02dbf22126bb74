#include "povmkit/lp.hpp"

#include <algorithm>
#include <cmath>

namespace povmkit {

namespace {

constexpr double kPivotFloor = 1e-12;
constexpr double kReducedCostFloor = 1e-12;
constexpr double kPhase1Threshold = 1e-9;

struct Row {
    std::vector<double> coeffs;  // over shifted variables z
    double rhs = 0.0;            // normalized >= 0
    bool is_ge = false;
};

void validate_problem(const LinearFeasibilityProblem& p) {
    if (p.num_vars < 0) throw povm_error(errc::invalid_parameters, "negative variable count");
    if (p.bounds.size() != static_cast<size_t>(p.num_vars)) {
        throw povm_error(errc::invalid_parameters, "bounds count differs from num_vars");
    }
    for (const auto& [lo, hi] : p.bounds) {
        if (!std::isfinite(lo) || !std::isfinite(hi) || lo > hi) {
            throw povm_error(errc::invalid_parameters, "invalid variable bounds");
        }
    }
    for (const auto& eq : p.equalities) {
        if (eq.coeffs.size() != static_cast<size_t>(p.num_vars)) {
            throw povm_error(errc::invalid_parameters, "coefficient vector length mismatch");
        }
        if (!std::isfinite(eq.rhs) || !std::isfinite(eq.slack) || eq.slack < 0.0) {
            throw povm_error(errc::invalid_parameters, "invalid equality data");
        }
        for (double c : eq.coeffs) {
            if (!std::isfinite(c)) {
                throw povm_error(errc::invalid_parameters, "non-finite coefficient");
            }
        }
    }
}

}  // namespace

double residual(const LinearFeasibilityProblem& problem, std::span<const double> assignment) {
    if (assignment.size() != static_cast<size_t>(problem.num_vars)) {
        throw povm_error(errc::invalid_parameters, "assignment length mismatch");
    }
    double worst = 0.0;
    for (const auto& eq : problem.equalities) {
        double v = -eq.rhs;
        for (int j = 0; j < problem.num_vars; ++j) v += eq.coeffs[j] * assignment[j];
        worst = std::max(worst, std::abs(v));
    }
    for (int j = 0; j < problem.num_vars; ++j) {
        const auto& [lo, hi] = problem.bounds[j];
        worst = std::max({worst, lo - assignment[j], assignment[j] - hi});
    }
    return std::max(worst, 0.0);
}

std::optional<std::vector<double>> solve_feasibility(const LinearFeasibilityProblem& problem,
                                                     const Tolerance& tol) {
    (void)tol;
    validate_problem(problem);
    const int n = problem.num_vars;
    if (n == 0) {
        for (const auto& eq : problem.equalities) {
            if (std::abs(eq.rhs) > eq.slack) return std::nullopt;
        }
        return std::vector<double>{};
    }

    // Shift to z = x - lo with z in [0, u]; relax each equality into a <= and
    // a >= row; normalize every rhs to be nonnegative.
    std::vector<double> lo(n), upper(n);
    for (int j = 0; j < n; ++j) {
        lo[j] = problem.bounds[j].first;
        upper[j] = problem.bounds[j].second - lo[j];
    }

    std::vector<Row> rows;
    rows.reserve(problem.equalities.size() * 2 + n);
    auto push_row = [&rows](std::vector<double> coeffs, double rhs, bool is_ge) {
        if (rhs < 0.0) {
            for (double& c : coeffs) c = -c;
            rhs = -rhs;
            is_ge = !is_ge;
        }
        rows.push_back({std::move(coeffs), rhs, is_ge});
    };
    for (const auto& eq : problem.equalities) {
        double shift = 0.0;
        for (int j = 0; j < n; ++j) shift += eq.coeffs[j] * lo[j];
        double b = eq.rhs - shift;
        push_row(eq.coeffs, b + eq.slack, false);
        push_row(eq.coeffs, b - eq.slack, true);
    }
    for (int j = 0; j < n; ++j) {
        std::vector<double> coeffs(n, 0.0);
        coeffs[j] = 1.0;
        push_row(std::move(coeffs), upper[j], false);
    }

    const int m = static_cast<int>(rows.size());
    int n_artificial = 0;
    for (const Row& r : rows) {
        if (r.is_ge && r.rhs > 0.0) ++n_artificial;
    }
    // Column layout: z (n) | slack or surplus (m) | artificials | rhs.
    const int total = n + m + n_artificial;
    std::vector<std::vector<double>> t(m + 1, std::vector<double>(total + 1, 0.0));
    std::vector<int> basis(m, -1);

    int art = n + m;
    for (int i = 0; i < m; ++i) {
        const Row& r = rows[i];
        for (int j = 0; j < n; ++j) t[i][j] = r.coeffs[j];
        t[i][n + i] = r.is_ge ? -1.0 : 1.0;
        t[i][total] = r.rhs;
        if (r.is_ge && r.rhs > 0.0) {
            t[i][art] = 1.0;
            basis[i] = art++;
        } else if (r.is_ge) {
            // rhs is 0: flip the row so the surplus column can start basic.
            for (double& c : t[i]) c = -c;
            t[i][total] = 0.0;
            basis[i] = n + i;
        } else {
            basis[i] = n + i;
        }
    }

    // Phase-1: minimize the sum of artificials. Reduced-cost row starts as the
    // cost vector, then basic artificial rows are subtracted to canonicalize.
    auto& obj = t[m];
    for (int j = n + m; j < total; ++j) obj[j] = 1.0;
    for (int i = 0; i < m; ++i) {
        if (basis[i] >= n + m) {
            for (int j = 0; j <= total; ++j) obj[j] -= t[i][j];
        }
    }

    auto pivot = [&](int row, int col) {
        double p = t[row][col];
        for (int j = 0; j <= total; ++j) t[row][j] /= p;
        for (int i = 0; i <= m; ++i) {
            if (i == row) continue;
            double f = t[i][col];
            if (f == 0.0) continue;
            for (int j = 0; j <= total; ++j) t[i][j] -= f * t[row][j];
        }
        basis[row] = col;
    };

    const long max_iterations = 200L * (total + m + 1);
    long iterations = 0;
    while (true) {
        if (++iterations > max_iterations) {
            throw povm_error(errc::numerical_breakdown, "simplex iteration limit reached");
        }
        // Bland's rule: lowest-index entering column, lowest-index basic
        // variable among tied leaving rows.
        int entering = -1;
        for (int j = 0; j < total; ++j) {
            if (obj[j] < -kReducedCostFloor) {
                entering = j;
                break;
            }
        }
        if (entering < 0) break;
        int leaving = -1;
        double best_ratio = 0.0;
        for (int i = 0; i < m; ++i) {
            double a = t[i][entering];
            if (a <= kPivotFloor) continue;
            double ratio = t[i][total] / a;
            if (leaving < 0 || ratio < best_ratio ||
                (ratio == best_ratio && basis[i] < basis[leaving])) {
                leaving = i;
                best_ratio = ratio;
            }
        }
        if (leaving < 0) {
            throw povm_error(errc::numerical_breakdown,
                             "no admissible pivot for column " + std::to_string(entering));
        }
        pivot(leaving, entering);
    }

    double infeasibility = -obj[total];
    if (infeasibility > kPhase1Threshold) return std::nullopt;

    std::vector<double> z(n, 0.0);
    for (int i = 0; i < m; ++i) {
        if (basis[i] < n) z[basis[i]] = t[i][total];
    }
    std::vector<double> x(n);
    for (int j = 0; j < n; ++j) x[j] = std::clamp(z[j], 0.0, upper[j]) + lo[j];

    // Soundness gate: a returned point must satisfy every equality within its
    // slack; anything else is a numerical failure, not an answer.
    for (const auto& eq : problem.equalities) {
        double v = -eq.rhs;
        for (int j = 0; j < n; ++j) v += eq.coeffs[j] * x[j];
        if (std::abs(v) > eq.slack + 1e-8) {
            throw povm_error(errc::numerical_breakdown,
                             "simplex result violates an equality by " +
                                 std::to_string(std::abs(v)));
        }
    }
    return x;
}

}  // namespace povmkit
