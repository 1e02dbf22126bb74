#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "povmkit/types.hpp"

namespace povmkit {

/// One relaxed equality |<coeffs, x> - rhs| <= slack.
struct LinearConstraint {
    std::vector<double> coeffs;
    double rhs = 0.0;
    double slack = 0.0;
};

/// Dense linear feasibility problem: box bounds plus slack-relaxed equalities.
struct LinearFeasibilityProblem {
    int num_vars = 0;
    std::vector<std::pair<double, double>> bounds;  // [lo, hi] per variable
    std::vector<LinearConstraint> equalities;
    std::string description;
};

/// Phase-1 simplex with explicit artificial variables and Bland's anti-cycling
/// rule; dense tableau, fixed variable order, fully deterministic. Returns an
/// assignment satisfying the bounds exactly and each equality within its
/// slack, or nullopt if the phase-1 objective stays positive.
std::optional<std::vector<double>> solve_feasibility(const LinearFeasibilityProblem& problem,
                                                     const Tolerance& tol = {});

/// Max violation: |<coeffs, x> - rhs| over equalities and bound overshoot.
double residual(const LinearFeasibilityProblem& problem, std::span<const double> assignment);

}  // namespace povmkit
