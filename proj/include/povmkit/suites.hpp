#pragma once

#include <cstdint>

#include "povmkit/json_io.hpp"

namespace povmkit {

/// Outcome of one verification suite. The report depends only on the seed
/// (never on wall-clock data), so identical runs serialize identically;
/// timing lives outside it.
struct SuiteResult {
    std::string name;
    bool passed = false;
    json report;
    double elapsed_seconds = 0.0;
};

/// The suites, in canonical order:
///   equivalence                 five routes to range containment agree on a
///                               mixed pool of 200 instances
///   sharp-parent-roundtrip      100 commutative POVMs reconstruct through
///                               sharp_parent within 1e-7
///   range-containment-direction kernel feasibility toward a sharp target
///                               implies range containment on the pool
///   zero-one-kernels            kernels recovered on refining instances are
///                               indicators and admit no perturbation
///   noisy-qubit                 the analytic feasible/infeasible qubit pair
///   cleanness                   rank-1 PVMs are clean; degenerate PVMs give
///                               a strictly finer witness
///   projection-commutation      every projection in any generated range
///                               commutes with the whole range
///   determinism                 every suite above reports byte-identically
///                               when repeated with its seed
std::vector<std::string> suite_names();

/// Runs one suite. Throws UnknownSuite for names not in suite_names().
SuiteResult run_suite(const std::string& name, std::uint64_t seed, const Tolerance& tol = {});

}  // namespace povmkit
