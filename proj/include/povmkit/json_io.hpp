#pragma once

#include <string>

#include <json.hpp>

#include "povmkit/decision.hpp"
#include "povmkit/kernels.hpp"
#include "povmkit/lp.hpp"
#include "povmkit/observables.hpp"

namespace povmkit {

// ordered_json keeps insertion order, so emitted documents are byte-stable.
using json = nlohmann::ordered_json;

/// Matrices travel as row-major arrays of [re, im] pairs.
json matrix_to_json(const CMat& a);
CMat matrix_from_json(const json& j, int dim);

json to_json(const Observable& m);
json to_json(const SharpObservable& p);  // same schema plus "sharp": true
Observable observable_from_json(const json& j);
SharpObservable sharp_from_json(const json& j);  // requires "sharp": true

json to_json(const MarkovKernel& k);
MarkovKernel kernel_from_json(const json& j);

json to_json(const State& s);
State state_from_json(const json& j);

json to_json(const ValidationReport& report);
json to_json(const OutcomeMap& map);
json to_json(const BlockPartition& part);
json to_json(const SharpParent& parent);
json to_json(const PerturbationResult& result);
json to_json(const EquivalenceReport& report);
json to_json(const LinearFeasibilityProblem& problem);

/// Parses a file; parse failures and unreadable paths become
/// InvalidParameters errors.
json load_json(const std::string& path);

/// Serializes with 2-space indent and a trailing newline; empty path means
/// standard output.
void emit_json(const json& j, const std::string& out_path);

}  // namespace povmkit
