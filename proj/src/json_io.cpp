#include "povmkit/json_io.hpp"

#include <fstream>
#include <iostream>

namespace povmkit {

namespace {

const json& require(const json& j, const char* field, const char* what) {
    auto it = j.find(field);
    if (it == j.end()) {
        throw povm_error(errc::invalid_parameters,
                         std::string(what) + " is missing field '" + field + "'");
    }
    return *it;
}

int require_dim(const json& j, const char* what) {
    const json& dim = require(j, "dim", what);
    if (!dim.is_number_integer() || dim.get<int>() < 1) {
        throw povm_error(errc::invalid_parameters,
                         std::string(what) + " needs a positive integer 'dim'");
    }
    return dim.get<int>();
}

std::vector<std::string> labels_from_json(const json& j, const char* field, const char* what) {
    const json& arr = require(j, field, what);
    if (!arr.is_array()) {
        throw povm_error(errc::invalid_parameters,
                         std::string(what) + " field '" + field + "' must be an array");
    }
    std::vector<std::string> labels;
    for (const json& entry : arr) {
        if (!entry.is_string()) {
            throw povm_error(errc::invalid_parameters,
                             std::string(what) + " labels must be strings");
        }
        labels.push_back(entry.get<std::string>());
    }
    return labels;
}

Complex complex_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw povm_error(errc::invalid_parameters,
                         "complex scalars must be [re, im] number pairs");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

json weights_to_json(const RMat& w) {
    json rows = json::array();
    for (int i = 0; i < w.rows(); ++i) {
        json row = json::array();
        for (int j = 0; j < w.cols(); ++j) row.push_back(w(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

json weak_kernel_to_json(const WeakMarkovKernel& k) {
    json out;
    out["source"] = k.source;
    out["target"] = k.target;
    out["weights"] = weights_to_json(k.weights);
    return out;
}

}  // namespace

json matrix_to_json(const CMat& a) {
    json out = json::array();
    for (int i = 0; i < a.rows(); ++i) {
        for (int j = 0; j < a.cols(); ++j) {
            out.push_back(json::array({a(i, j).real(), a(i, j).imag()}));
        }
    }
    return out;
}

CMat matrix_from_json(const json& j, int dim) {
    if (!j.is_array() || static_cast<int>(j.size()) != dim * dim) {
        throw povm_error(errc::invalid_parameters,
                         "matrix must be a row-major array of dim^2 [re, im] pairs");
    }
    CMat a(dim, dim);
    int k = 0;
    for (int row = 0; row < dim; ++row) {
        for (int col = 0; col < dim; ++col) a(row, col) = complex_from_json(j[k++]);
    }
    return a;
}

json to_json(const Observable& m) {
    json out;
    out["dim"] = m.dim;
    out["outcomes"] = m.outcomes;
    json effects = json::array();
    for (const CMat& atom : m.effects) effects.push_back(matrix_to_json(atom));
    out["effects"] = std::move(effects);
    return out;
}

json to_json(const SharpObservable& p) {
    json out = to_json(static_cast<const Observable&>(p));
    out["sharp"] = true;
    return out;
}

Observable observable_from_json(const json& j) {
    if (!j.is_object()) {
        throw povm_error(errc::invalid_parameters, "observable document must be an object");
    }
    Observable m;
    m.dim = require_dim(j, "observable");
    m.outcomes = labels_from_json(j, "outcomes", "observable");
    const json& effects = require(j, "effects", "observable");
    if (!effects.is_array() || effects.size() != m.outcomes.size()) {
        throw povm_error(errc::invalid_parameters,
                         "observable needs one effect matrix per outcome");
    }
    for (const json& entry : effects) m.effects.push_back(matrix_from_json(entry, m.dim));
    return m;
}

SharpObservable sharp_from_json(const json& j) {
    if (!j.is_object() || !j.value("sharp", false)) {
        throw povm_error(errc::invalid_parameters,
                         "sharp observable document must carry \"sharp\": true");
    }
    SharpObservable p;
    static_cast<Observable&>(p) = observable_from_json(j);
    return p;
}

json to_json(const MarkovKernel& k) {
    json out;
    out["source"] = k.source;
    out["target"] = k.target;
    out["weights"] = weights_to_json(k.weights);
    return out;
}

MarkovKernel kernel_from_json(const json& j) {
    if (!j.is_object()) {
        throw povm_error(errc::invalid_parameters, "kernel document must be an object");
    }
    MarkovKernel k;
    k.source = labels_from_json(j, "source", "kernel");
    k.target = labels_from_json(j, "target", "kernel");
    const json& rows = require(j, "weights", "kernel");
    if (!rows.is_array() || rows.size() != k.source.size()) {
        throw povm_error(errc::invalid_parameters, "kernel needs one weight row per source");
    }
    k.weights.resize(static_cast<int>(k.source.size()), static_cast<int>(k.target.size()));
    for (size_t i = 0; i < rows.size(); ++i) {
        const json& row = rows[i];
        if (!row.is_array() || row.size() != k.target.size()) {
            throw povm_error(errc::invalid_parameters,
                             "kernel rows must have one weight per target");
        }
        for (size_t col = 0; col < row.size(); ++col) {
            if (!row[col].is_number()) {
                throw povm_error(errc::invalid_parameters, "kernel weights must be numbers");
            }
            k.weights(static_cast<int>(i), static_cast<int>(col)) = row[col].get<double>();
        }
    }
    return k;
}

json to_json(const State& s) {
    json out;
    out["dim"] = s.dim;
    out["matrix"] = matrix_to_json(s.matrix);
    return out;
}

State state_from_json(const json& j) {
    if (!j.is_object()) {
        throw povm_error(errc::invalid_parameters, "state document must be an object");
    }
    State s;
    s.dim = require_dim(j, "state");
    s.matrix = matrix_from_json(require(j, "matrix", "state"), s.dim);
    return s;
}

json to_json(const ValidationReport& report) {
    json out;
    out["valid"] = report.valid();
    json violations = json::array();
    for (const Violation& v : report.violations) {
        violations.push_back({{"what", v.what}, {"defect", v.defect}});
    }
    out["violations"] = std::move(violations);
    return out;
}

json to_json(const OutcomeMap& map) {
    json out = json::object();
    for (const auto& [from, to] : map) out[from] = to;
    return out;
}

json to_json(const BlockPartition& part) {
    json out;
    out["assignment"] = to_json(part.assignment);
    out["null_class"] = part.null_class;
    out["max_defect"] = part.max_defect;
    return out;
}

json to_json(const SharpParent& parent) {
    json out;
    out["parent"] = to_json(parent.parent);
    out["kernel"] = weak_kernel_to_json(parent.kernel);
    out["defect"] = parent.defect;
    return out;
}

json to_json(const PerturbationResult& result) {
    json out;
    out["nu_plus"] = weak_kernel_to_json(result.nu_plus);
    out["nu_minus"] = weak_kernel_to_json(result.nu_minus);
    out["defect"] = result.defect;
    return out;
}

json to_json(const EquivalenceReport& report) {
    json out;
    out["oracle_contains"] = report.oracle_contains;
    out["range_containment"] = report.range_containment;
    out["indicator_kernel"] = report.indicator_kernel;
    out["function_of"] = report.function_of_present;
    out["markov_kernel"] = report.markov_kernel;
    out["agree"] = report.agree();
    out["verdict"] = report.verdict();
    return out;
}

json to_json(const LinearFeasibilityProblem& problem) {
    json out;
    out["description"] = problem.description;
    out["num_vars"] = problem.num_vars;
    json bounds = json::array();
    for (const auto& [lo, hi] : problem.bounds) bounds.push_back(json::array({lo, hi}));
    out["bounds"] = std::move(bounds);
    json equalities = json::array();
    for (const LinearConstraint& eq : problem.equalities) {
        equalities.push_back({{"coeffs", eq.coeffs}, {"rhs", eq.rhs}, {"slack", eq.slack}});
    }
    out["equalities"] = std::move(equalities);
    return out;
}

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw povm_error(errc::invalid_parameters, "cannot open '" + path + "'");
    }
    try {
        return json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw povm_error(errc::invalid_parameters,
                         "parse failure in '" + path + "': " + e.what());
    }
}

void emit_json(const json& j, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << j.dump(2) << "\n";
        return;
    }
    std::ofstream out(out_path);
    if (!out) {
        throw povm_error(errc::invalid_parameters, "cannot write '" + out_path + "'");
    }
    out << j.dump(2) << "\n";
}

}  // namespace povmkit
