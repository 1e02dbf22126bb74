#include "povmkit/observables.hpp"

#include <set>

namespace povmkit {

int Observable::index_of(const std::string& label) const {
    for (int i = 0; i < n_outcomes(); ++i) {
        if (outcomes[i] == label) return i;
    }
    return -1;
}

const CMat& Observable::effect(const std::string& label) const {
    int i = index_of(label);
    if (i < 0) throw povm_error(errc::unknown_outcome, "no outcome '" + label + "'");
    return effects[static_cast<size_t>(i)];
}

namespace {

// Structural checks shared by Observable and SharpObservable validation.
bool check_structure(const Observable& m, ValidationReport& report) {
    bool ok = true;
    if (m.dim < 1) {
        report.add("dim must be >= 1", static_cast<double>(1 - m.dim));
        ok = false;
    }
    if (m.outcomes.empty()) {
        report.add("outcome set is empty", 1.0);
        ok = false;
    }
    if (m.outcomes.size() != m.effects.size()) {
        report.add("outcome/effect count mismatch",
                   std::abs(static_cast<double>(m.outcomes.size()) -
                            static_cast<double>(m.effects.size())));
        ok = false;
    }
    std::set<std::string> seen;
    for (const auto& label : m.outcomes) {
        if (!seen.insert(label).second) {
            report.add("duplicate outcome label '" + label + "'", 1.0);
            ok = false;
        }
    }
    for (size_t i = 0; i < m.effects.size(); ++i) {
        const CMat& e = m.effects[i];
        if (e.rows() != m.dim || e.cols() != m.dim) {
            report.add("effect[" + std::to_string(i) + "] has wrong shape", 1.0);
            ok = false;
        } else if (!is_finite(e)) {
            report.add("effect[" + std::to_string(i) + "] has non-finite entries", 1.0);
            ok = false;
        }
    }
    return ok;
}

void check_effects_and_normalization(const Observable& m, const Tolerance& tol,
                                     ValidationReport& report) {
    for (size_t i = 0; i < m.effects.size(); ++i) {
        const CMat& e = m.effects[i];
        double herm = hermiticity_defect(e);
        if (herm > tol.eps_herm) {
            report.add("effect[" + std::to_string(i) + "] not Hermitian", herm);
            continue;
        }
        HermitianEig eig = hermitian_eig(e, tol);
        double below = std::max(-eig.eigenvalues.minCoeff(), 0.0);
        double above = std::max(eig.eigenvalues.maxCoeff() - 1.0, 0.0);
        double defect = std::max(below, above);
        if (defect > tol.eps_psd) {
            report.add("effect[" + std::to_string(i) + "] spectrum outside [0,1]", defect);
        }
    }
    CMat sum = CMat::Zero(m.dim, m.dim);
    for (const CMat& e : m.effects) sum += e;
    double norm_defect = operator_norm(sum - CMat::Identity(m.dim, m.dim));
    if (norm_defect > tol.eps_eq) {
        report.add("effects do not sum to the identity", norm_defect);
    }
}

}  // namespace

ValidationReport validate(const Observable& m, const Tolerance& tol) {
    ValidationReport report;
    if (!check_structure(m, report)) return report;
    check_effects_and_normalization(m, tol, report);
    return report;
}

ValidationReport validate(const SharpObservable& p, const Tolerance& tol) {
    ValidationReport report;
    if (!check_structure(p, report)) return report;
    check_effects_and_normalization(p, tol, report);
    for (size_t i = 0; i < p.effects.size(); ++i) {
        double defect = projection_defect(p.effects[i]);
        if (defect > tol.eps_eq) {
            report.add("effect[" + std::to_string(i) + "] is not a projection", defect);
        }
    }
    // implied by normalization, asserted explicitly
    for (size_t i = 0; i < p.effects.size(); ++i) {
        for (size_t j = i + 1; j < p.effects.size(); ++j) {
            double defect = operator_norm(p.effects[i] * p.effects[j]);
            if (defect > tol.eps_eq) {
                report.add("effects " + std::to_string(i) + "," + std::to_string(j) +
                               " are not orthogonal",
                           defect);
            }
        }
    }
    return report;
}

ValidationReport validate(const State& s, const Tolerance& tol) {
    ValidationReport report;
    if (s.dim < 1 || s.matrix.rows() != s.dim || s.matrix.cols() != s.dim) {
        report.add("state matrix has wrong shape", 1.0);
        return report;
    }
    if (!is_finite(s.matrix)) {
        report.add("state matrix has non-finite entries", 1.0);
        return report;
    }
    double herm = hermiticity_defect(s.matrix);
    if (herm > tol.eps_herm) {
        report.add("state not Hermitian", herm);
        return report;
    }
    HermitianEig eig = hermitian_eig(s.matrix, tol);
    if (eig.eigenvalues.minCoeff() < -tol.eps_psd) {
        report.add("state not PSD", -eig.eigenvalues.minCoeff());
    }
    double trace_defect = std::abs(s.matrix.trace().real() - 1.0);
    if (trace_defect > tol.eps_eq) {
        report.add("state trace is not 1", trace_defect);
    }
    return report;
}

std::vector<double> probability_distribution(const State& s, const Observable& m) {
    if (s.dim != m.dim) {
        throw povm_error(errc::dimension_mismatch, "state and observable dimensions differ");
    }
    std::vector<double> p;
    p.reserve(m.effects.size());
    for (const CMat& e : m.effects) {
        p.push_back((s.matrix * e).trace().real());
    }
    return p;
}

CMat range_effect(const Observable& m, const std::vector<std::string>& subset) {
    std::vector<bool> member(m.effects.size(), false);
    for (const auto& label : subset) {
        int i = m.index_of(label);
        if (i < 0) throw povm_error(errc::unknown_outcome, "no outcome '" + label + "'");
        member[static_cast<size_t>(i)] = true;
    }
    CMat sum = CMat::Zero(m.dim, m.dim);
    for (size_t i = 0; i < m.effects.size(); ++i) {
        if (member[i]) sum += m.effects[i];
    }
    return sum;
}

CMat range_effect_mask(const Observable& m, unsigned long mask) {
    CMat sum = CMat::Zero(m.dim, m.dim);
    for (size_t i = 0; i < m.effects.size(); ++i) {
        if (mask & (1ul << i)) sum += m.effects[i];
    }
    return sum;
}

bool is_commutative_range(const Observable& m, const Tolerance& tol) {
    for (size_t i = 0; i < m.effects.size(); ++i) {
        for (size_t j = i + 1; j < m.effects.size(); ++j) {
            if (commutator_norm(m.effects[i], m.effects[j]) > tol.eps_eq) return false;
        }
    }
    return true;
}

std::vector<int> zero_set_indices(const Observable& m, const Tolerance& tol) {
    std::vector<int> c;
    for (int i = 0; i < m.n_outcomes(); ++i) {
        if (operator_norm(m.effects[static_cast<size_t>(i)]) <= tol.eps_eq) c.push_back(i);
    }
    return c;
}

std::vector<std::string> zero_set(const Observable& m, const Tolerance& tol) {
    std::vector<std::string> c;
    for (int i : zero_set_indices(m, tol)) c.push_back(m.outcomes[static_cast<size_t>(i)]);
    return c;
}

bool is_sharp(const Observable& m, const Tolerance& tol) {
    for (const CMat& e : m.effects) {
        if (!is_projection(e, tol)) return false;
    }
    return true;
}

SharpObservable as_sharp(const Observable& m, const Tolerance& tol) {
    SharpObservable p;
    static_cast<Observable&>(p) = m;
    ValidationReport report = validate(p, tol);
    if (!report.valid()) {
        throw povm_error(errc::invalid_parameters,
                         "observable is not sharp: " + report.violations.front().what);
    }
    return p;
}

State maximally_mixed(int dim) {
    if (dim < 1) throw povm_error(errc::invalid_parameters, "dim must be >= 1");
    State s;
    s.dim = dim;
    s.matrix = CMat::Identity(dim, dim) / static_cast<double>(dim);
    return s;
}

}  // namespace povmkit
