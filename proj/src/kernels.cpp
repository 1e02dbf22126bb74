#include "povmkit/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace povmkit {

namespace {

bool labels_equal(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    return a == b;
}

bool reference_matches(const Observable& a, const Observable& b, const Tolerance& tol) {
    if (a.dim != b.dim || a.outcomes != b.outcomes) return false;
    for (size_t i = 0; i < a.effects.size(); ++i) {
        if (operator_norm(a.effects[i] - b.effects[i]) > tol.eps_eq) return false;
    }
    return true;
}

void check_labels(const std::vector<std::string>& labels, const char* which,
                  ValidationReport& report) {
    std::set<std::string> seen(labels.begin(), labels.end());
    if (seen.size() != labels.size()) {
        report.add(std::string(which) + " outcome labels are not distinct", 1.0);
    }
}

void check_shape(const std::vector<std::string>& source, const std::vector<std::string>& target,
                 const RMat& weights, ValidationReport& report) {
    if (weights.rows() != static_cast<Eigen::Index>(source.size()) ||
        weights.cols() != static_cast<Eigen::Index>(target.size())) {
        report.add("weights shape does not match outcome sets", 1.0);
    }
    check_labels(source, "source", report);
    check_labels(target, "target", report);
    if (!weights.allFinite()) {
        report.add("weights contain non-finite entries", 1.0);
    }
}

void check_row(const RMat& weights, Eigen::Index x, const Tolerance& tol,
               ValidationReport& report) {
    double entry_defect = 0.0;
    for (Eigen::Index y = 0; y < weights.cols(); ++y) {
        double w = weights(x, y);
        entry_defect = std::max(entry_defect, std::max(-w, w - 1.0));
    }
    if (entry_defect > tol.eps_kernel) {
        report.add("row " + std::to_string(x) + " has entries outside [0,1]", entry_defect);
    }
    double sum_defect = std::abs(weights.row(x).sum() - 1.0);
    if (sum_defect > tol.eps_kernel) {
        report.add("row " + std::to_string(x) + " does not sum to 1", sum_defect);
    }
}

}  // namespace

ValidationReport validate(const MarkovKernel& k, const Tolerance& tol) {
    ValidationReport report;
    check_shape(k.source, k.target, k.weights, report);
    if (!report.valid()) return report;
    for (Eigen::Index x = 0; x < k.weights.rows(); ++x) check_row(k.weights, x, tol, report);
    return report;
}

ValidationReport validate_weak_kernel(const RMat& weights, const Observable& reference,
                                      const Tolerance& tol) {
    ValidationReport report;
    if (weights.rows() != static_cast<Eigen::Index>(reference.outcomes.size())) {
        report.add("weights row count does not match reference outcomes", 1.0);
        return report;
    }
    if (!weights.allFinite()) {
        report.add("weights contain non-finite entries", 1.0);
        return report;
    }
    std::vector<int> zeros = zero_set_indices(reference, tol);
    for (Eigen::Index x = 0; x < weights.rows(); ++x) {
        bool exempt = std::find(zeros.begin(), zeros.end(), static_cast<int>(x)) != zeros.end();
        if (!exempt) check_row(weights, x, tol, report);
    }
    return report;
}

ValidationReport validate(const WeakMarkovKernel& k, const Tolerance& tol) {
    ValidationReport report;
    check_shape(k.source, k.target, k.weights, report);
    if (!report.valid()) return report;
    if (k.reference.outcomes != k.source) {
        report.add("reference observable lives on a different outcome set", 1.0);
        return report;
    }
    ValidationReport rows = validate_weak_kernel(k.weights, k.reference, tol);
    for (auto& v : rows.violations) report.violations.push_back(std::move(v));
    return report;
}

namespace {

Observable smear_weights(const Observable& m, const RMat& weights,
                         const std::vector<std::string>& target) {
    Observable n;
    n.dim = m.dim;
    n.outcomes = target;
    n.effects.reserve(target.size());
    for (Eigen::Index y = 0; y < weights.cols(); ++y) {
        CMat atom = CMat::Zero(m.dim, m.dim);
        for (Eigen::Index x = 0; x < weights.rows(); ++x) {
            double w = weights(x, y);
            if (w != 0.0) atom += w * m.effects[static_cast<size_t>(x)];
        }
        n.effects.push_back(std::move(atom));
    }
    return n;
}

}  // namespace

Observable smear(const Observable& m, const MarkovKernel& k, const Tolerance& tol) {
    if (!labels_equal(k.source, m.outcomes)) {
        throw povm_error(errc::outcome_mismatch, "kernel source differs from observable outcomes");
    }
    ValidationReport report = validate(k, tol);
    if (!report.valid()) {
        throw povm_error(errc::invalid_kernel, report.violations.front().what);
    }
    return smear_weights(m, k.weights, k.target);
}

Observable smear(const Observable& m, const WeakMarkovKernel& k, const Tolerance& tol) {
    if (!labels_equal(k.source, m.outcomes)) {
        throw povm_error(errc::outcome_mismatch, "kernel source differs from observable outcomes");
    }
    if (!reference_matches(k.reference, m, tol)) {
        throw povm_error(errc::outcome_mismatch, "weak kernel reference is not this observable");
    }
    ValidationReport report = validate(k, tol);
    if (!report.valid()) {
        throw povm_error(errc::invalid_kernel, report.violations.front().what);
    }
    return smear_weights(m, k.weights, k.target);
}

namespace {

RVec uniform_measure(size_t n) {
    return RVec::Constant(static_cast<Eigen::Index>(n), 1.0 / static_cast<double>(n));
}

void check_measure(const RVec& mu, size_t n_target, const Tolerance& tol) {
    if (mu.size() != static_cast<Eigen::Index>(n_target)) {
        throw povm_error(errc::invalid_default_measure, "measure size differs from target set");
    }
    if (!mu.allFinite() || mu.minCoeff() < -tol.eps_kernel ||
        std::abs(mu.sum() - 1.0) > tol.eps_kernel) {
        throw povm_error(errc::invalid_default_measure, "measure is not a probability vector");
    }
}

}  // namespace

MarkovKernel regularize(const WeakMarkovKernel& k, const RVec& mu, const Tolerance& tol) {
    check_measure(mu, k.target.size(), tol);
    ValidationReport report = validate(k, tol);
    if (!report.valid()) {
        throw povm_error(errc::invalid_kernel, report.violations.front().what);
    }
    std::vector<int> zeros = zero_set_indices(k.reference, tol);
    MarkovKernel out;
    out.source = k.source;
    out.target = k.target;
    out.weights = k.weights;
    for (Eigen::Index x = 0; x < out.weights.rows(); ++x) {
        bool on_zero = std::find(zeros.begin(), zeros.end(), static_cast<int>(x)) != zeros.end();
        if (on_zero) {
            out.weights.row(x) = mu.transpose();
            continue;
        }
        for (Eigen::Index y = 0; y < out.weights.cols(); ++y) {
            out.weights(x, y) = std::clamp(out.weights(x, y), 0.0, 1.0);
        }
        double sum = out.weights.row(x).sum();
        if (sum <= 0.0) {
            throw povm_error(errc::invalid_kernel, "row " + std::to_string(x) + " sums to zero");
        }
        if (sum != 1.0) out.weights.row(x) /= sum;
    }
    return out;
}

MarkovKernel regularize(const WeakMarkovKernel& k, const Tolerance& tol) {
    return regularize(k, uniform_measure(k.target.size()), tol);
}

bool is_zero_one(const RMat& weights, const Observable& reference, const Tolerance& tol) {
    std::vector<int> zeros = zero_set_indices(reference, tol);
    for (Eigen::Index x = 0; x < weights.rows(); ++x) {
        if (std::find(zeros.begin(), zeros.end(), static_cast<int>(x)) != zeros.end()) continue;
        for (Eigen::Index y = 0; y < weights.cols(); ++y) {
            double w = weights(x, y);
            if (std::min(std::abs(w), std::abs(w - 1.0)) > tol.eps_kernel) return false;
        }
    }
    return true;
}

MarkovKernel indicator_kernel(const std::vector<std::string>& source,
                              const std::vector<std::string>& target,
                              const std::map<std::string, std::string>& pi,
                              const std::vector<std::string>& null_class, const RVec& mu) {
    check_measure(mu, target.size(), Tolerance{});
    std::set<std::string> null_set(null_class.begin(), null_class.end());
    MarkovKernel out;
    out.source = source;
    out.target = target;
    out.weights = RMat::Zero(static_cast<Eigen::Index>(source.size()),
                             static_cast<Eigen::Index>(target.size()));
    for (size_t x = 0; x < source.size(); ++x) {
        if (null_set.count(source[x])) {
            out.weights.row(static_cast<Eigen::Index>(x)) = mu.transpose();
            continue;
        }
        auto it = pi.find(source[x]);
        if (it == pi.end()) {
            throw povm_error(errc::incomplete_partition_map,
                             "no image for outcome '" + source[x] + "'");
        }
        auto target_it = std::find(target.begin(), target.end(), it->second);
        if (target_it == target.end()) {
            throw povm_error(errc::incomplete_partition_map,
                             "image '" + it->second + "' is not a target outcome");
        }
        out.weights(static_cast<Eigen::Index>(x),
                    static_cast<Eigen::Index>(target_it - target.begin())) = 1.0;
    }
    return out;
}

MarkovKernel indicator_kernel(const std::vector<std::string>& source,
                              const std::vector<std::string>& target,
                              const std::map<std::string, std::string>& pi,
                              const std::vector<std::string>& null_class) {
    return indicator_kernel(source, target, pi, null_class, uniform_measure(target.size()));
}

MarkovKernel compose(const MarkovKernel& first, const MarkovKernel& second) {
    if (first.target != second.source) {
        throw povm_error(errc::outcome_mismatch, "composed kernels do not chain");
    }
    MarkovKernel out;
    out.source = first.source;
    out.target = second.target;
    out.weights = first.weights * second.weights;
    return out;
}

}  // namespace povmkit
