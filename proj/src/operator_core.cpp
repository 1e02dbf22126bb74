#include "povmkit/operator_core.hpp"

#include <cmath>
#include <limits>

namespace povmkit {

const char* errc_name(errc kind) noexcept {
    switch (kind) {
        case errc::dimension_mismatch: return "DimensionMismatch";
        case errc::not_hermitian: return "NotHermitian";
        case errc::not_psd: return "NotPSD";
        case errc::unknown_outcome: return "UnknownOutcome";
        case errc::outcome_mismatch: return "OutcomeMismatch";
        case errc::invalid_kernel: return "InvalidKernel";
        case errc::incomplete_partition_map: return "IncompletePartitionMap";
        case errc::invalid_default_measure: return "InvalidDefaultMeasure";
        case errc::non_commutative_range: return "NonCommutativeRange";
        case errc::too_large: return "TooLarge";
        case errc::already_clean: return "AlreadyClean";
        case errc::invalid_parameters: return "InvalidParameters";
        case errc::numerical_breakdown: return "NumericalBreakdown";
        case errc::unknown_suite: return "UnknownSuite";
    }
    return "Unknown";
}

bool is_finite(const CMat& a) {
    return a.allFinite();
}

double hermiticity_defect(const CMat& a) {
    if (a.rows() != a.cols()) return std::numeric_limits<double>::infinity();
    return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

bool is_hermitian(const CMat& a, const Tolerance& tol) {
    return is_finite(a) && a.rows() == a.cols() && hermiticity_defect(a) <= tol.eps_herm;
}

double operator_norm(const CMat& a) {
    if (a.size() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<CMat> es(a.adjoint() * a, Eigen::EigenvaluesOnly);
    double top = es.eigenvalues().maxCoeff();
    return std::sqrt(std::max(top, 0.0));
}

HermitianEig hermitian_eig(const CMat& a, const Tolerance& tol) {
    if (!is_hermitian(a, tol)) {
        throw povm_error(errc::not_hermitian,
                         "hermitian_eig: defect " + std::to_string(hermiticity_defect(a)));
    }
    Eigen::SelfAdjointEigenSolver<CMat> es(a);
    if (es.info() != Eigen::Success) {
        throw povm_error(errc::numerical_breakdown, "hermitian_eig failed to converge");
    }
    return {es.eigenvalues(), es.eigenvectors()};
}

bool is_effect(const CMat& a, const Tolerance& tol) {
    if (!is_hermitian(a, tol)) return false;
    HermitianEig eig = hermitian_eig(a, tol);
    double lo = eig.eigenvalues.minCoeff();
    double hi = eig.eigenvalues.maxCoeff();
    return lo >= -tol.eps_psd && hi <= 1.0 + tol.eps_psd;
}

double projection_defect(const CMat& a) {
    return operator_norm(a * a - a);
}

bool is_projection(const CMat& a, const Tolerance& tol) {
    return is_hermitian(a, tol) && projection_defect(a) <= tol.eps_eq;
}

CMat support_basis(const CMat& a, const Tolerance& tol) {
    HermitianEig eig = hermitian_eig(a, tol);
    if (eig.eigenvalues.minCoeff() < -tol.eps_psd) {
        throw povm_error(errc::not_psd,
                         "support: eigenvalue " + std::to_string(eig.eigenvalues.minCoeff()));
    }
    Eigen::Index d = a.rows();
    Eigen::Index r = 0;
    for (Eigen::Index k = 0; k < d; ++k) {
        if (eig.eigenvalues(k) > tol.eps_psd) ++r;
    }
    // eigenvalues ascending, so the supported ones are the trailing r columns
    return eig.eigenvectors.rightCols(r);
}

CMat support_projection(const CMat& a, const Tolerance& tol) {
    CMat v = support_basis(a, tol);
    if (v.cols() == 0) return CMat::Zero(a.rows(), a.cols());
    return v * v.adjoint();
}

double commutator_norm(const CMat& a, const CMat& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw povm_error(errc::dimension_mismatch, "commutator of differently sized matrices");
    }
    return operator_norm(a * b - b * a);
}

}  // namespace povmkit
