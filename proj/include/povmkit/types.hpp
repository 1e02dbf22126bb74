#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace povmkit {

using Complex = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

/// Absolute tolerances used by every predicate and decision procedure.
/// Inputs are O(1)-normalized (effects lie below the identity), so no
/// relative scaling is applied anywhere.
struct Tolerance {
    double eps_herm = 1e-9;    // Hermiticity defect bound (max entry of A - A†)
    double eps_psd = 1e-9;     // eigenvalue floor for PSD / effect tests
    double eps_eq = 1e-9;      // matrix equality bound, operator norm
    double eps_kernel = 1e-7;  // kernel entry / row-sum bound
};

enum class errc {
    dimension_mismatch,
    not_hermitian,
    not_psd,
    unknown_outcome,
    outcome_mismatch,
    invalid_kernel,
    incomplete_partition_map,
    invalid_default_measure,
    non_commutative_range,
    too_large,
    already_clean,
    invalid_parameters,
    numerical_breakdown,
    unknown_suite,
};

const char* errc_name(errc kind) noexcept;

class povm_error : public std::runtime_error {
  public:
    povm_error(errc kind, const std::string& msg)
        : std::runtime_error(std::string(errc_name(kind)) + ": " + msg), kind_(kind) {}

    errc kind() const noexcept { return kind_; }

  private:
    errc kind_;
};

}  // namespace povmkit
