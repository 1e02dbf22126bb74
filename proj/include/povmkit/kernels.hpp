#pragma once

#include <map>
#include <string>
#include <vector>

#include "povmkit/observables.hpp"

namespace povmkit {

/// Row-stochastic matrix over finite outcome sets: weights(x, y) is the
/// probability of post-processing source outcome x into target outcome y.
struct MarkovKernel {
    std::vector<std::string> source;
    std::vector<std::string> target;
    RMat weights;  // |source| x |target|
};

/// Kernel whose rows are only required to be stochastic off the zero atoms of
/// a reference observable.
struct WeakMarkovKernel {
    std::vector<std::string> source;
    std::vector<std::string> target;
    RMat weights;
    Observable reference;  // lives on the source outcome set
};

ValidationReport validate(const MarkovKernel& k, const Tolerance& tol = {});

/// Per-row stochasticity report, exempting rows whose reference atom vanishes.
ValidationReport validate_weak_kernel(const RMat& weights, const Observable& reference,
                                      const Tolerance& tol = {});
ValidationReport validate(const WeakMarkovKernel& k, const Tolerance& tol = {});

/// Smearing: N(y) = sum_x weights(x,y) M(x). Zero weights are skipped so an
/// indicator kernel coarse-grains bit-for-bit like range_effect.
Observable smear(const Observable& m, const MarkovKernel& k, const Tolerance& tol = {});
Observable smear(const Observable& m, const WeakMarkovKernel& k, const Tolerance& tol = {});

/// Regular version of a weak kernel: rows off the zero set are clamped to
/// [0,1] and renormalized, rows on the zero set are replaced by mu.
MarkovKernel regularize(const WeakMarkovKernel& k, const RVec& mu, const Tolerance& tol = {});
MarkovKernel regularize(const WeakMarkovKernel& k, const Tolerance& tol = {});  // uniform mu

/// True iff every entry is within eps_kernel of {0,1} on rows off the zero
/// set of the reference. With row sums 1 this forces indicator rows, so every
/// aggregated value lands in {0,1} as well.
bool is_zero_one(const RMat& weights, const Observable& reference, const Tolerance& tol = {});

/// Deterministic kernel of a partition map: row x is the point mass at pi(x)
/// for x outside the null class, and mu on the null class.
MarkovKernel indicator_kernel(const std::vector<std::string>& source,
                              const std::vector<std::string>& target,
                              const std::map<std::string, std::string>& pi,
                              const std::vector<std::string>& null_class, const RVec& mu);
MarkovKernel indicator_kernel(const std::vector<std::string>& source,
                              const std::vector<std::string>& target,
                              const std::map<std::string, std::string>& pi,
                              const std::vector<std::string>& null_class);  // uniform mu

/// weights(left) * weights(right) with label bookkeeping; the kernel of the
/// composed post-processing.
MarkovKernel compose(const MarkovKernel& first, const MarkovKernel& second);

}  // namespace povmkit
