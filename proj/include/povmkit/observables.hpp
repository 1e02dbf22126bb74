#pragma once

#include <string>
#include <vector>

#include "povmkit/operator_core.hpp"

namespace povmkit {

/// Finite-outcome POV measure: labeled effects summing to the identity.
/// The atom order is the outcome-label order; every aggregate (normalization
/// defects, range effects) is summed in that order so results reproduce
/// bit-for-bit.
struct Observable {
    int dim = 0;
    std::vector<std::string> outcomes;
    std::vector<CMat> effects;

    int n_outcomes() const { return static_cast<int>(outcomes.size()); }
    int index_of(const std::string& label) const;  // -1 if absent
    const CMat& effect(const std::string& label) const;  // throws unknown_outcome
};

/// PV measure: an Observable whose effects are mutually orthogonal projections.
struct SharpObservable : Observable {};

/// Density operator: PSD Hermitian with unit trace.
struct State {
    int dim = 0;
    CMat matrix;
};

struct Violation {
    std::string what;
    double defect = 0.0;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool valid() const { return violations.empty(); }
    void add(std::string what, double defect) { violations.push_back({std::move(what), defect}); }
};

ValidationReport validate(const Observable& m, const Tolerance& tol = {});
ValidationReport validate(const SharpObservable& p, const Tolerance& tol = {});
ValidationReport validate(const State& s, const Tolerance& tol = {});

/// Outcome statistics p_x = Tr[S M(x)] of measuring M in state S.
std::vector<double> probability_distribution(const State& s, const Observable& m);

/// M(A) for a subset A of outcome labels, summed in outcome order.
CMat range_effect(const Observable& m, const std::vector<std::string>& subset);

/// M(A) for a subset given as a bitmask over atom indices.
CMat range_effect_mask(const Observable& m, unsigned long mask);

/// True iff all atom pairs commute within tol.eps_eq; by bilinearity this is
/// equivalent to the whole range being commutative.
bool is_commutative_range(const Observable& m, const Tolerance& tol = {});

/// Outcomes whose atoms vanish: { x : ||M(x)|| <= eps_eq }.
std::vector<std::string> zero_set(const Observable& m, const Tolerance& tol = {});
std::vector<int> zero_set_indices(const Observable& m, const Tolerance& tol = {});

bool is_sharp(const Observable& m, const Tolerance& tol = {});

/// Checked conversion; throws invalid_parameters if m fails sharp validation.
SharpObservable as_sharp(const Observable& m, const Tolerance& tol = {});

/// The maximally mixed state I/d (full rank, so it dominates every state).
State maximally_mixed(int dim);

}  // namespace povmkit
