#pragma once

#include <optional>
#include <utility>

#include "povmkit/kernels.hpp"
#include "povmkit/lp.hpp"
#include "povmkit/observables.hpp"

namespace povmkit {

/// Maps between outcome sets, kept in source outcome order so serialized
/// certificates are reproducible.
using OutcomeMap = std::vector<std::pair<std::string, std::string>>;

/// Certificate that P(y) = M(pi^-1(y)) for every y: the assignment covers
/// every atom off the null class C = zero_set(M), and max_defect is the
/// largest operator-norm residue observed while checking it.
struct BlockPartition {
    OutcomeMap assignment;
    std::vector<std::string> null_class;
    double max_defect = 0.0;
};

/// Certificate that M is a smearing of a sharp observable: smear(parent,
/// kernel) = M within defect, and every atom of M is diagonal in the joint
/// eigenbasis the parent was built from.
struct SharpParent {
    SharpObservable parent;
    WeakMarkovKernel kernel;  // from parent outcomes to M outcomes
    double defect = 0.0;
};

/// Reconstructs a sharp observable P and weak Markov kernel nu with
/// smear(P, nu) = M, which exists exactly when the range of M is
/// commutative. The atoms are jointly diagonalized by a random generic
/// linear combination (re-drawn on degeneracy collisions, with an iterative
/// per-atom refinement as the final fallback); P's outcomes are the distinct
/// joint-eigenvalue vectors, labeled by their rounded values.
/// Throws NonCommutativeRange when the range is not commutative.
SharpParent sharp_parent(const Observable& m, const Tolerance& tol = {});

/// Looks for the partition pi with P(y) = M(pi^-1(y)): each atom off the
/// null class must satisfy P(y) M(x) = M(x) for exactly one y, and the
/// per-block sums must reproduce P. Success is equivalent to the range of P
/// being contained in the range of M.
std::optional<BlockPartition> block_partition(const SharpObservable& p, const Observable& m,
                                              const Tolerance& tol = {});

/// True iff block_partition succeeds.
bool contains_range(const SharpObservable& p, const Observable& m, const Tolerance& tol = {});

/// Independent oracle for the same question: enumerate all 2^|X| subset sums
/// and ask whether every P(y) is hit within |X| * eps_eq. Throws TooLarge
/// for |X| > 20.
bool brute_force_contains_range(const SharpObservable& p, const Observable& m,
                                const Tolerance& tol = {});

/// Returns f with M(f^-1(y)) = P(y) for all y, when it exists. f extends
/// the block-partition assignment to zero atoms by sending them to the
/// target outcome of largest trace (first such in outcome order), so the
/// returned map is total on X and deterministic.
std::optional<OutcomeMap> function_of(const SharpObservable& p, const Observable& m,
                                      const Tolerance& tol = {});

/// Realification of the smearing equation smear(M, lambda) = N: variables
/// lambda(x, y) in [0, 1], row sums 1 (pinned to pivot noise, since genuine
/// kernels satisfy them exactly), and d^2 real equalities per target outcome
/// (diagonal, and real/imaginary upper triangle) with slack eps_kernel.
/// Exposed for --dump-lp.
LinearFeasibilityProblem kernel_feasibility_problem(const Observable& m, const Observable& n,
                                                    const Tolerance& tol = {});

/// Decides whether N = smear(M, lambda) for some Markov kernel lambda via
/// phase-1 simplex on kernel_feasibility_problem. A returned kernel is
/// verified to reproduce N within 10 * eps_kernel atomwise; entries within
/// 1e-3 of {0, 1} are snapped to the exact bound when doing so keeps every
/// equality within slack, so indicator certificates come out exact.
std::optional<MarkovKernel> find_kernel(const Observable& m, const Observable& n,
                                        const Tolerance& tol = {});

/// M precedes N iff some Markov kernel turns M into N (at finite outcome
/// sets weak kernels regularize to Markov kernels without changing the
/// smearing, so this decides the weak-kernel preorder too).
bool preceq(const Observable& m, const Observable& n, const Tolerance& tol = {});

/// preceq in both directions.
bool equivalent(const Observable& m, const Observable& n, const Tolerance& tol = {});

/// A sharp observable is clean iff it has d rank-1 atoms (all other atoms
/// zero): nothing strictly finer can sit below it.
bool is_clean_sharp(const SharpObservable& p, const Tolerance& tol = {});

/// Witness of non-cleanness: splits every block of P along an eigenbasis
/// into rank-1 projections, labeled "<y>:<i>". The result F satisfies
/// preceq(F, P) but not preceq(P, F). Throws AlreadyClean when P is clean.
SharpObservable finer_sharp(const SharpObservable& p, const Tolerance& tol = {});

/// The two perturbed kernels nu± built from a subset B1 of target outcomes:
///   nu±(s, b) = nu(s, b) ± (nu(s, B1) nu(s, b) [b not in B1]
///                           - nu(s, B1^c) nu(s, b) [b in B1])
/// and the defect max_b ||(nu+ ∘ parent)(b) - (nu- ∘ parent)(b)||. The
/// smearing of an extremal observable admits no such perturbation, so there
/// the defect vanishes for every B1 — which forces nu into {0, 1} values.
struct PerturbationResult {
    WeakMarkovKernel nu_plus;
    WeakMarkovKernel nu_minus;
    double defect = 0.0;
};

PerturbationResult extremal_perturbation_check(const Observable& parent,
                                               const WeakMarkovKernel& nu,
                                               const std::vector<std::string>& b1,
                                               const Tolerance& tol = {});

/// Extremality in the convex set of observables: M is extremal iff the only
/// Hermitian family {D_x} with supp D_x inside supp M(x) and sum_x D_x = 0
/// is zero. Decided by a rank computation on the realified constraint.
bool is_extremal(const Observable& m, const Tolerance& tol = {});

/// Searches for f with N(y) = M(f^-1(y)), i.e. an indicator ({0,1}-valued)
/// kernel from M to N, returned as a map on the atoms off the null class.
/// Sharp N delegates to block_partition; otherwise all |Y|^|X\C| assignments
/// are enumerated (TooLarge beyond 10^6).
std::optional<OutcomeMap> find_indicator_kernel(const Observable& m, const Observable& n,
                                                const Tolerance& tol = {});

/// Library-wide invariant from the structure of POVM ranges: every
/// projection M(A) in the range commutes with everything in the range.
/// Checked against the atoms, which spans all subset sums. Throws TooLarge
/// for |X| > 20.
bool projection_commutes_check(const Observable& m, const Tolerance& tol = {});

/// One row of the equivalence ledger: the five routes to "is R(P) inside
/// R(M)?" that the theory says must agree.
struct EquivalenceReport {
    bool oracle_contains = false;      // brute-force subset enumeration
    bool range_containment = false;    // block-partition decision
    bool indicator_kernel = false;     // {0,1}-kernel search
    bool function_of_present = false;  // relabeling map search
    bool markov_kernel = false;        // LP feasibility

    bool agree() const {
        return oracle_contains == range_containment && oracle_contains == indicator_kernel &&
               oracle_contains == function_of_present && oracle_contains == markov_kernel;
    }
    std::string verdict() const {
        if (!agree()) return "disagreement";
        return oracle_contains ? "feasible" : "infeasible";
    }
};

EquivalenceReport equivalence_suite(const SharpObservable& p, const Observable& m,
                                    const Tolerance& tol = {});

}  // namespace povmkit
