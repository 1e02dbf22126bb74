#include <algorithm>
#include <map>
#include <vector>

#include <doctest.h>

#include "fixtures.hpp"
#include "povmkit/decision.hpp"
#include "povmkit/random_instances.hpp"

using namespace povmkit;

namespace {

std::map<std::string, std::string> as_map(const OutcomeMap& assignment) {
    return {assignment.begin(), assignment.end()};
}

/// Dimension-1 observable with n equal outcomes; cheap way to hit size caps.
Observable flat_line(int n) {
    Observable m;
    m.dim = 1;
    for (int i = 0; i < n; ++i) {
        m.outcomes.push_back("o" + std::to_string(i));
        m.effects.push_back(CMat::Constant(1, 1, 1.0 / n));
    }
    return m;
}

}  // namespace

TEST_CASE("sharp_parent reconstructs the noisy qubit from the z measurement") {
    Observable noisy = fixtures::noisy_qubit(0.5);
    SharpParent result = sharp_parent(noisy);

    CHECK(validate(result.parent).valid());
    CHECK(validate(result.kernel).valid());
    CHECK(result.defect <= 1e-8);
    CHECK(result.parent.n_outcomes() == 2);

    // The reconstruction reproduces the input atomwise.
    Observable rebuilt = smear(result.parent, result.kernel);
    REQUIRE(rebuilt.outcomes == noisy.outcomes);
    for (int i = 0; i < 2; ++i) {
        CHECK(fixtures::max_abs_diff(rebuilt.effects[i], noisy.effects[i]) <= 1e-8);
    }

    // Up to the order of the reconstructed outcomes the kernel is the
    // symmetric binary channel with stay probability 0.75.
    std::vector<std::vector<double>> rows;
    for (int s = 0; s < 2; ++s) {
        rows.push_back({result.kernel.weights(s, 0), result.kernel.weights(s, 1)});
    }
    std::sort(rows.begin(), rows.end());
    CHECK(rows[0][0] == doctest::Approx(0.25).epsilon(1e-9));
    CHECK(rows[0][1] == doctest::Approx(0.75).epsilon(1e-9));
    CHECK(rows[1][0] == doctest::Approx(0.75).epsilon(1e-9));
    CHECK(rows[1][1] == doctest::Approx(0.25).epsilon(1e-9));
}

TEST_CASE("sharp_parent refuses non-commutative ranges") {
    CHECK_THROWS_AS(sharp_parent(fixtures::trine_povm()), povm_error);
    try {
        sharp_parent(fixtures::trine_povm());
    } catch (const povm_error& e) {
        CHECK(e.kind() == errc::non_commutative_range);
    }
}

TEST_CASE("sharp_parent roundtrips random commutative observables") {
    Rng rng(53);
    for (int trial = 0; trial < 10; ++trial) {
        int d = rng.uniform_int(2, 5);
        Observable m = random_commutative_povm(rng, d, rng.uniform_int(2, 5));
        SharpParent result = sharp_parent(m);
        CHECK(result.defect <= 1e-7);
        CHECK(validate(result.parent).valid());
        CHECK(validate(result.kernel).valid());
    }
}

TEST_CASE("block_partition certifies the diagonal refinement") {
    auto part = block_partition(fixtures::diagonal_blocks(), fixtures::diagonal_refinement());
    REQUIRE(part.has_value());
    auto pi = as_map(part->assignment);
    CHECK(pi.at("a") == "p");
    CHECK(pi.at("b") == "p");
    CHECK(pi.at("c") == "q");
    CHECK(part->null_class.empty());
    CHECK(part->max_defect <= 1e-12);
    CHECK(contains_range(fixtures::diagonal_blocks(), fixtures::diagonal_refinement()));
}

TEST_CASE("block_partition sends zero atoms to the null class") {
    Observable m = fixtures::diagonal_refinement();
    m.outcomes.push_back("dead");
    m.effects.push_back(CMat::Zero(3, 3));
    REQUIRE(validate(m).valid());

    auto part = block_partition(fixtures::diagonal_blocks(), m);
    REQUIRE(part.has_value());
    CHECK(part->null_class == std::vector<std::string>{"dead"});
    CHECK(as_map(part->assignment).count("dead") == 0);
}

TEST_CASE("the noisy qubit range contains no nontrivial projection") {
    SharpObservable z = fixtures::sigma_z_pvm();
    Observable noisy = fixtures::noisy_qubit(0.5);
    CHECK_FALSE(contains_range(z, noisy));
    CHECK_FALSE(brute_force_contains_range(z, noisy));
}

TEST_CASE("brute-force oracle agrees on the block example and enforces its size cap") {
    CHECK(brute_force_contains_range(fixtures::diagonal_blocks(),
                                     fixtures::diagonal_refinement()));

    Observable wide = flat_line(21);
    SharpObservable scalar;
    scalar.dim = 1;
    scalar.outcomes = {"y"};
    scalar.effects = {CMat::Identity(1, 1)};
    CHECK_THROWS_AS(brute_force_contains_range(scalar, wide), povm_error);
}

TEST_CASE("function_of extends the partition over zero atoms deterministically") {
    Observable m = fixtures::diagonal_refinement();
    m.outcomes.push_back("dead");
    m.effects.push_back(CMat::Zero(3, 3));

    auto f = function_of(fixtures::diagonal_blocks(), m);
    REQUIRE(f.has_value());
    auto pi = as_map(*f);
    REQUIRE(pi.size() == 4);  // total on the source outcomes
    CHECK(pi.at("a") == "p");
    CHECK(pi.at("b") == "p");
    CHECK(pi.at("c") == "q");
    // The dead atom goes to the target of largest trace, which is p (trace 2).
    CHECK(pi.at("dead") == "p");

    CHECK_FALSE(function_of(fixtures::sigma_z_pvm(), fixtures::noisy_qubit(0.4)).has_value());
}

TEST_CASE("find_kernel recovers the analytic noisy-qubit kernel") {
    SharpObservable z = fixtures::sigma_z_pvm();
    Observable noisy = fixtures::noisy_qubit(0.5);

    auto kernel = find_kernel(z, noisy);
    REQUIRE(kernel.has_value());
    CHECK(validate(*kernel).valid());
    // The smearing equations pin the kernel uniquely: stay probability 0.75.
    CHECK(kernel->weights(0, 0) == doctest::Approx(0.75).epsilon(1e-6));
    CHECK(kernel->weights(0, 1) == doctest::Approx(0.25).epsilon(1e-6));
    CHECK(kernel->weights(1, 0) == doctest::Approx(0.25).epsilon(1e-6));
    CHECK(kernel->weights(1, 1) == doctest::Approx(0.75).epsilon(1e-6));

    Observable rebuilt = smear(z, *kernel);
    for (int i = 0; i < 2; ++i) {
        CHECK(fixtures::max_abs_diff(rebuilt.effects[i], noisy.effects[i]) <= 1e-6);
    }
}

TEST_CASE("find_kernel rejects the sharpening direction") {
    // Recovering the z measurement from its noisy version would need the
    // weight 1.5 on the diagonal, outside [0, 1].
    CHECK_FALSE(find_kernel(fixtures::noisy_qubit(0.5), fixtures::sigma_z_pvm()).has_value());
}

TEST_CASE("kernel_feasibility_problem has the advertised shape") {
    SharpObservable z = fixtures::sigma_z_pvm();
    Observable noisy = fixtures::noisy_qubit(0.5);
    LinearFeasibilityProblem prob = kernel_feasibility_problem(z, noisy);

    CHECK(prob.num_vars == 4);  // 2 sources x 2 targets
    for (auto [lo, hi] : prob.bounds) {
        CHECK(lo == 0.0);
        CHECK(hi == 1.0);
    }
    // 2 row-sum equations plus d^2 = 4 real equations per target outcome.
    CHECK(prob.equalities.size() == 2 + 4 * 2);
}

TEST_CASE("preceq orders smearings and equivalent relabelings") {
    SharpObservable z = fixtures::sigma_z_pvm();
    Observable noisy = fixtures::noisy_qubit(0.5);

    CHECK(preceq(z, noisy));
    CHECK_FALSE(preceq(noisy, z));
    CHECK(preceq(z, z));  // reflexive via the identity kernel

    Observable relabeled = z;
    relabeled.outcomes = {"up", "down"};
    CHECK(equivalent(z, relabeled));
    CHECK_FALSE(equivalent(z, noisy));
}

TEST_CASE("every smearing of an observable sits above it") {
    Rng rng(59);
    for (int trial = 0; trial < 8; ++trial) {
        int d = rng.uniform_int(2, 4);
        Observable m = random_povm(rng, d, rng.uniform_int(2, 3));
        MarkovKernel k = random_kernel(rng, m.outcomes, {"c1", "c2"});
        CHECK(preceq(m, smear(m, k)));
    }
}

TEST_CASE("cleanness of sharp observables is rank-counting") {
    // Both z atoms are rank one in dimension 2: nothing finer exists.
    CHECK(is_clean_sharp(fixtures::sigma_z_pvm()));
    CHECK_FALSE(is_clean_sharp(fixtures::diagonal_blocks()));

    Rng rng(61);
    for (int trial = 0; trial < 10; ++trial) {
        int d = rng.uniform_int(2, 5);
        CHECK(is_clean_sharp(random_pvm(rng, d, d)));
        if (d > 2) {
            CHECK_FALSE(is_clean_sharp(random_pvm(rng, d, rng.uniform_int(1, d - 1))));
        }
    }
}

TEST_CASE("finer_sharp produces a strictly finer witness") {
    SharpObservable p = fixtures::diagonal_blocks();
    SharpObservable f = finer_sharp(p);
    CHECK(validate(f).valid());
    CHECK(f.n_outcomes() == 3);  // rank 2 + rank 1 split into rank-1 atoms
    CHECK(preceq(f, p));
    CHECK_FALSE(preceq(p, f));

    CHECK_THROWS_AS(finer_sharp(fixtures::sigma_z_pvm()), povm_error);
}

TEST_CASE("perturbation of the noisy-qubit kernel has the analytic defect") {
    SharpObservable z = fixtures::sigma_z_pvm();
    RMat weights(2, 2);
    weights << 0.75, 0.25, 0.25, 0.75;
    WeakMarkovKernel nu{z.outcomes, z.outcomes, weights, z};

    PerturbationResult result = extremal_perturbation_check(z, nu, {"+"});
    // All four perturbed entries and the defect are exact dyadic rationals.
    CHECK(result.nu_plus.weights(0, 0) == 0.5625);
    CHECK(result.nu_minus.weights(0, 0) == 0.9375);
    CHECK(result.nu_plus.weights(1, 0) == 0.0625);
    CHECK(result.nu_minus.weights(1, 0) == 0.4375);
    CHECK(result.defect == 0.375);

    // Both perturbed kernels remain weak Markov kernels.
    CHECK(validate(result.nu_plus).valid());
    CHECK(validate(result.nu_minus).valid());
}

TEST_CASE("indicator kernels admit no perturbation at all") {
    SharpObservable z = fixtures::sigma_z_pvm();
    RMat identity_weights = RMat::Identity(2, 2);
    WeakMarkovKernel nu{z.outcomes, z.outcomes, identity_weights, z};
    CHECK(extremal_perturbation_check(z, nu, {"+"}).defect == 0.0);
    CHECK(extremal_perturbation_check(z, nu, {"-"}).defect == 0.0);
}

TEST_CASE("perturbation rejects unknown target outcomes") {
    SharpObservable z = fixtures::sigma_z_pvm();
    RMat weights = RMat::Identity(2, 2);
    WeakMarkovKernel nu{z.outcomes, z.outcomes, weights, z};
    CHECK_THROWS_AS(extremal_perturbation_check(z, nu, {"zz"}), povm_error);
}

TEST_CASE("extremality separates sharp, trine, and noisy measurements") {
    CHECK(is_extremal(fixtures::sigma_z_pvm()));
    CHECK(is_extremal(fixtures::trine_povm()));
    CHECK_FALSE(is_extremal(fixtures::noisy_qubit(0.5)));

    Rng rng(67);
    for (int trial = 0; trial < 8; ++trial) {
        int d = rng.uniform_int(2, 4);
        CHECK(is_extremal(random_pvm(rng, d, rng.uniform_int(1, d))));
    }
}

TEST_CASE("find_indicator_kernel works for sharp and unsharp targets") {
    // Sharp target: delegates to the block partition.
    auto sharp_map =
        find_indicator_kernel(fixtures::diagonal_refinement(), fixtures::diagonal_blocks());
    REQUIRE(sharp_map.has_value());
    CHECK(as_map(*sharp_map).at("a") == "p");

    // Unsharp target: split one noisy atom in two, then recover the merge.
    Observable noisy = fixtures::noisy_qubit(0.5);
    Observable split;
    split.dim = 2;
    split.outcomes = {"h1", "h2", "m"};
    split.effects = {0.5 * noisy.effects[0], 0.5 * noisy.effects[0], noisy.effects[1]};
    REQUIRE(validate(split).valid());

    auto merge = find_indicator_kernel(split, noisy);
    REQUIRE(merge.has_value());
    auto pi = as_map(*merge);
    CHECK(pi.at("h1") == "+");
    CHECK(pi.at("h2") == "+");
    CHECK(pi.at("m") == "-");

    // No merge of the two z atoms can produce three nonzero trine atoms.
    CHECK_FALSE(find_indicator_kernel(fixtures::sigma_z_pvm(), fixtures::trine_povm())
                    .has_value());
}

TEST_CASE("find_indicator_kernel enforces its enumeration cap") {
    Observable wide = flat_line(21);
    Observable halves;
    halves.dim = 1;
    halves.outcomes = {"u", "v"};
    halves.effects = {CMat::Constant(1, 1, 0.5), CMat::Constant(1, 1, 0.5)};
    // 2^21 assignments exceed the cap, and the target is unsharp on purpose
    // (a sharp target would take the block-partition shortcut).
    CHECK_THROWS_AS(find_indicator_kernel(wide, halves), povm_error);
}

TEST_CASE("projections in generated ranges commute with the whole range") {
    CHECK(projection_commutes_check(fixtures::sigma_z_pvm()));
    CHECK(projection_commutes_check(fixtures::trine_povm()));
    CHECK(projection_commutes_check(fixtures::noisy_qubit(0.3)));
    CHECK(projection_commutes_check(fixtures::diagonal_refinement()));

    Rng rng(71);
    for (int trial = 0; trial < 10; ++trial) {
        int d = rng.uniform_int(2, 4);
        CHECK(projection_commutes_check(random_povm(rng, d, rng.uniform_int(2, 4))));
        CHECK(projection_commutes_check(random_pvm(rng, d, rng.uniform_int(1, d))));
        CHECK(projection_commutes_check(random_commutative_povm(rng, d, 3)));
    }
}

TEST_CASE("the five containment routes agree in both directions") {
    EquivalenceReport feasible =
        equivalence_suite(fixtures::diagonal_blocks(), fixtures::diagonal_refinement());
    CHECK(feasible.agree());
    CHECK(feasible.verdict() == "feasible");
    CHECK(feasible.oracle_contains);
    CHECK(feasible.markov_kernel);

    EquivalenceReport infeasible =
        equivalence_suite(fixtures::sigma_z_pvm(), fixtures::noisy_qubit(0.5));
    CHECK(infeasible.agree());
    CHECK(infeasible.verdict() == "infeasible");
    CHECK_FALSE(infeasible.oracle_contains);
}

TEST_CASE("refining block instances are certified by every route") {
    Rng rng(73);
    for (int trial = 0; trial < 5; ++trial) {
        BlockInstance inst = random_block_instance(rng, rng.uniform_int(2, 4), 2, 3);
        EquivalenceReport report = equivalence_suite(inst.sharp, inst.refined);
        CHECK(report.agree());
        CHECK(report.verdict() == "feasible");
    }
}

TEST_CASE("depolarized instances are rejected by every route") {
    Rng rng(79);
    for (int trial = 0; trial < 5; ++trial) {
        int d = rng.uniform_int(2, 4);
        SharpObservable p = random_pvm(rng, d, rng.uniform_int(2, d));
        Observable m = depolarize(p, 0.6);
        EquivalenceReport report = equivalence_suite(p, m);
        CHECK(report.agree());
        CHECK(report.verdict() == "infeasible");
    }
}
