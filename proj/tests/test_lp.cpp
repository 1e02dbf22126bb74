#include <cmath>
#include <vector>

#include <doctest.h>

#include "povmkit/lp.hpp"
#include "povmkit/random_instances.hpp"

using namespace povmkit;

namespace {

LinearFeasibilityProblem unit_box(int n) {
    LinearFeasibilityProblem p;
    p.num_vars = n;
    p.bounds.assign(n, {0.0, 1.0});
    return p;
}

void add_equality(LinearFeasibilityProblem& p, std::vector<double> coeffs, double rhs,
                  double slack = 1e-9) {
    p.equalities.push_back({std::move(coeffs), rhs, slack});
}

}  // namespace

TEST_CASE("a pinned two-variable system is solved exactly") {
    LinearFeasibilityProblem p = unit_box(2);
    add_equality(p, {1.0, 1.0}, 1.0);
    add_equality(p, {1.0, -1.0}, 0.0);

    auto x = solve_feasibility(p);
    REQUIRE(x.has_value());
    CHECK((*x)[0] == doctest::Approx(0.5).epsilon(1e-7));
    CHECK((*x)[1] == doctest::Approx(0.5).epsilon(1e-7));
    CHECK(residual(p, *x) <= 1e-8);
}

TEST_CASE("contradictory equalities are reported infeasible") {
    LinearFeasibilityProblem p = unit_box(2);
    add_equality(p, {1.0, 1.0}, 1.0);
    add_equality(p, {1.0, -1.0}, 3.0);  // needs x = 2 outside the box
    CHECK_FALSE(solve_feasibility(p).has_value());
}

TEST_CASE("box bounds participate in feasibility") {
    LinearFeasibilityProblem p = unit_box(1);
    add_equality(p, {1.0}, 2.0);
    CHECK_FALSE(solve_feasibility(p).has_value());

    LinearFeasibilityProblem q = unit_box(1);
    add_equality(q, {1.0}, 0.5);
    auto x = solve_feasibility(q);
    REQUIRE(x.has_value());
    CHECK((*x)[0] == doctest::Approx(0.5).epsilon(1e-7));
}

TEST_CASE("degenerate rows behave") {
    LinearFeasibilityProblem p = unit_box(1);
    add_equality(p, {0.0}, 0.0);
    CHECK(solve_feasibility(p).has_value());

    LinearFeasibilityProblem q = unit_box(1);
    add_equality(q, {0.0}, 1.0);
    CHECK_FALSE(solve_feasibility(q).has_value());
}

TEST_CASE("negative right-hand sides and shifted lower bounds work") {
    LinearFeasibilityProblem p = unit_box(1);
    add_equality(p, {-1.0}, -0.7);
    auto x = solve_feasibility(p);
    REQUIRE(x.has_value());
    CHECK((*x)[0] == doctest::Approx(0.7).epsilon(1e-7));

    LinearFeasibilityProblem q;
    q.num_vars = 1;
    q.bounds = {{-1.0, 1.0}};
    add_equality(q, {1.0}, -0.5);
    auto y = solve_feasibility(q);
    REQUIRE(y.has_value());
    CHECK((*y)[0] == doctest::Approx(-0.5).epsilon(1e-7));
}

TEST_CASE("a problem with no equalities returns a point inside the box") {
    LinearFeasibilityProblem p = unit_box(3);
    auto x = solve_feasibility(p);
    REQUIRE(x.has_value());
    CHECK(residual(p, *x) == 0.0);
}

TEST_CASE("malformed problems are rejected") {
    LinearFeasibilityProblem p = unit_box(2);
    add_equality(p, {1.0}, 0.5);  // coefficient count != num_vars
    CHECK_THROWS_AS(solve_feasibility(p), povm_error);

    LinearFeasibilityProblem q = unit_box(1);
    q.bounds[0] = {1.0, 0.0};  // empty box
    CHECK_THROWS_AS(solve_feasibility(q), povm_error);
}

TEST_CASE("solver completeness on constructed-feasible instances") {
    // Plant a point inside the box, derive consistent right-hand sides, and
    // demand the solver finds some point satisfying everything within slack.
    Rng rng(41);
    for (int trial = 0; trial < 100; ++trial) {
        int n = rng.uniform_int(1, 8);
        int m = rng.uniform_int(1, 6);
        LinearFeasibilityProblem p = unit_box(n);
        std::vector<double> planted(n);
        for (double& v : planted) v = rng.uniform();

        for (int row = 0; row < m; ++row) {
            std::vector<double> coeffs(n);
            double rhs = 0.0;
            for (int j = 0; j < n; ++j) {
                coeffs[j] = rng.uniform(-2.0, 2.0);
                rhs += coeffs[j] * planted[j];
            }
            add_equality(p, std::move(coeffs), rhs);
        }

        INFO("trial ", trial);
        auto x = solve_feasibility(p);
        REQUIRE(x.has_value());
        CHECK(residual(p, *x) <= 1e-8 + 1e-9);
    }
}

TEST_CASE("solver soundness on constructed-infeasible instances") {
    // Demanding a coordinate sum beyond the box volume is always impossible.
    Rng rng(43);
    for (int trial = 0; trial < 50; ++trial) {
        int n = rng.uniform_int(1, 6);
        LinearFeasibilityProblem p = unit_box(n);
        add_equality(p, std::vector<double>(n, 1.0), n + 0.5);
        for (int row = 0; row < rng.uniform_int(0, 3); ++row) {
            std::vector<double> coeffs(n);
            for (double& c : coeffs) c = rng.uniform(-1.0, 1.0);
            add_equality(p, std::move(coeffs), rng.uniform(-0.5, 0.5));
        }
        CHECK_FALSE(solve_feasibility(p).has_value());
    }
}

TEST_CASE("the solver is deterministic") {
    Rng rng(47);
    LinearFeasibilityProblem p = unit_box(5);
    for (int row = 0; row < 4; ++row) {
        std::vector<double> coeffs(5);
        for (double& c : coeffs) c = rng.uniform(-1.0, 1.0);
        add_equality(p, std::move(coeffs), rng.uniform(0.0, 0.5));
    }
    auto first = solve_feasibility(p);
    auto second = solve_feasibility(p);
    REQUIRE(first.has_value() == second.has_value());
    if (first) {
        for (size_t i = 0; i < first->size(); ++i) {
            CHECK((*first)[i] == (*second)[i]);  // bitwise identical
        }
    }
}
