#include "povmkit/suites.hpp"

#include <chrono>

#include "povmkit/operator_core.hpp"
#include "povmkit/random_instances.hpp"

namespace povmkit {

namespace {

// Sub-seeds keep the instance pools of different suites decorrelated while
// still driven by the one user-facing seed.
constexpr std::uint64_t kEquivalenceSalt = 0x45515549;
constexpr std::uint64_t kRoundtripSalt = 0x524f554e;
constexpr std::uint64_t kCleanSalt = 0x434c4541;

SharpObservable sigma_z_pvm() {
    SharpObservable p;
    p.dim = 2;
    p.outcomes = {"+", "-"};
    CMat up = CMat::Zero(2, 2);
    up(0, 0) = 1.0;
    CMat down = CMat::Zero(2, 2);
    down(1, 1) = 1.0;
    p.effects = {up, down};
    return p;
}

// Uniformly noisy qubit observable: eta * sigma_z PVM + (1 - eta)/2 * I.
Observable noisy_qubit(double eta) {
    Observable m;
    m.dim = 2;
    m.outcomes = {"+", "-"};
    CMat plus = CMat::Zero(2, 2);
    plus(0, 0) = (1.0 + eta) / 2.0;
    plus(1, 1) = (1.0 - eta) / 2.0;
    CMat minus = CMat::Zero(2, 2);
    minus(0, 0) = (1.0 - eta) / 2.0;
    minus(1, 1) = (1.0 + eta) / 2.0;
    m.effects = {plus, minus};
    return m;
}

struct PoolInstance {
    SharpObservable sharp;
    Observable obs;
    std::string construction;
};

// The shared 200-instance pool: 70 refining instances (containment holds by
// construction), 70 depolarized PVMs (containment provably fails), 60
// unconstrained pairs.
std::vector<PoolInstance> equivalence_pool(std::uint64_t seed) {
    Rng rng(seed ^ kEquivalenceSalt);
    std::vector<PoolInstance> pool;
    for (int i = 0; i < 70; ++i) {
        int d = rng.uniform_int(2, 4);
        int blocks = rng.uniform_int(2, d);
        int atoms = rng.uniform_int(blocks, 4);
        BlockInstance inst = random_block_instance(rng, d, blocks, atoms);
        pool.push_back({std::move(inst.sharp), std::move(inst.refined), "block"});
    }
    for (int i = 0; i < 70; ++i) {
        int d = rng.uniform_int(2, 4);
        SharpObservable p = random_pvm(rng, d, rng.uniform_int(2, d));
        Observable noisy = depolarize(p, rng.uniform(0.3, 0.8));
        pool.push_back({std::move(p), std::move(noisy), "depolarized"});
    }
    for (int i = 0; i < 60; ++i) {
        int d = rng.uniform_int(2, 4);
        SharpObservable p = random_pvm(rng, d, rng.uniform_int(1, d));
        Observable m = random_povm(rng, d, rng.uniform_int(1, 4));
        pool.push_back({std::move(p), std::move(m), "random-pair"});
    }
    return pool;
}

std::vector<Observable> roundtrip_pool(std::uint64_t seed) {
    Rng rng(seed ^ kRoundtripSalt);
    std::vector<Observable> pool;
    for (int i = 0; i < 100; ++i) {
        int d = rng.uniform_int(2, 6);
        pool.push_back(random_commutative_povm(rng, d, rng.uniform_int(2, 6)));
    }
    return pool;
}

std::vector<SharpObservable> degenerate_pool(std::uint64_t seed) {
    Rng rng(seed ^ kCleanSalt);
    std::vector<SharpObservable> pool;
    for (int i = 0; i < 50; ++i) {
        int d = rng.uniform_int(2, 6);
        pool.push_back(random_pvm(rng, d, rng.uniform_int(1, d - 1)));
    }
    return pool;
}

std::vector<SharpObservable> rank_one_pool(std::uint64_t seed) {
    Rng rng(seed ^ (kCleanSalt + 1));
    std::vector<SharpObservable> pool;
    for (int i = 0; i < 25; ++i) {
        int d = rng.uniform_int(2, 6);
        pool.push_back(random_pvm(rng, d, d));
    }
    return pool;
}

SuiteResult equivalence_suite_run(std::uint64_t seed, const Tolerance& tol) {
    SuiteResult result{"equivalence", true, json::object(), 0.0};
    auto pool = equivalence_pool(seed);
    int feasible = 0;
    int infeasible = 0;
    json failures = json::array();
    for (size_t i = 0; i < pool.size(); ++i) {
        EquivalenceReport report;
        try {
            report = equivalence_suite(pool[i].sharp, pool[i].obs, tol);
        } catch (const povm_error& e) {
            result.passed = false;
            failures.push_back({{"instance", i},
                                {"construction", pool[i].construction},
                                {"error", e.what()}});
            continue;
        }
        if (!report.agree()) {
            result.passed = false;
            failures.push_back({{"instance", i},
                                {"construction", pool[i].construction},
                                {"report", to_json(report)}});
            continue;
        }
        (report.oracle_contains ? feasible : infeasible)++;
        // The constructed instances pin the expected verdict; a mismatch is
        // as bad as a disagreement.
        if ((pool[i].construction == "block" && !report.oracle_contains) ||
            (pool[i].construction == "depolarized" && report.oracle_contains)) {
            result.passed = false;
            failures.push_back({{"instance", i},
                                {"construction", pool[i].construction},
                                {"report", to_json(report)}});
        }
    }
    result.report["instances"] = pool.size();
    result.report["feasible"] = feasible;
    result.report["infeasible"] = infeasible;
    result.report["failures"] = std::move(failures);
    return result;
}

SuiteResult roundtrip_suite_run(std::uint64_t seed, const Tolerance& tol) {
    SuiteResult result{"sharp-parent-roundtrip", true, json::object(), 0.0};
    auto pool = roundtrip_pool(seed);
    double worst = 0.0;
    json failures = json::array();
    for (size_t i = 0; i < pool.size(); ++i) {
        try {
            SharpParent parent = sharp_parent(pool[i], tol);
            worst = std::max(worst, parent.defect);
            if (parent.defect > 1e-7) {
                result.passed = false;
                failures.push_back({{"instance", i}, {"defect", parent.defect}});
            }
        } catch (const povm_error& e) {
            result.passed = false;
            failures.push_back({{"instance", i}, {"error", e.what()}});
        }
    }
    result.report["instances"] = pool.size();
    result.report["max_defect"] = worst;
    result.report["failures"] = std::move(failures);
    return result;
}

SuiteResult direction_suite_run(std::uint64_t seed, const Tolerance& tol) {
    SuiteResult result{"range-containment-direction", true, json::object(), 0.0};
    auto pool = equivalence_pool(seed);
    int feasible = 0;
    json failures = json::array();
    for (size_t i = 0; i < pool.size(); ++i) {
        try {
            if (!find_kernel(pool[i].obs, pool[i].sharp, tol)) continue;
            ++feasible;
            if (!contains_range(pool[i].sharp, pool[i].obs, tol)) {
                result.passed = false;
                failures.push_back({{"instance", i}, {"construction", pool[i].construction}});
            }
        } catch (const povm_error& e) {
            result.passed = false;
            failures.push_back({{"instance", i}, {"error", e.what()}});
        }
    }
    result.report["instances"] = pool.size();
    result.report["kernel_feasible"] = feasible;
    result.report["failures"] = std::move(failures);
    return result;
}

SuiteResult zero_one_suite_run(std::uint64_t seed, const Tolerance& tol) {
    SuiteResult result{"zero-one-kernels", true, json::object(), 0.0};
    auto pool = equivalence_pool(seed);
    json failures = json::array();
    int checked = 0;
    double worst_defect = 0.0;
    for (size_t i = 0; i < pool.size() && checked < 50; ++i) {
        if (pool[i].construction != "block") continue;
        ++checked;
        std::optional<MarkovKernel> kernel;
        try {
            kernel = find_kernel(pool[i].obs, pool[i].sharp, tol);
        } catch (const povm_error& e) {
            result.passed = false;
            failures.push_back({{"instance", i}, {"error", e.what()}});
            continue;
        }
        if (!kernel) {
            result.passed = false;
            failures.push_back({{"instance", i}, {"error", "no kernel on a refining instance"}});
            continue;
        }
        if (!is_zero_one(kernel->weights, pool[i].obs, tol)) {
            result.passed = false;
            failures.push_back({{"instance", i}, {"error", "kernel not an indicator"}});
            continue;
        }
        WeakMarkovKernel nu{kernel->source, kernel->target, kernel->weights, pool[i].obs};
        for (const std::string& target : kernel->target) {
            PerturbationResult perturbed =
                extremal_perturbation_check(pool[i].obs, nu, {target}, tol);
            worst_defect = std::max(worst_defect, perturbed.defect);
            if (perturbed.defect > 2e-9) {
                result.passed = false;
                failures.push_back({{"instance", i},
                                    {"b1", target},
                                    {"defect", perturbed.defect}});
            }
        }
    }

    // Analytic counterpoint: the strictly interior kernel on the sigma-z
    // parent perturbs with defect exactly 0.375.
    SharpObservable parent = sigma_z_pvm();
    RMat weights(2, 2);
    weights << 0.75, 0.25, 0.25, 0.75;
    WeakMarkovKernel interior{parent.outcomes, {"+", "-"}, weights, parent};
    PerturbationResult reference = extremal_perturbation_check(parent, interior, {"+"}, tol);
    bool reference_ok = std::abs(reference.defect - 0.375) <= 1e-9;
    if (!reference_ok) result.passed = false;

    result.report["instances"] = checked;
    result.report["max_perturbation_defect"] = worst_defect;
    result.report["interior_reference_defect"] = reference.defect;
    result.report["interior_reference_ok"] = reference_ok;
    result.report["failures"] = std::move(failures);
    return result;
}

SuiteResult noisy_qubit_suite_run(std::uint64_t, const Tolerance& tol) {
    SuiteResult result{"noisy-qubit", true, json::object(), 0.0};
    SharpObservable p = sigma_z_pvm();
    Observable m = noisy_qubit(0.5);

    bool unsharpening_feasible = false;
    double residual = -1.0;
    auto kernel = find_kernel(p, m, tol);
    if (kernel) {
        unsharpening_feasible = true;
        Observable back = smear(p, *kernel, tol);
        residual = 0.0;
        for (int x = 0; x < m.n_outcomes(); ++x) {
            residual = std::max(residual, operator_norm(back.effects[x] - m.effects[x]));
        }
    }
    bool sharpening_feasible = find_kernel(m, p, tol).has_value();

    result.passed = unsharpening_feasible && residual <= 1e-7 && !sharpening_feasible;
    result.report["sharp_to_noisy_feasible"] = unsharpening_feasible;
    result.report["sharp_to_noisy_residual"] = residual;
    result.report["noisy_to_sharp_feasible"] = sharpening_feasible;
    return result;
}

SuiteResult cleanness_suite_run(std::uint64_t seed, const Tolerance& tol) {
    SuiteResult result{"cleanness", true, json::object(), 0.0};
    json failures = json::array();

    auto rank_one = rank_one_pool(seed);
    for (size_t i = 0; i < rank_one.size(); ++i) {
        if (!is_clean_sharp(rank_one[i], tol)) {
            result.passed = false;
            failures.push_back({{"rank_one_instance", i}, {"error", "reported unclean"}});
        }
    }

    auto degenerate = degenerate_pool(seed);
    for (size_t i = 0; i < degenerate.size(); ++i) {
        const SharpObservable& p = degenerate[i];
        if (is_clean_sharp(p, tol)) {
            result.passed = false;
            failures.push_back({{"degenerate_instance", i}, {"error", "reported clean"}});
            continue;
        }
        try {
            SharpObservable f = finer_sharp(p, tol);
            bool forward = preceq(f, p, tol);
            bool backward = preceq(p, f, tol);
            if (!forward || backward) {
                result.passed = false;
                failures.push_back({{"degenerate_instance", i},
                                    {"preceq_f_p", forward},
                                    {"preceq_p_f", backward}});
            }
        } catch (const povm_error& e) {
            result.passed = false;
            failures.push_back({{"degenerate_instance", i}, {"error", e.what()}});
        }
    }

    result.report["rank_one_instances"] = rank_one.size();
    result.report["degenerate_instances"] = degenerate.size();
    result.report["failures"] = std::move(failures);
    return result;
}

SuiteResult commutation_suite_run(std::uint64_t seed, const Tolerance& tol) {
    SuiteResult result{"projection-commutation", true, json::object(), 0.0};
    std::vector<Observable> sweep;
    for (auto& inst : equivalence_pool(seed)) {
        sweep.push_back(std::move(inst.obs));
        sweep.push_back(std::move(inst.sharp));
    }
    for (auto& m : roundtrip_pool(seed)) sweep.push_back(std::move(m));
    for (auto& p : degenerate_pool(seed)) {
        sweep.push_back(finer_sharp(p, tol));
        sweep.push_back(std::move(p));
    }
    for (auto& p : rank_one_pool(seed)) sweep.push_back(std::move(p));
    sweep.push_back(noisy_qubit(0.5));
    sweep.push_back(sigma_z_pvm());

    json failures = json::array();
    for (size_t i = 0; i < sweep.size(); ++i) {
        if (!projection_commutes_check(sweep[i], tol)) {
            result.passed = false;
            failures.push_back({{"instance", i}});
        }
    }
    result.report["instances"] = sweep.size();
    result.report["failures"] = std::move(failures);
    return result;
}

SuiteResult determinism_suite_run(std::uint64_t seed, const Tolerance& tol) {
    SuiteResult result{"determinism", true, json::object(), 0.0};
    json checks = json::array();
    for (const std::string& name : suite_names()) {
        if (name == "determinism") continue;
        SuiteResult first = run_suite(name, seed, tol);
        SuiteResult second = run_suite(name, seed, tol);
        bool identical =
            first.report.dump() == second.report.dump() && first.passed == second.passed;
        if (!identical) result.passed = false;
        checks.push_back({{"suite", name}, {"identical", identical}});
    }
    result.report["checks"] = std::move(checks);
    return result;
}

}  // namespace

std::vector<std::string> suite_names() {
    return {"equivalence",  "sharp-parent-roundtrip", "range-containment-direction",
            "zero-one-kernels", "noisy-qubit",        "cleanness",
            "projection-commutation", "determinism"};
}

SuiteResult run_suite(const std::string& name, std::uint64_t seed, const Tolerance& tol) {
    auto start = std::chrono::steady_clock::now();
    SuiteResult result;
    if (name == "equivalence") {
        result = equivalence_suite_run(seed, tol);
    } else if (name == "sharp-parent-roundtrip") {
        result = roundtrip_suite_run(seed, tol);
    } else if (name == "range-containment-direction") {
        result = direction_suite_run(seed, tol);
    } else if (name == "zero-one-kernels") {
        result = zero_one_suite_run(seed, tol);
    } else if (name == "noisy-qubit") {
        result = noisy_qubit_suite_run(seed, tol);
    } else if (name == "cleanness") {
        result = cleanness_suite_run(seed, tol);
    } else if (name == "projection-commutation") {
        result = commutation_suite_run(seed, tol);
    } else if (name == "determinism") {
        result = determinism_suite_run(seed, tol);
    } else {
        throw povm_error(errc::unknown_suite, "no suite named '" + name + "'");
    }
    result.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

}  // namespace povmkit
