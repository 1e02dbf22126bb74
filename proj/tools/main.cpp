#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "povmkit/decision.hpp"
#include "povmkit/json_io.hpp"
#include "povmkit/kernels.hpp"
#include "povmkit/observables.hpp"
#include "povmkit/random_instances.hpp"
#include "povmkit/suites.hpp"

namespace {

using povmkit::json;

// Exit-code contract: 0 = yes/feasible/valid, 1 = no/infeasible/invalid,
// 2 = input error, 3 = internal numerical failure.
constexpr int kYes = 0;
constexpr int kNo = 1;
constexpr int kInputError = 2;
constexpr int kNumericalFailure = 3;

/// Parse + semantic validation: decision procedures assume their inputs are
/// genuine observables/kernels, so a failing document is an input error here.
/// (The validate subcommand parses structurally and reports instead.)
template <typename T>
T checked(T value, const povmkit::Tolerance& tol, const std::string& path) {
    povmkit::ValidationReport report = povmkit::validate(value, tol);
    if (!report.valid()) {
        throw povmkit::povm_error(povmkit::errc::invalid_parameters,
                                  path + ": " + report.violations.front().what);
    }
    return value;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"povmkit: decision procedures for finite-outcome quantum observables"};
    app.require_subcommand(1);

    povmkit::Tolerance tol;
    std::string out_path;
    std::string dump_lp_path;
    std::uint64_t seed = 12345;
    app.add_option("--tol-eq", tol.eps_eq, "operator-norm equality tolerance")
        ->check(CLI::PositiveNumber);
    app.add_option("--tol-psd", tol.eps_psd, "eigenvalue floor for positivity checks")
        ->check(CLI::PositiveNumber);
    app.add_option("--tol-kernel", tol.eps_kernel, "kernel entry and row-sum tolerance")
        ->check(CLI::PositiveNumber);
    app.add_option("--out", out_path, "write the JSON result here instead of stdout");
    app.add_option("--dump-lp", dump_lp_path, "write the LP behind find-kernel as JSON");

    int exit_code = kYes;
    auto emit = [&out_path](const json& j) { povmkit::emit_json(j, out_path); };
    auto load_observable = [&tol](const std::string& path) {
        return checked(povmkit::observable_from_json(povmkit::load_json(path)), tol, path);
    };
    auto load_sharp = [&tol](const std::string& path) {
        return checked(povmkit::sharp_from_json(povmkit::load_json(path)), tol, path);
    };
    auto load_kernel = [&tol](const std::string& path) {
        return checked(povmkit::kernel_from_json(povmkit::load_json(path)), tol, path);
    };

    // --- validate ---
    std::string validate_observable, validate_kernel, validate_state;
    auto* validate_cmd = app.add_subcommand("validate", "check a document against its axioms");
    validate_cmd->fallthrough();
    validate_cmd->add_option("--observable", validate_observable, "observable JSON file");
    validate_cmd->add_option("--kernel", validate_kernel, "kernel JSON file");
    validate_cmd->add_option("--state", validate_state, "state JSON file");
    validate_cmd->callback([&] {
        int given = !validate_observable.empty() + !validate_kernel.empty() +
                    !validate_state.empty();
        if (given != 1) {
            throw povmkit::povm_error(povmkit::errc::invalid_parameters,
                                      "validate needs exactly one of --observable, "
                                      "--kernel, --state");
        }
        povmkit::ValidationReport report;
        if (!validate_observable.empty()) {
            json doc = povmkit::load_json(validate_observable);
            if (doc.is_object() && doc.value("sharp", false)) {
                report = povmkit::validate(povmkit::sharp_from_json(doc), tol);
            } else {
                report = povmkit::validate(povmkit::observable_from_json(doc), tol);
            }
        } else if (!validate_kernel.empty()) {
            report = povmkit::validate(
                povmkit::kernel_from_json(povmkit::load_json(validate_kernel)), tol);
        } else {
            report = povmkit::validate(povmkit::state_from_json(povmkit::load_json(validate_state)),
                                       tol);
        }
        emit(povmkit::to_json(report));
        exit_code = report.valid() ? kYes : kNo;
    });

    // --- smear ---
    std::string smear_observable, smear_kernel;
    auto* smear_cmd = app.add_subcommand("smear", "apply a Markov kernel to an observable");
    smear_cmd->fallthrough();
    smear_cmd->add_option("--observable", smear_observable)->required();
    smear_cmd->add_option("--kernel", smear_kernel)->required();
    smear_cmd->callback([&] {
        povmkit::Observable m = load_observable(smear_observable);
        povmkit::Observable result = povmkit::smear(m, load_kernel(smear_kernel), tol);
        emit(povmkit::to_json(result));
    });

    // --- sharp-parent ---
    std::string parent_observable;
    auto* parent_cmd =
        app.add_subcommand("sharp-parent", "reconstruct the sharp observable behind a "
                                           "commutative one");
    parent_cmd->fallthrough();
    parent_cmd->add_option("--observable", parent_observable)->required();
    parent_cmd->callback([&] {
        try {
            povmkit::SharpParent parent =
                povmkit::sharp_parent(load_observable(parent_observable), tol);
            json out = povmkit::to_json(parent);
            out["verdict"] = "commutative";
            emit(out);
        } catch (const povmkit::povm_error& e) {
            if (e.kind() != povmkit::errc::non_commutative_range) throw;
            emit({{"verdict", "non-commutative"}, {"reason", e.what()}});
            exit_code = kNo;
        }
    });

    // --- contains-range ---
    std::string contains_sharp, contains_observable;
    auto* contains_cmd =
        app.add_subcommand("contains-range", "decide range containment via block partition");
    contains_cmd->fallthrough();
    contains_cmd->add_option("--sharp", contains_sharp)->required();
    contains_cmd->add_option("--observable", contains_observable)->required();
    contains_cmd->callback([&] {
        auto part = povmkit::block_partition(load_sharp(contains_sharp),
                                             load_observable(contains_observable), tol);
        if (part) {
            emit({{"verdict", "contains"}, {"certificate", povmkit::to_json(*part)}});
        } else {
            emit({{"verdict", "does-not-contain"}});
            exit_code = kNo;
        }
    });

    // --- find-kernel ---
    std::string kernel_from, kernel_to;
    auto* kernel_cmd =
        app.add_subcommand("find-kernel", "find a Markov kernel turning one observable "
                                          "into another");
    kernel_cmd->fallthrough();
    kernel_cmd->add_option("--from", kernel_from)->required();
    kernel_cmd->add_option("--to", kernel_to)->required();
    kernel_cmd->callback([&] {
        povmkit::Observable m = load_observable(kernel_from);
        povmkit::Observable n = load_observable(kernel_to);
        if (!dump_lp_path.empty()) {
            povmkit::emit_json(povmkit::to_json(povmkit::kernel_feasibility_problem(m, n, tol)),
                               dump_lp_path);
        }
        auto kernel = povmkit::find_kernel(m, n, tol);
        if (kernel) {
            emit({{"verdict", "feasible"}, {"kernel", povmkit::to_json(*kernel)}});
        } else {
            emit({{"verdict", "infeasible"}});
            exit_code = kNo;
        }
    });

    // --- function-of ---
    std::string function_sharp, function_observable;
    auto* function_cmd =
        app.add_subcommand("function-of", "express a sharp observable as a function of "
                                          "another observable's outcomes");
    function_cmd->fallthrough();
    function_cmd->add_option("--sharp", function_sharp)->required();
    function_cmd->add_option("--observable", function_observable)->required();
    function_cmd->callback([&] {
        auto f = povmkit::function_of(load_sharp(function_sharp),
                                      load_observable(function_observable), tol);
        if (f) {
            emit({{"verdict", "function"}, {"map", povmkit::to_json(*f)}});
        } else {
            emit({{"verdict", "no-function"}});
            exit_code = kNo;
        }
    });

    // --- indicator-kernel ---
    std::string indicator_from, indicator_to;
    auto* indicator_cmd =
        app.add_subcommand("indicator-kernel", "search for a {0,1}-valued smearing kernel");
    indicator_cmd->fallthrough();
    indicator_cmd->add_option("--from", indicator_from)->required();
    indicator_cmd->add_option("--to", indicator_to)->required();
    indicator_cmd->callback([&] {
        auto f = povmkit::find_indicator_kernel(load_observable(indicator_from),
                                                load_observable(indicator_to), tol);
        if (f) {
            emit({{"verdict", "indicator"}, {"map", povmkit::to_json(*f)}});
        } else {
            emit({{"verdict", "no-indicator"}});
            exit_code = kNo;
        }
    });

    // --- preceq ---
    std::string preceq_first, preceq_second;
    auto* preceq_cmd =
        app.add_subcommand("preceq", "decide the smearing preorder between observables");
    preceq_cmd->fallthrough();
    preceq_cmd->add_option("--first", preceq_first)->required();
    preceq_cmd->add_option("--second", preceq_second)->required();
    preceq_cmd->callback([&] {
        auto kernel = povmkit::find_kernel(load_observable(preceq_first),
                                           load_observable(preceq_second), tol);
        if (kernel) {
            emit({{"verdict", "preceq"}, {"kernel", povmkit::to_json(*kernel)}});
        } else {
            emit({{"verdict", "not-preceq"}});
            exit_code = kNo;
        }
    });

    // --- clean ---
    std::string clean_sharp;
    auto* clean_cmd = app.add_subcommand("clean", "decide cleanness of a sharp observable");
    clean_cmd->fallthrough();
    clean_cmd->add_option("--sharp", clean_sharp)->required();
    clean_cmd->callback([&] {
        bool clean = povmkit::is_clean_sharp(load_sharp(clean_sharp), tol);
        emit({{"verdict", clean ? "clean" : "not-clean"}});
        exit_code = clean ? kYes : kNo;
    });

    // --- finer ---
    std::string finer_sharp_path;
    auto* finer_cmd =
        app.add_subcommand("finer", "produce the strictly finer witness of a non-clean "
                                    "sharp observable");
    finer_cmd->fallthrough();
    finer_cmd->add_option("--sharp", finer_sharp_path)->required();
    finer_cmd->callback([&] {
        try {
            povmkit::SharpObservable f =
                povmkit::finer_sharp(load_sharp(finer_sharp_path), tol);
            emit({{"verdict", "finer-exists"}, {"witness", povmkit::to_json(f)}});
        } catch (const povmkit::povm_error& e) {
            if (e.kind() != povmkit::errc::already_clean) throw;
            emit({{"verdict", "already-clean"}});
            exit_code = kNo;
        }
    });

    // --- extremal ---
    std::string extremal_observable;
    auto* extremal_cmd =
        app.add_subcommand("extremal", "decide extremality in the convex set of observables");
    extremal_cmd->fallthrough();
    extremal_cmd->add_option("--observable", extremal_observable)->required();
    extremal_cmd->callback([&] {
        bool extremal = povmkit::is_extremal(load_observable(extremal_observable), tol);
        emit({{"verdict", extremal ? "extremal" : "not-extremal"}});
        exit_code = extremal ? kYes : kNo;
    });

    // --- perturb ---
    std::string perturb_observable, perturb_kernel;
    std::vector<std::string> perturb_b1;
    auto* perturb_cmd =
        app.add_subcommand("perturb", "perturb a weak kernel along a target subset");
    perturb_cmd->fallthrough();
    perturb_cmd->add_option("--observable", perturb_observable, "parent observable")->required();
    perturb_cmd->add_option("--kernel", perturb_kernel)->required();
    perturb_cmd->add_option("--b1", perturb_b1, "target outcomes forming B1");
    perturb_cmd->callback([&] {
        povmkit::Observable parent = load_observable(perturb_observable);
        // The kernel document is read structurally: weak kernels may carry
        // arbitrary rows on the zero atoms of the parent, and the check
        // itself validates weak-kernel stochasticity.
        povmkit::MarkovKernel raw =
            povmkit::kernel_from_json(povmkit::load_json(perturb_kernel));
        povmkit::WeakMarkovKernel nu{raw.source, raw.target, raw.weights, parent};
        povmkit::PerturbationResult result =
            povmkit::extremal_perturbation_check(parent, nu, perturb_b1, tol);
        emit(povmkit::to_json(result));
    });

    // --- equivalence-suite ---
    std::string equivalence_sharp, equivalence_observable;
    auto* equivalence_cmd =
        app.add_subcommand("equivalence-suite", "run all range-containment routes and "
                                                "compare them");
    equivalence_cmd->fallthrough();
    equivalence_cmd->add_option("--sharp", equivalence_sharp)->required();
    equivalence_cmd->add_option("--observable", equivalence_observable)->required();
    equivalence_cmd->callback([&] {
        povmkit::EquivalenceReport report = povmkit::equivalence_suite(
            load_sharp(equivalence_sharp), load_observable(equivalence_observable), tol);
        emit(povmkit::to_json(report));
        if (!report.agree()) {
            exit_code = kNumericalFailure;
        } else {
            exit_code = report.oracle_contains ? kYes : kNo;
        }
    });

    // --- oracle-contains ---
    std::string oracle_sharp, oracle_observable;
    auto* oracle_cmd =
        app.add_subcommand("oracle-contains", "range containment by exhaustive subset sums");
    oracle_cmd->fallthrough();
    oracle_cmd->add_option("--sharp", oracle_sharp)->required();
    oracle_cmd->add_option("--observable", oracle_observable)->required();
    oracle_cmd->callback([&] {
        bool contains = povmkit::brute_force_contains_range(
            load_sharp(oracle_sharp), load_observable(oracle_observable), tol);
        emit({{"verdict", contains ? "contains" : "does-not-contain"}});
        exit_code = contains ? kYes : kNo;
    });

    // --- random ---
    std::string random_kind;
    int random_dim = 2;
    int random_outcomes = 2;
    auto* random_cmd = app.add_subcommand(
        "random", "generate a seeded instance (for kernels, --dim is the source size)");
    random_cmd->fallthrough();
    random_cmd->add_option("kind", random_kind, "pvm | povm | commutative | kernel")
        ->required()
        ->check(CLI::IsMember({"pvm", "povm", "commutative", "kernel"}));
    random_cmd->add_option("--dim", random_dim)->check(CLI::PositiveNumber);
    random_cmd->add_option("--outcomes", random_outcomes)->check(CLI::PositiveNumber);
    auto* random_seed_opt = random_cmd->add_option("--seed", seed, "generator seed");
    random_seed_opt->required();
    random_cmd->callback([&] {
        povmkit::Rng rng(seed);
        if (random_kind == "pvm") {
            emit(povmkit::to_json(povmkit::random_pvm(rng, random_dim, random_outcomes)));
        } else if (random_kind == "povm") {
            emit(povmkit::to_json(povmkit::random_povm(rng, random_dim, random_outcomes)));
        } else if (random_kind == "commutative") {
            emit(povmkit::to_json(
                povmkit::random_commutative_povm(rng, random_dim, random_outcomes)));
        } else {
            emit(povmkit::to_json(povmkit::random_kernel(rng, random_dim, random_outcomes)));
        }
    });

    // --- acceptance ---
    std::string suite_name;
    auto* acceptance_cmd =
        app.add_subcommand("acceptance", "run a named verification suite ('all' runs "
                                         "every suite)");
    acceptance_cmd->fallthrough();
    acceptance_cmd->add_option("--suite", suite_name)->required();
    acceptance_cmd->add_option("--seed", seed, "suite seed");
    acceptance_cmd->callback([&] {
        json out;
        bool all_passed = true;
        if (suite_name == "all") {
            json suites = json::array();
            for (const std::string& name : povmkit::suite_names()) {
                povmkit::SuiteResult result = povmkit::run_suite(name, seed, tol);
                all_passed = all_passed && result.passed;
                suites.push_back({{"suite", result.name},
                                  {"passed", result.passed},
                                  {"elapsed_seconds", result.elapsed_seconds},
                                  {"report", result.report}});
            }
            out["passed"] = all_passed;
            out["suites"] = std::move(suites);
        } else {
            povmkit::SuiteResult result = povmkit::run_suite(suite_name, seed, tol);
            all_passed = result.passed;
            out["suite"] = result.name;
            out["passed"] = result.passed;
            out["elapsed_seconds"] = result.elapsed_seconds;
            out["report"] = result.report;
        }
        emit(out);
        exit_code = all_passed ? kYes : kNo;
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kInputError;
    } catch (const povmkit::povm_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.kind() == povmkit::errc::numerical_breakdown ? kNumericalFailure : kInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    }
    return exit_code;
}
