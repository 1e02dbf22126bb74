#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "povmkit/decision.hpp"
#include "povmkit/json_io.hpp"
#include "povmkit/kernels.hpp"
#include "povmkit/observables.hpp"
#include "povmkit/random_instances.hpp"
#include "povmkit/suites.hpp"

namespace py = pybind11;
using namespace povmkit;

namespace {

/// Violations and certificates cross the boundary as plain dicts/strings via
/// the same JSON views the CLI prints, so both frontends agree byte-for-byte.
py::object to_py(const json& j) {
    py::module_ jsonmod = py::module_::import("json");
    return jsonmod.attr("loads")(j.dump());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Decision procedures for finite-outcome quantum observables";

    py::register_exception<povm_error>(m, "PovmError");

    py::class_<Tolerance>(m, "Tolerance")
        .def(py::init<>())
        .def_readwrite("eps_herm", &Tolerance::eps_herm)
        .def_readwrite("eps_psd", &Tolerance::eps_psd)
        .def_readwrite("eps_eq", &Tolerance::eps_eq)
        .def_readwrite("eps_kernel", &Tolerance::eps_kernel);

    py::class_<Observable>(m, "Observable")
        .def(py::init([](int dim, std::vector<std::string> outcomes, std::vector<CMat> effects) {
                 Observable m_;
                 m_.dim = dim;
                 m_.outcomes = std::move(outcomes);
                 m_.effects = std::move(effects);
                 return m_;
             }),
             py::arg("dim"), py::arg("outcomes"), py::arg("effects"))
        .def_readonly("dim", &Observable::dim)
        .def_readonly("outcomes", &Observable::outcomes)
        .def_readonly("effects", &Observable::effects)
        .def("effect", &Observable::effect, py::arg("outcome"))
        .def("__len__", &Observable::n_outcomes)
        .def("__repr__", [](const Observable& m_) {
            return "<Observable dim=" + std::to_string(m_.dim) + " outcomes=" +
                   std::to_string(m_.n_outcomes()) + ">";
        });

    py::class_<SharpObservable, Observable>(m, "SharpObservable")
        .def(py::init([](int dim, std::vector<std::string> outcomes, std::vector<CMat> effects) {
                 Observable plain;
                 plain.dim = dim;
                 plain.outcomes = std::move(outcomes);
                 plain.effects = std::move(effects);
                 return as_sharp(plain);
             }),
             py::arg("dim"), py::arg("outcomes"), py::arg("effects"));

    py::class_<State>(m, "State")
        .def(py::init([](int dim, CMat matrix) {
                 return State{dim, std::move(matrix)};
             }),
             py::arg("dim"), py::arg("matrix"))
        .def_readonly("dim", &State::dim)
        .def_readonly("matrix", &State::matrix);

    py::class_<MarkovKernel>(m, "MarkovKernel")
        .def(py::init([](std::vector<std::string> source, std::vector<std::string> target,
                         RMat weights) {
                 return MarkovKernel{std::move(source), std::move(target), std::move(weights)};
             }),
             py::arg("source"), py::arg("target"), py::arg("weights"))
        .def_readonly("source", &MarkovKernel::source)
        .def_readonly("target", &MarkovKernel::target)
        .def_readonly("weights", &MarkovKernel::weights);

    m.def(
        "validate_observable",
        [](const Observable& m_, const Tolerance& tol) { return to_py(to_json(validate(m_, tol))); },
        py::arg("observable"), py::arg("tol") = Tolerance{});
    m.def(
        "validate_sharp",
        [](const SharpObservable& p, const Tolerance& tol) {
            return to_py(to_json(validate(p, tol)));
        },
        py::arg("sharp"), py::arg("tol") = Tolerance{});
    m.def(
        "validate_kernel",
        [](const MarkovKernel& k, const Tolerance& tol) { return to_py(to_json(validate(k, tol))); },
        py::arg("kernel"), py::arg("tol") = Tolerance{});

    m.def("is_sharp", &is_sharp, py::arg("observable"), py::arg("tol") = Tolerance{});
    m.def("as_sharp", &as_sharp, py::arg("observable"), py::arg("tol") = Tolerance{});
    m.def("maximally_mixed", &maximally_mixed, py::arg("dim"));
    m.def("probability_distribution", &probability_distribution, py::arg("state"),
          py::arg("observable"));
    m.def(
        "smear",
        [](const Observable& m_, const MarkovKernel& k, const Tolerance& tol) {
            return smear(m_, k, tol);
        },
        py::arg("observable"), py::arg("kernel"), py::arg("tol") = Tolerance{});

    m.def(
        "sharp_parent",
        [](const Observable& m_, const Tolerance& tol) { return to_py(to_json(sharp_parent(m_, tol))); },
        py::arg("observable"), py::arg("tol") = Tolerance{});
    m.def("contains_range", &contains_range, py::arg("sharp"), py::arg("observable"),
          py::arg("tol") = Tolerance{});
    m.def("brute_force_contains_range", &brute_force_contains_range, py::arg("sharp"),
          py::arg("observable"), py::arg("tol") = Tolerance{});
    m.def(
        "find_kernel",
        [](const Observable& m_, const Observable& n, const Tolerance& tol) -> py::object {
            auto kernel = find_kernel(m_, n, tol);
            if (!kernel) return py::none();
            return py::cast(*kernel);
        },
        py::arg("source"), py::arg("target"), py::arg("tol") = Tolerance{});
    m.def(
        "function_of",
        [](const SharpObservable& p, const Observable& m_, const Tolerance& tol) -> py::object {
            auto f = function_of(p, m_, tol);
            if (!f) return py::none();
            return to_py(to_json(*f));
        },
        py::arg("sharp"), py::arg("observable"), py::arg("tol") = Tolerance{});
    m.def(
        "find_indicator_kernel",
        [](const Observable& m_, const Observable& n, const Tolerance& tol) -> py::object {
            auto f = find_indicator_kernel(m_, n, tol);
            if (!f) return py::none();
            return to_py(to_json(*f));
        },
        py::arg("source"), py::arg("target"), py::arg("tol") = Tolerance{});
    m.def("preceq", &preceq, py::arg("source"), py::arg("target"), py::arg("tol") = Tolerance{});
    m.def("equivalent", &equivalent, py::arg("first"), py::arg("second"),
          py::arg("tol") = Tolerance{});
    m.def("is_clean_sharp", &is_clean_sharp, py::arg("sharp"), py::arg("tol") = Tolerance{});
    m.def("finer_sharp", &finer_sharp, py::arg("sharp"), py::arg("tol") = Tolerance{});
    m.def("is_extremal", &is_extremal, py::arg("observable"), py::arg("tol") = Tolerance{});
    m.def(
        "equivalence_suite",
        [](const SharpObservable& p, const Observable& m_, const Tolerance& tol) {
            return to_py(to_json(equivalence_suite(p, m_, tol)));
        },
        py::arg("sharp"), py::arg("observable"), py::arg("tol") = Tolerance{});

    m.def(
        "random_pvm",
        [](std::uint64_t seed, int d, int k) {
            Rng rng(seed);
            return random_pvm(rng, d, k);
        },
        py::arg("seed"), py::arg("dim"), py::arg("outcomes"));
    m.def(
        "random_povm",
        [](std::uint64_t seed, int d, int k) {
            Rng rng(seed);
            return random_povm(rng, d, k);
        },
        py::arg("seed"), py::arg("dim"), py::arg("outcomes"));
    m.def(
        "random_commutative_povm",
        [](std::uint64_t seed, int d, int k) {
            Rng rng(seed);
            return random_commutative_povm(rng, d, k);
        },
        py::arg("seed"), py::arg("dim"), py::arg("outcomes"));
    m.def(
        "random_kernel",
        [](std::uint64_t seed, int n_source, int n_target) {
            Rng rng(seed);
            return random_kernel(rng, n_source, n_target);
        },
        py::arg("seed"), py::arg("source_outcomes"), py::arg("target_outcomes"));

    m.def(
        "run_suite",
        [](const std::string& name, std::uint64_t seed, const Tolerance& tol) {
            SuiteResult result = run_suite(name, seed, tol);
            py::dict out;
            out["suite"] = result.name;
            out["passed"] = result.passed;
            out["elapsed_seconds"] = result.elapsed_seconds;
            out["report"] = to_py(result.report);
            return out;
        },
        py::arg("name"), py::arg("seed"), py::arg("tol") = Tolerance{});
    m.def("suite_names", &suite_names);

    m.def(
        "observable_to_json",
        [](const Observable& m_) { return to_json(m_).dump(2); },
        py::arg("observable"));
    m.def(
        "observable_from_json",
        [](const std::string& text) { return observable_from_json(json::parse(text)); },
        py::arg("text"));
}
