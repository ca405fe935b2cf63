#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "bilearn/bridge.hpp"
#include "bilearn/cli.hpp"
#include "bilearn/diff.hpp"
#include "bilearn/relabel.hpp"
#include "bilearn/sampling.hpp"
#include "bilearn/spec.hpp"

namespace py = pybind11;
using namespace bilearn;

namespace {

py::tuple run_cli(const std::vector<std::string>& args)
{
    std::vector<const char*> argv{"bilearn"};
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return py::make_tuple(code, out.str(), err.str());
}

} // namespace

PYBIND11_MODULE(_bilearn, m)
{
    m.doc() = "Finite lenses, symmetric lenses, learners and gradient-descent learners";

    static py::exception<Error> error(m, "Error");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) {
                std::rethrow_exception(p);
            }
        } catch (const Error& e) {
            py::object exc = py::reinterpret_borrow<py::object>(error.ptr())(e.what());
            exc.attr("kind") = std::string(to_string(e.kind()));
            PyErr_SetObject(error.ptr(), exc.ptr());
        }
    });

    // finite sets and functions
    py::class_<FiniteSet>(m, "FiniteSet")
        .def(py::init([](std::vector<std::string> labels) { return FiniteSet::atomic(std::move(labels)); }),
             py::arg("labels"))
        .def_static("product", &FiniteSet::product, py::arg("factors"))
        .def_static("unit", &FiniteSet::unit)
        .def_property_readonly("size", &FiniteSet::size)
        .def_property_readonly("is_atomic", &FiniteSet::is_atomic)
        .def_property_readonly("labels", &FiniteSet::labels)
        .def_property_readonly("factors", &FiniteSet::factors)
        .def("render", &FiniteSet::render)
        .def("find", &FiniteSet::find)
        .def("to_tuple", &FiniteSet::to_tuple)
        .def("from_tuple", [](const FiniteSet& s, const std::vector<Index>& t) { return s.from_tuple(t); })
        .def("__len__", &FiniteSet::size)
        .def("__eq__", [](const FiniteSet& a, const FiniteSet& b) { return a == b; })
        .def("__repr__", &FiniteSet::describe);

    py::class_<FinFn>(m, "FinFn")
        .def(py::init<FiniteSet, FiniteSet, std::vector<Index>>(), py::arg("dom"), py::arg("cod"), py::arg("table"))
        .def_property_readonly("dom", &FinFn::dom)
        .def_property_readonly("cod", &FinFn::cod)
        .def_property_readonly("table", &FinFn::table)
        .def("__call__", &FinFn::operator())
        .def("is_surjective", &FinFn::is_surjective)
        .def("is_bijective", &FinFn::is_bijective)
        .def("__eq__", [](const FinFn& a, const FinFn& b) { return a == b; });

    m.def("identity_fn", &identity_fn);
    m.def("projection", &projection);
    m.def("numbered_set", &numbered_set);

    // lenses
    py::class_<LawReport>(m, "LawReport")
        .def_readonly("law", &LawReport::law)
        .def_readonly("passed", &LawReport::passed)
        .def_readonly("witness", &LawReport::witness)
        .def("describe", &LawReport::describe)
        .def("__bool__", [](const LawReport& r) { return r.passed; });

    py::class_<AsymmetricLens>(m, "AsymmetricLens")
        .def(py::init<FinFn, FinFn>(), py::arg("get"), py::arg("put"))
        .def_property_readonly("src", &AsymmetricLens::src)
        .def_property_readonly("dst", &AsymmetricLens::dst)
        .def_property_readonly("get_fn", py::overload_cast<>(&AsymmetricLens::get, py::const_))
        .def_property_readonly("put_fn", py::overload_cast<>(&AsymmetricLens::put, py::const_))
        .def("get", py::overload_cast<Index>(&AsymmetricLens::get, py::const_), py::arg("a"))
        .def("put", py::overload_cast<Index, Index>(&AsymmetricLens::put, py::const_), py::arg("b"), py::arg("a"))
        .def("__eq__", [](const AsymmetricLens& a, const AsymmetricLens& b) { return a == b; });

    m.def("lens_compose", &lens_compose);
    m.def("lens_identity", &lens_identity);
    m.def("lens_tensor", &lens_tensor);
    m.def("constant_complement", &constant_complement);
    m.def("check_putget", &check_putget);
    m.def("check_getput", &check_getput);
    m.def("random_lens", &random_lens, py::arg("src"), py::arg("dst"), py::arg("seed"));
    m.def("random_well_behaved_lens", &random_well_behaved_lens, py::arg("src"), py::arg("dst"), py::arg("seed"));

    // spans
    py::class_<LensSpan>(m, "LensSpan")
        .def(py::init<AsymmetricLens, AsymmetricLens>(), py::arg("left"), py::arg("right"))
        .def_property_readonly("head", &LensSpan::head)
        .def_property_readonly("left", &LensSpan::left)
        .def_property_readonly("right", &LensSpan::right)
        .def("__eq__", [](const LensSpan& a, const LensSpan& b) { return a == b; });

    m.def("span_identity", &span_identity);
    m.def("span_tensor", &span_tensor);
    m.def("span_compose", &span_compose);
    m.def("span_compose_cc", &span_compose_cc);
    m.def("span_minimize", &span_minimize);
    m.def("span_equiv", &span_equiv);
    m.def("span_equiv_oracle", &span_equiv_oracle, py::arg("s"), py::arg("t"), py::arg("max_zigzag") = 3,
          py::arg("head_cap") = kDefaultOracleHeadCap);
    m.def("random_span", &random_span, py::arg("head"), py::arg("a1"), py::arg("a2"), py::arg("seed"));
    m.def("random_cc_span", &random_cc_span, py::arg("p"), py::arg("a1"), py::arg("a2"), py::arg("seed"));
    m.def("duplicate_state", &duplicate_state, py::arg("span"), py::arg("x"), py::arg("seed"));

    // learners
    py::class_<Learner>(m, "Learner")
        .def(py::init<FiniteSet, FinFn, FinFn, FinFn>(), py::arg("params"), py::arg("impl"), py::arg("update"),
             py::arg("request"))
        .def_property_readonly("params", &Learner::params)
        .def_property_readonly("src", &Learner::src)
        .def_property_readonly("dst", &Learner::dst)
        .def("impl", py::overload_cast<Index, Index>(&Learner::impl, py::const_), py::arg("p"), py::arg("a"))
        .def("update", py::overload_cast<Index, Index, Index>(&Learner::update, py::const_), py::arg("b"),
             py::arg("p"), py::arg("a"))
        .def("request", py::overload_cast<Index, Index, Index>(&Learner::request, py::const_), py::arg("b"),
             py::arg("p"), py::arg("a"))
        .def("__eq__", [](const Learner& a, const Learner& b) { return a == b; });

    m.def("learner_compose", [](const Learner& a, const Learner& b) { return learner_compose(a, b); });
    m.def("learner_tensor", &learner_tensor);
    m.def("learner_identity", &learner_identity);
    m.def("learner_minimize", &learner_minimize);
    m.def("learner_equiv", &learner_equiv);
    m.def("check_iur", &check_iur);
    m.def("check_uri", &check_uri);
    m.def("random_learner", &random_learner, py::arg("params"), py::arg("src"), py::arg("dst"), py::arg("seed"));

    // functors
    py::class_<FunctorReport>(m, "FunctorReport")
        .def_readonly("descriptor", &FunctorReport::descriptor)
        .def_readonly("left_side", &FunctorReport::left_side)
        .def_readonly("right_side", &FunctorReport::right_side)
        .def_readonly("equal_exact", &FunctorReport::equal_exact)
        .def_readonly("equal_up_to_equiv", &FunctorReport::equal_up_to_equiv)
        .def_readonly("detail", &FunctorReport::detail)
        .def("passed", &FunctorReport::passed);

    m.def("lens_to_learner", &lens_to_learner);
    m.def("learner_to_lens", &learner_to_lens);
    m.def("learner_to_span", &learner_to_span);
    m.def("verify_functor_composition",
          [](const Learner& a, const Learner& b) { return verify_functor_composition(a, b); });

    // text format
    py::class_<SpecDocument>(m, "SpecDocument")
        .def("names", &SpecDocument::names)
        .def("kind_of", [](const SpecDocument& d, const std::string& n) { return std::string(to_string(d.kind_of(n))); })
        .def("set", &SpecDocument::set)
        .def("fn", &SpecDocument::fn)
        .def("lens", &SpecDocument::lens)
        .def("span", &SpecDocument::span)
        .def("learner", &SpecDocument::learner);
    m.def("parse_spec_text", &parse_spec_text, py::arg("text"), py::arg("source") = "<input>");
    m.def("write_spec", &write_spec);

    // real-vector learners
    py::class_<ParaFn>(m, "ParaFn")
        .def_property_readonly("name", &ParaFn::name)
        .def_property_readonly("pdim", &ParaFn::pdim)
        .def_property_readonly("adim", &ParaFn::adim)
        .def_property_readonly("bdim", &ParaFn::bdim)
        .def("forward", &ParaFn::forward, py::arg("p"), py::arg("a"))
        .def("vjp", [](const ParaFn& f, const Vector& p, const Vector& a, const Vector& db) {
            VjpResult r = f.vjp(p, a, db);
            return py::make_tuple(r.dparams, r.dinput);
        });

    py::enum_<Activation>(m, "Activation")
        .value("tanh", Activation::Tanh)
        .value("sigmoid", Activation::Sigmoid)
        .value("relu", Activation::Relu);

    m.def("para_linear", &para_linear, py::arg("rows"), py::arg("cols"));
    m.def("para_bias", &para_bias);
    m.def("para_activation", &para_activation);
    m.def("para_identity", &para_identity);
    m.def("para_compose", &para_compose);
    m.def("parse_model", &parse_model);

    py::class_<SmoothLearner>(m, "SmoothLearner")
        .def_property_readonly("para", &SmoothLearner::para)
        .def_property_readonly("eps", &SmoothLearner::eps)
        .def("impl", &SmoothLearner::impl, py::arg("p"), py::arg("a"))
        .def("update", &SmoothLearner::update, py::arg("b"), py::arg("p"), py::arg("a"))
        .def("request", &SmoothLearner::request, py::arg("b"), py::arg("p"), py::arg("a"));

    m.def("gradient_learner", &gradient_learner, py::arg("f"), py::arg("eps"));
    m.def("smooth_compose", &smooth_compose);
    m.def("compose_layers", &compose_layers, py::arg("layers"), py::arg("eps"));
    m.def("backprop_deviation", &backprop_deviation, py::arg("layers"), py::arg("eps"), py::arg("points"),
          py::arg("seed"));
    m.def(
        "sgd_train",
        [](const SmoothLearner& l, const std::vector<std::pair<Vector, Vector>>& data, std::size_t steps,
           std::uint64_t seed, const Vector& initial) {
            std::vector<TrainSample> samples;
            for (const auto& [a, b] : data) {
                samples.push_back({a, b});
            }
            const TrainTrace t = sgd_train(l, samples, steps, seed, initial);
            std::vector<double> losses;
            for (const auto& r : t.records) {
                losses.push_back(r.loss);
            }
            return py::make_tuple(t.final_params(), losses);
        },
        py::arg("learner"), py::arg("data"), py::arg("steps"), py::arg("seed"), py::arg("initial"),
        "Returns (final parameters, per-step dataset loss).");

    m.def("run_cli", &run_cli, py::arg("args"), "Runs the command-line tool; returns (exit code, stdout, stderr).");
}
