#include <pybind11/complex.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "stacky/cli.hpp"
#include "stacky/ehrhart.hpp"
#include "stacky/error.hpp"
#include "stacky/stacky.hpp"

namespace py = pybind11;
using namespace stacky;

namespace {

nlohmann::json parse(const std::string& s) {
    try {
        return nlohmann::json::parse(s);
    } catch (const nlohmann::json::exception& e) {
        throw Error("python", "SchemaViolation", e.what());
    }
}

DeltaMode mode_of(const std::string& s) { return parse_delta_mode(s); }

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Exact orbifold volumes, Ehrhart limits and BPS invariants";

    static py::exception<Error> exc(m, "StackyError");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object err = exc;
            py::object inst = err(e.what());
            inst.attr("name") = e.name();
            inst.attr("module") = e.module();
            PyErr_SetObject(err.ptr(), inst.ptr());
        }
    });

    py::class_<ExactScalar>(m, "ExactScalar")
        .def(py::init<long long>(), py::arg("value") = 0)
        .def(py::init([](const std::string& s) { return ExactScalar(parse_rat(s)); }))
        .def_static("q_power", [](const std::string& e) { return q_power(parse_rat(e)); })
        .def_static("root_of_unity", [](const std::string& a) { return root_of_unity(parse_rat(a)); })
        .def_static("from_json", [](const std::string& s) { return ExactScalar::from_json(parse(s)); })
        .def("to_json", [](const ExactScalar& s) { return s.to_json().dump(); })
        .def("eval", [](const ExactScalar& s, double q) {
            auto z = eval_numeric(s, q);
            return std::complex<double>(static_cast<double>(z.real()), static_cast<double>(z.imag()));
        })
        .def("is_zero", &ExactScalar::is_zero)
        .def("inverse", &ExactScalar::inverse)
        .def("__pow__", [](const ExactScalar& s, long long k) { return s.pow(k); })
        .def(py::self + py::self)
        .def(py::self - py::self)
        .def(py::self * py::self)
        .def(py::self / py::self)
        .def(-py::self)
        .def(py::self == py::self)
        .def(py::self != py::self)
        .def("__str__", &ExactScalar::to_string)
        .def("__repr__", [](const ExactScalar& s) { return "ExactScalar(" + s.to_string() + ")"; });

    m.def("half_l", [](long long n, int b1, int b2) { return half_L_level(n, HalfLConvention{b1, b2}); },
          py::arg("level"), py::arg("b1") = 1, py::arg("b2") = 1);

    m.def("delta_count", [](long long ms, long long s, long long r, const std::string& mode) {
        return delta_count({ms, s}, r, mode_of(mode));
    }, py::arg("m"), py::arg("s"), py::arg("r"), py::arg("mode") = "lattice");
    m.def("delta_limit", [](long long ms, long long s, const std::string& mode) {
        return delta_limit({ms, s}, mode_of(mode));
    }, py::arg("m"), py::arg("s"), py::arg("mode") = "lattice");

    m.def("ehrhart_limit", [](const std::string& polytope) {
        return ehrhart_limit(RationalPolytope::from_json(parse(polytope)));
    }, py::arg("polytope_json"));
    m.def("count_dilation", [](const std::string& polytope, long long r) {
        return count_dilation(RationalPolytope::from_json(parse(polytope)), r);
    }, py::arg("polytope_json"), py::arg("r"));

    m.def("orbifold_volume", [](const std::string& datum, const std::string& fbar) {
        return orbifold_volume(ToricStackDatum::from_json(parse(datum)), parse_fbar(fbar)).volume;
    }, py::arg("datum_json"), py::arg("fbar") = "one");
    m.def("volume_series", [](const std::string& datum, long long R, const std::string& fbar) {
        return volume_series(ToricStackDatum::from_json(parse(datum)), parse_fbar(fbar), R).coeffs;
    }, py::arg("datum_json"), py::arg("R"), py::arg("fbar") = "one");

    m.def("plid_zero", [](int grade, int levels, const std::string& mode) {
        return plid_residual(grade, levels, PlidConfig{HalfLConvention{}, mode_of(mode)}).exact_zero;
    }, py::arg("grade"), py::arg("levels"), py::arg("mode") = "lattice");

    m.def("quiver_bps", [](const std::string& quiver, int gamma_bound, int level_bound) {
        auto res = quiver_bps(Quiver::from_json(parse(quiver)), gamma_bound, level_bound);
        std::vector<std::pair<std::vector<int>, std::vector<ExactScalar>>> out;
        for (const auto& [g, v] : res.omega) {
            std::vector<ExactScalar> lv(v.levels.begin(), v.levels.begin() + std::min<long long>(level_bound, v.truncation()));
            out.emplace_back(g, lv);
        }
        return out;
    }, py::arg("quiver_json"), py::arg("gamma_bound"), py::arg("level_bound"));

    m.def("run_cli", [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code = cli::run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
    }, py::arg("args"));
}
