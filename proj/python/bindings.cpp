#include "lopa/cli.hpp"
#include "lopa/error.hpp"
#include "lopa/lopatinski.hpp"
#include "lopa/report.hpp"
#include "lopa/resolvent.hpp"
#include "lopa/stability.hpp"
#include "lopa/symmetrizer.hpp"
#include "lopa/system.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace lopa;

namespace {

py::object to_python(const nlohmann::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

FirstOrderSystem make_system(const std::vector<Matrix>& a) { return FirstOrderSystem(a); }

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Uniform Lopatinski checks for hyperbolic boundary value problems";

    static py::exception<Error> error(m, "LopaError");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::set_error(error, e.what());
        }
    });

    py::class_<Frequency>(m, "Frequency")
        .def(py::init<double, Vector, double>(), py::arg("tau"), py::arg("eta"), py::arg("gamma"))
        .def(py::init<double, double>(), py::arg("tau"), py::arg("gamma"))
        .def_property_readonly("tau", &Frequency::tau)
        .def_property_readonly("eta", &Frequency::eta)
        .def_property_readonly("gamma", &Frequency::gamma)
        .def("magnitude", &Frequency::magnitude)
        .def("__repr__", [](const Frequency& f) {
            std::ostringstream s;
            s << "Frequency(tau=" << f.tau() << ", gamma=" << f.gamma() << ")";
            return s.str();
        });

    m.def("validate_system", [](const std::vector<Matrix>& a) { return to_python(encode_validation(validate_system(make_system(a)))); },
          py::arg("A"));
    m.def("check_hyperbolicity",
          [](const std::vector<Matrix>& a, Index samples, double tol) {
              return to_python(encode_hyperbolicity(check_hyperbolicity(make_system(a), samples, tol)));
          },
          py::arg("A"), py::arg("samples") = 64, py::arg("tol") = 1e-8);
    m.def("incoming_count", [](const std::vector<Matrix>& a) { return make_system(a).incoming_count(); }, py::arg("A"));

    m.def("find_symmetrizer",
          [](const std::vector<Matrix>& a) -> py::object {
              const auto search = find_symmetrizer(make_system(a));
              if (!search.feasible || !search.symmetrizer) return py::none();
              return py::cast(search.symmetrizer->S);
          },
          py::arg("A"), "Symmetrizer S, or None when the search fails.");
    m.def("check_maximal_dissipativity",
          [](const Matrix& s, const std::vector<Matrix>& a, const CMatrix& boundary) {
              const auto sys = make_system(a);
              return to_python(encode_certificate(check_maximal_dissipativity(make_symmetrizer(s, sys), sys, boundary)));
          },
          py::arg("S"), py::arg("A"), py::arg("boundary"));
    m.def("build_dissipative_bc",
          [](const Matrix& s, const std::vector<Matrix>& a) {
              const auto sys = make_system(a);
              return build_dissipative_bc(make_symmetrizer(s, sys), sys);
          },
          py::arg("S"), py::arg("A"));
    m.def("adjoint_bc", [](const std::vector<Matrix>& a, const CMatrix& b) { return adjoint_bc(make_system(a), b); },
          py::arg("A"), py::arg("boundary"));

    m.def("resolvent_matrix",
          [](const std::vector<Matrix>& a, const Frequency& f) -> CMatrix { return resolvent_matrix(make_system(a), f).matrix(); },
          py::arg("A"), py::arg("frequency"));
    m.def("stable_subspace",
          [](const std::vector<Matrix>& a, const Frequency& f) {
              const auto split = stable_subspace(resolvent_matrix(make_system(a), f));
              return py::make_tuple(split.stable.basis, split.stable.generator);
          },
          py::arg("A"), py::arg("frequency"), "(basis, generator) of the stable subspace.");
    m.def("lopatinski_value",
          [](const std::vector<Matrix>& a, const CMatrix& b, const Frequency& f) {
              return to_python(encode_lopatinski_value(lopatinski_value(make_system(a), BoundarySymbol::constant(b), f)));
          },
          py::arg("A"), py::arg("boundary"), py::arg("frequency"));
    m.def("uniform_scan",
          [](const std::vector<Matrix>& a, const CMatrix& b, double gamma_min, int resolution, int threads) {
              ScanGrid grid;
              grid.gamma_min = gamma_min;
              grid.resolution = resolution;
              ScanOptions opts;
              opts.threads = threads;
              return to_python(encode_scan(uniform_scan(make_system(a), BoundarySymbol::constant(b), grid, opts)));
          },
          py::arg("A"), py::arg("boundary"), py::arg("gamma_min") = 1e-3, py::arg("resolution") = 24,
          py::arg("threads") = 1);
    m.def("hemisphere_grid", &hemisphere_grid, py::arg("d"), py::arg("gamma_min"), py::arg("resolution"));
    m.def("box_grid", &box_grid, py::arg("d"), py::arg("gamma_min"), py::arg("gamma_max"), py::arg("tangential_max"),
          py::arg("gamma_levels"), py::arg("tangential_levels"));
    m.def("kreiss_constant",
          [](const std::vector<Matrix>& a, const CMatrix& b, const std::vector<Frequency>& freqs, int trials,
             std::uint64_t seed, int threads) {
              TrialOptions opts;
              opts.trials = trials;
              opts.seed = seed;
              opts.threads = threads;
              return to_python(encode_stability(kreiss_constant(make_system(a), BoundarySymbol::constant(b), freqs, opts)));
          },
          py::arg("A"), py::arg("boundary"), py::arg("frequencies"), py::arg("trials") = 16, py::arg("seed") = 0,
          py::arg("threads") = 1);

    m.def("run_cli",
          [](const std::vector<std::string>& args) {
              std::ostringstream out, err;
              int code;
              {
                  py::gil_scoped_release release;
                  code = cli::run(args, out, err);
              }
              return py::make_tuple(code, out.str(), err.str());
          },
          py::arg("args"), "Run the command line tool in process; returns (exit_code, stdout, stderr).");
}
