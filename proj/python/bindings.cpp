#include "qhexa/cli.hpp"
#include "qhexa/conformal.hpp"
#include "qhexa/errors.hpp"
#include "qhexa/hexgeom.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace qhexa;

namespace {

const conformal::Workbench& bench() {
  static conformal::Workbench wb;
  return wb;
}

std::string py_normalize(const std::string& expr, const std::string& basis) {
  return cli::print_canonical(cli::evaluate(*cli::parse(expr), bench(), parse_basis(basis)));
}

std::string py_commutator(const std::string& a, const std::string& b, const std::string& basis) {
  Basis bs = parse_basis(basis);
  const auto& rw = bench().system(bs);
  return cli::print_canonical(rw.commutator(cli::evaluate(*cli::parse(a), bench(), bs),
                                            cli::evaluate(*cli::parse(b), bench(), bs)));
}

py::list verify(const std::string& id, std::optional<std::string> basis, std::uint64_t seed, int samples) {
  conformal::SuiteOptions opt;
  if (basis) opt.basis = parse_basis(*basis);
  opt.seed = seed;
  opt.samples = samples;
  py::list out;
  for (const auto& r : conformal::verify_suite(id, bench(), opt)) {
    py::dict d;
    d["id"] = r.id;
    d["pass"] = r.pass;
    d["residual"] = cli::print_canonical(r.residual);
    out.append(d);
  }
  return out;
}

py::tuple run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = cli::run(args, cli::Config{}, out, err);
  return py::make_tuple(code, out.str(), err.str());
}

} // namespace

PYBIND11_MODULE(_qhexa, m) {
  m.attr("__version__") = cli::kVersion;

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ConstructionError>(m, "ConstructionError", PyExc_ValueError);
  py::register_exception<ConsistencyError>(m, "ConsistencyError", PyExc_RuntimeError);

  m.def("normalize", &py_normalize, py::arg("expr"), py::arg("basis") = "B");
  m.def("commutator", &py_commutator, py::arg("a"), py::arg("b"), py::arg("basis") = "B");
  m.def("literal", [](const std::string& e) { return cli::print_canonical(cli::to_poly(*cli::parse(e))); });
  m.def("to_json", [](const std::string& e) { return cli::poly_to_json(cli::to_poly(*cli::parse(e))); });
  m.def("from_json", [](const std::string& j) { return cli::print_canonical(cli::poly_from_json(j)); });
  m.def("suite_ids", &conformal::suite_ids);
  m.def("verify_suite", &verify, py::arg("id"), py::arg("basis") = py::none(), py::arg("seed") = 12345,
        py::arg("samples") = 5);

  m.def("lift", [](const hexgeom::Vec4& x, double lam) { return hexgeom::lift({x, lam}).y; }, py::arg("x"),
        py::arg("lam") = 1.0);
  m.def("project", [](const hexgeom::Vec6& y) {
    auto p = hexgeom::project({y});
    return py::make_tuple(p.x, p.lam);
  });
  m.def("conformal_map", [](const hexgeom::Vec4& x, double lam, const hexgeom::Vec4& alpha) {
    auto p = hexgeom::conformal_map({x, lam}, {alpha});
    return py::make_tuple(p.x, p.lam);
  });
  m.def("rotate", [](const hexgeom::Vec6& y, const hexgeom::Vec4& alpha) { return hexgeom::rotate_hexa({y}, {alpha}).y; });
  m.def(
      "property_suite",
      [](std::uint64_t seed, int samples) {
        py::list out;
        for (const auto& r : hexgeom::property_suite(seed, samples)) {
          py::dict d;
          d["id"] = r.id;
          d["pass"] = r.pass;
          d["max_error"] = r.max_error;
          d["tol"] = r.tol;
          out.append(d);
        }
        return out;
      },
      py::arg("seed") = 12345, py::arg("samples") = 1000);

  m.def("run", &run, py::arg("args"));
}
