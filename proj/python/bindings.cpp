#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rog/classify.hpp"
#include "rog/constructions.hpp"
#include "rog/decompose.hpp"
#include "rog/isomorph.hpp"
#include "rog/json_io.hpp"
#include "rog/pencil.hpp"
#include "rog/qcqp.hpp"

namespace py = pybind11;
using namespace rog;

namespace {

std::string dump(const json::Json& j) { return j.dump(); }

std::vector<SymMatrix> syms(const std::vector<Mat>& ms) {
  return {ms.begin(), ms.end()};
}

// pybind11 holders cannot be shared_ptr<const T>.
using Held = std::shared_ptr<SpectrahedralCone>;

Held held(const ConePtr& k) { return std::const_pointer_cast<SpectrahedralCone>(k); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Rank-one-generated spectrahedral cones";

  static py::exception<Error> rog_error(m, "RogError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(rog_error, (std::string(to_string(e.kind())) + ": " + e.what()).c_str());
    }
  });

  py::class_<SpectrahedralCone, Held>(m, "Cone")
      .def_property_readonly("n", &SpectrahedralCone::n)
      .def_property_readonly("dim", &SpectrahedralCone::dim)
      .def_property_readonly("generators", &SpectrahedralCone::generators)
      .def_property_readonly("certificate_complete", &SpectrahedralCone::certificate_complete)
      .def_property_readonly("span_basis", [](const SpectrahedralCone& k) {
        std::vector<Mat> out;
        for (const SymMatrix& b : k.span_basis()) out.push_back(b.mat());
        return out;
      })
      .def("contains_ray", &SpectrahedralCone::contains_ray, py::arg("x"), py::arg("tol") = kDefaultTol)
      .def("distance_to_span", &SpectrahedralCone::distance_to_span)
      .def("to_json", [](const SpectrahedralCone& k) { return dump(json::cone_to_json(k)); })
      .def("__repr__", [](const SpectrahedralCone& k) {
        return "<Cone n=" + std::to_string(k.n()) + " dim=" + std::to_string(k.dim()) + ">";
      });

  m.def("cone_from_json", [](const std::string& s) { return held(json::cone_from(json::parse(s))); });
  m.def("build", [](const std::string& s) {
    const json::Json j = json::parse(s);
    return held(build(json::expr_from(j.contains("expr") ? j["expr"] : j)));
  }, "Build a cone from an expression tree given as JSON text.");

  m.def("full_psd_cone", [](int n) { return held(full_psd_cone(n)); });
  m.def("diagonal_cone", [](int n) { return held(diagonal_cone(n)); });
  m.def("tridiag_cone", [](int n) { return held(tridiag_cone(n)); });
  m.def("hankel_cone", [](int blocks, int m) { return held(hankel_cone(blocks, m)); },
        py::arg("blocks"), py::arg("m") = 1);
  m.def("ternary_quartic_cone", [] { return held(ternary_quartic_cone()); });
  m.def("codim1_cone", [](const Mat& q) { return held(codim1_cone(SymMatrix(q))); });
  m.def("cross_ratio_cone", [](const std::array<double, 4>& a) { return held(cross_ratio_cone(a)); });
  m.def("chordal_cone", [](int n, const std::vector<std::pair<int, int>>& edges) {
    return held(chordal_cone({n, edges}));
  });
  m.def("direct_sum", [](const std::vector<Held>& parts) {
    return held(direct_sum(std::vector<ConePtr>(parts.begin(), parts.end())));
  });
  m.def("full_extension", [](const Held& k, int n) { return held(full_extension(k, n)); });
  m.def("intertwine", [](const Held& a, const Held& b, const std::vector<int>& idx1,
                         const std::vector<int>& idx2) {
    return held(intertwine(a, b, coordinate_glue(a->n(), idx1, b->n(), idx2)));
  }, "Glue along coordinate vectors of the two cones.");
  m.def("congruence", [](const Held& k, const Mat& a) { return held(congruence(k, a)); });

  m.def("membership", [](const Held& k, const Mat& x, double tol) {
    return membership(*k, SymMatrix(x), tol);
  }, py::arg("cone"), py::arg("x"), py::arg("tol") = kDefaultTol);
  m.def("degree", [](const Held& k) { return degree(*k); });
  m.def("is_simple", [](const Held& k) { return is_simple(*k); });
  m.def("isolated_rays", [](const Held& k) { return isolated_rays(*k); });

  m.def("decompose", [](const Held& k, const Mat& x, const std::string& method) {
    const SymMatrix s(x);
    const bool by_expr = method == "expr" || (method == "auto" && k->expr() && !k->parts().empty());
    const Decomposition d = by_expr ? decompose_by_expr(*k, s) : carath_decompose(*k, s);
    std::vector<std::pair<double, Vec>> out;
    for (const RankOneAtom& a : d.atoms) out.emplace_back(a.weight, a.vector);
    return out;
  }, py::arg("cone"), py::arg("x"), py::arg("method") = "auto",
     "Rank-1 atoms (weight, unit vector) summing to X.");

  m.def("cones_isomorphic", [](const Held& a, const Held& b, int max_candidates) {
    return dump(json::iso_to_json(cones_isomorphic(*a, *b, max_candidates)));
  }, py::arg("a"), py::arg("b"), py::arg("max_candidates") = 10000);
  m.def("classify", [](const Held& k) { return classify_small(*k).str(); });

  m.def("rank1_complete", [](int rows, int cols,
                             const std::vector<std::tuple<int, int, double>>& entries, bool signs) {
    PartialMatrix p{rows, cols, {}};
    for (const auto& [i, j, v] : entries) p.entries.push_back({i, j, v});
    p.validate();
    return dump(json::completion_to_json(signs ? rank1_complete_signs(p) : rank1_complete(p)));
  }, py::arg("rows"), py::arg("cols"), py::arg("entries"), py::arg("signs") = false);
  m.def("cross_ratio", &cross_ratio);
  m.def("same_s4_orbit", &same_s4_orbit, py::arg("a"), py::arg("b"), py::arg("tol") = 1e-9);

  m.def("pencil_decompose", [](const Mat& q1, const Mat& q2) {
    return dump(json::pencil_to_json(pencil_decompose(SymMatrix(q1), SymMatrix(q2))));
  });

  m.def("solve_qcqp", [](const Mat& s, const Mat& b, const std::vector<Mat>& a, int samples,
                         std::uint64_t seed) {
    const QcqpProblem p{SymMatrix(s), SymMatrix(b), syms(a)};
    p.validate();
    QcqpOptions opt;
    opt.samples = samples;
    opt.seed = seed;
    return dump(json::certificate_to_json(certify_exactness(p, opt)));
  }, py::arg("S"), py::arg("B"), py::arg("A") = std::vector<Mat>{}, py::arg("samples") = 100000,
     py::arg("seed") = 0x5eed0c9c0001ULL);
}
