#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "artifact/scenario.hpp"
#include "artifact/twisted.hpp"

namespace py = pybind11;
using namespace artifact;

namespace {

// Rationals cross the boundary as fractions.Fraction; inputs may be anything
// whose str() is "p/q".
py::object to_fraction(const Q& q) { return py::module_::import("fractions").attr("Fraction")(q_str(q)); }

py::object to_fraction(const XQ& x) {
  if (x.is_pos_inf()) return py::float_(INFINITY);
  if (x.is_neg_inf()) return py::float_(-INFINITY);
  return to_fraction(x.value());
}

Q from_py(const py::handle& o) { return parse_q(py::str(o)); }

py::dict line_dict(const ReportLine& l) {
  py::dict d;
  d["query"] = l.query;
  d["result"] = l.result;
  d["witness"] = l.witness;
  d["status"] = l.status == ReportLine::Status::Pass ? "PASS" : l.status == ReportLine::Status::Fail ? "FAIL" : "INFO";
  d["line"] = l.str();
  return d;
}

TorusCurve one_curve(const std::string& text) {
  auto cs = parse_curves(text);
  if (cs.size() != 1) throw std::invalid_argument("expected exactly one curve");
  return cs[0];
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact Novikov, filtered-complex, torus Floer and cobordism-metric computations";

  m.def("nov_mul", [](const std::string& a, const std::string& b) { return (Nov::parse(a) * Nov::parse(b)).str(); },
        py::arg("a"), py::arg("b"), "Product of two Novikov polynomials given as text.");
  m.def("nov_add", [](const std::string& a, const std::string& b) { return (Nov::parse(a) + Nov::parse(b)).str(); },
        py::arg("a"), py::arg("b"));
  m.def("valuation", [](const std::string& a) { return to_fraction(valuation(Nov::parse(a))); }, py::arg("a"));

  m.def("boundary_level", [](const std::string& complex_text, const std::string& chain) {
          FilteredComplex cx = FilteredComplex::parse(complex_text);
          return to_fraction(boundary_level(parse_chain(chain, cx), cx).value);
        }, py::arg("complex_text"), py::arg("chain"), "Least action of a primitive of the chain (inf if none).");
  m.def("homology_rank", [](const std::string& complex_text) {
          return homology_dim(FilteredComplex::parse(complex_text).diff());
        }, py::arg("complex_text"));

  m.def("hf_rank", [](const std::string& a, const std::string& b) { return hf_rank(one_curve(a), one_curve(b)); },
        py::arg("a"), py::arg("b"), "Rank of Floer homology of two curve lines.");
  m.def("intersection_count", [](const std::string& a, const std::string& b) {
          return intersections(one_curve(a), one_curve(b)).size();
        }, py::arg("a"), py::arg("b"));
  m.def("relative_width", [](const std::string& curves_text, const std::string& l, const std::vector<std::string>& q) {
          auto cs = parse_curves(curves_text);
          std::vector<TorusCurve> qs;
          for (const std::string& n : q) qs.push_back(find_curve(cs, n));
          return to_fraction(gromov_width_rel(find_curve(cs, l), qs));
        }, py::arg("curves_text"), py::arg("l"), py::arg("q"));
  m.def("planar_shadow", [](const std::string& text) { return to_fraction(planar_shadow(PlanarDiagram::parse(text))); },
        py::arg("diagram_text"));

  m.def("run_scenario", [](const std::string& text, const std::vector<std::string>& queries) {
          Scenario sc = Scenario::parse(text);
          py::list out;
          for (const std::string& q : queries.empty() ? sc.queries : queries) out.append(line_dict(sc.run(q)));
          return out;
        }, py::arg("text"), py::arg("queries") = std::vector<std::string>{},
        "Runs the given queries (or the file's own) and returns report lines as dicts.");

  m.def("repro_lemma", [](const py::object& eps, const py::object& delta) {
          py::list out;
          for (const Check& c : repro_lemma(from_py(eps), from_py(delta))) {
            py::dict d;
            d["name"] = c.name;
            d["expected"] = c.expected;
            d["got"] = c.got;
            d["pass"] = c.pass;
            out.append(d);
          }
          return out;
        }, py::arg("eps"), py::arg("delta"), "Every number of the four-strand torus example, recomputed.");

  m.def("twisted_square_zero", [](std::uint64_t seed, int r) {
          DgTwisted t = random_dg_twisted(seed, r);
          for (std::size_t x = 0; x < t.cat->num_objects(); ++x)
            if (!check_twisted_square_zero(assemble_twisted_mu1(*t.cat, static_cast<int>(x), t.data))) return false;
          return true;
        }, py::arg("seed"), py::arg("r"));
}
