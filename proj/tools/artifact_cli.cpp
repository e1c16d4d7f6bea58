// Batch front end: scenario queries, the four-strand check table, boundary
// depths, twisted complexes, planar shadows. Prints "QUERY | RESULT | WITNESS |
// STATUS" lines and exits 0 iff every assertion passed.

#include "artifact/scenario.hpp"
#include "artifact/twisted.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace artifact;

namespace {

struct Options {
  std::string scenario, svg, cutoff, complex, spec, diagram, expect;
  std::vector<std::string> queries;
  int arity_cap = 6;
  std::uint64_t seed = 1;
  int random_r = 0;
  std::string eps = "1/8", delta = "1/256";
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& dir, const std::string& name, const std::string& body) {
  std::filesystem::create_directories(dir);
  std::ofstream out(std::filesystem::path(dir) / name);
  if (!out) throw std::runtime_error("cannot write " + dir + "/" + name);
  out << body;
}

// Prints the lines; true iff none failed.
bool emit(const std::vector<ReportLine>& lines) {
  bool ok = true;
  for (const ReportLine& l : lines) {
    std::cout << l.str() << "\n";
    ok = ok && l.status != ReportLine::Status::Fail;
  }
  return ok;
}

std::string first_word(const std::string& q) {
  std::istringstream in(q);
  std::string k;
  in >> k;
  return k;
}

bool run_scenario(const Options& o, const std::vector<std::string>& kinds) {
  if (o.scenario.empty()) throw std::runtime_error("--scenario is required");
  Scenario sc = Scenario::parse(slurp(o.scenario));
  std::vector<std::string> qs = o.queries;
  if (qs.empty())
    for (const std::string& q : sc.queries)
      if (std::find(kinds.begin(), kinds.end(), first_word(q)) != kinds.end()) qs.push_back(q);
  std::vector<ReportLine> lines;
  for (const std::string& q : qs) lines.push_back(sc.run(q));
  if (!o.svg.empty()) {
    write_file(o.svg, "curves.svg", svg_curves(sc.sys.curves()));
    for (std::size_t i = 0; i < lines.size(); ++i)
      if (!lines[i].footprint.empty())
        write_file(o.svg, "witness_" + std::to_string(i + 1) + ".svg", svg_diagram(footprint_diagram(lines[i].footprint)));
  }
  return emit(lines);
}

bool run_repro(const Options& o) {
  Q eps = parse_q(o.eps), delta = parse_q(o.delta);
  std::vector<ReportLine> lines;
  for (const Check& c : repro_lemma(eps, delta)) {
    ReportLine l;
    l.query = c.name;
    l.result = c.got;
    l.witness = "expected " + c.expected;
    l.status = c.pass ? ReportLine::Status::Pass : ReportLine::Status::Fail;
    lines.push_back(l);
  }
  if (!o.svg.empty()) {
    Scenario sc = torus_example(eps, delta);
    write_file(o.svg, "four_strands.svg", svg_curves(sc.sys.curves()));
    MetricResult d4 = d_k(sc.sys, "L'", "L", "F", 4, sc.budget);
    if (d4.witness) write_file(o.svg, "trace.svg", svg_diagram(footprint_diagram(d4.witness->all_pieces())));
  }
  return emit(lines);
}

// Queries on a filtered complex:
//   level <chain> [expect=v]    least filtration level of a primitive
//   depth <chain> [expect=v]    that level minus the action of the chain
//   homology [expect=n]         rank of homology
bool run_depth(const Options& o) {
  if (o.complex.empty()) throw std::runtime_error("--complex is required");
  FilteredComplex cx = FilteredComplex::parse(slurp(o.complex));
  std::vector<ReportLine> lines;
  for (const std::string& q : o.queries) {
    ReportLine l;
    l.query = q;
    std::string body = q, expect;
    std::size_t e = body.find(" expect=");
    if (e != std::string::npos) {
      expect = body.substr(e + 8);
      body = body.substr(0, e);
    }
    std::istringstream in(body);
    std::string kind;
    in >> kind;
    std::string rest;
    std::getline(in, rest);
    try {
      XQ got;
      if (kind == "level") {
        LevelResult r = boundary_level(parse_chain(rest, cx), cx);
        got = r.value;
        if (!r.witness.empty() && r.value.finite()) l.witness = "b = " + chain_str(r.witness, cx);
      } else if (kind == "depth") {
        got = XQ(boundary_depth_elem(parse_chain(rest, cx), cx));
      } else if (kind == "homology") {
        got = XQ(static_cast<long>(homology_dim(cx.diff())));
      } else {
        throw std::invalid_argument("unknown depth query '" + kind + "'");
      }
      l.result = report_value(got);
      if (!expect.empty()) {
        XQ want = expect == "inf" ? XQ::pos_inf() : XQ(parse_q(expect));
        l.status = want == got ? ReportLine::Status::Pass : ReportLine::Status::Fail;
      }
    } catch (const std::exception& ex) {
      l.result = std::string("error: ") + ex.what();
      l.status = expect == "error" ? ReportLine::Status::Pass : ReportLine::Status::Fail;
    }
    lines.push_back(l);
  }
  return emit(lines);
}

bool run_twisted(const Options& o) {
  CategoryPtr cat;
  TwistedData data;
  std::string source;
  if (o.random_r > 0) {
    DgTwisted t = random_dg_twisted(o.seed, o.random_r);
    cat = t.cat;
    data = t.data;
    source = "random dg r=" + std::to_string(o.random_r) + " seed=" + std::to_string(o.seed);
  } else {
    if (o.spec.empty()) throw std::runtime_error("--spec or --random is required");
    TwistedSpecFile f = parse_twisted_spec(slurp(o.spec), o.arity_cap);
    cat = f.cat;
    data = f.data;
    source = o.spec;
  }
  std::vector<ReportLine> lines;
  for (std::size_t x = 0; x < cat->num_objects(); ++x) {
    ReportLine l;
    l.query = "mu1 squared on hom(" + cat->objects()[x] + ", twisted) from " + source;
    try {
      TwistedMatrix m = assemble_twisted_mu1(*cat, static_cast<int>(x), data);
      bool zero = check_twisted_square_zero(m);
      l.result = zero ? "0" : "nonzero";
      std::string sym;
      for (const auto& row : m.symbolic)
        for (const std::string& s : row)
          if (!s.empty() && s != "0") sym += (sym.empty() ? "" : "; ") + s;
      l.witness = sym;
      l.status = zero ? ReportLine::Status::Pass : ReportLine::Status::Fail;
    } catch (const std::exception& ex) {
      l.result = std::string("error: ") + ex.what();
      l.status = ReportLine::Status::Fail;
    }
    lines.push_back(l);
  }
  return emit(lines);
}

bool run_shadow(const Options& o) {
  if (o.diagram.empty()) throw std::runtime_error("--diagram is required");
  PlanarDiagram d = PlanarDiagram::parse(slurp(o.diagram));
  ReportLine l;
  l.query = "shadow " + o.diagram;
  Q s = planar_shadow(d);
  l.result = report_value(XQ(s));
  l.witness = std::to_string(d.curves.size()) + " curves, " + std::to_string(d.ends.size()) + " ends";
  if (!o.expect.empty()) l.status = parse_q(o.expect) == s ? ReportLine::Status::Pass : ReportLine::Status::Fail;
  if (!o.svg.empty()) write_file(o.svg, "diagram.svg", svg_diagram(d));
  return emit({l});
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact filtered Floer and cobordism-metric computations"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--scenario", o.scenario, "Scenario file")->envname("ARTIFACT_SCENARIO");
  app.add_option("--query", o.queries, "Query to run (repeatable); replaces the file's queries")
      ->envname("ARTIFACT_QUERY");
  app.add_option("--svg", o.svg, "Directory for SVG figures")->envname("ARTIFACT_SVG");
  app.add_option("--cutoff", o.cutoff, "Novikov truncation exponent p/q")->envname("ARTIFACT_CUTOFF");
  app.add_option("--arity-cap", o.arity_cap, "Highest mu_d kept")->envname("ARTIFACT_ARITY_CAP");
  app.add_option("--seed", o.seed, "Seed for random instances")->envname("ARTIFACT_SEED");

  auto* floer = app.add_subcommand("floer", "Floer ranks and intersection counts of scenario curves");
  auto* metric = app.add_subcommand("metric", "d_k, d_F, d_hat and l_a queries");
  auto* width = app.add_subcommand("width", "Relative widths of scenario curves");
  auto* repro = app.add_subcommand("repro-lemma", "Recompute every number of the four-strand torus example");
  repro->add_option("--eps", o.eps, "Strand offset");
  repro->add_option("--delta", o.delta, "Handle area (below eps^2/2)");
  auto* depth = app.add_subcommand("depth", "Boundary levels in a filtered complex");
  depth->add_option("--complex", o.complex, "Complex file")->required();
  auto* twisted = app.add_subcommand("twisted-check", "Square of the twisted differential");
  twisted->add_option("--spec", o.spec, "Category and twisting cycles");
  twisted->add_option("--random", o.random_r, "Random dg instance with r + 1 objects");
  auto* shadow = app.add_subcommand("shadow", "Planar shadow of a diagram");
  shadow->add_option("--diagram", o.diagram, "Diagram file")->required();
  shadow->add_option("--expect", o.expect, "Expected shadow");

  CLI11_PARSE(app, argc, argv);
  try {
    if (!o.cutoff.empty()) set_default_cutoff(parse_q(o.cutoff));
    bool ok = false;
    if (*floer) ok = run_scenario(o, {"floer", "intersections"});
    if (*metric) ok = run_scenario(o, {"d_k", "d_F", "d_hat", "l_a"});
    if (*width) ok = run_scenario(o, {"width"});
    if (*repro) ok = run_repro(o);
    if (*depth) ok = run_depth(o);
    if (*twisted) ok = run_twisted(o);
    if (*shadow) ok = run_shadow(o);
    return ok ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
