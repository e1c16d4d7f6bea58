#include "artifact/scenario.hpp"

#include <regex>
#include <sstream>
#include <stdexcept>

namespace artifact {

std::string ReportLine::str() const {
  const char* s = status == Status::Pass ? "PASS" : status == Status::Fail ? "FAIL" : "INFO";
  return query + " | " + result + " | " + (witness.empty() ? "-" : witness) + " | " + s;
}

namespace {

std::vector<std::string> words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

// Whole-line comments only: '#' is also the surgery operator.
std::string strip_comment(const std::string& line) {
  std::size_t f = line.find_first_not_of(" \t");
  return f != std::string::npos && line[f] == '#' ? std::string() : line;
}

std::map<std::string, std::string> options(const std::vector<std::string>& w, std::size_t from) {
  std::map<std::string, std::string> out;
  for (std::size_t i = from; i < w.size(); ++i) {
    std::size_t eq = w[i].find('=');
    if (eq == std::string::npos) continue;
    std::string k = w[i].substr(0, eq);
    if (!k.empty() && k.back() == '<') {
      out["expect<="] = w[i].substr(eq + 1);
      continue;
    }
    out[k] = w[i].substr(eq + 1);
  }
  return out;
}

std::string xq_text(const XQ& v) {
  if (v.is_pos_inf()) return "inf";
  if (v.is_neg_inf()) return "-inf";
  return q_str(v.value());
}

}  // namespace

std::optional<Q> Scenario::value(const std::string& token) const {
  if (token == "inf") return std::nullopt;
  try {
    return parse_q(token);
  } catch (const std::exception&) {
  }
  static const std::regex re(R"(^([0-9]+(?:/[0-9]+)?)?\*?([A-Za-z_][A-Za-z_0-9]*)(\^2)?$)");
  std::smatch m;
  if (!std::regex_match(token, m, re)) throw std::invalid_argument("bad value: " + token);
  auto it = params.find(m[2].str());
  if (it == params.end()) throw std::invalid_argument("unknown parameter: " + m[2].str());
  Q v = it->second;
  if (m[3].matched) v = Q(v * v);
  if (m[1].matched) v = Q(parse_q(m[1].str()) * v);
  return v;
}

Scenario Scenario::parse(const std::string& text) {
  Scenario sc;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = strip_comment(raw);
    std::vector<std::string> w = words(line);
    if (w.empty()) continue;
    try {
      const std::string& h = w[0];
      if (h == "param") {
        if (w.size() != 4 || w[2] != "=") throw std::invalid_argument("expected 'param name = value'");
        auto v = sc.value(w[3]);
        if (!v) throw std::invalid_argument("parameters must be finite");
        sc.params[w[1]] = *v;
      } else if (h == "curve") {
        for (const TorusCurve& c : parse_curves(line)) sc.sys.add_curve(c);
      } else if (h == "surgery") {
        // surgery R = A # B at (x,y) area=v [column=c]
        if (w.size() < 7 || w[2] != "=" || w[4] != "#" || w[6] != "at")
          throw std::invalid_argument("expected 'surgery R = A # B at (x,y) area=v'");
        std::size_t open = line.find('('), close = line.find(')');
        if (open == std::string::npos || close == std::string::npos) throw std::invalid_argument("missing point");
        Pt at = parse_pt(line.substr(open, close - open + 1));
        auto opt = options(words(line.substr(close + 1)), 0);
        if (!opt.count("area")) throw std::invalid_argument("surgery needs area=");
        auto area = sc.value(opt["area"]);
        if (!area) throw std::invalid_argument("handle area must be finite");
        std::optional<Q> col;
        if (opt.count("column")) col = sc.value(opt["column"]);
        sc.sys.add_surgery(w[1], w[3], w[5], at, *area, col);
      } else if (h == "suspension") {
        auto opt = options(w, 3);
        if (w.size() < 4 || !opt.count("length")) throw std::invalid_argument("expected 'suspension A B length=v'");
        auto len = sc.value(opt["length"]);
        if (!len) throw std::invalid_argument("length must be finite");
        std::optional<Q> col;
        if (opt.count("column")) col = sc.value(opt["column"]);
        sc.sys.add_suspension(w[1], w[2], *len, col);
      } else if (h == "uturn") {
        if (w.size() != 2) throw std::invalid_argument("expected 'uturn B'");
        sc.sys.add_uturn(w[1]);
      } else if (h == "move") {
        // move NAME: TOP -> E1 E2 ... shadow=v [column=c]
        std::size_t colon = line.find(':'), arrow = line.find("->");
        if (colon == std::string::npos || arrow == std::string::npos) throw std::invalid_argument("expected 'move NAME: TOP -> ENDS shadow=v'");
        std::string name = words(line.substr(4, colon - 4)).at(0);
        std::string top = words(line.substr(colon + 1, arrow - colon - 1)).at(0);
        std::vector<std::string> ends;
        std::map<std::string, std::string> opt;
        for (const std::string& t : words(line.substr(arrow + 2))) {
          if (t.find('=') != std::string::npos) {
            auto o = options({t}, 0);
            opt.insert(o.begin(), o.end());
          } else {
            ends.push_back(t);
          }
        }
        auto shadow = sc.value(opt.count("shadow") ? opt["shadow"] : "0");
        if (!shadow) throw std::invalid_argument("shadow must be finite");
        std::optional<Q> col;
        if (opt.count("column")) col = sc.value(opt["column"]);
        sc.sys.add_declared(name, top, ends, *shadow, col);
      } else if (h == "family") {
        std::size_t colon = line.find(':');
        if (colon == std::string::npos) throw std::invalid_argument("expected 'family NAME: members'");
        std::string name = words(line.substr(6, colon - 6)).at(0);
        sc.sys.set_family(name, words(line.substr(colon + 1)));
      } else if (h == "probe") {
        for (std::size_t i = 1; i < w.size(); ++i) sc.sys.add_probe(w[i]);
      } else if (h == "monotone") {
        auto opt = options(w, 1);
        if (!opt.count("A_L")) throw std::invalid_argument("expected 'monotone A_L=v'");
        auto a = sc.value(opt["A_L"]);
        if (!a) throw std::invalid_argument("A_L must be finite");
        sc.sys.set_monotone(*a);
      } else if (h == "budget") {
        auto opt = options(w, 1);
        if (opt.count("nodes")) sc.budget.max_nodes = std::stoul(opt["nodes"]);
        if (opt.count("depth")) sc.budget.max_depth = std::stoul(opt["depth"]);
      } else if (h == "query") {
        sc.queries.push_back(line.substr(line.find("query") + 5));
        std::string& q = sc.queries.back();
        q.erase(0, q.find_first_not_of(' '));
        q.erase(q.find_last_not_of(" \t\r") + 1);
      } else {
        throw std::invalid_argument("unknown directive '" + h + "'");
      }
    } catch (const std::exception& e) {
      throw std::invalid_argument("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return sc;
}

namespace {

// Compares an interval result with expect=[l,u], expect=v or expect<=v.
ReportLine::Status judge(const Scenario& sc, const std::map<std::string, std::string>& opt, const XQ& lo,
                         const XQ& hi) {
  auto to_xq = [&](const std::string& t) {
    auto v = sc.value(t);
    return v ? XQ(*v) : XQ::pos_inf();
  };
  if (opt.count("expect")) {
    std::string e = opt.at("expect");
    XQ el, eh;
    if (!e.empty() && e.front() == '[') {
      std::size_t comma = e.find(',');
      if (comma == std::string::npos || e.back() != ']') throw std::invalid_argument("bad interval " + e);
      el = to_xq(e.substr(1, comma - 1));
      eh = to_xq(e.substr(comma + 1, e.size() - comma - 2));
    } else {
      el = eh = to_xq(e);
    }
    return lo == el && hi == eh ? ReportLine::Status::Pass : ReportLine::Status::Fail;
  }
  if (opt.count("expect<=")) return hi <= to_xq(opt.at("expect<=")) ? ReportLine::Status::Pass : ReportLine::Status::Fail;
  return ReportLine::Status::Info;
}

std::string family_of(const std::map<std::string, std::string>& opt) {
  return opt.count("family") ? opt.at("family") : "F";
}

int int_opt(const std::map<std::string, std::string>& opt, const std::string& k, int dflt) {
  return opt.count(k) ? std::stoi(opt.at(k)) : dflt;
}

}  // namespace

ReportLine Scenario::run(const std::string& query) const {
  ReportLine r;
  r.query = query;
  std::vector<std::string> w = words(query);
  try {
    if (w.empty()) throw std::invalid_argument("empty query");
    auto opt = options(w, 1);
    const std::string& kind = w[0];
    SearchBudget b = budget;
    if (opt.count("top")) b.top_end_only = opt.at("top") == "1";
    auto report = [&](const MetricResult& m) {
      r.result = m.str() + " ~ [" + m.lower.dec() + ", " + m.upper.dec() + "]" + (m.exhausted ? " (budget exhausted)" : "") +
                 (m.contradiction ? " (lower > upper)" : "");
      r.witness = (m.witness ? m.witness->str() : std::string("none")) + "; lower from " + m.certificate;
      if (m.witness) r.footprint = m.witness->all_pieces();
      r.status = m.contradiction ? ReportLine::Status::Fail : judge(*this, opt, m.lower, m.upper);
    };
    if (kind == "d_k" || kind == "d_F") {
      if (w.size() < 3) throw std::invalid_argument(kind + " needs two curves");
      report(kind == "d_k" ? d_k(sys, w[1], w[2], family_of(opt), int_opt(opt, "k", 0), b)
                           : d_F(sys, w[1], w[2], family_of(opt), int_opt(opt, "k", 4), b));
    } else if (kind == "d_hat") {
      if (w.size() < 5) throw std::invalid_argument("d_hat needs two curves and two families");
      report(d_hat(sys, w[1], w[2], w[3], w[4], int_opt(opt, "k", 4), b));
    } else if (kind == "l_a") {
      if (w.size() < 3) throw std::invalid_argument("l_a needs two curves");
      std::optional<Q> a = opt.count("a") ? value(opt.at("a")) : std::nullopt;
      LengthResult l = cone_length(sys, w[1], w[2], family_of(opt), a, int_opt(opt, "max_k", 4), b);
      r.result = l.str();
      r.witness = l.certificate;
      XQ hi = l.upper ? XQ(long(*l.upper)) : XQ::pos_inf();
      r.status = judge(*this, opt, XQ(long(l.lower)), hi);
    } else if (kind == "floer") {
      if (w.size() < 3) throw std::invalid_argument("floer needs two curves");
      const TorusCurve& a = sys.curve(w[1]);
      const TorusCurve& b = sys.curve(w[2]);
      auto fc = floer_complex(a, b);
      std::size_t rk = homology_dim(fc.diff());
      r.result = std::to_string(rk);
      r.witness = std::to_string(fc.size()) + " generators, " + std::to_string(floer_bigons(a, b).size()) + " bigons";
      r.status = judge(*this, opt, XQ(long(rk)), XQ(long(rk)));
    } else if (kind == "intersections") {
      if (w.size() < 3) throw std::invalid_argument("intersections needs two curves");
      auto xs = intersections(sys.curve(w[1]), sys.curve(w[2]));
      r.result = std::to_string(xs.size());
      for (const auto& x : xs) r.witness += (r.witness.empty() ? "" : " ") + pt_str(x.point);
      r.status = judge(*this, opt, XQ(long(xs.size())), XQ(long(xs.size())));
    } else if (kind == "width") {
      // width L | Q1 Q2 ...
      if (w.size() < 2) throw std::invalid_argument("width needs a curve");
      std::vector<TorusCurve> qs;
      std::size_t i = 2;
      if (i < w.size() && w[i] == "|") ++i;
      for (; i < w.size() && w[i].find('=') == std::string::npos; ++i) qs.push_back(sys.curve(w[i]));
      Q v = gromov_width_rel(sys.curve(w[1]), qs);
      r.result = report_value(XQ(v));
      r.status = judge(*this, opt, XQ(v), XQ(v));
    } else {
      throw std::invalid_argument("unknown query '" + kind + "'");
    }
  } catch (const std::exception& e) {
    r.result = std::string("error: ") + e.what();
    bool expect_error = query.find("expect=error") != std::string::npos;
    r.status = expect_error ? ReportLine::Status::Pass : ReportLine::Status::Fail;
  }
  return r;
}

std::vector<ReportLine> Scenario::run_all() const {
  std::vector<ReportLine> out;
  for (const std::string& q : queries) out.push_back(run(q));
  return out;
}

// ---------------------------------------------------------------- the four-strand example

namespace {

void check_params(const Q& eps, const Q& delta) {
  if (eps <= 0 || eps >= Q(1, 4)) throw std::invalid_argument("eps must lie in (0, 1/4)");
  if (delta <= 0) throw std::invalid_argument("delta must be positive");
  if (delta >= Q(eps * eps / 2)) throw std::invalid_argument("delta must be smaller than eps^2/2");
}

std::array<Q, 4> strands(const Q& eps) {
  return {Q(Q(-1, 2) - eps), Q(Q(-1, 2) + eps), Q(Q(1, 2) - eps), Q(Q(1, 2) + eps)};
}

}  // namespace

TorusCurve drawn_l_prime(const Q& eps, const Q& delta) {
  check_params(eps, delta);
  auto x = strands(eps);
  Q a = handle_side(delta), b = Q(delta / a);
  auto P = [](const Q& u, const Q& v) { return Pt(u, v); };
  return TorusCurve("L'", {P(-1, 0), P(x[0] - a, 0), P(x[0] - a, b), P(x[0], b), P(x[0], 2 - b), P(x[0] + a, 2 - b),
                           P(x[0] + a, 2), P(x[1] - a, 2), P(x[1] - a, 2 - b), P(x[1], 2 - b), P(x[1], b),
                           P(x[1] + a, b), P(x[1] + a, 0), P(x[2] - a, 0), P(x[2] - a, -b), P(x[2], -b),
                           P(x[2], -2 + b), P(x[2] + a, -2 + b), P(x[2] + a, -2), P(x[3] - a, -2),
                           P(x[3] - a, -2 + b), P(x[3], -2 + b), P(x[3], -b), P(x[3] + a, -b), P(x[3] + a, 0),
                           P(1, 0)});
}

Scenario torus_example(const Q& eps, const Q& delta) {
  check_params(eps, delta);
  Scenario sc;
  sc.params["eps"] = eps;
  sc.params["d"] = delta;
  auto x = strands(eps);
  MoveSystem& s = sc.sys;
  s.add_curve(TorusCurve("L", {Pt(Q(-1), Q(0)), Pt(Q(1), Q(0))}));
  s.add_curve(TorusCurve("N", {Pt(Q(-1), Q(-2 * eps)), Pt(Q(1), Q(-2 * eps))}));
  for (int i = 0; i < 4; ++i) {
    std::string n = "S" + std::to_string(i + 1);
    s.add_curve(TorusCurve(n, {Pt(x[i], Q(-1)), Pt(x[i], Q(1))}));
  }
  // S2 and S3 enter the composite against their orientation
  s.add_curve(TorusCurve("S2-", {Pt(x[1], Q(1)), Pt(x[1], Q(-1))}));
  s.add_curve(TorusCurve("S3-", {Pt(x[2], Q(1)), Pt(x[2], Q(-1))}));
  // the two left handles share a footprint column, as do the two right ones
  s.add_surgery("L''", "L", "S1", Pt(x[0], Q(0)), delta, Q(0));
  s.add_surgery("L''2", "L''", "S2-", Pt(x[1], Q(0)), delta, Q(0));
  s.add_surgery("L''23", "L''2", "S3-", Pt(x[2], Q(0)), delta, Q(1));
  s.add_surgery("L'", "L''23", "S4", Pt(x[3], Q(0)), delta, Q(1));
  s.add_suspension("L'", "L", Q(4 * eps));
  s.set_family("F", {"S1", "S2", "S3", "S4"});
  return sc;
}

std::vector<Check> repro_lemma(const Q& eps, const Q& delta) {
  Scenario sc = torus_example(eps, delta);
  const MoveSystem& s = sc.sys;
  std::vector<Check> out;
  auto add = [&](std::string name, std::string expected, std::string got, bool pass) {
    out.push_back({std::move(name), std::move(expected), std::move(got), pass});
  };
  const TorusCurve& lp = s.curve("L'");
  const TorusCurve& l = s.curve("L");
  const TorusCurve& n = s.curve("N");
  TorusCurve drawn = drawn_l_prime(eps, delta);
  add("L' matches the drawn curve", "same point set", same_point_set(lp, drawn) ? "same" : "different",
      same_point_set(lp, drawn));
  add("L' Hamiltonian isotopic to L", "flux difference 0 mod 4", q_str(Q(lp.flux() - l.flux())),
      hamiltonian_isotopic(lp, l));

  Q w = gromov_width_rel(lp, {l});
  add("width of L' relative to L", q_str(Q(8 * eps)), q_str(w), w == 8 * eps);

  MetricResult d0 = d_k(s, "L'", "L", "F", 0, sc.budget);
  XQ four_eps(Q(4 * eps));
  add("d_0(L', L)", "[" + q_str(Q(4 * eps)) + ", " + q_str(Q(4 * eps)) + "]", d0.str(),
      d0.lower == four_eps && d0.upper == four_eps);

  MetricResult d4 = d_k(s, "L'", "L", "F", 4, sc.budget);
  XQ two_d(Q(2 * delta));
  add("d_4(L', L) upper", "<= " + q_str(Q(2 * delta)), xq_text(d4.upper), d4.upper <= two_d);
  Q trace = d4.witness ? footprint_shadow(d4.witness->all_pieces()) : Q(-1);
  add("shadow of the 4-handle trace", q_str(Q(2 * delta)), q_str(trace), trace == 2 * delta);

  LengthResult l_abs = cone_length(s, "L'", "L", "F", std::nullopt, 4, sc.budget);
  add("l(L', L)", "0", l_abs.str(), l_abs.upper && *l_abs.upper == 0);
  LengthResult l2d = cone_length(s, "L'", "L", "F", Q(2 * delta), 4, sc.budget);
  add("l_2d(L', L)", "[4, 4]", l2d.str(), l2d.lower == 4 && l2d.upper && *l2d.upper == 4);

  std::size_t nl = intersections(n, lp).size();
  std::size_t hf_s = 0;
  for (int i = 1; i <= 4; ++i) hf_s += hf_rank(n, s.curve("S" + std::to_string(i)));
  std::size_t hf_l = hf_rank(n, l);
  add("#(N cap L')", "4", std::to_string(nl), nl == 4);
  add("sum of rk HF(N, S_i)", "4", std::to_string(hf_s), hf_s == 4);
  add("rk HF(N, L)", "0", std::to_string(hf_l), hf_l == 0);
  add("#(N cap L') >= rk HF(N, L) + sum rk HF(N, S_i)", "equality", std::to_string(nl) + " vs " + std::to_string(hf_l + hf_s),
      nl == hf_l + hf_s);

  std::vector<TorusCurve> sys{l, s.curve("S1"), s.curve("S2"), s.curve("S3"), s.curve("S4")};
  std::vector<Pt> sigma;
  for (int i = 1; i <= 4; ++i) sigma.push_back(intersections(l, s.curve("S" + std::to_string(i)))[0].point);
  XQ ds = gromov_width_double_points(sys, sigma, {n});
  add("double point width of L cup S_i relative to N", ">= " + q_str(Q(4 * eps * eps)), xq_text(ds),
      ds >= XQ(Q(4 * eps * eps)));

  MetricResult d1 = d_k(s, "L''", "L", "F", 1, sc.budget);
  XQ dd(delta);
  add("d_1(L'', L)", "[" + q_str(delta) + ", " + q_str(delta) + "]", d1.str(), d1.lower == dd && d1.upper == dd);
  return out;
}

}  // namespace artifact
