#include "artifact/fragmetric.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>
#include <stdexcept>

namespace artifact {

// ---------------------------------------------------------------- trees

std::vector<std::string> DecompNode::linearization() const {
  if (is_leaf()) return {label};
  std::vector<std::string> out;
  for (const DecompNode& c : children) {
    auto l = c.linearization();
    out.insert(out.end(), l.begin(), l.end());
  }
  return out;
}

std::vector<FootprintPiece> DecompNode::all_pieces() const {
  std::vector<FootprintPiece> out = footprint;
  for (const DecompNode& c : children) {
    auto p = c.all_pieces();
    out.insert(out.end(), p.begin(), p.end());
  }
  return out;
}

std::string DecompNode::str() const {
  if (is_leaf()) return label;
  std::string s = move + "(";
  for (std::size_t i = 0; i < children.size(); ++i) s += (i ? ", " : "") + children[i].str();
  return s + ")";
}

namespace {

bool substitute(DecompNode& t, const DecompNode& psi, std::size_t& remaining, bool by_index) {
  if (t.is_leaf()) {
    bool hit = by_index ? remaining == 0 : t.label == psi.label;
    if (hit) {
      if (t.label != psi.label)
        throw std::invalid_argument("leaf " + t.label + " does not match the substituted tree " + psi.label);
      t = psi;
      return true;
    }
    if (by_index) --remaining;
    return false;
  }
  for (DecompNode& c : t.children)
    if (substitute(c, psi, remaining, by_index)) return true;
  return false;
}

}  // namespace

DecompNode compose_decomp(const DecompNode& phi, const DecompNode& psi, std::optional<std::size_t> leaf) {
  DecompNode out = phi;
  std::size_t idx = leaf.value_or(0);
  if (!substitute(out, psi, idx, leaf.has_value()))
    throw std::invalid_argument("no leaf labelled " + psi.label + " to refine");
  return out;
}

namespace {
Q column_spacing(const std::vector<FootprintPiece>& pieces) {
  Q m = 0;
  for (const FootprintPiece& p : pieces) m = std::max(m, p.area);
  return Q(m + 1);
}
}  // namespace

PlanarDiagram footprint_diagram(const std::vector<FootprintPiece>& pieces) {
  PlanarDiagram d;
  Q sp = column_spacing(pieces);
  for (const FootprintPiece& p : pieces) {
    if (p.area <= 0) continue;
    Q x0 = Q(p.column * sp), x1 = Q(x0 + p.area);
    d.curves.push_back({Pt(x0, Q(0)), Pt(x1, Q(0)), Pt(x1, Q(1)), Pt(x0, Q(1)), Pt(x0, Q(0))});
  }
  return d;
}

Q footprint_shadow(const std::vector<FootprintPiece>& pieces) { return planar_shadow(footprint_diagram(pieces)); }

Q footprint_union_area(const std::vector<FootprintPiece>& pieces) {
  std::map<Q, Q> best;
  for (const FootprintPiece& p : pieces) best[p.column] = std::max(best[p.column], p.area);
  Q s = 0;
  for (const auto& [c, a] : best) s += a;
  return s;
}

Q shadow_weight(const DecompNode& t) { return footprint_shadow(t.all_pieces()); }

bool check_weight_axioms(const Weight& w, const std::vector<std::pair<DecompNode, DecompNode>>& samples,
                         std::string* why) {
  auto fail = [&](const std::string& m) {
    if (why) *why = m;
    return false;
  };
  for (const auto& [phi, psi] : samples) {
    if (w(DecompNode::leaf(phi.label)) != 0) return fail("identity of " + phi.label + " has nonzero weight");
    Q a = w(phi), b = w(psi);
    if (a < 0 || b < 0) return fail("negative weight");
    DecompNode c = compose_decomp(phi, psi);
    if (w(c) > a + b) return fail("composite " + c.str() + " exceeds the sum of weights");
    if (w(compose_decomp(phi, DecompNode::leaf(psi.label))) != a) return fail("refining by an identity changed " + phi.str());
  }
  return true;
}

// ---------------------------------------------------------------- move system

void MoveSystem::add_curve(const TorusCurve& c) {
  if (has_curve(c.name())) throw std::invalid_argument("curve " + c.name() + " defined twice");
  std::string canon = c.name();
  for (const TorusCurve& o : curves_)
    if (o.p() * c.q() == o.q() * c.p() && same_point_set(o, c)) {
      canon = canon_.at(o.name());
      break;
    }
  curves_.push_back(c);
  canon_[c.name()] = canon;
}

bool MoveSystem::has_curve(const std::string& name) const { return canon_.count(name) != 0; }

const TorusCurve& MoveSystem::curve(const std::string& name) const {
  for (const TorusCurve& c : curves_)
    if (c.name() == name) return c;
  throw std::invalid_argument("unknown curve: " + name);
}

std::string MoveSystem::canonical(const std::string& name) const {
  auto it = canon_.find(name);
  if (it == canon_.end()) throw std::invalid_argument("unknown curve: " + name);
  return it->second;
}

Q MoveSystem::next_column() {
  Q c(1000 + columns_);
  ++columns_;
  return c;
}

void MoveSystem::add_move(Move m) {
  m.area.canonicalize();
  m.column.canonicalize();
  if (m.area < 0) throw std::invalid_argument("move " + m.name + " has negative shadow");
  if (m.kind != MoveKind::UTurn) m.top = canonical(m.top);
  for (std::string& e : m.ends) e = canonical(e);
  moves_.push_back(std::move(m));
}

const TorusCurve& MoveSystem::add_surgery(const std::string& result, const std::string& l, const std::string& s,
                                          const Pt& at, const Q& area, std::optional<Q> column) {
  Q col = column ? *column : next_column();
  SurgeryResult r = surgery(curve(l), curve(s), at, area, result, col);
  add_curve(r.curve);
  add_move({MoveKind::Surgery, "surgery[" + l + "#" + s + "]", result, {l, s}, area, col});
  return curves_.back();
}

void MoveSystem::add_suspension(const std::string& a, const std::string& b, const Q& length,
                                std::optional<Q> column) {
  const TorusCurve& ca = curve(a);
  const TorusCurve& cb = curve(b);
  if (!hamiltonian_isotopic(ca, cb))
    throw std::invalid_argument("suspension " + a + " -> " + b + ": the curves are not Hamiltonian isotopic");
  Q col = column ? *column : next_column();
  add_move({MoveKind::Suspension, "suspension[" + a + "->" + b + "]", a, {b}, length, col});
}

void MoveSystem::add_uturn(const std::string& b) {
  add_move({MoveKind::UTurn, "uturn[" + b + "]", "", {b, b}, Q(0), Q(0)});
}

void MoveSystem::add_declared(const std::string& name, const std::string& top, const std::vector<std::string>& ends,
                              const Q& shadow, std::optional<Q> column) {
  if (ends.empty()) throw std::invalid_argument("move " + name + " has no negative ends");
  Q col = column ? *column : next_column();
  add_move({MoveKind::Declared, name, top, ends, shadow, col});
}

void MoveSystem::set_family(const std::string& name, const std::vector<std::string>& members) {
  std::vector<std::string> m;
  for (const std::string& s : members) {
    std::string c = canonical(s);
    if (std::find(m.begin(), m.end(), c) == m.end()) m.push_back(c);
  }
  families_[name] = m;
}

const std::vector<std::string>& MoveSystem::family(const std::string& name) const {
  auto it = families_.find(name);
  if (it == families_.end()) throw std::invalid_argument("unknown family: " + name);
  return it->second;
}

// ---------------------------------------------------------------- bounds

Q prune_lower_bound(const TorusCurve& l, const std::vector<TorusCurve>& s, std::optional<Q> monotone) {
  Q b = Q(gromov_width_rel(l, s) / 2);
  if (monotone) b = std::min(b, *monotone);
  return b;
}

namespace {

// Intersection-count bounds for one probe with `top` bent to be the positive end.
std::optional<FamilyBound> probe_bound(const TorusCurve& n, const TorusCurve& top, const std::vector<TorusCurve>& rest) {
  std::optional<FamilyBound> best;
  std::size_t at_top;
  try {
    at_top = intersections(n, top).size();
  } catch (const std::invalid_argument&) {
    return best;
  }
  auto consider = [&](XQ v, const std::string& why) {
    if (!best || v > best->value) best = FamilyBound{v, why};
  };
  // counts of intersection points
  try {
    std::size_t sum = 0;
    std::vector<Pt> sigma;
    std::vector<TorusCurve> sys{n};
    for (const TorusCurve& e : rest) {
      auto xs = intersections(n, e);
      sum += xs.size();
      for (const auto& x : xs) sigma.push_back(x.point);
      sys.push_back(e);
    }
    std::set<Pt> uniq(sigma.begin(), sigma.end());
    if (uniq.size() == sigma.size() && at_top < sum) {
      XQ w = gromov_width_double_points(sys, sigma, {});
      consider(w.is_pos_inf() ? w : XQ(Q(w.value() / 2)),
               "probe " + n.name() + ": #(" + n.name() + " cap " + top.name() + ") < sum of intersections");
    }
  } catch (const std::invalid_argument&) {
  }
  // ranks of Floer homology
  try {
    std::size_t sum = 0;
    for (const TorusCurve& e : rest) sum += hf_rank(n, e);
    if (at_top < sum) {
      std::vector<Pt> sigma;
      for (std::size_t i = 0; i < rest.size(); ++i)
        for (std::size_t j = i + 1; j < rest.size(); ++j)
          for (const auto& x : intersections(rest[i], rest[j])) sigma.push_back(x.point);
      std::set<Pt> uniq(sigma.begin(), sigma.end());
      if (uniq.size() == sigma.size()) {
        XQ w = gromov_width_double_points(rest, sigma, {n});
        consider(w.is_pos_inf() ? w : XQ(Q(w.value() / 4)),
                 "probe " + n.name() + ": #(" + n.name() + " cap " + top.name() + ") < sum of HF ranks");
      }
    }
  } catch (const std::invalid_argument&) {
  }
  return best;
}

std::string join(const std::vector<std::string>& v, const std::string& sep = " ") {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + v[i];
  return s;
}

}  // namespace

FamilyBound ends_lower_bound(const MoveSystem& sys, const std::vector<std::string>& ends) {
  FamilyBound best{XQ(Q(0)), "no width"};
  std::vector<TorusCurve> cs;
  for (const std::string& e : ends) cs.push_back(sys.curve(e));
  std::set<std::string> done;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    if (!done.insert(sys.canonical(ends[i])).second) continue;
    std::vector<TorusCurve> rest;
    for (std::size_t j = 0; j < cs.size(); ++j)
      if (j != i) rest.push_back(cs[j]);
    Q b = prune_lower_bound(cs[i], rest, sys.monotone());
    if (XQ(b) > best.value) {
      std::vector<std::string> rn;
      for (const TorusCurve& r : rest) rn.push_back(r.name());
      best = {b, "half width of " + ends[i] + " relative to {" + join(rn, ", ") + "}"};
    }
    for (const std::string& p : sys.probes()) {
      auto pb = probe_bound(sys.curve(p), cs[i], rest);
      if (pb && pb->value > best.value) best = *pb;
    }
  }
  return best;
}

namespace {

// Minimal end-family bound over all families with at most k members of F.
FamilyBound family_min_bound(const MoveSystem& sys, const std::string& top, const std::string& partner,
                             const std::vector<std::string>& fam, int k) {
  std::optional<FamilyBound> best;
  std::vector<int> mult(fam.size(), 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int used) {
    if (i == fam.size()) {
      std::vector<std::string> ends{top, partner};
      for (std::size_t j = 0; j < fam.size(); ++j)
        for (int m = 0; m < mult[j]; ++m) ends.push_back(fam[j]);
      FamilyBound b = ends_lower_bound(sys, ends);
      if (!best || b.value < best->value) {
        best = b;
        best->reason = "ends {" + join(ends, ", ") + "}: " + b.reason;
      }
      return;
    }
    for (int m = 0; m <= 2 && used + m <= k; ++m) {
      mult[i] = m;
      rec(i + 1, used + m);
    }
    mult[i] = 0;
  };
  rec(0, 0);
  return *best;
}

struct Rewrite {
  const Move* move;
  std::vector<std::string> ends;  ///< replaces the rewritten end; may contain it
};

std::vector<Rewrite> rewrites_for(const MoveSystem& sys, const std::string& end) {
  std::vector<Rewrite> out;
  for (const Move& m : sys.moves()) {
    switch (m.kind) {
      case MoveKind::Suspension:
        if (m.top == end) out.push_back({&m, m.ends});
        if (m.ends[0] == end) out.push_back({&m, {m.top}});
        break;
      case MoveKind::Surgery:
      case MoveKind::Declared:
        if (m.top == end) out.push_back({&m, m.ends});
        break;
      case MoveKind::UTurn:
        out.push_back({&m, {end, m.ends[0], m.ends[1]}});
        out.push_back({&m, {m.ends[0], m.ends[1], end}});
        break;
    }
  }
  return out;
}

struct Node {
  std::vector<std::string> ends;
  std::vector<FootprintPiece> pieces;
  DecompNode tree;
  std::size_t depth = 0;
};

bool is_goal(const std::vector<std::string>& ends, const std::string& partner, const std::set<std::string>& fam,
             int k, bool top_end_only) {
  if (top_end_only) {
    if (ends.empty() || ends.back() != partner) return false;
    for (std::size_t i = 0; i + 1 < ends.size(); ++i)
      if (!fam.count(ends[i])) return false;
    return static_cast<int>(ends.size()) - 1 <= k;
  }
  bool seen_partner = false;
  int others = 0;
  for (const std::string& e : ends) {
    if (!seen_partner && e == partner) {
      seen_partner = true;
      continue;
    }
    if (!fam.count(e)) return false;
    ++others;
  }
  return seen_partner && others <= k;
}

// End order only matters when the partner must come last.
std::string state_key(const Node& n, bool ordered) {
  std::vector<std::string> e = n.ends;
  if (!ordered) std::sort(e.begin(), e.end());
  std::map<Q, Q> cols;
  for (const FootprintPiece& p : n.pieces) cols[p.column] = std::max(cols[p.column], p.area);
  std::string s = join(e, ",") + "|";
  for (const auto& [c, a] : cols) s += q_str(c) + ":" + q_str(a) + ";";
  return s;
}

struct SearchResult {
  std::optional<Node> best;
  Q shadow;
  bool exhausted = false;
};

SearchResult search(const MoveSystem& sys, const std::string& top, const std::string& partner,
                    const std::set<std::string>& fam, int k, const SearchBudget& budget) {
  SearchResult res;
  std::deque<Node> frontier;
  frontier.push_back({{top}, {}, DecompNode::leaf(top), 0});
  std::set<std::string> seen{state_key(frontier.front(), budget.top_end_only)};
  std::size_t expanded = 0;
  while (!frontier.empty()) {
    Node n = std::move(frontier.front());
    frontier.pop_front();
    Q sh = footprint_union_area(n.pieces);
    if (res.best && sh >= res.shadow) continue;
    if (is_goal(n.ends, partner, fam, k, budget.top_end_only)) {
      res.best = n;
      res.shadow = sh;
      continue;
    }
    if (n.depth >= budget.max_depth) continue;
    if (++expanded > budget.max_nodes) {
      res.exhausted = true;
      break;
    }
    for (std::size_t i = 0; i < n.ends.size(); ++i)
      for (const Rewrite& r : rewrites_for(sys, n.ends[i])) {
        Node c;
        c.ends = n.ends;
        c.ends.erase(c.ends.begin() + static_cast<long>(i));
        c.ends.insert(c.ends.begin() + static_cast<long>(i), r.ends.begin(), r.ends.end());
        if (static_cast<int>(c.ends.size()) - 1 > k) continue;
        c.pieces = n.pieces;
        DecompNode step{n.ends[i], r.move->name, {}, {}};
        if (r.move->area > 0) {
          c.pieces.push_back({r.move->column, r.move->area});
          step.footprint.push_back({r.move->column, r.move->area});
        }
        for (const std::string& e : r.ends) step.children.push_back(DecompNode::leaf(e));
        c.tree = compose_decomp(n.tree, step, i);
        c.depth = n.depth + 1;
        if (res.best && footprint_union_area(c.pieces) >= res.shadow) continue;
        if (!seen.insert(state_key(c, budget.top_end_only)).second) continue;
        frontier.push_back(std::move(c));
      }
  }
  return res;
}

std::string xq_str(const XQ& x) {
  if (x.is_pos_inf()) return "inf";
  if (x.is_neg_inf()) return "-inf";
  return q_str(x.value());
}

}  // namespace

std::string MetricResult::str() const { return "[" + xq_str(lower) + ", " + xq_str(upper) + "]"; }

MetricResult d_k(const MoveSystem& sys, const std::string& a, const std::string& b, const std::string& family, int k,
                 const SearchBudget& budget) {
  if (k < 0) throw std::invalid_argument("k must be nonnegative");
  std::string ca = sys.canonical(a), cb = sys.canonical(b);
  const std::vector<std::string>& fam = sys.family(family);
  std::set<std::string> fs(fam.begin(), fam.end());
  MetricResult r;
  for (int dir = 0; dir < 2; ++dir) {
    const std::string& top = dir == 0 ? ca : cb;
    const std::string& partner = dir == 0 ? cb : ca;
    SearchResult s = search(sys, top, partner, fs, k, budget);
    r.exhausted = r.exhausted || s.exhausted;
    if (s.best && XQ(s.shadow) < r.upper) {
      Q recomputed = footprint_shadow(s.best->pieces);
      if (recomputed != s.shadow) throw std::logic_error("footprint shadow mismatch for " + s.best->tree.str());
      r.upper = XQ(s.shadow);
      r.witness = s.best->tree;
    }
  }
  FamilyBound fb = family_min_bound(sys, ca, cb, fam, k);
  r.lower = fb.value;
  r.certificate = fb.reason;
  r.contradiction = r.lower > r.upper;
  return r;
}

std::string LengthResult::str() const {
  return "[" + std::to_string(lower) + ", " + (upper ? std::to_string(*upper) : std::string("inf")) + "]";
}

LengthResult cone_length(const MoveSystem& sys, const std::string& a, const std::string& b, const std::string& family,
                         std::optional<Q> limit, int max_k, const SearchBudget& budget) {
  LengthResult r;
  bool lower_fixed = false;
  std::string ca = sys.canonical(a), cb = sys.canonical(b);
  for (int k = 0; k <= max_k; ++k) {
    if (limit && !lower_fixed) {
      FamilyBound fb = family_min_bound(sys, ca, cb, sys.family(family), k);
      if (fb.value > XQ(*limit)) {
        r.lower = k + 1;
        r.certificate += "k=" + std::to_string(k) + " excluded: " + xq_str(fb.value) + " > " + q_str(*limit) + " (" +
                         fb.reason + "); ";
        continue;
      }
    }
    // family bounds only decrease with k, so once one survives the rest do
    lower_fixed = true;
    MetricResult m = d_k(sys, a, b, family, k, budget);
    if (!m.upper.is_pos_inf() && (!limit || m.upper <= XQ(*limit))) {
      r.upper = k;
      r.certificate += "k=" + std::to_string(k) + " witness " + m.witness->str() + " shadow " + xq_str(m.upper);
      break;
    }
  }
  return r;
}

MetricResult d_F(const MoveSystem& sys, const std::string& a, const std::string& b, const std::string& family,
                 int max_k, const SearchBudget& budget) {
  MetricResult r = d_k(sys, a, b, family, max_k, budget);
  // the bound over all families: multiplicities above two never lower it
  int all = 2 * static_cast<int>(sys.family(family).size());
  FamilyBound fb = family_min_bound(sys, sys.canonical(a), sys.canonical(b), sys.family(family), all);
  r.lower = fb.value;
  r.certificate = fb.reason;
  r.contradiction = r.lower > r.upper;
  return r;
}

MetricResult d_hat(const MoveSystem& sys, const std::string& a, const std::string& b, const std::string& f1,
                   const std::string& f2, int max_k, const SearchBudget& budget) {
  MetricResult x = d_F(sys, a, b, f1, max_k, budget), y = d_F(sys, a, b, f2, max_k, budget);
  MetricResult r;
  r.lower = xmax(x.lower, y.lower);
  r.upper = xmax(x.upper, y.upper);
  r.witness = x.upper < y.upper ? y.witness : x.witness;
  r.certificate = x.lower < y.lower ? y.certificate : x.certificate;
  r.exhausted = x.exhausted || y.exhausted;
  r.contradiction = x.contradiction || y.contradiction;
  return r;
}

bool check_triangle(const DkTable& t, std::vector<std::string>* violations) {
  bool ok = true;
  for (const auto& [k1, r1] : t)
    for (const auto& [k2, r2] : t) {
      const auto& [a, b, k] = k1;
      const auto& [b2, c, kp] = k2;
      if (b != b2) continue;
      auto it = t.find({a, c, k + kp});
      if (it == t.end()) continue;
      if (r1.upper.is_pos_inf() || r2.upper.is_pos_inf()) continue;
      XQ sum(Q(r1.upper.value() + r2.upper.value()));
      if (sum < it->second.upper) {
        ok = false;
        if (violations)
          violations->push_back("d_" + std::to_string(k + kp) + "(" + a + "," + c + ") upper " +
                                xq_str(it->second.upper) + " > " + xq_str(sum));
      }
    }
  return ok;
}

bool quasi_isometry_check(const Q& h, const std::vector<std::pair<MetricResult, MetricResult>>& pairs) {
  for (const auto& [x, y] : pairs) {
    if (x.upper.is_pos_inf() != y.upper.is_pos_inf()) return false;
    if (x.upper.is_pos_inf()) continue;
    Q diff = abs(Q(x.upper.value() - y.upper.value()));
    if (diff > 2 * h) return false;
  }
  return true;
}

PlanarDiagram w_eps_footprint(const Q& eps) {
  if (eps <= 0 || eps >= 1) throw std::invalid_argument("eps must lie in (0, 1)");
  PlanarDiagram d;
  d.curves.push_back({Pt(Q(-2), Q(1)), Pt(Q(0), Q(1)), Pt(Q(0), Q(-1)), Pt(Q(-2), Q(-1))});
  d.curves.push_back({Pt(Q(-2), Q(0)), Pt(Q(2), Q(0))});
  Q e = eps;
  d.curves.push_back({Pt(Q(0), Q(0)), Pt(e, Q(0)), Pt(e, e), Pt(Q(0), e), Pt(Q(0), Q(0))});
  d.ends = {{true, Q(1)}, {true, Q(-1)}, {true, Q(0)}, {false, Q(0)}};
  d.validate();
  return d;
}

}  // namespace artifact
