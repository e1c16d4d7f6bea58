#include "artifact/filtcx.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace artifact {

// ---------------------------------------------------------------- matrices

NMat nmat_zero(std::size_t rows, std::size_t cols, const Q& cutoff) {
  return NMat(rows, std::vector<Nov>(cols, Nov(cutoff)));
}

NMat nmat_identity(std::size_t n, const Q& cutoff) {
  NMat m = nmat_zero(n, n, cutoff);
  for (std::size_t i = 0; i < n; ++i) m[i][i] = Nov::mono(Q(0), cutoff);
  return m;
}

NMat nmat_mul(const NMat& a, const NMat& b) {
  if (a.empty() || b.empty()) return NMat(a.size(), std::vector<Nov>(b.empty() ? 0 : b[0].size()));
  Q cut = b[0].empty() ? default_cutoff() : b[0][0].cutoff();
  NMat r = nmat_zero(a.size(), b[0].size(), cut);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t l = 0; l < b.size(); ++l) {
      if (a[i][l].is_zero()) continue;
      for (std::size_t j = 0; j < b[l].size(); ++j)
        if (!b[l][j].is_zero()) r[i][j] += a[i][l] * b[l][j];
    }
  return r;
}

NMat nmat_add(const NMat& a, const NMat& b) {
  NMat r = a;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) r[i][j] += b[i][j];
  return r;
}

Chain nmat_apply(const NMat& a, const Chain& x) {
  Q cut = x.empty() ? default_cutoff() : x[0].cutoff();
  Chain r(a.size(), Nov(cut));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j)
      if (!a[i][j].is_zero() && !x[j].is_zero()) r[i] += a[i][j] * x[j];
  return r;
}

bool nmat_is_zero(const NMat& a) {
  for (const auto& row : a)
    for (const Nov& x : row)
      if (!x.is_zero()) return false;
  return true;
}

FMat to_fmat_checked(const NMat& m) { return to_fmat(m); }

NMat to_nmat(const FMat& m, const Q& cutoff) {
  NMat r;
  r.reserve(m.size());
  for (const auto& row : m) r.push_back(to_nvec(row, cutoff));
  return r;
}

// ---------------------------------------------------------------- complexes

FilteredComplex::FilteredComplex(std::vector<std::string> names, std::vector<Q> action, NMat d)
    : names_(std::move(names)), action_(std::move(action)), d_(std::move(d)) {
  std::size_t n = names_.size();
  if (action_.size() != n || d_.size() != n)
    throw std::invalid_argument("complex: size mismatch");
  for (const auto& row : d_)
    if (row.size() != n) throw std::invalid_argument("complex: differential not square");
  if (n && !d_[0].empty()) cutoff_ = d_[0][0].cutoff();
  FMat fd = to_fmat(d_);
  FMat sq = fmat_mul(fd, fd);
  for (const auto& row : sq)
    if (!fvec_is_zero(row)) throw std::invalid_argument("complex: d^2 != 0");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (d_[i][j].is_zero()) continue;
      if (action_[i] - d_[i][j].val().value() > action_[j])
        throw std::invalid_argument("complex: d raises action on generator " + names_[j]);
    }
}

std::size_t FilteredComplex::index(const std::string& name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) throw std::invalid_argument("unknown generator: " + name);
  return static_cast<std::size_t>(it - names_.begin());
}

Chain FilteredComplex::gen(const std::string& name) const {
  Chain c = zero_chain();
  c[index(name)] = Nov::mono(Q(0), cutoff_);
  return c;
}

FilteredComplex FilteredComplex::shifted(const Q& s) const {
  std::vector<Q> a = action_;
  for (Q& x : a) x += s;
  return FilteredComplex(names_, a, d_);
}

namespace {

std::string strip(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

// Split on '+' outside parentheses and braces.
std::vector<std::string> split_terms(const std::string& s) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char c : s) {
    if (c == '(' || c == '{') ++depth;
    if (c == ')' || c == '}') --depth;
    if (c == '+' && depth == 0) {
      out.push_back(strip(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(strip(cur));
  return out;
}

}  // namespace

Chain parse_chain(const std::string& text, const FilteredComplex& cx) {
  Chain c = cx.zero_chain();
  std::string t = strip(text);
  if (t == "0") return c;
  for (const std::string& term : split_terms(t)) {
    if (term.empty()) throw std::invalid_argument("empty term in chain: " + text);
    std::size_t star = term.rfind('*');
    Nov coef = Nov::mono(Q(0), cx.cutoff());
    std::string name = term;
    if (star != std::string::npos) {
      coef = Nov::parse(term.substr(0, star), cx.cutoff());
      name = strip(term.substr(star + 1));
    }
    std::size_t i = cx.index(name);
    c[i] += coef;
  }
  return c;
}

std::string chain_str(const Chain& c, const FilteredComplex& cx) {
  std::string s;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i].is_zero()) continue;
    if (!s.empty()) s += " + ";
    if (c[i] == Nov::mono(Q(0), c[i].cutoff()))
      s += cx.names()[i];
    else
      s += "(" + c[i].str() + ")*" + cx.names()[i];
  }
  return s.empty() ? "0" : s;
}

FilteredComplex FilteredComplex::parse(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> names;
  std::vector<Q> action;
  std::vector<std::pair<std::string, std::string>> diffs;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = strip(line);
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string kw;
    ls >> kw;
    if (kw == "gen") {
      std::string name, akw, val;
      ls >> name >> akw >> val;
      if (akw != "action") throw std::invalid_argument("expected 'action' in: " + line);
      names.push_back(name);
      action.push_back(parse_q(val));
    } else if (kw == "d") {
      auto eq = line.find('=');
      if (eq == std::string::npos) throw std::invalid_argument("expected '=' in: " + line);
      diffs.emplace_back(strip(line.substr(1, eq - 1)), line.substr(eq + 1));
    } else {
      throw std::invalid_argument("unknown line: " + line);
    }
  }
  std::size_t n = names.size();
  NMat d = nmat_zero(n, n, default_cutoff());
  FilteredComplex tmp(names, action, d);
  for (auto& [src, rhs] : diffs) {
    std::size_t j = tmp.index(src);
    Chain c = parse_chain(rhs, tmp);
    for (std::size_t i = 0; i < n; ++i) d[i][j] += c[i];
  }
  return FilteredComplex(names, action, d);
}

std::string FilteredComplex::str() const {
  std::ostringstream o;
  for (std::size_t i = 0; i < size(); ++i) o << "gen " << names_[i] << " action " << q_str(action_[i]) << "\n";
  for (std::size_t j = 0; j < size(); ++j) {
    Chain c = zero_chain();
    for (std::size_t i = 0; i < size(); ++i) c[i] = d_[i][j];
    bool any = false;
    for (const Nov& x : c) any = any || !x.is_zero();
    if (any) o << "d " << names_[j] << " = " << chain_str(c, *this) << "\n";
  }
  return o.str();
}

// ---------------------------------------------------------------- maps

XQ FilteredMap::shift() const {
  XQ best = XQ::neg_inf();
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m[i].size(); ++j) {
      if (m[i][j].is_zero()) continue;
      XQ s = XQ(cod.action()[i] - dom.action()[j]) - m[i][j].val();
      if (s > best) best = s;
    }
  return best;
}

bool FilteredMap::respects_declared_shift() const { return shift() <= XQ(declared_shift); }

bool FilteredMap::is_chain_map() const {
  FMat f = to_fmat(m);
  FMat lhs = fmat_mul(to_fmat(cod.diff()), f);
  FMat rhs = fmat_mul(f, to_fmat(dom.diff()));
  for (std::size_t i = 0; i < lhs.size(); ++i)
    if (!fvec_is_zero(fvec_add(lhs[i], rhs[i]))) return false;
  return true;
}

FilteredMap identity_map(const FilteredComplex& c) {
  return FilteredMap{c, c, nmat_identity(c.size(), c.cutoff()), 0};
}

FilteredMap compose(const FilteredMap& g, const FilteredMap& f) {
  return FilteredMap{f.dom, g.cod, nmat_mul(g.m, f.m), f.declared_shift + g.declared_shift};
}

FilteredMap map_sum(const FilteredMap& f, const FilteredMap& g) {
  return FilteredMap{f.dom, f.cod, nmat_add(f.m, g.m), std::max(f.declared_shift, g.declared_shift)};
}

XQ action_level(const Chain& c, const FilteredComplex& cx) {
  XQ best = XQ::neg_inf();
  for (std::size_t j = 0; j < c.size(); ++j) {
    if (c[j].is_zero()) continue;
    XQ a = XQ(cx.action()[j]) - c[j].val();
    if (a > best) best = a;
  }
  return best;
}

XQ action_drop(const FilteredMap& f) {
  XQ s = f.shift();
  if (s.is_neg_inf()) return XQ::pos_inf();
  if (s > XQ(0)) throw std::invalid_argument("action_drop: map is not strictly filtered");
  return -s;
}

// ---------------------------------------------------------------- boundary level

namespace {

struct FLevel {
  XQ value;
  FVec witness;
};

// inf A(b) over d b = c; exact.
FLevel boundary_level_f(const FMat& d, const Weights& w, const FVec& c) {
  std::size_t n = w.size();
  if (fvec_is_zero(c)) return {XQ::neg_inf(), FVec(n)};
  auto b0 = solve(d, c, n);
  if (!b0) return {XQ::pos_inf(), {}};
  std::vector<FVec> ker = nullspace(d, n);
  Distance dist = dist_to_subspace(*b0, ker, w);
  return {dist.value, dist.nearest};
}

bool is_cycle(const FMat& d, const FVec& c) { return fvec_is_zero(fmat_apply(d, c)); }

}  // namespace

LevelResult boundary_level(const Chain& c, const FilteredComplex& cx) {
  FMat d = to_fmat(cx.diff());
  FVec fc = to_fvec(c);
  if (!is_cycle(d, fc)) throw std::invalid_argument("boundary_level: chain is not a cycle");
  FLevel r = boundary_level_f(d, cx.action(), fc);
  LevelResult out{r.value, {}};
  if (!r.witness.empty()) out.witness = to_nvec(r.witness, cx.cutoff());
  return out;
}

Q boundary_depth_elem(const Chain& c, const FilteredComplex& cx) {
  LevelResult b = boundary_level(c, cx);
  if (b.value.is_pos_inf()) throw std::invalid_argument("boundary_depth_elem: not a boundary");
  if (b.value.is_neg_inf()) throw std::invalid_argument("boundary_depth_elem: zero chain");
  return (b.value - action_level(c, cx)).value();
}

XQ boundary_depth_map(const FilteredMap& phi) {
  if (!phi.is_chain_map()) throw std::invalid_argument("boundary_depth_map: not a chain map");
  std::size_t nc = phi.dom.size(), nd = phi.cod.size();
  FMat dc = to_fmat(phi.dom.diff()), dd = to_fmat(phi.cod.diff()), f = to_fmat(phi.m);
  std::vector<FVec> z = nullspace(dc, nc);
  if (z.empty()) return XQ(0);
  // Columns: phi(z_i), then d_D. Kernel vectors (x, y) give sum x_i z_i with primitive y.
  std::size_t cols = z.size() + nd;
  FMat sys = fmat_zero(nd, cols);
  for (std::size_t i = 0; i < z.size(); ++i) {
    FVec fz = fmat_apply(f, z[i]);
    for (std::size_t r = 0; r < nd; ++r) sys[r][i] = fz[r];
  }
  for (std::size_t r = 0; r < nd; ++r)
    for (std::size_t j = 0; j < nd; ++j) sys[r][z.size() + j] = dd[r][j];
  std::vector<FVec> zp, prim;
  for (const FVec& k : nullspace(sys, cols)) {
    FVec v(nc), y(nd);
    for (std::size_t i = 0; i < z.size(); ++i)
      if (!k[i].is_zero()) v = fvec_add(v, fvec_scale(k[i], z[i]));
    for (std::size_t j = 0; j < nd; ++j) y[j] = k[z.size() + j];
    if (fvec_is_zero(v)) continue;
    std::vector<FVec> trial = zp;
    trial.push_back(v);
    if (independent_subset(trial).size() == trial.size()) {
      zp.push_back(v);
      prim.push_back(y);
    }
  }
  if (zp.empty()) return XQ(0);
  // Directions killed by phi do not matter; work on an orthogonal complement.
  std::vector<FVec> kerf;
  {
    std::vector<FVec> zk = nullspace(f, nc);
    kerf = intersect_spans(zp, zk);
  }
  std::vector<FVec> base = orthogonal_basis(kerf, phi.dom.action());
  std::vector<FVec> pairs = prim;
  std::vector<FVec> comp = extend_orthogonal(base, zp, phi.dom.action(), &pairs);
  std::vector<FVec> kerd = nullspace(dd, nd);
  XQ best = XQ(0);
  for (std::size_t i = 0; i < comp.size(); ++i) {
    Distance dist = dist_to_subspace(pairs[i], kerd, phi.cod.action());
    XQ v = dist.value - level(comp[i], phi.dom.action());
    if (v > best) best = v;
  }
  return best;
}

// ---------------------------------------------------------------- hom complex

FilteredComplex hom_complex(const FilteredComplex& c, const FilteredComplex& d) {
  std::size_t nc = c.size(), nd = d.size();
  std::vector<std::string> names;
  std::vector<Q> action;
  for (std::size_t i = 0; i < nd; ++i)
    for (std::size_t j = 0; j < nc; ++j) {
      names.push_back("E[" + d.names()[i] + "," + c.names()[j] + "]");
      action.push_back(d.action()[i] - c.action()[j]);
    }
  NMat dh = nmat_zero(nd * nc, nd * nc, c.cutoff());
  // d(E_ij) = sum_k dD[k][i] E_kj + sum_l dC[j][l] E_il
  for (std::size_t i = 0; i < nd; ++i)
    for (std::size_t j = 0; j < nc; ++j) {
      std::size_t col = i * nc + j;
      for (std::size_t k = 0; k < nd; ++k)
        if (!d.diff()[k][i].is_zero()) dh[k * nc + j][col] += d.diff()[k][i];
      for (std::size_t l = 0; l < nc; ++l)
        if (!c.diff()[j][l].is_zero()) dh[i * nc + l][col] += c.diff()[j][l];
    }
  return FilteredComplex(names, action, dh);
}

Chain map_to_hom_chain(const FilteredMap& f) {
  std::size_t nc = f.dom.size(), nd = f.cod.size();
  Chain h(nc * nd, Nov(f.dom.cutoff()));
  for (std::size_t i = 0; i < nd; ++i)
    for (std::size_t j = 0; j < nc; ++j) h[i * nc + j] = f.m[i][j];
  return h;
}

NMat hom_chain_to_matrix(const Chain& h, std::size_t rows, std::size_t cols) {
  Q cut = h.empty() ? default_cutoff() : h[0].cutoff();
  NMat m = nmat_zero(rows, cols, cut);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m[i][j] = h[i * cols + j];
  return m;
}

HomotopyResult homotopical_boundary_level(const FilteredMap& psi) {
  if (!psi.is_chain_map()) throw std::invalid_argument("homotopical_boundary_level: not a chain map");
  FilteredComplex hom = hom_complex(psi.dom, psi.cod);
  LevelResult r = boundary_level(map_to_hom_chain(psi), hom);
  HomotopyResult out{r.value, std::nullopt};
  if (!r.witness.empty()) out.homotopy = hom_chain_to_matrix(r.witness, psi.cod.size(), psi.dom.size());
  return out;
}

XQ fmat_shift(const FMat& m, const FilteredComplex& dom, const FilteredComplex& cod) {
  XQ best = XQ::neg_inf();
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m[i].size(); ++j) {
      if (m[i][j].is_zero()) continue;
      XQ s = XQ(cod.action()[i] - dom.action()[j]) - m[i][j].val();
      if (s > best) best = s;
    }
  return best;
}

bool fmat_is_chain_map(const FMat& m, const FilteredComplex& dom, const FilteredComplex& cod) {
  FMat lhs = fmat_mul(to_fmat(cod.diff()), m);
  FMat rhs = fmat_mul(m, to_fmat(dom.diff()));
  for (std::size_t i = 0; i < lhs.size(); ++i)
    if (!fvec_is_zero(fvec_add(lhs[i], rhs[i]))) return false;
  return true;
}

FHomotopy homotopical_boundary_level_f(const FMat& psi, const FilteredComplex& dom,
                                       const FilteredComplex& cod) {
  if (!fmat_is_chain_map(psi, dom, cod))
    throw std::invalid_argument("homotopical_boundary_level: not a chain map");
  std::size_t nc = dom.size(), nd = cod.size();
  FilteredComplex hom = hom_complex(dom, cod);
  FVec v(nc * nd);
  for (std::size_t i = 0; i < nd; ++i)
    for (std::size_t j = 0; j < nc; ++j) v[i * nc + j] = psi[i][j];
  FLevel r = boundary_level_f(to_fmat(hom.diff()), hom.action(), v);
  FHomotopy out{r.value, {}};
  if (r.value.finite()) {
    out.homotopy = fmat_zero(nd, nc);
    for (std::size_t i = 0; i < nd; ++i)
      for (std::size_t j = 0; j < nc; ++j) out.homotopy[i][j] = r.witness[i * nc + j];
  }
  return out;
}

// ---------------------------------------------------------------- robustness

namespace {

XQ robustness_f(const std::vector<FVec>& v, const FMat& d, const Weights& w) {
  std::size_t n = w.size();
  for (const FVec& x : v)
    if (!is_cycle(d, x)) throw std::invalid_argument("robustness: input is not a cycle");
  std::vector<FVec> im;
  FMat dt = fmat_transpose(d);
  for (const FVec& col : dt) im.push_back(col);
  std::vector<FVec> vs = independent_subset(v);
  std::vector<FVec> wsp = intersect_spans(vs, independent_subset(im));
  if (wsp.empty()) return XQ::pos_inf();
  std::vector<FVec> pre;
  for (const FVec& x : wsp) pre.push_back(*solve(d, x, n));
  std::vector<FVec> base = orthogonal_basis(nullspace(d, n), w);
  std::vector<FVec> ext = extend_orthogonal(base, pre, w);
  XQ best = XQ::pos_inf();
  for (const FVec& y : ext) {
    XQ r = level(y, w) - level(fmat_apply(d, y), w);
    if (r < best) best = r;
  }
  return best;
}

std::vector<FVec> to_fvecs(const std::vector<Chain>& v) {
  std::vector<FVec> out;
  for (const Chain& c : v) out.push_back(to_fvec(c));
  return out;
}

}  // namespace

XQ robustness(const std::vector<Chain>& v, const FilteredComplex& cx) {
  return robustness_f(to_fvecs(v), to_fmat(cx.diff()), cx.action());
}

bool is_delta_robust(const std::vector<Chain>& v, const Q& delta, const FilteredComplex& cx) {
  return robustness(v, cx) >= XQ(delta);
}

std::size_t homology_dim(const NMat& d) { return d.size() - 2 * rank(to_fmat(d)); }

RobustSubspace find_robust_subspace(const FilteredComplex& cx, const NMat& d0, const NMat& d1) {
  std::size_t n = cx.size();
  FMat f0 = to_fmat(d0), f1 = to_fmat(d1), fd = to_fmat(cx.diff());
  for (std::size_t i = 0; i < n; ++i)
    if (!fvec_is_zero(fvec_add(fvec_add(f0[i], f1[i]), fd[i])))
      throw std::invalid_argument("find_robust_subspace: d0 + d1 != d");
  FMat sq = fmat_mul(f0, f0);
  for (const auto& row : sq)
    if (!fvec_is_zero(row)) throw std::invalid_argument("find_robust_subspace: d0 is not a differential");
  FilteredMap m0{cx, cx, d0, 0};
  if (m0.shift() > XQ(0)) throw std::invalid_argument("find_robust_subspace: d0 raises action");
  std::size_t r = rank(fd), r0 = rank(f0);
  if (r < r0) throw std::invalid_argument("find_robust_subspace: dim H(d0) < dim H(d)");
  std::size_t hdiff = 2 * (r - r0);
  if (hdiff % 2) throw std::invalid_argument("find_robust_subspace: parity violation");
  RobustSubspace out;
  out.k = r - r0;
  out.drop_d1 = action_drop(FilteredMap{cx, cx, d1, 0});
  std::vector<FVec> im0, im;
  FMat t0 = fmat_transpose(f0), t = fmat_transpose(fd);
  for (const FVec& c : t0) im0.push_back(c);
  for (const FVec& c : t) im.push_back(c);
  std::vector<FVec> ob = orthogonal_basis(im0, cx.action());
  std::vector<std::size_t> comp = unit_completion(ob, cx.action());
  std::vector<FVec> units;
  for (std::size_t j : comp) {
    FVec e(n);
    e[j] = Frac::one();
    units.push_back(e);
  }
  std::vector<FVec> v = intersect_spans(independent_subset(im), units);
  for (const FVec& x : v) out.basis.push_back(to_nvec(clear_denominators(x), cx.cutoff()));
  XQ rob = robustness_f(v, fd, cx.action());
  out.verified = out.drop_d1.is_pos_inf() ? rob.is_pos_inf() : rob >= out.drop_d1;
  return out;
}

RigidityReport verify_rig_cplx2(const FilteredComplex& cx, const NMat& d0, const NMat& d1,
                                const FilteredMap& f) {
  RigidityReport rep;
  std::size_t n = cx.size();
  FMat f0 = to_fmat(d0);
  rep.dim_h0 = n - 2 * rank(f0);
  rep.rank_f = rank(to_fmat(f.m));
  rep.conclusion = rep.rank_f >= rep.dim_h0;
  auto fail = [&](const std::string& why) {
    rep.failed = why;
    return rep;
  };
  for (const auto& row : fmat_mul(f0, f0))
    if (!fvec_is_zero(row)) return fail("d0 is not a differential");
  if (FilteredMap{cx, cx, d0, 0}.shift() > XQ(0)) return fail("d0 raises action");
  FMat s = fmat_add(fmat_add(f0, to_fmat(d1)), to_fmat(cx.diff()));
  for (const auto& row : s)
    if (!fvec_is_zero(row)) return fail("d0 + d1 != d");
  if (rep.dim_h0 < homology_dim(cx.diff())) return fail("dim H(d0) < dim H(d)");
  if (!f.is_chain_map()) return fail("f is not a chain map");
  FilteredMap d1m{cx, cx, d1, 0};
  XQ drop;
  try {
    drop = action_drop(d1m);
  } catch (const std::invalid_argument&) {
    return fail("d1 raises action");
  }
  FilteredMap diff = map_sum(f, identity_map(cx));
  HomotopyResult bh = homotopical_boundary_level(diff);
  if (!(bh.value < drop)) return fail("B_h(f - id) >= action drop of d1");
  rep.hypotheses = true;
  return rep;
}

InjectivityReport check_injectivity_lemma(const FilteredMap& f, const FilteredMap& g) {
  InjectivityReport rep;
  FMat fg = to_fmat(g.m);
  FMat ff = to_fmat(f.m);
  rep.strictly_filtered = f.shift() <= XQ(0);
  rep.injective = rank(ff) == f.dom.size();
  auto fail = [&](const std::string& why) {
    rep.failed = why;
    return rep;
  };
  auto gi = inverse(fg);
  if (f.dom.size() != f.cod.size() || !gi) return fail("g is not an isomorphism");
  if (g.shift() > XQ(0)) return fail("g is not strictly filtered");
  // The inverse may be an infinite series; measure it exactly.
  XQ gshift = XQ::neg_inf();
  for (std::size_t i = 0; i < gi->size(); ++i)
    for (std::size_t j = 0; j < (*gi)[i].size(); ++j) {
      if ((*gi)[i][j].is_zero()) continue;
      XQ s = XQ(g.dom.action()[i] - g.cod.action()[j]) - (*gi)[i][j].val();
      if (s > gshift) gshift = s;
    }
  if (gshift > XQ(0)) return fail("g^{-1} is not strictly filtered");
  if (!f.is_chain_map() || !g.is_chain_map()) return fail("f or g is not a chain map");
  HomotopyResult bh = homotopical_boundary_level(map_sum(f, g));
  XQ dc = action_drop(FilteredMap{f.dom, f.dom, f.dom.diff(), 0});
  XQ dd = action_drop(FilteredMap{f.cod, f.cod, f.cod.diff(), 0});
  if (bh.value.is_pos_inf()) return fail("f - g is not null-homotopic");
  if (!(bh.value < xmin(dc, dd))) return fail("B_h(f - g) >= min action drop");
  rep.hypotheses = true;
  return rep;
}

FilteredMap filtered_inverse(const FilteredMap& f, const FilteredMap& g) {
  std::size_t n = f.dom.size();
  if (f.cod.size() != n) throw std::invalid_argument("filtered_inverse: not square");
  auto gi = inverse(to_fmat(g.m));
  if (!gi) throw std::invalid_argument("filtered_inverse: g is not invertible");
  const Q& cut = f.dom.cutoff();
  NMat ginv = to_nmat(*gi, cut);
  NMat k = nmat_mul(ginv, nmat_add(f.m, g.m));
  FilteredMap km{f.dom, f.dom, k, 0};
  XQ s = km.shift();
  if (!s.is_neg_inf() && !(s < XQ(0)))
    throw std::invalid_argument("filtered_inverse: k does not strictly decrease action");
  NMat a = nmat_identity(n, cut);
  NMat pw = a;
  while (true) {
    pw = nmat_mul(pw, k);
    if (nmat_is_zero(pw)) break;
    a = nmat_add(a, pw);
  }
  return FilteredMap{f.cod, f.dom, nmat_mul(a, ginv), 0};
}

}  // namespace artifact
