#include "artifact/twisted.hpp"

#include <algorithm>
#include <random>
#include <sstream>
#include <stdexcept>

namespace artifact {

namespace {

Chain unit_vec(std::size_t n, std::size_t i, const Q& cut) {
  Chain c(n, Nov(cut));
  c[i] = Nov::mono(Q(0), cut);
  return c;
}

bool is_zero_chain(const Chain& c) {
  return std::all_of(c.begin(), c.end(), [](const Nov& x) { return x.is_zero(); });
}

// Strictly decreasing sequences from `from` down to `to`, both included.
std::vector<std::vector<int>> descending_paths(int from, int to) {
  std::vector<std::vector<int>> out;
  int m = from - to - 1;
  for (int mask = 0; mask < (1 << std::max(m, 0)); ++mask) {
    std::vector<int> p{from};
    for (int k = from - 1; k > to; --k)
      if (mask & (1 << (k - to - 1))) p.push_back(k);
    p.push_back(to);
    out.push_back(p);
  }
  std::sort(out.begin(), out.end(), [](const std::vector<int>& a, const std::vector<int>& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a > b;
  });
  return out;
}

// Collects c_{k0,k1}, ..., or nothing if one of them is absent.
std::optional<std::vector<Chain>> path_cycles(const TwistedData& data, const std::vector<int>& path) {
  std::vector<Chain> cs;
  for (std::size_t t = 0; t + 1 < path.size(); ++t) {
    const Chain* c = data.get(path[t], path[t + 1]);
    if (!c || is_zero_chain(*c)) return std::nullopt;
    cs.push_back(*c);
  }
  return cs;
}

std::string path_symbol(const std::vector<int>& path) {
  std::ostringstream s;
  s << "mu_" << path.size() << "(-";
  for (std::size_t t = 0; t + 1 < path.size(); ++t) s << ",c_{" << path[t] << "," << path[t + 1] << "}";
  s << ")";
  return s.str();
}

bool fmat_equal(const FMat& a, const FMat& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!fvec_is_zero(fvec_add(a[i], b[i]))) return false;
  return true;
}

FMat fmat_sub_identity(FMat a) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i][i] += Frac::one();
  return a;
}

bool fmat_polynomial(const FMat& m) {
  for (const FVec& r : m)
    for (const Frac& x : r)
      if (!x.is_polynomial()) return false;
  return true;
}

XQ shift_of(const FilteredMap& f) { return f.shift(); }

}  // namespace

// ---------------------------------------------------------------- iterated cones

IteratedCone build_iterated_cone(const IteratedConeSpec& spec, int max_arity) {
  const CategoryPtr& cat = spec.cat;
  std::size_t r = spec.objects.size() - 1;
  if (spec.objects.empty() || spec.phi.size() != r || spec.rho.size() != r || spec.delta.size() != r)
    throw std::invalid_argument("iterated cone: need one map per stage");
  IteratedCone out;
  out.stages.push_back(std::make_shared<WFModule>(yoneda(cat, spec.objects[0])));
  Discrepancy base = cat->measured_discrepancy();
  base.kind = DiscKind::Module;
  out.disc.push_back(base);
  for (std::size_t i = 1; i <= r; ++i) {
    PreModHom phi;
    phi.dom = std::make_shared<WFModule>(yoneda(cat, spec.objects[i]));
    phi.cod = out.stages.back();
    phi.f = spec.phi[i - 1];
    phi.rho = spec.rho[i - 1];
    phi.disc = spec.delta[i - 1];
    ConeModule c = cone(phi, spec.rho[i - 1], spec.delta[i - 1], max_arity);
    out.stages.push_back(c.module);
    const Discrepancy& dl = spec.delta[i - 1];
    Discrepancy d = out.disc.back();
    for (std::size_t k = 1; k <= d.cap() && k <= dl.cap(); ++k) d.at(k) = std::max(d.at(k), Q(dl.at(k) - dl.at(1)));
    out.disc.push_back(d);
  }
  for (int x = 0; x < static_cast<int>(cat->num_objects()); ++x) {
    std::vector<std::size_t> b;
    for (std::size_t i = r + 1; i-- > 0;) b.push_back(cat->hom(x, spec.objects[i]).size());
    out.blocks.push_back(b);
  }
  return out;
}

// ---------------------------------------------------------------- twisted data

const Chain* TwistedData::get(int q, int p) const {
  auto it = c.find({q, p});
  return it == c.end() ? nullptr : &it->second;
}

NMat TwistedMatrix::full() const {
  std::size_t n = 0;
  std::vector<std::size_t> off;
  for (std::size_t s : sizes) {
    off.push_back(n);
    n += s;
  }
  Q cut = default_cutoff();
  for (const auto& row : block)
    for (const NMat& b : row)
      if (!b.empty() && !b[0].empty()) cut = b[0][0].cutoff();
  NMat m = nmat_zero(n, n, cut);
  for (std::size_t i = 0; i < sizes.size(); ++i)
    for (std::size_t j = 0; j < sizes.size(); ++j)
      for (std::size_t a = 0; a < sizes[i]; ++a)
        for (std::size_t b = 0; b < sizes[j]; ++b) m[off[i] + a][off[j] + b] = block[i][j][a][b];
  return m;
}

TwistedMatrix assemble_twisted_mu1(const WFCategory& cat, int x, const TwistedData& data) {
  const std::vector<int>& L = data.objects;
  int r = static_cast<int>(L.size()) - 1;
  if (r < 0) throw std::invalid_argument("twisted: no objects");
  if (cat.cap() < r + 1) throw std::invalid_argument("twisted: arity cap below r + 1");
  TwistedMatrix t;
  for (int j = 0; j <= r; ++j) t.sizes.push_back(cat.hom(x, L[static_cast<std::size_t>(j)]).size());
  Q cut = cat.hom(x, L[0]).cutoff();
  t.block.assign(static_cast<std::size_t>(r + 1), std::vector<NMat>(static_cast<std::size_t>(r + 1)));
  t.symbolic.assign(static_cast<std::size_t>(r + 1), std::vector<std::string>(static_cast<std::size_t>(r + 1), "0"));
  for (int i = 0; i <= r; ++i)
    for (int j = 0; j <= r; ++j) {
      std::size_t ni = t.sizes[static_cast<std::size_t>(i)], nj = t.sizes[static_cast<std::size_t>(j)];
      NMat& blk = t.block[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      blk = nmat_zero(ni, nj, cut);
      std::string& sym = t.symbolic[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      if (i > j) continue;
      if (i == j) {
        sym = "mu_1";
        blk = cat.hom(x, L[static_cast<std::size_t>(j)]).diff();
        continue;
      }
      sym.clear();
      for (const std::vector<int>& path : descending_paths(j, i)) {
        if (!sym.empty()) sym += " + ";
        sym += path_symbol(path);
        auto cs = path_cycles(data, path);
        if (!cs) continue;
        std::vector<int> objs{x};
        for (int k : path) objs.push_back(L[static_cast<std::size_t>(k)]);
        for (std::size_t b = 0; b < nj; ++b) {
          std::vector<Chain> args{unit_vec(nj, b, cut)};
          args.insert(args.end(), cs->begin(), cs->end());
          Chain out = cat.mu(objs, args);
          for (std::size_t a = 0; a < ni; ++a) blk[a][b] += out[a];
        }
      }
    }
  return t;
}

bool check_twisted_square_zero(const TwistedMatrix& m) {
  NMat f = m.full();
  return nmat_is_zero(nmat_mul(f, f));
}

IteratedConeSpec twisted_cone_spec(const CategoryPtr& cat, const TwistedData& data, int max_arity) {
  const std::vector<int>& L = data.objects;
  int r = static_cast<int>(L.size()) - 1;
  if (r < 0) throw std::invalid_argument("twisted: no objects");
  IteratedConeSpec spec{cat, L, {}, {}, {}};
  int cap = std::min(max_arity, cat->cap());
  ModulePtr prev = std::make_shared<WFModule>(yoneda(cat, L[0]));
  for (int i = 1; i <= r; ++i) {
    auto dom = std::make_shared<WFModule>(yoneda(cat, L[static_cast<std::size_t>(i)]));
    ModulePtr cod = prev;
    ModuleOp fn = [&](const std::vector<int>& objs, const std::vector<Chain>& as, const Chain& b) {
      int x0 = objs.front();
      Chain out = cod->value(x0).zero_chain();
      std::size_t off = 0;
      for (int p = i - 1; p >= 0; --p) {
        std::size_t np = cat->hom(x0, L[static_cast<std::size_t>(p)]).size();
        for (const std::vector<int>& path : descending_paths(i, p)) {
          int arity = static_cast<int>(as.size()) + static_cast<int>(path.size());
          if (arity > cap) continue;
          auto cs = path_cycles(data, path);
          if (!cs) continue;
          std::vector<int> o = objs;
          for (int k : path) o.push_back(L[static_cast<std::size_t>(k)]);
          std::vector<Chain> args = as;
          args.push_back(b);
          args.insert(args.end(), cs->begin(), cs->end());
          Chain v = cat->mu(o, args);
          for (std::size_t a = 0; a < np; ++a) out[off + a] += v[a];
        }
        off += np;
      }
      return out;
    };
    OpTable table = tabulate_module_map(*dom, 1, cap, fn);
    PreModHom phi{dom, cod, table, Q(0), {}};
    Discrepancy delta = Discrepancy::zeros(static_cast<std::size_t>(cat->cap()));
    for (int d = 1; d <= cat->cap(); ++d) {
      XQ e = phi.excess(d);
      if (e.finite() && e.value() > 0) delta.at(static_cast<std::size_t>(d)) = e.value();
    }
    phi.disc = delta;
    spec.phi.push_back(table);
    spec.rho.push_back(Q(0));
    spec.delta.push_back(delta);
    prev = cone(phi, Q(0), delta, cap).module;
  }
  return spec;
}

TwistedSpecFile parse_twisted_spec(const std::string& text, int cap) {
  std::istringstream in(text);
  std::string line, cat_text;
  std::vector<std::string> names;
  std::vector<std::string> clines;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string head;
    ls >> head;
    if (head == "twisted") {
      std::string n;
      while (ls >> n) names.push_back(n);
    } else if (head == "c" && line.find(':') != std::string::npos) {
      clines.push_back(line);
    } else if (head == "phi") {
      throw std::invalid_argument("phi tables are derived from the c entries; remove the phi lines");
    } else {
      cat_text += line + "\n";
    }
  }
  if (names.empty()) throw std::invalid_argument("twisted spec: missing 'twisted' line");
  auto cat = std::make_shared<WFCategory>(WFCategory::parse(cat_text, cap));
  TwistedSpecFile f{cat, {}};
  for (const std::string& n : names) f.data.objects.push_back(cat->object(n));
  for (const std::string& l : clines) {
    std::size_t colon = l.find(':');
    std::istringstream hs(l.substr(0, colon));
    std::string c;
    int q = -1, p = -1;
    hs >> c >> q >> p;
    int r = static_cast<int>(names.size()) - 1;
    if (!(0 <= p && p < q && q <= r)) throw std::invalid_argument("twisted spec: bad indices in '" + l + "'");
    const FilteredComplex& h =
        cat->hom(f.data.objects[static_cast<std::size_t>(q)], f.data.objects[static_cast<std::size_t>(p)]);
    f.data.c[{q, p}] = parse_chain(l.substr(colon + 1), h);
  }
  return f;
}

DgTwisted random_dg_twisted(std::uint64_t seed, int r) {
  if (r < 1) throw std::invalid_argument("random_dg_twisted: r >= 1");
  std::mt19937_64 rng(seed);
  auto quarter = [&](int lo, int hi) {
    std::uniform_int_distribution<int> u(lo * 4, hi * 4);
    return Q(u(rng), 4);
  };
  auto coin = [&](int num, int den) { return std::uniform_int_distribution<int>(0, den - 1)(rng) < num; };
  Q cut = default_cutoff();
  std::size_t n = static_cast<std::size_t>(r) + 1;
  std::vector<FilteredComplex> spaces;
  std::vector<std::string> names;
  for (std::size_t j = 0; j < n; ++j) {
    names.push_back("L" + std::to_string(j));
    std::size_t sz = coin(3, 4) ? 2 : 1;
    std::vector<std::string> gn;
    std::vector<Q> act;
    for (std::size_t k = 0; k < sz; ++k) {
      gn.push_back("v" + std::to_string(k));
      act.push_back(quarter(0, 2));
    }
    NMat d = nmat_zero(sz, sz, cut);
    if (sz == 2 && coin(3, 4)) {
      // d v1 = T^a v0 with A(v0) - a <= A(v1)
      Q a = std::max(Q(0), Q(act[0] - act[1])) + quarter(0, 1);
      d[0][1] = Nov::mono(a, cut);
    }
    spaces.emplace_back(gn, act, d);
  }
  std::vector<std::size_t> off;
  std::size_t total = 0;
  for (const FilteredComplex& s : spaces) {
    off.push_back(total);
    total += s.size();
  }
  NMat delta = nmat_zero(total, total, cut);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t a = 0; a < spaces[j].size(); ++a)
      for (std::size_t b = 0; b < spaces[j].size(); ++b) delta[off[j] + a][off[j] + b] = spaces[j].diff()[a][b];
  // G = I + N, N strictly block lower triangular (V_p -> V_q for q > p).
  NMat nil = nmat_zero(total, total, cut);
  for (std::size_t q = 0; q < n; ++q)
    for (std::size_t p = 0; p < q; ++p)
      for (std::size_t a = 0; a < spaces[q].size(); ++a)
        for (std::size_t b = 0; b < spaces[p].size(); ++b)
          if (coin(2, 3)) nil[off[q] + a][off[p] + b] = Nov::mono(quarter(0, 3), cut);
  NMat g = nmat_add(nmat_identity(total, cut), nil);
  NMat ginv = nmat_identity(total, cut), pw = nmat_identity(total, cut);
  for (std::size_t k = 1; k < n; ++k) {
    pw = nmat_mul(pw, nil);
    ginv = nmat_add(ginv, pw);
  }
  NMat dd = nmat_mul(nmat_mul(g, delta), ginv);
  std::vector<std::vector<Q>> offset(n, std::vector<Q>(n, Q(0)));
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      if (x != y) offset[x][y] = quarter(0, 2);
  DgTwisted out;
  out.cat = std::make_shared<WFCategory>(dg_category(names, spaces, offset, std::max(r + 1, 3)));
  for (std::size_t j = 0; j < n; ++j) out.data.objects.push_back(static_cast<int>(j));
  for (std::size_t q = 0; q < n; ++q)
    for (std::size_t p = 0; p < q; ++p) {
      const FilteredComplex& h = out.cat->hom(static_cast<int>(q), static_cast<int>(p));
      Chain c = h.zero_chain();
      for (std::size_t u = 0; u < spaces[q].size(); ++u)
        for (std::size_t v = 0; v < spaces[p].size(); ++v)
          c[static_cast<std::size_t>(
              dg_elementary(*out.cat, static_cast<int>(q), static_cast<int>(p), u, v))] = dd[off[q] + u][off[p] + v];
      if (!is_zero_chain(c)) out.data.c[{static_cast<int>(q), static_cast<int>(p)}] = c;
    }
  return out;
}

// ---------------------------------------------------------------- bounds

ChiXi bounds_chi_xi(int m, int d, int q, const Q& kappa, const Discrepancy& ea,
                    const std::vector<Discrepancy>& deltas) {
  if (m < 0 || d < 1 || q < 0) throw std::invalid_argument("bounds_chi_xi: bad indices");
  auto need = [](const Discrepancy& e, int k) {
    if (static_cast<int>(e.cap()) < k) throw std::invalid_argument("bounds_chi_xi: discrepancy too short");
  };
  auto need_maps = [&](int k) {
    if (static_cast<int>(deltas.size()) < k) throw std::invalid_argument("bounds_chi_xi: too few maps");
  };
  ChiXi out{0, kappa};
  need(ea, d + m);
  need_maps(m);
  for (int j = 1; j <= m; ++j) {
    need(deltas[static_cast<std::size_t>(j - 1)], d + m);
    for (int i = 1; i <= d + m; ++i) out.chi += deltas[static_cast<std::size_t>(j - 1)].at(static_cast<std::size_t>(i));
  }
  for (int i = 1; i <= d + m; ++i) out.chi += ea.at(static_cast<std::size_t>(i));
  need(ea, q + 3);
  need_maps(q);
  for (int i = 1; i <= q + 3; ++i) out.xi += ea.at(static_cast<std::size_t>(i));
  for (int j = 1; j <= q; ++j) {
    need(deltas[static_cast<std::size_t>(j - 1)], q + 2);
    for (int i = 1; i <= q + 2; ++i) out.xi += deltas[static_cast<std::size_t>(j - 1)].at(static_cast<std::size_t>(i));
  }
  return out;
}

AuditReport audit_structure_theorem(const IteratedCone& k, const ModulePtr& m, const PreModHom& sigma,
                                    const Q& xi_r, int max_arity) {
  AuditReport rep;
  rep.shift = XQ::neg_inf();
  auto fail = [&rep](const std::string& why) {
    if (rep.failed.empty()) rep.failed = why;
  };
  const WFModule& kr = *k.top();
  rep.module_map = mu1_mod(sigma, max_arity).is_zero();
  if (!rep.module_map) fail("sigma is not a module map");
  rep.invertible = rep.triangular = rep.unit_diagonal = rep.inverse_filtered = rep.base_filtration = true;
  for (int x = 0; x < static_cast<int>(kr.values().size()); ++x) {
    const FilteredComplex& kx = kr.value(x);
    const FilteredComplex& mx = m->value(x);
    std::string at = " at " + kr.cat().objects()[static_cast<std::size_t>(x)];
    if (kx.size() != mx.size()) {
      rep.invertible = false;
      fail("size mismatch" + at);
      continue;
    }
    std::size_t n = kx.size();
    NMat s = nmat_zero(n, n, kx.cutoff());
    for (std::size_t j = 0; j < n; ++j) {
      Chain col = sigma.apply({x}, {}, unit_vec(n, j, kx.cutoff()));
      for (std::size_t i = 0; i < n; ++i) s[i][j] = col[i];
    }
    FMat sf = to_fmat(s);
    rep.shift = xmax(rep.shift, fmat_shift(sf, kx, mx));
    std::vector<std::size_t> blk_of;
    const std::vector<std::size_t>& blocks = k.blocks[static_cast<std::size_t>(x)];
    for (std::size_t b = 0; b < blocks.size(); ++b)
      for (std::size_t t = 0; t < blocks[b]; ++t) blk_of.push_back(b);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        if (blk_of[i] < blk_of[j] && !sf[i][j].is_zero()) {
          rep.triangular = false;
          fail("component into an earlier block" + at);
        }
        if (blk_of[i] == blk_of[j] && sf[i][j] != (i == j ? Frac::one() : Frac::zero())) {
          rep.unit_diagonal = false;
          fail("diagonal block is not the identity" + at);
        }
      }
    auto inv = inverse(sf);
    if (!inv) {
      rep.invertible = false;
      fail("sigma_1 is not invertible" + at);
    } else if (fmat_shift(*inv, mx, kx) > XQ(0)) {
      rep.inverse_filtered = false;
      fail("inverse raises action" + at);
    }
    std::size_t last = blocks.empty() ? 0 : blocks.back();
    for (std::size_t i = n - last; i < n; ++i)
      if (kx.action()[i] != mx.action()[i]) {
        rep.base_filtration = false;
        fail("base block filtration differs" + at);
      }
  }
  if (xi_r > 0 && rep.shift.finite()) rep.ratio = rep.shift.value() / xi_r;
  return rep;
}

// ---------------------------------------------------------------- retract energy

XQ retract_value(const FilteredMap& f, const FMat& g) {
  const FilteredComplex& c0 = f.dom;
  if (!fmat_is_chain_map(g, f.cod, c0)) return XQ::pos_inf();
  FMat psi = fmat_sub_identity(fmat_mul(g, to_fmat(f.m)));
  FHomotopy h = homotopical_boundary_level_f(psi, c0, c0);
  if (h.value.is_pos_inf()) return XQ::pos_inf();
  return xmax(xmax(h.value, fmat_shift(g, f.cod, c0) + shift_of(f)), XQ(0));
}

namespace {

struct Candidate {
  XQ value = XQ::pos_inf();
  FMat g, h;
};

void consider(Candidate& best, const FilteredMap& f, FMat g) {
  XQ v = retract_value(f, g);
  if (!(v < best.value)) return;
  FMat psi = fmat_sub_identity(fmat_mul(g, to_fmat(f.m)));
  FHomotopy h = homotopical_boundary_level_f(psi, f.dom, f.dom);
  best.value = v;
  best.g = std::move(g);
  best.h = h.homotopy.empty() ? fmat_zero(f.dom.size(), f.dom.size()) : h.homotopy;
}

std::vector<FVec> columns(const FMat& m, std::size_t cols) {
  std::vector<FVec> out(cols, FVec(m.size()));
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < cols; ++j) out[j][i] = m[i][j];
  return out;
}

FMat from_columns(const std::vector<FVec>& cs, std::size_t rows) {
  FMat m = fmat_zero(rows, cs.size());
  for (std::size_t j = 0; j < cs.size(); ++j)
    for (std::size_t i = 0; i < rows; ++i) m[i][j] = cs[j][i];
  return m;
}

}  // namespace

RetractEnergy retract_energy(const FilteredMap& f) {
  const FilteredComplex& c0 = f.dom;
  const FilteredComplex& c1 = f.cod;
  std::size_t n0 = c0.size(), n1 = c1.size();
  FMat F = to_fmat(f.m), d0 = to_fmat(c0.diff()), d1 = to_fmat(c1.diff());
  RetractEnergy out{XQ::pos_inf(), XQ::pos_inf(), {}, {}};

  std::vector<FVec> z0 = nullspace(d0, n0);
  std::vector<FVec> b0 = independent_subset(columns(d0, n0));
  std::vector<FVec> b1 = independent_subset(columns(d1, n1));
  std::vector<FVec> fz;
  for (const FVec& z : z0) fz.push_back(fmat_apply(F, z));
  // H(f) injective iff F(Z_0) meets B_1 exactly in F(B_0).
  std::vector<FVec> joint = b1;
  joint.insert(joint.end(), fz.begin(), fz.end());
  if (independent_subset(joint).size() - b1.size() != z0.size() - b0.size()) return out;

  // Lower bound: on an orthogonal basis of F(Z_0), compare how deep the
  // preimage class sits against how deep its image sits.
  out.lower = XQ(0);
  std::vector<FVec> fzi = independent_subset(fz);
  if (!fzi.empty()) {
    std::vector<FVec> ys = orthogonal_basis(fzi, c1.action());
    FMat fzm = from_columns(fz, n1);
    XQ gap = XQ::neg_inf();
    for (const FVec& y : ys) {
      auto lam = solve(fzm, y, fz.size());
      if (!lam) continue;
      FVec x(n0);
      for (std::size_t t = 0; t < fz.size(); ++t) x = fvec_add(x, fvec_scale((*lam)[t], z0[t]));
      Distance s0 = dist_to_subspace(x, b0, c0.action());
      if (s0.value.is_neg_inf()) continue;
      Distance s1 = dist_to_subspace(y, b1, c1.action());
      gap = xmax(gap, s0.value - s1.value);
    }
    if (gap.finite()) out.lower = xmax(XQ(0), shift_of(f) + gap);
  }

  Candidate best;
  // (a) invert f on an orthogonal basis of its image, zero on a complement.
  if (rank(F) == n0 && n0 > 0) {
    std::vector<FVec> ys = orthogonal_basis(columns(F, n0), c1.action());
    std::vector<std::size_t> comp = unit_completion(ys, c1.action());
    std::vector<FVec> basis = ys, images;
    for (const FVec& y : ys) images.push_back(*solve(F, y, n0));
    for (std::size_t u : comp) {
      FVec e(n1);
      e[u] = Frac::one();
      basis.push_back(e);
      images.push_back(FVec(n0));
    }
    auto binv = inverse(from_columns(basis, n1));
    if (binv) consider(best, f, fmat_mul(from_columns(images, n0), *binv));
  }
  // (b) any solution of d0 g + g d1 = 0, g F + d0 h + h d0 = id.
  {
    std::size_t ng = n0 * n1, nu = ng + n0 * n0;
    FMat sys = fmat_zero(n0 * n1 + n0 * n0, nu);
    FVec rhs(n0 * n1 + n0 * n0);
    auto gi = [&](std::size_t i, std::size_t j) { return i * n1 + j; };
    auto hi = [&](std::size_t i, std::size_t j) { return ng + i * n0 + j; };
    for (std::size_t i = 0; i < n0; ++i)
      for (std::size_t j = 0; j < n1; ++j) {
        FVec& row = sys[i * n1 + j];
        for (std::size_t k = 0; k < n0; ++k) row[gi(k, j)] += d0[i][k];
        for (std::size_t k = 0; k < n1; ++k) row[gi(i, k)] += d1[k][j];
      }
    for (std::size_t i = 0; i < n0; ++i)
      for (std::size_t j = 0; j < n0; ++j) {
        std::size_t r = ng + i * n0 + j;
        FVec& row = sys[r];
        for (std::size_t k = 0; k < n1; ++k) row[gi(i, k)] += F[k][j];
        for (std::size_t k = 0; k < n0; ++k) row[hi(k, j)] += d0[i][k];
        for (std::size_t k = 0; k < n0; ++k) row[hi(i, k)] += d0[k][j];
        if (i == j) rhs[r] = Frac::one();
      }
    auto sol = solve(sys, rhs, nu);
    if (sol) {
      FMat g = fmat_zero(n0, n1);
      for (std::size_t i = 0; i < n0; ++i)
        for (std::size_t j = 0; j < n1; ++j) g[i][j] = (*sol)[gi(i, j)];
      consider(best, f, g);
    }
  }
  if (n0 == 0) consider(best, f, fmat_zero(0, n1));
  out.upper = best.value;
  out.g = best.g;
  out.homotopy = best.h;
  if (out.upper < out.lower) out.lower = out.upper;
  return out;
}

SubadditivityReport check_rho_subadditive(const FilteredMap& f, const FilteredMap& fp) {
  SubadditivityReport rep;
  RetractEnergy e = retract_energy(f), ep = retract_energy(fp);
  rep.rho_f = e.upper;
  rep.rho_fp = ep.upper;
  FilteredMap comp = compose(fp, f);
  if (e.upper.is_pos_inf() || ep.upper.is_pos_inf()) {
    rep.rho_composite = retract_energy(comp).upper;
    rep.holds = true;
    rep.witness_ok = true;
    rep.eta_shift = rep.eta_bound = XQ::neg_inf();
    return rep;
  }
  FMat gg = fmat_mul(e.g, ep.g);
  rep.rho_composite = retract_value(comp, gg);
  rep.holds = rep.rho_composite <= e.upper + ep.upper;
  FMat F = to_fmat(f.m);
  FMat eta = fmat_add(fmat_mul(fmat_mul(e.g, ep.homotopy), F), e.homotopy);
  FMat lhs = fmat_sub_identity(fmat_mul(gg, to_fmat(comp.m)));
  FMat d0 = to_fmat(f.dom.diff());
  FMat rhs = fmat_add(fmat_mul(d0, eta), fmat_mul(eta, d0));
  const FilteredComplex& c0 = f.dom;
  rep.eta_shift = fmat_shift(eta, c0, c0);
  rep.eta_bound = xmax(fmat_shift(e.g, f.cod, c0) + shift_of(f) + fmat_shift(ep.homotopy, fp.dom, fp.dom),
                       fmat_shift(e.homotopy, c0, c0));
  rep.witness_ok = fmat_equal(lhs, rhs) && rep.eta_shift <= rep.eta_bound;
  return rep;
}

namespace {

// Cone of phi : a -> b with the a block first and no action lift.
FilteredComplex map_cone(const FilteredComplex& a, const FilteredComplex& b, const NMat& phi,
                         const std::string& pa, const std::string& pb) {
  std::size_t na = a.size(), nb = b.size();
  std::vector<std::string> names;
  std::vector<Q> act;
  for (std::size_t i = 0; i < na; ++i) {
    names.push_back(pa + a.names()[i]);
    act.push_back(a.action()[i]);
  }
  for (std::size_t i = 0; i < nb; ++i) {
    names.push_back(pb + b.names()[i]);
    act.push_back(b.action()[i]);
  }
  NMat d = nmat_zero(na + nb, na + nb, a.size() ? a.cutoff() : b.cutoff());
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < na; ++j) d[i][j] = a.diff()[i][j];
  for (std::size_t i = 0; i < nb; ++i) {
    for (std::size_t j = 0; j < nb; ++j) d[na + i][na + j] = b.diff()[i][j];
    for (std::size_t j = 0; j < na; ++j) d[na + i][j] = phi[i][j];
  }
  return FilteredComplex(names, act, d);
}

}  // namespace

ConeReplace cone_replace(const FilteredComplex& n, const FilteredComplex& k, const FilteredMap& phi,
                         const FilteredComplex& np, const FilteredMap& u, const FMat& v, const FMat& xi) {
  if (!fmat_polynomial(v) || !fmat_polynomial(xi))
    throw std::invalid_argument("cone_replace: v and xi must be finite sums");
  Q cut = n.cutoff();
  std::size_t nn = n.size(), nk = k.size(), nnp = np.size();
  XQ av = fmat_shift(v, np, n);
  Q r = av.finite() ? av.value() : Q(0);
  FilteredComplex npr = np.shifted(r);
  NMat vn = to_nmat(v, cut), xin = to_nmat(xi, cut);
  ConeReplace out;
  out.m1 = map_cone(n, k, phi.m, "n.", "k.");
  out.m1p = map_cone(npr, k, nmat_mul(phi.m, vn), "n'.", "k.");
  NMat up = nmat_zero(nnp + nk, nn + nk, cut);
  NMat phixi = nmat_mul(phi.m, xin);
  for (std::size_t i = 0; i < nnp; ++i)
    for (std::size_t j = 0; j < nn; ++j) up[i][j] = u.m[i][j];
  for (std::size_t i = 0; i < nk; ++i) {
    for (std::size_t j = 0; j < nn; ++j) up[nnp + i][j] = phixi[i][j];
    up[nnp + i][nn + i] = Nov::mono(Q(0), cut);
  }
  NMat vp = nmat_zero(nn + nk, nnp + nk, cut);
  for (std::size_t i = 0; i < nn; ++i)
    for (std::size_t j = 0; j < nnp; ++j) vp[i][j] = vn[i][j];
  for (std::size_t i = 0; i < nk; ++i) vp[nn + i][nnp + i] = Nov::mono(Q(0), cut);
  out.up = FilteredMap{out.m1, out.m1p, up, 0};
  out.vp = FilteredMap{out.m1p, out.m1, vp, 0};
  out.xip = fmat_zero(nn + nk, nn + nk);
  for (std::size_t i = 0; i < nn; ++i)
    for (std::size_t j = 0; j < nn; ++j) out.xip[i][j] = xi[i][j];
  FMat vpf = to_fmat(vp);
  FMat lhs = fmat_sub_identity(fmat_mul(vpf, to_fmat(up)));
  FMat d = to_fmat(out.m1.diff());
  out.homotopy_ok = out.up.is_chain_map() && out.vp.is_chain_map() &&
                    fmat_equal(lhs, fmat_add(fmat_mul(d, out.xip), fmat_mul(out.xip, d)));
  out.bound = xmax(xmax(shift_of(u) + av, fmat_shift(xi, n, n)), XQ(0));
  out.witness = retract_value(out.up, vpf);
  out.energy = retract_energy(out.up);
  return out;
}

ConeReplace cone_replace(const FilteredComplex& n, const FilteredComplex& k, const FilteredMap& phi,
                         const FilteredComplex& np, const FilteredMap& u) {
  RetractEnergy e = retract_energy(u);
  if (e.upper.is_pos_inf()) throw std::invalid_argument("cone_replace: u has no homotopy left inverse");
  return cone_replace(n, k, phi, np, u, e.g, e.homotopy);
}

WeightResult weight_wp(const std::vector<Model>& models) {
  WeightResult w{XQ::pos_inf(), -1};
  for (std::size_t i = 0; i < models.size(); ++i) {
    XQ v = retract_energy(models[i].alpha).upper;
    if (v < w.value) {
      w.value = v;
      w.best = static_cast<int>(i);
    }
  }
  return w;
}

}  // namespace artifact
