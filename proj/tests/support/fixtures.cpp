#include "support/fixtures.hpp"

namespace oracle {

using namespace artifact;

Discrepancy seq(std::vector<Q> v, DiscKind k) {
  for (Q& x : v) x.canonicalize();
  return Discrepancy(std::move(v), k);
}

Discrepancy random_disc(Rng& rng, std::size_t cap, DiscKind k) {
  std::vector<Q> v;
  for (std::size_t i = 0; i < cap; ++i) v.push_back(i == 0 && k != DiscKind::Hom ? Q(0) : rng.quarter(0, 8));
  return Discrepancy(v, k);
}

CategoryPtr random_dg(Rng& rng, int objects, int cap) {
  std::vector<std::string> names;
  std::vector<FilteredComplex> spaces;
  std::vector<std::vector<Q>> off(static_cast<std::size_t>(objects));
  for (int i = 0; i < objects; ++i) {
    names.push_back("L" + std::to_string(i));
    spaces.push_back(random_complex(rng, 2));
    for (int j = 0; j < objects; ++j) off[static_cast<std::size_t>(i)].push_back(i == j ? Q(0) : rng.quarter(0, 3));
  }
  return std::make_shared<WFCategory>(dg_category(names, spaces, off, cap));
}

PreModHom random_prehom(Rng& rng, const ModulePtr& a, const ModulePtr& b, const Q& rho, int arity) {
  PreModHom h = zero_hom(a, b);
  h.rho = rho;
  const WFCategory& c = a->cat();
  int n = static_cast<int>(c.num_objects());
  auto fill = [&](const OpKey& key, const Q& in, int x0) {
    const FilteredComplex& out = b->value(x0);
    Chain ch = out.zero_chain();
    for (std::size_t k = 0; k < out.size(); ++k)
      if (rng.coin(0.4)) ch[k] = Nov::mono(Q(out.action()[k] - in - rho + rng.quarter(0, 4)));
    h.f[key] = ch;
  };
  for (int x = 0; x < n; ++x)
    for (std::size_t m = 0; m < a->value(x).size(); ++m) fill({1, x, static_cast<int>(m)}, a->value(x).action()[m], x);
  if (arity >= 2)
    for (int x0 = 0; x0 < n; ++x0)
      for (int x1 = 0; x1 < n; ++x1)
        for (std::size_t g = 0; g < c.hom(x0, x1).size(); ++g)
          for (std::size_t m = 0; m < a->value(x1).size(); ++m) {
            if (!rng.coin(0.3)) continue;
            fill({2, x0, x1, static_cast<int>(g), static_cast<int>(m)},
                 c.hom(x0, x1).action()[g] + a->value(x1).action()[m], x0);
          }
  return h;
}

std::size_t total_homology(const WFModule& m) {
  std::size_t s = 0;
  for (const FilteredComplex& v : m.values()) s += homology_dim(v.diff());
  return s;
}


NMat dg_twisted_oracle(const DgTwisted& t, int x) {
  const WFCategory& c = *t.cat;
  std::size_t n = t.data.objects.size();
  std::vector<std::size_t> off, vs;
  std::size_t total = 0;
  for (std::size_t j = 0; j < n; ++j) {
    off.push_back(total);
    total += c.hom(x, static_cast<int>(j)).size();
  }
  NMat m = nmat_zero(total, total, default_cutoff());
  const FilteredComplex& hxx = c.hom(x, x);
  std::size_t nx = 0;
  while (nx * nx < hxx.size()) ++nx;
  for (std::size_t j = 0; j < n; ++j) {
    std::size_t nj = c.hom(x, static_cast<int>(j)).size() / nx;
    vs.push_back(nj);
  }
  for (std::size_t j = 0; j < n; ++j) {
    const NMat& dj = c.hom(x, static_cast<int>(j)).diff();
    for (std::size_t a = 0; a < dj.size(); ++a)
      for (std::size_t b = 0; b < dj.size(); ++b) m[off[j] + a][off[j] + b] += dj[a][b];
  }
  for (const auto& [qp, chain] : t.data.c) {
    auto [q, p] = qp;
    // chain entry E_{u v}, v in V_p -> u in V_q; b = E_{w u} in hom(X, L_q) goes to E_{w v}.
    for (std::size_t u = 0; u < vs[static_cast<std::size_t>(q)]; ++u)
      for (std::size_t v = 0; v < vs[static_cast<std::size_t>(p)]; ++v) {
        const Nov& coef = chain[u * vs[static_cast<std::size_t>(p)] + v];
        if (coef.is_zero()) continue;
        for (std::size_t w = 0; w < nx; ++w)
          m[off[static_cast<std::size_t>(p)] + w * vs[static_cast<std::size_t>(p)] + v]
           [off[static_cast<std::size_t>(q)] + w * vs[static_cast<std::size_t>(q)] + u] += coef;
      }
  }
  return m;
}

NMat reverse_blocks(const NMat& m, const std::vector<std::size_t>& sizes) {
  std::vector<std::size_t> off, perm;
  std::size_t t = 0;
  for (std::size_t s : sizes) {
    off.push_back(t);
    t += s;
  }
  for (std::size_t b = sizes.size(); b-- > 0;)
    for (std::size_t k = 0; k < sizes[b]; ++k) perm.push_back(off[b] + k);
  NMat out = m;
  for (std::size_t i = 0; i < t; ++i)
    for (std::size_t j = 0; j < t; ++j) out[i][j] = m[perm[i]][perm[j]];
  return out;
}

FilteredComplex zero_diff(const std::vector<Q>& act, const std::string& p) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < act.size(); ++i) names.push_back(p + std::to_string(i));
  return FilteredComplex(names, act, nmat_zero(act.size(), act.size(), default_cutoff()));
}

std::vector<Q> random_actions(Rng& rng, std::size_t n) {
  std::vector<Q> a;
  for (std::size_t i = 0; i < n; ++i) a.push_back(rng.quarter(0, 8));
  return a;
}

FilteredMap random_map(Rng& rng, const FilteredComplex& a, const FilteredComplex& b, double p) {
  NMat m = nmat_zero(b.size(), a.size(), default_cutoff());
  for (std::size_t i = 0; i < b.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j)
      if (rng.coin(p)) m[i][j] = Nov::mono(rng.quarter(0, 6));
  return FilteredMap{a, b, m, 0};
}

// min over left inverses g (g f = id) of A(g), row by row as a boundary level
// problem in C_1^dual; then rho = max(0, A(f) + that).
XQ zero_diff_rho_oracle(const FilteredMap& f) {
  std::size_t n0 = f.dom.size(), n1 = f.cod.size();
  std::size_t n = n0 + n1;
  NMat d = nmat_zero(n, n, default_cutoff());
  // the target coordinates sit far below everything so the search starts low enough
  std::vector<Q> w(n, Q(-64));
  for (std::size_t j = 0; j < n1; ++j) {
    w[j] = -f.cod.action()[j];
    for (std::size_t i = 0; i < n0; ++i) d[n1 + i][j] = f.m[j][i];
  }
  XQ best = XQ::neg_inf();
  for (std::size_t i = 0; i < n0; ++i) {
    Chain e(n, Nov(default_cutoff()));
    e[n1 + i] = Nov::mono(0);
    XQ s = boundary_level(d, w, e);
    if (s.is_pos_inf()) return s;
    best = xmax(best, s + XQ(f.dom.action()[i]));
  }
  if (n0 == 0) return XQ(0);
  return xmax(XQ(0), f.shift() + best);
}

}  // namespace oracle
