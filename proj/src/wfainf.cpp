#include "artifact/wfainf.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace artifact {

// ---------------------------------------------------------------- sequences

Discrepancy Discrepancy::zeros(std::size_t cap, DiscKind k) {
  return Discrepancy(std::vector<Q>(cap, Q(0)), k);
}

const Q& Discrepancy::at(std::size_t d) const {
  if (d < 1 || d > eps.size()) throw std::out_of_range("discrepancy index beyond cap");
  return eps[d - 1];
}

Q& Discrepancy::at(std::size_t d) {
  if (d < 1 || d > eps.size()) throw std::out_of_range("discrepancy index beyond cap");
  return eps[d - 1];
}

bool Discrepancy::valid() const {
  for (const Q& e : eps)
    if (e < 0) return false;
  if (kind != DiscKind::Hom && !eps.empty() && eps[0] != 0) return false;
  return true;
}

std::string Discrepancy::str() const {
  std::string s = "(";
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (i) s += ", ";
    s += q_str(eps[i]);
  }
  return s + ")";
}

namespace {
void same_cap(const Discrepancy& a, const Discrepancy& b) {
  if (a.cap() != b.cap()) throw std::invalid_argument("discrepancy caps differ");
}
}  // namespace

Discrepancy disc_max(const std::vector<Discrepancy>& ds) {
  if (ds.empty()) throw std::invalid_argument("disc_max of nothing");
  Discrepancy r = ds.front();
  for (const Discrepancy& d : ds) {
    same_cap(r, d);
    for (std::size_t i = 0; i < r.cap(); ++i) r.eps[i] = std::max(r.eps[i], d.eps[i]);
  }
  return r;
}

Discrepancy disc_star(const Discrepancy& f, const Discrepancy& g) {
  same_cap(f, g);
  std::size_t n = f.cap();
  Discrepancy r = Discrepancy::zeros(n);
  for (std::size_t d = 1; d <= n; ++d) {
    bool first = true;
    for (std::size_t i = 1; i <= d; ++i) {
      Q v = f.at(i) + g.at(d + 1 - i);
      if (first || v > r.at(d)) r.at(d) = v;
      first = false;
    }
  }
  return r;
}

bool check_assumption_E(const Discrepancy& eps, const Discrepancy& em, const Discrepancy& ea) {
  same_cap(eps, em);
  same_cap(eps, ea);
  for (std::size_t d = 1; d <= eps.cap(); ++d)
    for (std::size_t i = 1; i <= d; ++i) {
      std::size_t j = d + 1 - i;
      if (eps.at(d) < em.at(i) + eps.at(j) || eps.at(d) < ea.at(i) + eps.at(j)) return false;
    }
  return true;
}

EpsChoice choose_eps(const Discrepancy& delta, const Discrepancy& em, const Discrepancy& ea) {
  same_cap(delta, em);
  same_cap(delta, ea);
  if (em.eps.empty()) return {};
  if (em.at(1) != 0 || ea.at(1) != 0)
    throw std::invalid_argument("choose_eps: em_1 and ea_1 must vanish");
  std::size_t n = delta.cap();
  EpsChoice out;
  out.eps = Discrepancy::zeros(n);
  out.eps.at(1) = delta.at(1);
  for (std::size_t d = 2; d <= n; ++d) {
    Q v = delta.at(d);
    for (std::size_t i = 2; i <= d; ++i) {
      std::size_t j = d + 1 - i;
      v = std::max(v, Q(em.at(i) + out.eps.at(j)));
      v = std::max(v, Q(ea.at(i) + out.eps.at(j)));
    }
    out.eps.at(d) = v;
  }
  Q sum = 0;
  for (std::size_t d = 1; d <= n; ++d) {
    sum += ea.at(d) + em.at(d) + delta.at(d);
    out.growth.push_back(sum > 0 ? Q(out.eps.at(d) / sum) : Q(0));
  }
  return out;
}

bool check_mod_squared_condition(const Discrepancy& eh) {
  for (std::size_t d = 1; d <= eh.cap(); ++d)
    for (std::size_t i = 1; i <= d; ++i)
      if (eh.at(d) + eh.at(1) < eh.at(i) + eh.at(d + 1 - i)) return false;
  return true;
}

Discrepancy cone_discrepancy(const Discrepancy& em0, const Discrepancy& em1, const Discrepancy& ef) {
  same_cap(em0, em1);
  same_cap(em0, ef);
  Discrepancy shifted = ef;
  if (!ef.eps.empty())
    for (Q& e : shifted.eps) e -= ef.eps[0];
  Discrepancy r = disc_max({em0, em1, shifted});
  r.kind = DiscKind::Module;
  return r;
}

Discrepancy pullback_discrepancy(const Discrepancy& ef, const Discrepancy& em, bool hom, bool linear) {
  std::size_t n = em.cap();
  // best[m][k]: max of ef_{s_1} + ... + ef_{s_k} over compositions of m into k parts.
  std::vector<std::vector<XQ>> best(n, std::vector<XQ>(n, XQ::neg_inf()));
  best[0][0] = XQ(0);
  for (std::size_t m = 1; m < n; ++m)
    for (std::size_t k = 1; k <= m; ++k)
      for (std::size_t s = 1; s <= m && s <= (linear ? 1 : ef.cap()); ++s) {
        if (best[m - s][k - 1].is_neg_inf()) continue;
        XQ v = best[m - s][k - 1] + XQ(ef.at(s));
        if (v > best[m][k]) best[m][k] = v;
      }
  Discrepancy r = Discrepancy::zeros(n, hom ? DiscKind::Hom : DiscKind::Module);
  for (std::size_t d = 1; d <= n; ++d) {
    XQ v = XQ::neg_inf();
    for (std::size_t k = 0; k + 1 <= n && k <= d - 1; ++k) {
      if (best[d - 1][k].is_neg_inf()) continue;
      v = xmax(v, best[d - 1][k] + XQ(em.at(k + 1)));
    }
    r.at(d) = v.finite() ? v.value() : Q(0);
  }
  return r;
}

Q assh_cone_kappa(const Q& k0, const Q& k1, const Q& u, const Q& zeta, const Discrepancy& ec) {
  if (ec.cap() < 3) throw std::invalid_argument("assh_cone_kappa needs cap >= 3");
  Q v = std::max(Q(2 * k0), Q(2 * k1));
  v = std::max(v, Q(2 * u + ec.at(3)));
  v = std::max(v, Q(2 * u + 2 * ec.at(2)));
  v = std::max(v, Q(zeta + ec.at(2)));
  return v;
}

// ---------------------------------------------------------------- tensors

namespace {

bool has_prefix(const OpTable& t, const OpKey& p) {
  auto it = t.lower_bound(p);
  return it != t.end() && it->first.size() >= p.size() &&
         std::equal(p.begin(), p.end(), it->first.begin());
}

Chain unit_chain(std::size_t n, std::size_t i, const Q& cutoff) {
  Chain c(n, Nov(cutoff));
  c[i] = Nov::mono(Q(0), cutoff);
  return c;
}

bool chain_zero(const Chain& c) {
  return std::all_of(c.begin(), c.end(), [](const Nov& x) { return x.is_zero(); });
}

void add_into(Chain& a, const Chain& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!b[i].is_zero()) a[i] += b[i];
}

Chain chain_add(Chain a, const Chain& b) {
  add_into(a, b);
  return a;
}

OpKey make_key(int d, const std::vector<int>& objs, const std::vector<int>& gens, int m = -1) {
  OpKey k{d};
  k.insert(k.end(), objs.begin(), objs.end());
  k.insert(k.end(), gens.begin(), gens.end());
  if (m >= 0) k.push_back(m);
  return k;
}

Q sum_actions(const WFCategory& c, const std::vector<int>& objs, const std::vector<int>& gens) {
  Q s = 0;
  for (std::size_t i = 0; i < gens.size(); ++i)
    s += c.hom(objs[i], objs[i + 1]).action()[static_cast<std::size_t>(gens[i])];
  return s;
}

// excess of a differential: max A(d e) - A(e)
XQ diff_excess(const FilteredComplex& cx, XQ acc) {
  for (std::size_t j = 0; j < cx.size(); ++j) {
    Chain col(cx.size(), Nov(cx.cutoff()));
    for (std::size_t i = 0; i < cx.size(); ++i) col[i] = cx.diff()[i][j];
    XQ l = action_level(col, cx);
    if (!l.is_neg_inf()) acc = xmax(acc, l - XQ(cx.action()[j]));
  }
  return acc;
}

// Operation on module-type inputs (a_1..a_{n-1}, b) with objects X_0..X_{n-1}.
using ModOp = std::function<Chain(const std::vector<int>&, const std::vector<Chain>&, const Chain&)>;

template <class T>
std::vector<T> slice(const std::vector<T>& v, std::size_t a, std::size_t b) {
  return std::vector<T>(v.begin() + static_cast<long>(a), v.begin() + static_cast<long>(b));
}

// sum_i outer(a_1..a_i, inner(a_{i+1}..a_{n-1}, b))
Chain comp_terms(const ModOp& outer, const ModOp& inner, const std::vector<int>& objs,
                 const std::vector<Chain>& as, const Chain& b, Chain acc) {
  std::size_t n = objs.size();
  for (std::size_t i = 0; i < n; ++i) {
    Chain in = inner(slice(objs, i, n), slice(as, i, n - 1), b);
    if (chain_zero(in)) continue;
    add_into(acc, outer(slice(objs, 0, i + 1), slice(as, 0, i), in));
  }
  return acc;
}

// sum fn(a_1..a_i, mu_j(a_{i+1}..a_{i+j}), .., b)
Chain cat_terms(const WFCategory& cat, const ModOp& fn, const std::vector<int>& objs,
                const std::vector<Chain>& as, const Chain& b, Chain acc) {
  std::size_t n = objs.size();
  for (std::size_t j = 1; j + 1 <= n; ++j)
    for (std::size_t i = 0; i + j <= n - 1; ++i) {
      Chain mid = cat.mu(slice(objs, i, i + j + 1), slice(as, i, i + j));
      if (chain_zero(mid)) continue;
      std::vector<int> o = slice(objs, 0, i + 1);
      o.insert(o.end(), objs.begin() + static_cast<long>(i + j), objs.end());
      std::vector<Chain> a = slice(as, 0, i);
      a.push_back(mid);
      a.insert(a.end(), as.begin() + static_cast<long>(i + j), as.end());
      add_into(acc, fn(o, a, b));
    }
  return acc;
}

// Visits every (X_0..X_{n-1}, g_1..g_{n-1}, m) with m a generator of M(X_{n-1}).
void for_each_mod_tuple(const WFCategory& cat, const std::function<std::size_t(int)>& msize, int n,
                        const std::function<void(const std::vector<int>&, const std::vector<int>&, int)>& cb) {
  int nobj = static_cast<int>(cat.num_objects());
  std::vector<int> objs(static_cast<std::size_t>(n)), gens(static_cast<std::size_t>(n - 1));
  std::function<void(int)> pick_obj = [&](int k) {
    if (k == n) {
      std::function<void(int)> pick_gen = [&](int g) {
        if (g == n - 1) {
          std::size_t ms = msize(objs.back());
          for (std::size_t m = 0; m < ms; ++m) cb(objs, gens, static_cast<int>(m));
          return;
        }
        std::size_t hs = cat.hom(objs[static_cast<std::size_t>(g)], objs[static_cast<std::size_t>(g + 1)]).size();
        for (std::size_t i = 0; i < hs; ++i) {
          gens[static_cast<std::size_t>(g)] = static_cast<int>(i);
          pick_gen(g + 1);
        }
      };
      pick_gen(0);
      return;
    }
    for (int x = 0; x < nobj; ++x) {
      objs[static_cast<std::size_t>(k)] = x;
      if (k > 0 && cat.hom(objs[static_cast<std::size_t>(k - 1)], x).size() == 0) continue;
      pick_obj(k + 1);
    }
  };
  pick_obj(0);
}

std::vector<Chain> unit_args(const WFCategory& cat, const std::vector<int>& objs, const std::vector<int>& gens) {
  std::vector<Chain> as;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    const FilteredComplex& h = cat.hom(objs[i], objs[i + 1]);
    as.push_back(unit_chain(h.size(), static_cast<std::size_t>(gens[i]), h.cutoff()));
  }
  return as;
}

// Module-type tables keyed [d, X_0..X_{d-1}, g_1..g_{d-1}, m].
XQ table_excess(const OpTable& t, int d, const WFCategory& cat, const std::vector<FilteredComplex>& dom,
                const std::vector<FilteredComplex>& cod, const Q& rho) {
  XQ best = XQ::neg_inf();
  for (const auto& [k, out] : t) {
    if (k[0] != d) continue;
    std::size_t ud = static_cast<std::size_t>(d);
    std::vector<int> objs(k.begin() + 1, k.begin() + 1 + static_cast<long>(ud));
    std::vector<int> gens(k.begin() + 1 + static_cast<long>(ud), k.begin() + static_cast<long>(2 * ud));
    int m = k[2 * ud];
    Q in = sum_actions(cat, objs, gens) +
           dom[static_cast<std::size_t>(objs.back())].action()[static_cast<std::size_t>(m)];
    XQ l = action_level(out, cod[static_cast<std::size_t>(objs[0])]);
    if (l.is_neg_inf()) continue;
    best = xmax(best, l - XQ(in) - XQ(rho));
  }
  return best;
}

Discrepancy measured(const std::function<XQ(int)>& ex, int cap, DiscKind kind) {
  Discrepancy r = Discrepancy::zeros(static_cast<std::size_t>(cap), kind);
  for (int d = 2; d <= cap; ++d) {
    XQ e = ex(d);
    if (e.finite() && e.value() > 0) r.at(static_cast<std::size_t>(d)) = e.value();
  }
  return r;
}

void for_each_composition(int total, int max_parts,
                          const std::function<void(const std::vector<int>&)>& cb) {
  std::vector<int> parts;
  std::function<void(int)> rec = [&](int left) {
    if (left == 0) {
      cb(parts);
      return;
    }
    if (static_cast<int>(parts.size()) >= max_parts) return;
    for (int s = 1; s <= left; ++s) {
      parts.push_back(s);
      rec(left - s);
      parts.pop_back();
    }
  };
  rec(total);
}

}  // namespace

Chain eval_table(const OpTable& t, const OpKey& prefix, const std::vector<const Chain*>& args,
                 std::size_t out_size, const Q& cutoff) {
  Chain out(out_size, Nov(cutoff));
  if (!has_prefix(t, prefix)) return out;
  OpKey key = prefix;
  std::function<void(std::size_t, const Nov&)> rec = [&](std::size_t k, const Nov& c) {
    if (k == args.size()) {
      auto it = t.find(key);
      if (it == t.end()) return;
      for (std::size_t i = 0; i < out_size; ++i)
        if (!it->second[i].is_zero()) out[i] += c * it->second[i];
      return;
    }
    const Chain& a = *args[k];
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i].is_zero()) continue;
      key.push_back(static_cast<int>(i));
      if (has_prefix(t, key)) rec(k + 1, c * a[i]);
      key.pop_back();
    }
  };
  rec(0, Nov::mono(Q(0), cutoff));
  return out;
}

// ---------------------------------------------------------------- categories

WFCategory::WFCategory(std::vector<std::string> objects, int cap)
    : objects_(std::move(objects)), cap_(cap), units_(objects_.size()) {
  if (cap < 2) throw std::invalid_argument("arity cap must be at least 2");
  for (int x = 0; x < static_cast<int>(objects_.size()); ++x)
    for (int y = 0; y < static_cast<int>(objects_.size()); ++y) homs_[{x, y}] = FilteredComplex();
}

int WFCategory::object(const std::string& name) const {
  auto it = std::find(objects_.begin(), objects_.end(), name);
  if (it == objects_.end()) throw std::invalid_argument("unknown object '" + name + "'");
  return static_cast<int>(it - objects_.begin());
}

const FilteredComplex& WFCategory::hom(int x, int y) const {
  auto it = homs_.find({x, y});
  if (it == homs_.end()) throw std::out_of_range("hom: object index out of range");
  return it->second;
}

void WFCategory::set_hom(int x, int y, FilteredComplex c) {
  auto it = homs_.find({x, y});
  if (it == homs_.end()) throw std::out_of_range("set_hom: object index out of range");
  it->second = std::move(c);
}

void WFCategory::check_arity(std::size_t d) const {
  if (d < 1 || d > static_cast<std::size_t>(cap_))
    throw std::out_of_range("arity " + std::to_string(d) + " beyond cap " + std::to_string(cap_));
}

void WFCategory::set_mu(const std::vector<int>& objs, const std::vector<int>& gens, Chain out) {
  std::size_t d = gens.size();
  if (d < 2) throw std::invalid_argument("set_mu: mu_1 is the hom differential");
  check_arity(d);
  if (objs.size() != d + 1) throw std::invalid_argument("set_mu: need d + 1 objects");
  for (std::size_t i = 0; i < d; ++i)
    if (gens[i] < 0 || static_cast<std::size_t>(gens[i]) >= hom(objs[i], objs[i + 1]).size())
      throw std::out_of_range("set_mu: generator index");
  if (out.size() != hom(objs.front(), objs.back()).size())
    throw std::invalid_argument("set_mu: output size");
  OpKey k = make_key(static_cast<int>(d), objs, gens);
  if (chain_zero(out))
    mu_.erase(k);
  else
    mu_[k] = std::move(out);
}

Chain WFCategory::mu(const std::vector<int>& objs, const std::vector<Chain>& args) const {
  std::size_t d = args.size();
  check_arity(d);
  if (objs.size() != d + 1) throw std::invalid_argument("mu: need d + 1 objects");
  const FilteredComplex& out = hom(objs.front(), objs.back());
  if (d == 1) return out.apply_d(args[0]);
  OpKey prefix{static_cast<int>(d)};
  prefix.insert(prefix.end(), objs.begin(), objs.end());
  std::vector<const Chain*> ptrs;
  for (const Chain& a : args) ptrs.push_back(&a);
  return eval_table(mu_, prefix, ptrs, out.size(), out.cutoff());
}

XQ WFCategory::excess(int d) const {
  XQ best = XQ::neg_inf();
  if (d == 1) {
    for (const auto& [k, h] : homs_) best = diff_excess(h, best);
    return best;
  }
  std::size_t ud = static_cast<std::size_t>(d);
  for (const auto& [k, out] : mu_) {
    if (k[0] != d) continue;
    std::vector<int> objs(k.begin() + 1, k.begin() + 2 + static_cast<long>(ud));
    std::vector<int> gens(k.begin() + 2 + static_cast<long>(ud), k.end());
    XQ l = action_level(out, hom(objs.front(), objs.back()));
    if (l.is_neg_inf()) continue;
    best = xmax(best, l - XQ(sum_actions(*this, objs, gens)));
  }
  return best;
}

Discrepancy WFCategory::measured_discrepancy() const {
  return measured([this](int d) { return excess(d); }, cap_, DiscKind::Category);
}

bool WFCategory::check_relations(int max_arity, std::string* why) const {
  int top = std::min(max_arity, cap_);
  int nobj = static_cast<int>(objects_.size());
  for (int n = 2; n <= top; ++n) {
    std::vector<int> objs(static_cast<std::size_t>(n + 1)), gens(static_cast<std::size_t>(n));
    bool ok = true;
    std::function<void(int)> pick_gen = [&](int g) {
      if (!ok) return;
      if (g == n) {
        std::vector<Chain> as = unit_args(*this, objs, gens);
        const FilteredComplex& outc = hom(objs.front(), objs.back());
        Chain acc = outc.zero_chain();
        for (int j = 1; j <= n; ++j)
          for (int i = 0; i + j <= n; ++i) {
            std::size_t ui = static_cast<std::size_t>(i), uj = static_cast<std::size_t>(j);
            Chain mid = mu(slice(objs, ui, ui + uj + 1), slice(as, ui, ui + uj));
            if (chain_zero(mid)) continue;
            std::vector<int> o = slice(objs, 0, ui + 1);
            o.insert(o.end(), objs.begin() + static_cast<long>(ui + uj), objs.end());
            std::vector<Chain> a = slice(as, 0, ui);
            a.push_back(mid);
            a.insert(a.end(), as.begin() + static_cast<long>(ui + uj), as.end());
            add_into(acc, mu(o, a));
          }
        if (!chain_zero(acc)) {
          ok = false;
          if (why) {
            std::ostringstream s;
            s << "A-infinity relation fails at arity " << n << " on (";
            for (std::size_t i = 0; i < gens.size(); ++i)
              s << (i ? "," : "") << hom(objs[i], objs[i + 1]).names()[static_cast<std::size_t>(gens[i])];
            s << ")";
            *why = s.str();
          }
        }
        return;
      }
      std::size_t hs = hom(objs[static_cast<std::size_t>(g)], objs[static_cast<std::size_t>(g + 1)]).size();
      for (std::size_t i = 0; i < hs && ok; ++i) {
        gens[static_cast<std::size_t>(g)] = static_cast<int>(i);
        pick_gen(g + 1);
      }
    };
    std::function<void(int)> pick_obj = [&](int k) {
      if (!ok) return;
      if (k == n + 1) {
        pick_gen(0);
        return;
      }
      for (int x = 0; x < nobj && ok; ++x) {
        objs[static_cast<std::size_t>(k)] = x;
        if (k > 0 && hom(objs[static_cast<std::size_t>(k - 1)], x).size() == 0) continue;
        pick_obj(k + 1);
      }
    };
    pick_obj(0);
    if (!ok) return false;
  }
  return true;
}

void WFCategory::set_unit(int x, Chain e) {
  const FilteredComplex& h = hom(x, x);
  if (e.size() != h.size()) throw std::invalid_argument("set_unit: size");
  if (!chain_zero(h.apply_d(e))) throw std::invalid_argument("set_unit: unit is not a cycle");
  units_[static_cast<std::size_t>(x)] = std::move(e);
}

XQ WFCategory::unit_bound() const {
  XQ best = XQ::neg_inf();
  for (int x = 0; x < static_cast<int>(objects_.size()); ++x)
    if (units_[static_cast<std::size_t>(x)])
      best = xmax(best, action_level(*units_[static_cast<std::size_t>(x)], hom(x, x)));
  return best;
}

namespace {
std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}
}  // namespace

WFCategory WFCategory::parse(const std::string& text, int cap) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> objects;
  struct Block {
    std::string x, y, body;
  };
  std::vector<Block> blocks;
  std::vector<std::string> mu_lines, unit_lines;
  Block* open = nullptr;
  while (std::getline(in, line)) {
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string word;
    ls >> word;
    if (open) {
      if (word == "end")
        open = nullptr;
      else
        open->body += line + "\n";
      continue;
    }
    if (word == "objects") {
      std::string o;
      while (ls >> o) objects.push_back(o);
    } else if (word == "hom") {
      Block b;
      ls >> b.x >> b.y;
      blocks.push_back(b);
      open = &blocks.back();
    } else if (word == "mu") {
      mu_lines.push_back(line);
    } else if (word == "unit") {
      unit_lines.push_back(line);
    } else {
      throw std::invalid_argument("category: unexpected line '" + line + "'");
    }
  }
  if (open) throw std::invalid_argument("category: hom block without end");
  WFCategory c(objects, cap);
  std::map<std::string, std::pair<std::pair<int, int>, std::size_t>> where;
  for (const Block& b : blocks) {
    int x = c.object(b.x), y = c.object(b.y);
    FilteredComplex h = FilteredComplex::parse(b.body);
    for (std::size_t i = 0; i < h.size(); ++i) {
      if (where.count(h.names()[i])) throw std::invalid_argument("duplicate generator " + h.names()[i]);
      where[h.names()[i]] = {{x, y}, i};
    }
    c.set_hom(x, y, std::move(h));
  }
  for (const std::string& l : mu_lines) {
    // mu d (g1,...,gd) -> chain
    std::size_t lp = l.find('('), rp = l.find(')'), arrow = l.find("->");
    if (lp == std::string::npos || rp == std::string::npos || arrow == std::string::npos || rp > arrow)
      throw std::invalid_argument("bad mu line '" + l + "'");
    int d = std::stoi(trim(l.substr(2, lp - 2)));
    std::vector<int> objs, gens;
    std::istringstream gs(l.substr(lp + 1, rp - lp - 1));
    std::string g;
    while (std::getline(gs, g, ',')) {
      g = trim(g);
      auto it = where.find(g);
      if (it == where.end()) throw std::invalid_argument("mu line: unknown generator " + g);
      auto [xy, idx] = it->second;
      if (objs.empty())
        objs.push_back(xy.first);
      else if (objs.back() != xy.first)
        throw std::invalid_argument("mu line: generators do not compose: " + l);
      objs.push_back(xy.second);
      gens.push_back(static_cast<int>(idx));
    }
    if (static_cast<int>(gens.size()) != d) throw std::invalid_argument("mu line: arity mismatch: " + l);
    Chain out = parse_chain(trim(l.substr(arrow + 2)), c.hom(objs.front(), objs.back()));
    c.set_mu(objs, gens, std::move(out));
  }
  for (const std::string& l : unit_lines) {
    // unit X = chain
    std::size_t eq = l.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("bad unit line '" + l + "'");
    int x = c.object(trim(l.substr(4, eq - 4)));
    c.set_unit(x, parse_chain(trim(l.substr(eq + 1)), c.hom(x, x)));
  }
  return c;
}

std::string WFCategory::str() const {
  std::ostringstream s;
  s << "objects";
  for (const std::string& o : objects_) s << " " << o;
  s << "\n";
  for (const auto& [xy, h] : homs_) {
    if (h.size() == 0) continue;
    s << "hom " << objects_[static_cast<std::size_t>(xy.first)] << " "
      << objects_[static_cast<std::size_t>(xy.second)] << "\n"
      << h.str() << "end\n";
  }
  for (const auto& [k, out] : mu_) {
    std::size_t d = static_cast<std::size_t>(k[0]);
    std::vector<int> objs(k.begin() + 1, k.begin() + 2 + static_cast<long>(d));
    s << "mu " << d << " (";
    for (std::size_t i = 0; i < d; ++i)
      s << (i ? "," : "") << hom(objs[i], objs[i + 1]).names()[static_cast<std::size_t>(k[d + 2 + i])];
    s << ") -> " << chain_str(out, hom(objs.front(), objs.back())) << "\n";
  }
  for (int x = 0; x < static_cast<int>(objects_.size()); ++x)
    if (units_[static_cast<std::size_t>(x)])
      s << "unit " << objects_[static_cast<std::size_t>(x)] << " = "
        << chain_str(*units_[static_cast<std::size_t>(x)], hom(x, x)) << "\n";
  return s.str();
}

WFCategory dg_category(const std::vector<std::string>& names, const std::vector<FilteredComplex>& spaces,
                       const std::vector<std::vector<Q>>& offset, int cap) {
  std::size_t n = names.size();
  if (spaces.size() != n || offset.size() != n) throw std::invalid_argument("dg_category: sizes");
  WFCategory c(names, cap);
  Q cut = default_cutoff();
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      const FilteredComplex& vx = spaces[x];
      const FilteredComplex& vy = spaces[y];
      std::size_t nx = vx.size(), ny = vy.size();
      std::vector<std::string> gn;
      std::vector<Q> act;
      for (std::size_t u = 0; u < nx; ++u)
        for (std::size_t v = 0; v < ny; ++v) {
          gn.push_back(names[x] + "." + vx.names()[u] + "<" + names[y] + "." + vy.names()[v]);
          act.push_back(vx.action()[u] - vy.action()[v] + offset[x][y]);
        }
      NMat d = nmat_zero(nx * ny, nx * ny, cut);
      for (std::size_t u = 0; u < nx; ++u)
        for (std::size_t v = 0; v < ny; ++v) {
          std::size_t col = u * ny + v;
          // d_X after E_uv
          for (std::size_t k = 0; k < nx; ++k)
            if (!vx.diff()[k][u].is_zero()) d[k * ny + v][col] += vx.diff()[k][u];
          // E_uv after d_Y
          for (std::size_t w = 0; w < ny; ++w)
            if (!vy.diff()[v][w].is_zero()) d[u * ny + w][col] += vy.diff()[v][w];
        }
      c.set_hom(static_cast<int>(x), static_cast<int>(y), FilteredComplex(gn, act, d));
    }
  for (std::size_t x0 = 0; x0 < n; ++x0)
    for (std::size_t x1 = 0; x1 < n; ++x1)
      for (std::size_t x2 = 0; x2 < n; ++x2) {
        std::size_t n0 = spaces[x0].size(), n1 = spaces[x1].size(), n2 = spaces[x2].size();
        for (std::size_t u = 0; u < n0; ++u)
          for (std::size_t v = 0; v < n1; ++v)
            for (std::size_t w = 0; w < n2; ++w) {
              Chain out(n0 * n2, Nov(cut));
              out[u * n2 + w] = Nov::mono(Q(0), cut);
              c.set_mu({static_cast<int>(x0), static_cast<int>(x1), static_cast<int>(x2)},
                       {static_cast<int>(u * n1 + v), static_cast<int>(v * n2 + w)}, std::move(out));
            }
      }
  for (std::size_t x = 0; x < n; ++x) {
    std::size_t nx = spaces[x].size();
    Chain e(nx * nx, Nov(cut));
    for (std::size_t u = 0; u < nx; ++u) e[u * nx + u] = Nov::mono(Q(0), cut);
    c.set_unit(static_cast<int>(x), std::move(e));
  }
  return c;
}

int dg_elementary(const WFCategory& c, int x, int y, std::size_t u, std::size_t v) {
  (void)x;
  std::size_t yy = c.hom(y, y).size();
  std::size_t ny = 0;
  while (ny * ny < yy) ++ny;
  return static_cast<int>(u * ny + v);
}

// ---------------------------------------------------------------- modules

WFModule::WFModule(CategoryPtr cat, std::vector<FilteredComplex> values)
    : cat_(std::move(cat)), values_(std::move(values)) {
  if (values_.size() != cat_->num_objects()) throw std::invalid_argument("module: one value per object");
}

void WFModule::set_mu(const std::vector<int>& objs, const std::vector<int>& gens, int m, Chain out) {
  std::size_t d = gens.size() + 1;
  if (d < 2) throw std::invalid_argument("module set_mu: mu_1 is the differential");
  cat_->check_arity(d);
  if (objs.size() != d) throw std::invalid_argument("module set_mu: need d objects");
  if (out.size() != value(objs.front()).size()) throw std::invalid_argument("module set_mu: output size");
  OpKey k = make_key(static_cast<int>(d), objs, gens, m);
  if (chain_zero(out))
    mu_.erase(k);
  else
    mu_[k] = std::move(out);
}

Chain WFModule::mu(const std::vector<int>& objs, const std::vector<Chain>& as, const Chain& b) const {
  std::size_t d = as.size() + 1;
  cat_->check_arity(d);
  if (objs.size() != d) throw std::invalid_argument("module mu: need d objects");
  const FilteredComplex& out = value(objs.front());
  if (d == 1) return out.apply_d(b);
  OpKey prefix{static_cast<int>(d)};
  prefix.insert(prefix.end(), objs.begin(), objs.end());
  std::vector<const Chain*> ptrs;
  for (const Chain& a : as) ptrs.push_back(&a);
  ptrs.push_back(&b);
  return eval_table(mu_, prefix, ptrs, out.size(), out.cutoff());
}

XQ WFModule::excess(int d) const {
  if (d == 1) {
    XQ best = XQ::neg_inf();
    for (const FilteredComplex& v : values_) best = diff_excess(v, best);
    return best;
  }
  return table_excess(mu_, d, *cat_, values_, values_, Q(0));
}

Discrepancy WFModule::measured_discrepancy() const {
  return measured([this](int d) { return excess(d); }, cat_->cap(), DiscKind::Module);
}

bool WFModule::check_relations(int max_arity, std::string* why) const {
  int top = std::min(max_arity, cat_->cap());
  ModOp op = [this](const std::vector<int>& o, const std::vector<Chain>& a, const Chain& b) {
    return mu(o, a, b);
  };
  for (int n = 2; n <= top; ++n) {
    bool ok = true;
    for_each_mod_tuple(
        *cat_, [this](int x) { return value(x).size(); }, n,
        [&](const std::vector<int>& objs, const std::vector<int>& gens, int m) {
          if (!ok) return;
          std::vector<Chain> as = unit_args(*cat_, objs, gens);
          const FilteredComplex& vb = value(objs.back());
          Chain b = unit_chain(vb.size(), static_cast<std::size_t>(m), vb.cutoff());
          Chain acc = value(objs.front()).zero_chain();
          acc = comp_terms(op, op, objs, as, b, acc);
          acc = cat_terms(*cat_, op, objs, as, b, acc);
          if (!chain_zero(acc)) {
            ok = false;
            if (why) *why = "module relation fails at arity " + std::to_string(n) + " on generator " + vb.names()[static_cast<std::size_t>(m)];
          }
        });
    if (!ok) return false;
  }
  return true;
}

WFModule yoneda(const CategoryPtr& cat, int y) {
  std::vector<FilteredComplex> vals;
  for (int x = 0; x < static_cast<int>(cat->num_objects()); ++x) vals.push_back(cat->hom(x, y));
  WFModule m(cat, vals);
  for (const auto& [k, out] : cat->table()) {
    std::size_t d = static_cast<std::size_t>(k[0]);
    if (k[d + 1] != y) continue;
    OpKey mk(k.begin(), k.begin() + 1 + static_cast<long>(d));
    mk.insert(mk.end(), k.begin() + 2 + static_cast<long>(d), k.end());
    m.table()[mk] = out;
  }
  return m;
}

WFModule shift_module(const WFModule& m, const Q& nu) {
  std::vector<FilteredComplex> vals;
  for (const FilteredComplex& v : m.values()) vals.push_back(v.shifted(-nu));
  WFModule r(m.category(), vals);
  r.table() = m.table();
  return r;
}

// ---------------------------------------------------------------- pre-module homs

Chain PreModHom::apply(const std::vector<int>& objs, const std::vector<Chain>& as, const Chain& b) const {
  std::size_t d = as.size() + 1;
  if (objs.size() != d) throw std::invalid_argument("pre-hom apply: need d objects");
  const FilteredComplex& out = cod->value(objs.front());
  OpKey prefix{static_cast<int>(d)};
  prefix.insert(prefix.end(), objs.begin(), objs.end());
  std::vector<const Chain*> ptrs;
  for (const Chain& a : as) ptrs.push_back(&a);
  ptrs.push_back(&b);
  return eval_table(f, prefix, ptrs, out.size(), out.cutoff());
}

XQ PreModHom::excess(int d) const { return table_excess(f, d, dom->cat(), dom->values(), cod->values(), Q(0)); }

bool PreModHom::within(const Q& r, const Discrepancy& eps) const {
  int top = 0;
  for (const auto& [k, out] : f) top = std::max(top, k[0]);
  if (top > static_cast<int>(eps.cap())) return false;
  for (int d = 1; d <= top; ++d)
    if (excess(d) > XQ(r + eps.at(static_cast<std::size_t>(d)))) return false;
  return true;
}

bool PreModHom::is_zero() const {
  return std::all_of(f.begin(), f.end(), [](const auto& kv) { return chain_zero(kv.second); });
}

PreModHom zero_hom(const ModulePtr& dom, const ModulePtr& cod) {
  PreModHom h;
  h.dom = dom;
  h.cod = cod;
  h.disc = Discrepancy::zeros(static_cast<std::size_t>(dom->cat().cap()));
  return h;
}

PreModHom identity_hom(const ModulePtr& m) {
  PreModHom h = zero_hom(m, m);
  for (int x = 0; x < static_cast<int>(m->values().size()); ++x) {
    const FilteredComplex& v = m->value(x);
    for (std::size_t i = 0; i < v.size(); ++i) h.f[{1, x, static_cast<int>(i)}] = unit_chain(v.size(), i, v.cutoff());
  }
  return h;
}

namespace {
ModOp op_of(const WFModule& m) {
  return [&m](const std::vector<int>& o, const std::vector<Chain>& a, const Chain& b) { return m.mu(o, a, b); };
}
ModOp op_of(const PreModHom& h) {
  return [&h](const std::vector<int>& o, const std::vector<Chain>& a, const Chain& b) { return h.apply(o, a, b); };
}

// Tabulates an operation on all generator tuples of `dom` up to max_arity.
OpTable tabulate(const WFModule& dom, const WFModule& cod, int min_arity, int max_arity,
                 const std::function<Chain(const std::vector<int>&, const std::vector<Chain>&, const Chain&, Chain)>& fn) {
  OpTable t;
  int top = std::min(max_arity, dom.cat().cap());
  for (int n = min_arity; n <= top; ++n)
    for_each_mod_tuple(
        dom.cat(), [&dom](int x) { return dom.value(x).size(); }, n,
        [&](const std::vector<int>& objs, const std::vector<int>& gens, int m) {
          std::vector<Chain> as = unit_args(dom.cat(), objs, gens);
          const FilteredComplex& vb = dom.value(objs.back());
          Chain b = unit_chain(vb.size(), static_cast<std::size_t>(m), vb.cutoff());
          Chain out = fn(objs, as, b, cod.value(objs.front()).zero_chain());
          if (!chain_zero(out)) t[make_key(n, objs, gens, m)] = std::move(out);
        });
  return t;
}
}  // namespace

OpTable tabulate_module_map(const WFModule& dom, int lo, int hi, const ModuleOp& fn) {
  OpTable t;
  int top = std::min(hi, dom.cat().cap());
  for (int n = std::max(lo, 1); n <= top; ++n)
    for_each_mod_tuple(
        dom.cat(), [&dom](int x) { return dom.value(x).size(); }, n,
        [&](const std::vector<int>& objs, const std::vector<int>& gens, int m) {
          std::vector<Chain> as = unit_args(dom.cat(), objs, gens);
          const FilteredComplex& vb = dom.value(objs.back());
          Chain out = fn(objs, as, unit_chain(vb.size(), static_cast<std::size_t>(m), vb.cutoff()));
          if (!chain_zero(out)) t[make_key(n, objs, gens, m)] = std::move(out);
        });
  return t;
}

PreModHom mu1_mod(const PreModHom& f, int max_arity) {
  PreModHom r = zero_hom(f.dom, f.cod);
  r.rho = f.rho;
  r.disc = f.disc;
  const WFCategory& cat = f.dom->cat();
  ModOp fo = op_of(f), m0 = op_of(*f.dom), m1 = op_of(*f.cod);
  r.f = tabulate(*f.dom, *f.cod, 1, max_arity,
                 [&](const std::vector<int>& objs, const std::vector<Chain>& as, const Chain& b, Chain acc) {
                   acc = comp_terms(m1, fo, objs, as, b, std::move(acc));
                   acc = comp_terms(fo, m0, objs, as, b, std::move(acc));
                   return cat_terms(cat, fo, objs, as, b, std::move(acc));
                 });
  return r;
}

PreModHom mu2_mod(const PreModHom& f, const PreModHom& g, int max_arity) {
  PreModHom r = zero_hom(f.dom, g.cod);
  r.rho = f.rho + g.rho;
  if (f.disc.cap() == g.disc.cap()) r.disc = disc_star(f.disc, g.disc);
  ModOp fo = op_of(f), go = op_of(g);
  r.f = tabulate(*f.dom, *g.cod, 1, max_arity,
                 [&](const std::vector<int>& objs, const std::vector<Chain>& as, const Chain& b, Chain acc) {
                   return comp_terms(go, fo, objs, as, b, std::move(acc));
                 });
  return r;
}

PreModHom hom_sum(const PreModHom& f, const PreModHom& g) {
  PreModHom r = f;
  r.rho = std::max(f.rho, g.rho);
  if (f.disc.cap() == g.disc.cap()) r.disc = disc_max({f.disc, g.disc});
  for (const auto& [k, out] : g.f) {
    auto it = r.f.find(k);
    if (it == r.f.end())
      r.f[k] = out;
    else {
      add_into(it->second, out);
      if (chain_zero(it->second)) r.f.erase(it);
    }
  }
  return r;
}

bool verify_hom_filtration(const ModulePtr& m0, const ModulePtr& m1, const Q& rho, const Discrepancy& eh,
                           int max_arity, std::string* why) {
  const WFCategory& cat = m0->cat();
  int top = std::min({max_arity, cat.cap(), static_cast<int>(eh.cap())});
  bool ok = true;
  for (int n = 1; n <= top && ok; ++n)
    for_each_mod_tuple(
        cat, [&](int x) { return m0->value(x).size(); }, n,
        [&](const std::vector<int>& objs, const std::vector<int>& gens, int m) {
          if (!ok) return;
          const FilteredComplex& out = m1->value(objs.front());
          Q in = sum_actions(cat, objs, gens) +
                 m0->value(objs.back()).action()[static_cast<std::size_t>(m)];
          for (std::size_t k = 0; k < out.size() && ok; ++k) {
            PreModHom f = zero_hom(m0, m1);
            f.rho = rho;
            f.disc = eh;
            Q nu = out.action()[k] - in - rho - eh.at(static_cast<std::size_t>(n));
            Chain c = out.zero_chain();
            c[k] = Nov::mono(nu, out.cutoff());
            f.f[make_key(n, objs, gens, m)] = c;
            PreModHom g = mu1_mod(f, top);
            if (!g.within(rho, eh)) {
              ok = false;
              if (why) *why = "mu_1 of an elementary pre-hom of arity " + std::to_string(n) + " leaves the filtration";
            }
          }
        });
  return ok;
}

// ---------------------------------------------------------------- cones

ConeModule cone(const PreModHom& f, const Q& rho, const Discrepancy& ef, int max_arity) {
  if (!mu1_mod(f, max_arity).is_zero()) throw std::invalid_argument("cone: f is not a cycle");
  const WFModule& a = *f.dom;
  const WFModule& b = *f.cod;
  ConeModule c;
  c.rho = rho;
  c.ef = ef;
  Q lift = rho + (ef.cap() ? ef.at(1) : Q(0));
  std::vector<FilteredComplex> vals;
  for (int x = 0; x < static_cast<int>(a.values().size()); ++x) {
    const FilteredComplex& v0 = a.value(x);
    const FilteredComplex& v1 = b.value(x);
    std::size_t n0 = v0.size(), n1 = v1.size();
    c.split.push_back(n0);
    std::vector<std::string> names;
    std::vector<Q> act;
    for (std::size_t i = 0; i < n0; ++i) {
      names.push_back("0." + v0.names()[i]);
      act.push_back(v0.action()[i] + lift);
    }
    for (std::size_t i = 0; i < n1; ++i) {
      names.push_back("1." + v1.names()[i]);
      act.push_back(v1.action()[i]);
    }
    NMat d = nmat_zero(n0 + n1, n0 + n1, v0.cutoff());
    for (std::size_t i = 0; i < n0; ++i)
      for (std::size_t j = 0; j < n0; ++j) d[i][j] = v0.diff()[i][j];
    for (std::size_t i = 0; i < n1; ++i)
      for (std::size_t j = 0; j < n1; ++j) d[n0 + i][n0 + j] = v1.diff()[i][j];
    for (std::size_t j = 0; j < n0; ++j) {
      auto it = f.f.find({1, x, static_cast<int>(j)});
      if (it == f.f.end()) continue;
      for (std::size_t i = 0; i < n1; ++i) d[n0 + i][j] = it->second[i];
    }
    vals.push_back(FilteredComplex(names, act, d));
  }
  auto mod = std::make_shared<WFModule>(a.category(), vals);
  auto place = [&](const OpKey& k, const Chain& out, bool second_in, bool second_out) {
    std::size_t d = static_cast<std::size_t>(k[0]);
    int x0 = k[1], xl = k[d];
    OpKey nk = k;
    if (second_in) nk.back() += static_cast<int>(c.split[static_cast<std::size_t>(xl)]);
    Chain& slot = mod->table()[nk];
    if (slot.empty()) slot = mod->value(x0).zero_chain();
    std::size_t off = second_out ? c.split[static_cast<std::size_t>(x0)] : 0;
    for (std::size_t i = 0; i < out.size(); ++i)
      if (!out[i].is_zero()) slot[off + i] += out[i];
  };
  for (const auto& [k, out] : a.table()) place(k, out, false, false);
  for (const auto& [k, out] : f.f)
    if (k[0] >= 2) place(k, out, false, true);
  for (const auto& [k, out] : b.table()) place(k, out, true, true);
  for (auto it = mod->table().begin(); it != mod->table().end();)
    it = chain_zero(it->second) ? mod->table().erase(it) : std::next(it);
  c.module = mod;
  return c;
}

namespace {
// Copies the tuples of a pre-hom M_1 -> M_2 onto the second summand of two cones.
void embed_second(const OpTable& src, const ConeModule& from, const ConeModule& to, OpTable& dst) {
  for (const auto& [k, out] : src) {
    std::size_t d = static_cast<std::size_t>(k[0]);
    int x0 = k[1], xl = k[d];
    OpKey nk = k;
    nk.back() += static_cast<int>(from.n0(xl));
    Chain& slot = dst[nk];
    if (slot.empty()) slot = to.module->value(x0).zero_chain();
    std::size_t off = to.n0(x0);
    for (std::size_t i = 0; i < out.size(); ++i)
      if (!out[i].is_zero()) slot[off + i] += out[i];
  }
}

// Copies the tuples of a pre-hom M_0 -> M_1 onto first-to-second summand maps.
void embed_cross(const OpTable& src, const ConeModule& to, OpTable& dst) {
  for (const auto& [k, out] : src) {
    int x0 = k[1];
    Chain& slot = dst[k];
    if (slot.empty()) slot = to.module->value(x0).zero_chain();
    std::size_t off = to.n0(x0);
    for (std::size_t i = 0; i < out.size(); ++i)
      if (!out[i].is_zero()) slot[off + i] += out[i];
  }
}

void add_first_identity(const ConeModule& from, const ConeModule& to, OpTable& dst) {
  for (int x = 0; x < static_cast<int>(from.split.size()); ++x)
    for (std::size_t i = 0; i < from.n0(x); ++i) {
      Chain& slot = dst[{1, x, static_cast<int>(i)}];
      if (slot.empty()) slot = to.module->value(x).zero_chain();
      slot[i] += Nov::mono(Q(0), slot[i].cutoff());
    }
}

void drop_zeros(OpTable& t) {
  for (auto it = t.begin(); it != t.end();) it = chain_zero(it->second) ? t.erase(it) : std::next(it);
}
}  // namespace

ConeCompose cone_compose(const ConeModule& c, const PreModHom& f, const PreModHom& xi, const Q& s,
                         const Discrepancy& exi, int max_arity) {
  PreModHom xf = mu2_mod(f, xi, max_arity);
  ConeCompose out;
  out.target = cone(xf, c.rho + s, disc_star(c.ef, exi), max_arity);
  out.psi = zero_hom(c.module, out.target.module);
  out.psi.rho = s;
  out.psi.disc = exi;
  add_first_identity(c, out.target, out.psi.f);
  embed_second(xi.f, c, out.target, out.psi.f);
  drop_zeros(out.psi.f);

  // psi restricted to M_1 is xi, and psi followed by projection to M_0 is the projection.
  bool ok = true;
  const WFModule& cm = *c.module;
  for (int n = 1; n <= std::min(max_arity, cm.cat().cap()) && ok; ++n)
    for_each_mod_tuple(
        cm.cat(), [&](int x) { return cm.value(x).size(); }, n,
        [&](const std::vector<int>& objs, const std::vector<int>& gens, int m) {
          if (!ok) return;
          std::vector<Chain> as = unit_args(cm.cat(), objs, gens);
          int xl = objs.back(), x0 = objs.front();
          const FilteredComplex& vb = cm.value(xl);
          Chain b = unit_chain(vb.size(), static_cast<std::size_t>(m), vb.cutoff());
          Chain got = out.psi.apply(objs, as, b);
          std::size_t n0 = out.target.n0(x0);
          std::size_t um = static_cast<std::size_t>(m);
          if (um >= c.n0(xl)) {
            const FilteredComplex& v1 = xi.dom->value(xl);
            Chain want = xi.apply(objs, as, unit_chain(v1.size(), um - c.n0(xl), v1.cutoff()));
            for (std::size_t i = 0; i < n0; ++i) ok = ok && got[i].is_zero();
            for (std::size_t i = 0; i < want.size(); ++i) ok = ok && got[n0 + i] == want[i];
          } else {
            for (std::size_t i = 0; i < n0; ++i) {
              bool one = n == 1 && i == um;
              ok = ok && (one ? got[i] == Nov::mono(Q(0), got[i].cutoff()) : got[i].is_zero());
            }
          }
        });
  out.square_commutes = ok;
  return out;
}

ConeCorrection cone_boundary_correction(const ConeModule& c, const PreModHom& f, const PreModHom& theta,
                                        int max_arity) {
  PreModHom fp = hom_sum(f, mu1_mod(theta, max_arity));
  fp.rho = f.rho;
  fp.disc = f.disc;
  ConeCorrection out;
  out.target = cone(fp, c.rho, c.ef, max_arity);
  out.vartheta = zero_hom(c.module, out.target.module);
  out.vartheta.rho = 0;
  out.vartheta.disc = theta.disc;
  if (theta.disc.cap())
    for (Q& e : out.vartheta.disc.eps) e -= theta.disc.at(1);
  add_first_identity(c, out.target, out.vartheta.f);
  for (int x = 0; x < static_cast<int>(c.split.size()); ++x) {
    std::size_t n0 = c.n0(x), n = c.module->value(x).size();
    for (std::size_t i = n0; i < n; ++i)
      out.vartheta.f[{1, x, static_cast<int>(i)}] = unit_chain(n, i, c.module->value(x).cutoff());
  }
  embed_cross(theta.f, out.target, out.vartheta.f);
  drop_zeros(out.vartheta.f);
  return out;
}

// ---------------------------------------------------------------- functors

Chain Functor::apply(const std::vector<int>& objs, const std::vector<Chain>& args) const {
  std::size_t d = args.size();
  const FilteredComplex& out = dst->hom(objmap[static_cast<std::size_t>(objs.front())],
                                        objmap[static_cast<std::size_t>(objs.back())]);
  OpKey prefix{static_cast<int>(d)};
  prefix.insert(prefix.end(), objs.begin(), objs.end());
  std::vector<const Chain*> ptrs;
  for (const Chain& a : args) ptrs.push_back(&a);
  return eval_table(f, prefix, ptrs, out.size(), out.cutoff());
}

XQ Functor::excess(int d) const {
  XQ best = XQ::neg_inf();
  std::size_t ud = static_cast<std::size_t>(d);
  for (const auto& [k, out] : f) {
    if (k[0] != d) continue;
    std::vector<int> objs(k.begin() + 1, k.begin() + 2 + static_cast<long>(ud));
    std::vector<int> gens(k.begin() + 2 + static_cast<long>(ud), k.end());
    XQ l = action_level(out, dst->hom(objmap[static_cast<std::size_t>(objs.front())],
                                      objmap[static_cast<std::size_t>(objs.back())]));
    if (l.is_neg_inf()) continue;
    best = xmax(best, l - XQ(sum_actions(*src, objs, gens)));
  }
  return best;
}

Functor identity_functor(const CategoryPtr& c) {
  Functor F;
  F.src = c;
  F.dst = c;
  for (int x = 0; x < static_cast<int>(c->num_objects()); ++x) F.objmap.push_back(x);
  for (int x = 0; x < static_cast<int>(c->num_objects()); ++x)
    for (int y = 0; y < static_cast<int>(c->num_objects()); ++y) {
      const FilteredComplex& h = c->hom(x, y);
      for (std::size_t g = 0; g < h.size(); ++g) F.f[{1, x, y, static_cast<int>(g)}] = unit_chain(h.size(), g, h.cutoff());
    }
  return F;
}

namespace {
// sum over compositions s_1 + .. + s_k = n - 1 of op(F_{s_1}(..), .., F_{s_k}(..), b)
Chain pulled(const Functor& F, const ModOp& op, const std::vector<int>& objs, const std::vector<Chain>& as,
             const Chain& b, Chain acc, int max_parts) {
  int total = static_cast<int>(as.size());
  for_each_composition(total, max_parts, [&](const std::vector<int>& parts) {
    std::vector<int> mo{F.objmap[static_cast<std::size_t>(objs[0])]};
    std::vector<Chain> margs;
    std::size_t t = 0;
    for (int s : parts) {
      std::size_t us = static_cast<std::size_t>(s);
      Chain img = F.apply(slice(objs, t, t + us + 1), slice(as, t, t + us));
      if (chain_zero(img)) return;
      margs.push_back(std::move(img));
      t += us;
      mo.push_back(F.objmap[static_cast<std::size_t>(objs[t])]);
    }
    add_into(acc, op(mo, margs, b));
  });
  return acc;
}
}  // namespace

WFModule pullback_module(const Functor& F, const WFModule& m, int max_arity) {
  std::vector<FilteredComplex> vals;
  for (int x : F.objmap) vals.push_back(m.value(x));
  WFModule r(F.src, vals);
  ModOp op = op_of(m);
  int parts = m.cat().cap() - 1;
  r.table() = tabulate(r, r, 2, max_arity,
                       [&](const std::vector<int>& objs, const std::vector<Chain>& as, const Chain& b, Chain acc) {
                         return pulled(F, op, objs, as, b, std::move(acc), parts);
                       });
  return r;
}

PreModHom pullback_hom(const Functor& F, const PreModHom& f, const ModulePtr& dom, const ModulePtr& cod,
                       int max_arity) {
  PreModHom r = zero_hom(dom, cod);
  r.rho = f.rho;
  ModOp op = op_of(f);
  int parts = max_arity;
  r.f = tabulate(*dom, *cod, 1, max_arity,
                 [&](const std::vector<int>& objs, const std::vector<Chain>& as, const Chain& b, Chain acc) {
                   return pulled(F, op, objs, as, b, std::move(acc), parts);
                 });
  Discrepancy eF = Discrepancy::zeros(f.disc.cap());
  for (std::size_t d = 1; d <= eF.cap(); ++d) {
    XQ e = F.excess(static_cast<int>(d));
    if (e.finite() && e.value() > 0) eF.at(d) = e.value();
  }
  if (f.disc.cap()) r.disc = pullback_discrepancy(eF, f.disc, true);
  return r;
}

// ---------------------------------------------------------------- lambda map and units

PreModHom lambda_map(const ModulePtr& yon, const ModulePtr& m, int y, const Chain& c, int max_arity) {
  PreModHom r = zero_hom(yon, m);
  XQ ac = action_level(c, m->value(y));
  r.rho = ac.finite() ? ac.value() : Q(0);
  Discrepancy em = m->measured_discrepancy();
  for (std::size_t d = 1; d <= r.disc.cap(); ++d) r.disc.at(d) = em.at(std::min(d + 1, em.cap()));
  int top = std::min(max_arity, m->cat().cap() - 1);
  r.f = tabulate(*yon, *m, 1, top,
                 [&](const std::vector<int>& objs, const std::vector<Chain>& as, const Chain& b, Chain acc) {
                   std::vector<int> o = objs;
                   o.push_back(y);
                   std::vector<Chain> a = as;
                   a.push_back(b);
                   add_into(acc, m->mu(o, a, c));
                   return acc;
                 });
  return r;
}

namespace {
FilteredMap matrix_of(const FilteredComplex& cx, const std::function<Chain(const Chain&)>& fn) {
  FilteredMap f{cx, cx, nmat_zero(cx.size(), cx.size(), cx.cutoff()), 0};
  for (std::size_t j = 0; j < cx.size(); ++j) {
    Chain col = fn(unit_chain(cx.size(), j, cx.cutoff()));
    for (std::size_t i = 0; i < cx.size(); ++i) f.m[i][j] = col[i];
  }
  return f;
}

// Least kappa with phi(M^{<=a}) in M^{<=a+kappa} and phi + id zero on homology
// up to kappa; +inf when some cycle's image is not homologous to it.
XQ weak_unit_level(const FilteredMap& v) {
  FilteredMap phi = map_sum(v, identity_map(v.dom));
  FMat d = to_fmat(v.dom.diff()), p = to_fmat(phi.m);
  std::size_t rd = rank(d);
  for (const FVec& z : nullspace(d, v.dom.size())) {
    FVec pz = fmat_apply(p, z);
    FMat aug = d;
    for (std::size_t i = 0; i < aug.size(); ++i) aug[i].push_back(pz[i]);
    if (rank(aug) != rd) return XQ::pos_inf();
  }
  return xmax(v.shift(), boundary_depth_map(phi));
}
}  // namespace

UnitCheck check_Ue(const WFCategory& a, const Q& zeta) {
  XQ best = XQ::neg_inf();
  for (int x = 0; x < static_cast<int>(a.num_objects()); ++x) {
    const auto& e = a.unit(x);
    if (!e) continue;
    Chain ch = chain_add(a.mu({x, x, x}, {*e, *e}), *e);
    best = xmax(best, boundary_level(ch, a.hom(x, x)).value);
  }
  return {best <= XQ(zeta), best};
}

UnitCheck check_Uw(const WFModule& m, const Q& kappa) {
  const WFCategory& a = m.cat();
  XQ best = XQ::neg_inf();
  for (int x = 0; x < static_cast<int>(a.num_objects()); ++x) {
    const auto& e = a.unit(x);
    if (!e || m.value(x).size() == 0) continue;
    FilteredMap v = matrix_of(m.value(x), [&](const Chain& b) { return m.mu({x, x}, {*e}, b); });
    best = xmax(best, weak_unit_level(v));
  }
  return {best <= XQ(kappa), best};
}

UnitCheck check_Us(const WFModule& m, const Q& kappa) { return check_Uw(m, kappa); }

UnitCheck check_URe(const WFCategory& a, int y, const Q& kappa) {
  const auto& e = a.unit(y);
  if (!e) throw std::invalid_argument("check_URe: object has no unit");
  XQ best = XQ::neg_inf();
  for (int x = 0; x < static_cast<int>(a.num_objects()); ++x) {
    const FilteredComplex& h = a.hom(x, y);
    if (h.size() == 0) continue;
    FilteredMap r = matrix_of(h, [&](const Chain& b) { return chain_add(a.mu({x, y, y}, {b, *e}), b); });
    best = xmax(best, homotopical_boundary_level(r).value);
  }
  return {best <= XQ(kappa), best};
}

UnitHomotopy unit_homotopy(const WFModule& m, int x) {
  const WFCategory& a = m.cat();
  if (a.cap() < 3) throw std::invalid_argument("unit_homotopy needs cap >= 3");
  const auto& e = a.unit(x);
  if (!e) throw std::invalid_argument("unit_homotopy: object has no unit");
  const FilteredComplex& hx = a.hom(x, x);
  const FilteredComplex& mx = m.value(x);
  Chain ch = chain_add(a.mu({x, x, x}, {*e, *e}), *e);
  LevelResult lr = boundary_level(ch, hx);
  UnitHomotopy out;
  if (lr.value.is_pos_inf()) return out;
  Chain c = lr.witness.empty() ? hx.zero_chain() : lr.witness;
  FilteredMap v = matrix_of(mx, [&](const Chain& b) { return m.mu({x, x}, {*e}, b); });
  FilteredMap h = matrix_of(mx, [&](const Chain& b) {
    return chain_add(m.mu({x, x, x}, {*e, *e}, b), m.mu({x, x}, {c}, b));
  });
  NMat lhs = nmat_add(nmat_mul(v.m, v.m), v.m);
  NMat rhs = nmat_add(nmat_mul(mx.diff(), h.m), nmat_mul(h.m, mx.diff()));
  out.homotopy_ok = true;
  for (std::size_t i = 0; i < lhs.size(); ++i)
    for (std::size_t j = 0; j < lhs.size(); ++j) out.homotopy_ok = out.homotopy_ok && lhs[i][j] == rhs[i][j];
  out.shift = h.shift();
  Discrepancy em = m.measured_discrepancy();
  XQ u = action_level(*e, hx);
  out.bound = xmax(u + u + XQ(em.at(3)), lr.value + XQ(em.at(2)));
  return out;
}

}  // namespace artifact
