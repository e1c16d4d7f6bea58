#include "support/oracle.hpp"

#include <algorithm>
#include <numeric>

namespace oracle {

using artifact::Frac;
using artifact::FVec;
using artifact::Nov;

namespace {

FVec sub_scaled(const FVec& a, const Frac& s, const FVec& b) {
  FVec r = a;
  for (std::size_t i = 0; i < r.size(); ++i)
    if (!b[i].is_zero()) r[i] = r[i] + s * b[i];
  return r;
}

bool zero(const FVec& v) {
  for (const Frac& x : v)
    if (!x.is_zero()) return false;
  return true;
}

long lcm_den(long acc, const Q& q) { return std::lcm(acc, q.get_den().get_si()); }

}  // namespace

bool bounds_within(const NMat& d, const std::vector<Q>& w, const Chain& c, const Q& alpha) {
  std::size_t n = w.size();
  std::vector<FVec> cols(n, FVec(n));
  for (std::size_t j = 0; j < n; ++j) {
    Frac s = Frac::mono(w[j] - alpha);
    for (std::size_t i = 0; i < n; ++i) cols[j][i] = Frac::from_nov(d[i][j]) * s;
  }
  std::vector<std::size_t> remaining(n);
  std::iota(remaining.begin(), remaining.end(), 0);
  std::vector<std::pair<std::size_t, FVec>> pivots;
  for (std::size_t r = 0; r < n; ++r) {
    long best = -1;
    XQ bv = XQ::pos_inf();
    for (std::size_t k = 0; k < remaining.size(); ++k) {
      XQ v = cols[remaining[k]][r].val();
      if (!cols[remaining[k]][r].is_zero() && (best < 0 || v < bv)) {
        best = static_cast<long>(k);
        bv = v;
      }
    }
    if (best < 0) continue;
    std::size_t p = remaining[static_cast<std::size_t>(best)];
    remaining.erase(remaining.begin() + best);
    for (std::size_t k : remaining)
      if (!cols[k][r].is_zero()) cols[k] = sub_scaled(cols[k], cols[k][r] / cols[p][r], cols[p]);
    pivots.emplace_back(r, cols[p]);
  }
  FVec rest(n);
  for (std::size_t i = 0; i < n; ++i) rest[i] = Frac::from_nov(c[i]);
  for (auto& [r, col] : pivots) {
    if (rest[r].is_zero()) continue;
    Frac lam = rest[r] / col[r];
    if (lam.val() < XQ(0)) return false;
    rest = sub_scaled(rest, lam, col);
  }
  return zero(rest);
}

std::size_t rank(const NMat& m) {
  if (m.empty()) return 0;
  std::vector<FVec> rows;
  for (const auto& row : m) {
    FVec r;
    for (const Nov& x : row) r.push_back(Frac::from_nov(x));
    rows.push_back(r);
  }
  std::size_t cols = rows[0].size(), rk = 0;
  for (std::size_t c = 0; c < cols && rk < rows.size(); ++c) {
    std::size_t p = rk;
    while (p < rows.size() && rows[p][c].is_zero()) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[p], rows[rk]);
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (i != rk && !rows[i][c].is_zero()) rows[i] = sub_scaled(rows[i], rows[i][c] / rows[rk][c], rows[rk]);
    ++rk;
  }
  return rk;
}

XQ boundary_level(const NMat& d, const std::vector<Q>& w, const Chain& c) {
  std::size_t n = w.size();
  bool nonzero = false;
  for (const Nov& x : c) nonzero = nonzero || !x.is_zero();
  if (!nonzero) return XQ::neg_inf();
  NMat aug = d;
  for (std::size_t i = 0; i < n; ++i) aug[i].push_back(c[i]);
  if (rank(aug) != rank(d)) return XQ::pos_inf();

  long den = 1;
  for (const Q& x : w) den = lcm_den(den, x);
  for (const auto& row : d)
    for (const Nov& x : row)
      for (const Q& e : x.exps()) den = lcm_den(den, e);
  XQ ac = XQ::neg_inf();
  for (std::size_t j = 0; j < n; ++j) {
    if (c[j].is_zero()) continue;
    for (const Q& e : c[j].exps()) den = lcm_den(den, e);
    ac = artifact::xmax(ac, XQ(w[j]) - c[j].val());
  }
  Q scaled = ac.value() * den;
  mpz_class fl;
  mpz_fdiv_q(fl.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
  long lo = fl.get_si() - 1;  // never enough: B >= A(c)
  long step = 1, hi = lo + step;
  while (!bounds_within(d, w, c, Q(hi, den))) {
    step *= 2;
    hi = lo + step;
  }
  while (hi - lo > 1) {
    long mid = lo + (hi - lo) / 2;
    if (bounds_within(d, w, c, Q(mid, den)))
      hi = mid;
    else
      lo = mid;
  }
  Q out(hi, den);
  out.canonicalize();
  return XQ(out);
}

NMat hom_differential(const FilteredComplex& c, const FilteredComplex& d) {
  std::size_t nc = c.size(), nd = d.size(), n = nc * nd;
  NMat m(n, std::vector<Nov>(n, Nov(c.cutoff())));
  for (std::size_t i = 0; i < nd; ++i)
    for (std::size_t j = 0; j < nc; ++j) {
      // E_ij sends c_j to d_i.
      for (std::size_t k = 0; k < nd; ++k) m[k * nc + j][i * nc + j] += d.diff()[k][i];
      for (std::size_t l = 0; l < nc; ++l) m[i * nc + l][i * nc + j] += c.diff()[j][l];
    }
  return m;
}

std::vector<Q> hom_weights(const FilteredComplex& c, const FilteredComplex& d) {
  std::vector<Q> w;
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j = 0; j < c.size(); ++j) w.push_back(d.action()[i] - c.action()[j]);
  return w;
}

NMat NormalForm::matrix() const {
  std::size_t n = action.size();
  NMat m(n, std::vector<Nov>(n, Nov()));
  for (const Pair& p : pairs) m[p.x][p.b] = Nov::mono(p.a);
  return m;
}

NormalForm random_normal_form(Rng& rng, std::size_t n) {
  NormalForm nf;
  for (std::size_t i = 0; i < n; ++i) nf.action.push_back(rng.quarter(-8, 8));
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng.gen);
  int np = rng.uniform(0, static_cast<int>(n / 2));
  for (int i = 0; i < np; ++i) {
    std::size_t b = perm[2 * i], x = perm[2 * i + 1];
    Q a = std::max(Q(0), Q(nf.action[x] - nf.action[b])) + rng.quarter(0, 6);
    nf.pairs.push_back({b, x, a});
  }
  return nf;
}

std::pair<NMat, NMat> random_gauge(Rng& rng, const std::vector<Q>& action) {
  std::size_t n = action.size();
  NMat nil(n, std::vector<Nov>(n, Nov()));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < j; ++i)
      if (rng.coin(0.4)) nil[i][j] = Nov::mono(action[i] - action[j] + rng.quarter(0, 4));
  NMat g = artifact::nmat_add(artifact::nmat_identity(n, artifact::default_cutoff()), nil);
  NMat inv = artifact::nmat_identity(n, artifact::default_cutoff());
  NMat pw = inv;
  for (std::size_t k = 1; k < n; ++k) {
    pw = artifact::nmat_mul(pw, nil);
    inv = artifact::nmat_add(inv, pw);
  }
  return {g, inv};
}

NMat conjugate(const NMat& g, const NMat& d, const NMat& ginv) {
  return artifact::nmat_mul(artifact::nmat_mul(g, d), ginv);
}

FilteredComplex random_complex(Rng& rng, std::size_t n) {
  NormalForm nf = random_normal_form(rng, n);
  auto [g, gi] = random_gauge(rng, nf.action);
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("g" + std::to_string(i));
  return FilteredComplex(names, nf.action, conjugate(g, nf.matrix(), gi));
}

Chain random_chain(Rng& rng, std::size_t n) {
  Chain c(n, Nov());
  for (std::size_t i = 0; i < n; ++i) {
    if (rng.coin()) continue;
    c[i] = Nov::mono(rng.quarter(-4, 4));
    if (rng.coin(0.3)) c[i] += Nov::mono(rng.quarter(-4, 8));
  }
  return c;
}

}  // namespace oracle
