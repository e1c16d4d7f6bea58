#include "artifact/field.hpp"

#include <numeric>
#include <stdexcept>

namespace artifact {

// ---------------------------------------------------------------- Gf2Poly

void Gf2Poly::trim() {
  while (!w_.empty() && w_.back() == 0) w_.pop_back();
}

long Gf2Poly::deg() const {
  if (w_.empty()) return -1;
  return 64 * static_cast<long>(w_.size() - 1) + 63 - __builtin_clzll(w_.back());
}

long Gf2Poly::low() const {
  for (std::size_t i = 0; i < w_.size(); ++i)
    if (w_[i]) return 64 * static_cast<long>(i) + __builtin_ctzll(w_[i]);
  return -1;
}

bool Gf2Poly::bit(long i) const {
  std::size_t k = static_cast<std::size_t>(i) / 64;
  if (i < 0 || k >= w_.size()) return false;
  return (w_[k] >> (i % 64)) & 1u;
}

void Gf2Poly::flip(long i) {
  std::size_t k = static_cast<std::size_t>(i) / 64;
  if (k >= w_.size()) w_.resize(k + 1, 0);
  w_[k] ^= std::uint64_t(1) << (i % 64);
  trim();
}

Gf2Poly& Gf2Poly::operator^=(const Gf2Poly& o) {
  if (o.w_.size() > w_.size()) w_.resize(o.w_.size(), 0);
  for (std::size_t i = 0; i < o.w_.size(); ++i) w_[i] ^= o.w_[i];
  trim();
  return *this;
}

void Gf2Poly::xor_shifted(const Gf2Poly& o, long s) {
  if (o.w_.empty()) return;
  std::size_t ws = static_cast<std::size_t>(s) / 64;
  unsigned bs = static_cast<unsigned>(s % 64);
  std::size_t need = o.w_.size() + ws + 1;
  if (w_.size() < need) w_.resize(need, 0);
  if (bs == 0) {
    for (std::size_t i = 0; i < o.w_.size(); ++i) w_[i + ws] ^= o.w_[i];
  } else {
    for (std::size_t i = 0; i < o.w_.size(); ++i) {
      w_[i + ws] ^= o.w_[i] << bs;
      w_[i + ws + 1] ^= o.w_[i] >> (64 - bs);
    }
  }
  trim();
}

Gf2Poly Gf2Poly::operator*(const Gf2Poly& o) const {
  const Gf2Poly& a = w_.size() <= o.w_.size() ? *this : o;
  const Gf2Poly& b = w_.size() <= o.w_.size() ? o : *this;
  Gf2Poly r;
  if (a.is_zero() || b.is_zero()) return r;
  r.w_.assign(a.w_.size() + b.w_.size() + 1, 0);
  for (std::size_t i = 0; i < a.w_.size(); ++i) {
    std::uint64_t word = a.w_[i];
    while (word) {
      unsigned j = __builtin_ctzll(word);
      word &= word - 1;
      std::size_t ws = i;
      unsigned bs = j;
      if (bs == 0) {
        for (std::size_t k = 0; k < b.w_.size(); ++k) r.w_[k + ws] ^= b.w_[k];
      } else {
        for (std::size_t k = 0; k < b.w_.size(); ++k) {
          r.w_[k + ws] ^= b.w_[k] << bs;
          r.w_[k + ws + 1] ^= b.w_[k] >> (64 - bs);
        }
      }
    }
  }
  r.trim();
  return r;
}

Gf2Poly Gf2Poly::shl(long s) const {
  Gf2Poly r;
  r.xor_shifted(*this, s);
  return r;
}

Gf2Poly Gf2Poly::shr(long s) const {
  Gf2Poly r;
  if (s <= 0) return s == 0 ? *this : shl(-s);
  std::size_t ws = static_cast<std::size_t>(s) / 64;
  unsigned bs = static_cast<unsigned>(s % 64);
  if (ws >= w_.size()) return r;
  r.w_.assign(w_.size() - ws, 0);
  for (std::size_t i = ws; i < w_.size(); ++i) {
    r.w_[i - ws] |= bs ? (w_[i] >> bs) : w_[i];
    if (bs && i + 1 < w_.size()) r.w_[i - ws] |= w_[i + 1] << (64 - bs);
  }
  r.trim();
  return r;
}

Gf2Poly Gf2Poly::inflate(long k) const {
  if (k == 1) return *this;
  Gf2Poly r;
  long d = deg();
  if (d < 0) return r;
  r.w_.assign(static_cast<std::size_t>(d * k) / 64 + 1, 0);
  for (long i = 0; i <= d; ++i)
    if (bit(i)) {
      long j = i * k;
      r.w_[static_cast<std::size_t>(j) / 64] |= std::uint64_t(1) << (j % 64);
    }
  r.trim();
  return r;
}

void Gf2Poly::divmod(const Gf2Poly& a, const Gf2Poly& b, Gf2Poly& q, Gf2Poly& r) {
  if (b.is_zero()) throw std::domain_error("polynomial division by zero");
  q = Gf2Poly();
  r = a;
  long db = b.deg();
  while (!r.is_zero() && r.deg() >= db) {
    long s = r.deg() - db;
    r.xor_shifted(b, s);
    q.flip(s);
  }
}

Gf2Poly Gf2Poly::gcd(Gf2Poly a, Gf2Poly b) {
  while (!b.is_zero()) {
    Gf2Poly q, r;
    divmod(a, b, q, r);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

// ---------------------------------------------------------------- Frac

namespace {
long q_to_long(const mpz_class& z) {
  if (!z.fits_slong_p()) throw std::overflow_error("exponent out of range");
  return z.get_si();
}
}  // namespace

Frac Frac::mono(const Q& e) {
  Frac f;
  f.n_ = q_to_long(e.get_den());
  f.sh_ = q_to_long(e.get_num());
  f.num_ = Gf2Poly::one();
  return f;
}

Frac Frac::from_nov(const Nov& x) {
  Frac f;
  if (x.is_zero()) return f;
  long n = 1;
  for (const Q& e : x.exps()) n = std::lcm(n, q_to_long(e.get_den()));
  f.n_ = n;
  Q base = x.exps().front() * n;
  f.sh_ = q_to_long(base.get_num());
  for (const Q& e : x.exps()) {
    Q k = e * n;
    f.num_.flip(q_to_long(k.get_num()) - f.sh_);
  }
  return f;
}

XQ Frac::val() const {
  if (is_zero()) return XQ::pos_inf();
  return XQ(Q(sh_, n_));
}

Frac Frac::rescaled(long n) const {
  if (n == n_) return *this;
  long k = n / n_;
  Frac f;
  f.n_ = n;
  if (is_zero()) return f;
  f.sh_ = sh_ * k;
  f.num_ = num_.inflate(k);
  f.den_ = den_.inflate(k);
  return f;
}

void Frac::normalize() {
  if (num_.is_zero()) {
    sh_ = 0;
    den_ = Gf2Poly::one();
    return;
  }
  long lo = num_.low();
  if (lo > 0) {
    num_ = num_.shr(lo);
    sh_ += lo;
  }
  if (den_ == Gf2Poly::one()) return;
  Gf2Poly g = Gf2Poly::gcd(num_, den_);
  if (g == Gf2Poly::one()) return;
  Gf2Poly q, r;
  Gf2Poly::divmod(num_, g, q, r);
  num_ = q;
  Gf2Poly::divmod(den_, g, q, r);
  den_ = q;
}

Frac Frac::operator+(const Frac& o) const {
  if (is_zero()) return o;
  if (o.is_zero()) return *this;
  long n = std::lcm(n_, o.n_);
  Frac a = rescaled(n), b = o.rescaled(n);
  long s = std::min(a.sh_, b.sh_);
  Frac r;
  r.n_ = n;
  r.sh_ = s;
  if (a.den_ == b.den_) {
    r.num_ = a.num_.shl(a.sh_ - s) ^ b.num_.shl(b.sh_ - s);
    r.den_ = a.den_;
  } else {
    r.num_ = (a.num_.shl(a.sh_ - s) * b.den_) ^ (b.num_.shl(b.sh_ - s) * a.den_);
    r.den_ = a.den_ * b.den_;
  }
  r.normalize();
  if (r.is_zero()) r.n_ = 1;
  return r;
}

Frac Frac::operator*(const Frac& o) const {
  if (is_zero() || o.is_zero()) return Frac();
  long n = std::lcm(n_, o.n_);
  Frac a = rescaled(n), b = o.rescaled(n);
  Frac r;
  r.n_ = n;
  r.sh_ = a.sh_ + b.sh_;
  r.num_ = a.num_ * b.num_;
  r.den_ = a.den_ * b.den_;
  if (!(a.den_ == Gf2Poly::one() && b.den_ == Gf2Poly::one())) r.normalize();
  return r;
}

Frac Frac::inv() const {
  if (is_zero()) throw std::domain_error("inverse of zero");
  Frac r;
  r.n_ = n_;
  r.sh_ = -sh_;
  r.num_ = den_;
  r.den_ = num_;
  return r;
}

bool Frac::operator==(const Frac& o) const {
  if (is_zero() || o.is_zero()) return is_zero() == o.is_zero();
  long n = std::lcm(n_, o.n_);
  Frac a = rescaled(n), b = o.rescaled(n);
  return a.sh_ == b.sh_ && a.num_ == b.num_ && a.den_ == b.den_;
}

Frac Frac::den_frac() const {
  Frac f;
  f.n_ = n_;
  f.num_ = den_;
  return f;
}

Nov Frac::to_nov(const Q& cutoff) const {
  if (is_zero()) return Nov(cutoff);
  Q span = cutoff * n_ - sh_;
  mpz_class kz = span.get_num() / span.get_den();
  if (span.get_num() % span.get_den() != 0 && span > 0) kz += 1;
  long k = kz <= 0 ? 0 : q_to_long(kz);
  std::vector<Q> exps;
  Gf2Poly r = num_;
  long dn = den_.deg();
  for (long i = 0; i < k && !r.is_zero(); ++i) {
    if (r.bit(i)) {
      exps.emplace_back(Q(sh_ + i, n_));
      if (dn == 0)
        r.flip(i);
      else
        r.xor_shifted(den_, i);
    }
  }
  Nov out(std::move(exps), cutoff);
  if (!r.is_zero()) out = out.as_truncated();
  return out;
}

// ---------------------------------------------------------------- matrices

FVec to_fvec(const std::vector<Nov>& v) {
  FVec r;
  r.reserve(v.size());
  for (const Nov& x : v) r.push_back(Frac::from_nov(x));
  return r;
}

std::vector<Nov> to_nvec(const FVec& v, const Q& cutoff) {
  std::vector<Nov> r;
  r.reserve(v.size());
  for (const Frac& x : v) r.push_back(x.to_nov(cutoff));
  return r;
}

FMat to_fmat(const std::vector<std::vector<Nov>>& m) {
  FMat r;
  r.reserve(m.size());
  for (const auto& row : m) r.push_back(to_fvec(row));
  return r;
}

FMat fmat_zero(std::size_t rows, std::size_t cols) { return FMat(rows, FVec(cols)); }

FMat fmat_identity(std::size_t n) {
  FMat m = fmat_zero(n, n);
  for (std::size_t i = 0; i < n; ++i) m[i][i] = Frac::one();
  return m;
}

FMat fmat_mul(const FMat& a, const FMat& b) {
  std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
  FMat r = fmat_zero(n, m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = 0; l < k; ++l) {
      if (a[i][l].is_zero()) continue;
      for (std::size_t j = 0; j < m; ++j)
        if (!b[l][j].is_zero()) r[i][j] += a[i][l] * b[l][j];
    }
  return r;
}

FMat fmat_add(const FMat& a, const FMat& b) {
  FMat r = a;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) r[i][j] += b[i][j];
  return r;
}

FVec fmat_apply(const FMat& a, const FVec& x) {
  FVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j)
      if (!a[i][j].is_zero() && !x[j].is_zero()) r[i] += a[i][j] * x[j];
  return r;
}

FMat fmat_transpose(const FMat& a) {
  if (a.empty()) return {};
  FMat r = fmat_zero(a[0].size(), a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) r[j][i] = a[i][j];
  return r;
}

bool fvec_is_zero(const FVec& v) {
  for (const Frac& x : v)
    if (!x.is_zero()) return false;
  return true;
}

FVec fvec_add(const FVec& a, const FVec& b) {
  FVec r = a;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
  return r;
}

FVec fvec_scale(const Frac& c, const FVec& v) {
  FVec r(v.size());
  if (c.is_zero()) return r;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!v[i].is_zero()) r[i] = c * v[i];
  return r;
}

namespace {

// Reduced row echelon form on the first `ncols` columns; returns pivot columns.
std::vector<std::size_t> rref(FMat& m, std::size_t ncols) {
  std::vector<std::size_t> piv;
  std::size_t row = 0;
  for (std::size_t c = 0; c < ncols && row < m.size(); ++c) {
    std::size_t p = row;
    while (p < m.size() && m[p][c].is_zero()) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[row]);
    Frac inv = m[row][c].inv();
    for (auto& x : m[row])
      if (!x.is_zero()) x = x * inv;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == row || m[i][c].is_zero()) continue;
      Frac f = m[i][c];
      for (std::size_t j = 0; j < m[i].size(); ++j)
        if (!m[row][j].is_zero()) m[i][j] += f * m[row][j];
    }
    piv.push_back(c);
    ++row;
  }
  return piv;
}

}  // namespace

std::size_t rank(FMat a) {
  if (a.empty()) return 0;
  return rref(a, a[0].size()).size();
}

std::vector<FVec> nullspace(const FMat& a, std::size_t cols) {
  FMat m = a;
  std::vector<std::size_t> piv = rref(m, cols);
  std::vector<bool> is_piv(cols, false);
  for (std::size_t c : piv) is_piv[c] = true;
  std::vector<FVec> out;
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_piv[f]) continue;
    FVec v(cols);
    v[f] = Frac::one();
    for (std::size_t r = 0; r < piv.size(); ++r) v[piv[r]] = m[r][f];  // char 2: -x = x
    out.push_back(std::move(v));
  }
  return out;
}

std::optional<FVec> solve(const FMat& a, const FVec& b, std::size_t cols) {
  FMat m = a;
  for (std::size_t i = 0; i < m.size(); ++i) m[i].push_back(b[i]);
  std::vector<std::size_t> piv = rref(m, cols);
  for (std::size_t r = piv.size(); r < m.size(); ++r)
    if (!m[r][cols].is_zero()) return std::nullopt;
  FVec x(cols);
  for (std::size_t r = 0; r < piv.size(); ++r) x[piv[r]] = m[r][cols];
  return x;
}

std::vector<FVec> independent_subset(const std::vector<FVec>& vs) {
  std::vector<FVec> out;
  FMat echelon;  // rows
  std::vector<std::size_t> pivots;
  for (const FVec& v : vs) {
    FVec r = v;
    for (std::size_t k = 0; k < echelon.size(); ++k) {
      std::size_t c = pivots[k];
      if (r[c].is_zero()) continue;
      Frac f = r[c];
      for (std::size_t j = 0; j < r.size(); ++j)
        if (!echelon[k][j].is_zero()) r[j] += f * echelon[k][j];
    }
    std::size_t c = 0;
    while (c < r.size() && r[c].is_zero()) ++c;
    if (c == r.size()) continue;
    Frac inv = r[c].inv();
    for (auto& x : r)
      if (!x.is_zero()) x = x * inv;
    echelon.push_back(r);
    pivots.push_back(c);
    out.push_back(v);
  }
  return out;
}

bool in_span(const std::vector<FVec>& basis, const FVec& v) {
  if (fvec_is_zero(v)) return true;
  std::vector<FVec> all = basis;
  all.push_back(v);
  return independent_subset(all).size() == independent_subset(basis).size();
}

std::vector<FVec> intersect_spans(const std::vector<FVec>& a, const std::vector<FVec>& b) {
  if (a.empty() || b.empty()) return {};
  std::size_t n = a[0].size();
  std::size_t cols = a.size() + b.size();
  FMat m = fmat_zero(n, cols);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < a.size(); ++j) m[i][j] = a[j][i];
    for (std::size_t j = 0; j < b.size(); ++j) m[i][a.size() + j] = b[j][i];
  }
  std::vector<FVec> out;
  for (const FVec& k : nullspace(m, cols)) {
    FVec v(n);
    for (std::size_t j = 0; j < a.size(); ++j)
      if (!k[j].is_zero()) v = fvec_add(v, fvec_scale(k[j], a[j]));
    if (!fvec_is_zero(v)) out.push_back(v);
  }
  return independent_subset(out);
}

std::optional<FMat> inverse(const FMat& a) {
  std::size_t n = a.size();
  FMat m = a;
  for (std::size_t i = 0; i < n; ++i) {
    m[i].resize(2 * n);
    m[i][n + i] = Frac::one();
  }
  std::vector<std::size_t> piv = rref(m, n);
  if (piv.size() != n) return std::nullopt;
  FMat r = fmat_zero(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) r[i][j] = m[i][n + j];
  return r;
}

FVec clear_denominators(const FVec& v) {
  FVec r = v;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (r[i].is_zero() || r[i].is_polynomial()) continue;
    r = fvec_scale(r[i].den_frac(), r);
  }
  return r;
}

}  // namespace artifact
