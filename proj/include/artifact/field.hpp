#pragma once

#include "artifact/novikov.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace artifact {

/// Dense polynomial over GF(2), bit i = coefficient of t^i.
class Gf2Poly {
 public:
  Gf2Poly() = default;
  static Gf2Poly one() { Gf2Poly p; p.flip(0); return p; }

  bool is_zero() const { return w_.empty(); }
  long deg() const;     // -1 for zero
  long low() const;     // lowest set bit, -1 for zero
  bool bit(long i) const;
  void flip(long i);

  Gf2Poly operator^(const Gf2Poly& o) const { Gf2Poly r = *this; r ^= o; return r; }
  Gf2Poly& operator^=(const Gf2Poly& o);
  /// this ^= (o << s)
  void xor_shifted(const Gf2Poly& o, long s);
  Gf2Poly operator*(const Gf2Poly& o) const;
  Gf2Poly shl(long s) const;
  Gf2Poly shr(long s) const;
  /// t -> t^k
  Gf2Poly inflate(long k) const;
  static void divmod(const Gf2Poly& a, const Gf2Poly& b, Gf2Poly& q, Gf2Poly& r);
  static Gf2Poly gcd(Gf2Poly a, Gf2Poly b);

  bool operator==(const Gf2Poly& o) const { return w_ == o.w_; }

 private:
  void trim();
  std::vector<std::uint64_t> w_;
};

/// Element of GF(2)(t) with t = T^{1/N}, stored as t^sh * num/den where
/// num and den have constant term 1 and are coprime. This is the exact
/// subfield of the Novikov field used for all linear algebra.
class Frac {
 public:
  Frac() = default;
  static Frac zero() { return Frac(); }
  static Frac one() { return mono(Q(0)); }
  static Frac mono(const Q& e);
  static Frac from_nov(const Nov& x);

  bool is_zero() const { return num_.is_zero(); }
  /// Valuation; +inf for zero.
  XQ val() const;
  long scale() const { return n_; }

  Frac operator+(const Frac& o) const;
  Frac operator-(const Frac& o) const { return *this + o; }
  Frac operator*(const Frac& o) const;
  Frac inv() const;
  Frac operator/(const Frac& o) const { return *this * o.inv(); }
  Frac& operator+=(const Frac& o) { return *this = *this + o; }
  Frac& operator*=(const Frac& o) { return *this = *this * o; }
  bool operator==(const Frac& o) const;
  bool operator!=(const Frac& o) const { return !(*this == o); }

  /// Laurent expansion, terms below the cutoff.
  Nov to_nov(const Q& cutoff) const;
  /// Whether the expansion is a finite sum (den == 1).
  bool is_polynomial() const { return den_ == Gf2Poly::one(); }
  /// The denominator as a field element.
  Frac den_frac() const;

 private:
  Frac rescaled(long n) const;
  void normalize();
  long n_ = 1;
  long sh_ = 0;
  Gf2Poly num_;
  Gf2Poly den_ = Gf2Poly::one();
};

using FVec = std::vector<Frac>;
/// Row-major: m[i][j] is row i, column j.
using FMat = std::vector<FVec>;

FVec to_fvec(const std::vector<Nov>& v);
std::vector<Nov> to_nvec(const FVec& v, const Q& cutoff);
FMat to_fmat(const std::vector<std::vector<Nov>>& m);

FMat fmat_zero(std::size_t rows, std::size_t cols);
FMat fmat_identity(std::size_t n);
FMat fmat_mul(const FMat& a, const FMat& b);
FMat fmat_add(const FMat& a, const FMat& b);
FVec fmat_apply(const FMat& a, const FVec& x);
FMat fmat_transpose(const FMat& a);
bool fvec_is_zero(const FVec& v);
FVec fvec_add(const FVec& a, const FVec& b);
FVec fvec_scale(const Frac& c, const FVec& v);

std::size_t rank(FMat a);
/// Basis of {x : a x = 0}.
std::vector<FVec> nullspace(const FMat& a, std::size_t cols);
/// Some x with a x = b, if one exists.
std::optional<FVec> solve(const FMat& a, const FVec& b, std::size_t cols);
/// Maximal independent subset, in order.
std::vector<FVec> independent_subset(const std::vector<FVec>& vs);
bool in_span(const std::vector<FVec>& basis, const FVec& v);
/// Basis of span(a) ∩ span(b).
std::vector<FVec> intersect_spans(const std::vector<FVec>& a, const std::vector<FVec>& b);
std::optional<FMat> inverse(const FMat& a);
/// Scalar multiple of v whose entries are all finite sums.
FVec clear_denominators(const FVec& v);

}  // namespace artifact
