#pragma once

#include "artifact/rational.hpp"

#include <string>
#include <vector>

namespace artifact {

/// Working precision used when no cutoff is given explicitly.
Q default_cutoff();
void set_default_cutoff(const Q& c);

/// Element of the Novikov field over Z/2: a finite set of exponents,
/// each carrying coefficient 1. Exponents at or above the cutoff are dropped.
class Nov {
 public:
  Nov() : cutoff_(default_cutoff()) {}
  explicit Nov(const Q& cutoff) : cutoff_(cutoff) {}
  /// Builds from arbitrary exponents: duplicates cancel in pairs.
  Nov(std::vector<Q> exps, const Q& cutoff);

  static Nov zero() { return Nov(); }
  static Nov zero(const Q& cutoff) { return Nov(cutoff); }
  static Nov mono(const Q& e) { return mono(e, default_cutoff()); }
  static Nov mono(const Q& e, const Q& cutoff);
  static Nov one() { return mono(Q(0)); }

  const std::vector<Q>& exps() const { return exps_; }
  const Q& cutoff() const { return cutoff_; }
  bool truncated() const { return truncated_; }
  bool is_zero() const { return exps_.empty(); }
  std::size_t size() const { return exps_.size(); }

  /// Minimal exponent; +inf for zero.
  XQ val() const;

  Nov operator+(const Nov& o) const;
  Nov operator*(const Nov& o) const;
  Nov& operator+=(const Nov& o) { return *this = *this + o; }
  Nov& operator*=(const Nov& o) { return *this = *this * o; }
  /// Multiply by T^e.
  Nov shifted(const Q& e) const;

  /// Inverse via the geometric series; requires valuation 0 unless
  /// `rescale` is set, in which case T^{-v} is factored out first.
  Nov inverse(bool rescale = false) const;

  /// Same exponents below the new cutoff.
  Nov with_cutoff(const Q& c) const;
  /// Copy carrying the truncation flag.
  Nov as_truncated() const { Nov r = *this; r.truncated_ = true; return r; }

  /// Exact comparison of the stored exponents.
  bool operator==(const Nov& o) const { return exps_ == o.exps_; }
  bool operator!=(const Nov& o) const { return !(*this == o); }

  std::string str() const;
  static Nov parse(const std::string& s);
  static Nov parse(const std::string& s, const Q& cutoff);

 private:
  void check_cutoff(const Nov& o) const;
  std::vector<Q> exps_;
  Q cutoff_;
  bool truncated_ = false;
};

inline std::ostream& operator<<(std::ostream& o, const Nov& x) { return o << x.str(); }

inline XQ valuation(const Nov& x) { return x.val(); }
inline Nov nov_add(const Nov& a, const Nov& b) { return a + b; }
inline Nov nov_mul(const Nov& a, const Nov& b) { return a * b; }
inline Nov nov_invert(const Nov& a, bool rescale = false) { return a.inverse(rescale); }

}  // namespace artifact
