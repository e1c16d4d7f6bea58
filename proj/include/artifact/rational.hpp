#pragma once

#include <gmpxx.h>

#include <compare>
#include <ostream>
#include <string>

namespace artifact {

using Q = mpq_class;

/// Parse "p/q", "p" or "-p/q". Throws std::invalid_argument.
Q parse_q(const std::string& s);

/// Canonical "p/q" (or "p" for integers).
std::string q_str(const Q& q);

/// Decimal approximation with `digits` fractional digits.
std::string q_dec(const Q& q, int digits = 6);

/// Rationals extended by -inf and +inf.
class XQ {
 public:
  enum class Kind { NegInf, Finite, PosInf };

  XQ() : kind_(Kind::Finite), v_(0) {}
  XQ(const Q& v) : kind_(Kind::Finite), v_(v) { v_.canonicalize(); }  // NOLINT
  XQ(long v) : kind_(Kind::Finite), v_(v) {}      // NOLINT
  static XQ neg_inf() { return XQ(Kind::NegInf); }
  static XQ pos_inf() { return XQ(Kind::PosInf); }

  Kind kind() const { return kind_; }
  bool finite() const { return kind_ == Kind::Finite; }
  bool is_neg_inf() const { return kind_ == Kind::NegInf; }
  bool is_pos_inf() const { return kind_ == Kind::PosInf; }
  const Q& value() const;

  friend bool operator==(const XQ& a, const XQ& b);
  friend std::strong_ordering operator<=>(const XQ& a, const XQ& b);

  /// Sum; (+inf) + (-inf) throws.
  friend XQ operator+(const XQ& a, const XQ& b);
  friend XQ operator-(const XQ& a);
  friend XQ operator-(const XQ& a, const XQ& b) { return a + (-b); }

  std::string str() const;
  std::string dec(int digits = 6) const;

 private:
  explicit XQ(Kind k) : kind_(k), v_(0) {}
  Kind kind_;
  Q v_;
};

XQ xmax(const XQ& a, const XQ& b);
XQ xmin(const XQ& a, const XQ& b);

/// "p/q (decimal)" rendering used in reports.
std::string report_value(const XQ& v);

inline std::ostream& operator<<(std::ostream& o, const XQ& v) { return o << v.str(); }

}  // namespace artifact
