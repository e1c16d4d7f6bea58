#include "artifact/rational.hpp"

#include <stdexcept>

namespace artifact {

Q parse_q(const std::string& raw) {
  std::string s;
  for (char c : raw)
    if (c != ' ' && c != '\t') s.push_back(c);
  if (s.empty()) throw std::invalid_argument("empty rational");
  auto slash = s.find('/');
  auto digits_ok = [](const std::string& t) {
    std::size_t i = (!t.empty() && (t[0] == '-' || t[0] == '+')) ? 1 : 0;
    if (i >= t.size()) return false;
    for (; i < t.size(); ++i)
      if (t[i] < '0' || t[i] > '9') return false;
    return true;
  };
  std::string num = s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!digits_ok(num) || !digits_ok(den)) throw std::invalid_argument("bad rational: " + raw);
  if (num[0] == '+') num = num.substr(1);
  if (den[0] == '+') den = den.substr(1);
  mpz_class n(num), d(den);
  if (d == 0) throw std::invalid_argument("zero denominator: " + raw);
  Q q(n, d);
  q.canonicalize();
  return q;
}

std::string q_str(const Q& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::string q_dec(const Q& q, int digits) {
  mpz_class scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  mpz_class num = q.get_num() * scale;
  mpz_class den = q.get_den();
  bool neg = num < 0;
  if (neg) num = -num;
  // round half up
  mpz_class r = (2 * num + den) / (2 * den);
  mpz_class ip = r / scale, fp = r % scale;
  std::string f = fp.get_str();
  while (static_cast<int>(f.size()) < digits) f = "0" + f;
  std::string out = (neg && r != 0 ? "-" : "") + ip.get_str();
  if (digits > 0) out += "." + f;
  return out;
}

const Q& XQ::value() const {
  if (kind_ != Kind::Finite) throw std::logic_error("XQ::value on infinite");
  return v_;
}

bool operator==(const XQ& a, const XQ& b) {
  if (a.kind_ != b.kind_) return false;
  return a.kind_ != XQ::Kind::Finite || a.v_ == b.v_;
}

std::strong_ordering operator<=>(const XQ& a, const XQ& b) {
  if (a.kind_ != b.kind_) return static_cast<int>(a.kind_) <=> static_cast<int>(b.kind_);
  if (a.kind_ != XQ::Kind::Finite) return std::strong_ordering::equal;
  int c = cmp(a.v_, b.v_);
  return c < 0 ? std::strong_ordering::less
               : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

XQ operator+(const XQ& a, const XQ& b) {
  if ((a.is_pos_inf() && b.is_neg_inf()) || (a.is_neg_inf() && b.is_pos_inf()))
    throw std::domain_error("inf - inf");
  if (!a.finite()) return a;
  if (!b.finite()) return b;
  return XQ(Q(a.v_ + b.v_));
}

XQ operator-(const XQ& a) {
  if (a.is_pos_inf()) return XQ::neg_inf();
  if (a.is_neg_inf()) return XQ::pos_inf();
  return XQ(Q(-a.v_));
}

std::string XQ::str() const {
  if (is_pos_inf()) return "inf";
  if (is_neg_inf()) return "-inf";
  return q_str(v_);
}

std::string XQ::dec(int digits) const {
  if (!finite()) return str();
  return q_dec(v_, digits);
}

XQ xmax(const XQ& a, const XQ& b) { return a < b ? b : a; }
XQ xmin(const XQ& a, const XQ& b) { return b < a ? b : a; }

std::string report_value(const XQ& v) {
  if (!v.finite()) return v.str();
  if (v.value().get_den() == 1) return v.str();
  return v.str() + " (" + v.dec() + ")";
}

}  // namespace artifact
