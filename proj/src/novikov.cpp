#include "artifact/novikov.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <mutex>
#include <stdexcept>

namespace artifact {

namespace {
std::mutex g_cut_mu;
Q g_cutoff(256);

// Sort, cancel equal pairs, drop what is at or above the cutoff.
std::vector<Q> normalize(std::vector<Q> e, const Q& cutoff, bool& truncated) {
  for (Q& x : e) x.canonicalize();
  std::sort(e.begin(), e.end());
  std::vector<Q> out;
  out.reserve(e.size());
  for (std::size_t i = 0; i < e.size();) {
    std::size_t j = i;
    while (j < e.size() && e[j] == e[i]) ++j;
    if ((j - i) % 2 == 1) {
      if (e[i] < cutoff)
        out.push_back(e[i]);
      else
        truncated = true;
    }
    i = j;
  }
  return out;
}
}  // namespace

Q default_cutoff() {
  std::lock_guard<std::mutex> lk(g_cut_mu);
  return g_cutoff;
}

void set_default_cutoff(const Q& c) {
  if (c <= 0) throw std::invalid_argument("cutoff must be positive");
  std::lock_guard<std::mutex> lk(g_cut_mu);
  g_cutoff = c;
}

Nov::Nov(std::vector<Q> exps, const Q& cutoff) : cutoff_(cutoff) {
  exps_ = normalize(std::move(exps), cutoff_, truncated_);
}

Nov Nov::mono(const Q& e, const Q& cutoff) { return Nov(std::vector<Q>{e}, cutoff); }

XQ Nov::val() const {
  if (exps_.empty()) return XQ::pos_inf();
  return XQ(exps_.front());
}

void Nov::check_cutoff(const Nov& o) const {
  if (cutoff_ != o.cutoff_) throw std::invalid_argument("mismatched Novikov cutoffs");
}

Nov Nov::operator+(const Nov& o) const {
  check_cutoff(o);
  Nov r(cutoff_);
  r.exps_.reserve(exps_.size() + o.exps_.size());
  std::set_symmetric_difference(exps_.begin(), exps_.end(), o.exps_.begin(), o.exps_.end(),
                                std::back_inserter(r.exps_));
  r.truncated_ = truncated_ || o.truncated_;
  return r;
}

Nov Nov::operator*(const Nov& o) const {
  check_cutoff(o);
  Nov r(cutoff_);
  r.truncated_ = truncated_ || o.truncated_;
  if (exps_.empty() || o.exps_.empty()) return r;
  std::map<Q, bool> acc;
  for (const Q& a : exps_)
    for (const Q& b : o.exps_) {
      Q s = a + b;
      if (s >= cutoff_) {
        r.truncated_ = true;
        continue;
      }
      auto it = acc.find(s);
      if (it == acc.end())
        acc.emplace(s, true);
      else
        it->second = !it->second;
    }
  for (auto& [e, on] : acc)
    if (on) r.exps_.push_back(e);
  return r;
}

Nov Nov::shifted(const Q& e) const {
  std::vector<Q> v;
  v.reserve(exps_.size());
  for (const Q& x : exps_) v.push_back(x + e);
  Nov r(std::move(v), cutoff_);
  r.truncated_ = r.truncated_ || truncated_;
  return r;
}

Nov Nov::inverse(bool rescale) const {
  if (exps_.empty()) throw std::domain_error("inverse of zero");
  Q v = exps_.front();
  if (v != 0 && !rescale) throw std::domain_error("inverse needs valuation 0 (or rescale)");
  Nov x = shifted(-v);
  // x = 1 + k with nu(k) > 0, so x^{-1} = sum_n k^n, truncated at the cutoff.
  Nov k = x + Nov::mono(Q(0), cutoff_);
  Nov sum = Nov::mono(Q(0), cutoff_);
  Nov pw = sum;
  while (true) {
    pw = pw * k;
    if (pw.is_zero()) break;
    sum = sum + pw;
  }
  sum.truncated_ = sum.truncated_ || !k.is_zero();
  return sum.shifted(-v);
}

Nov Nov::with_cutoff(const Q& c) const {
  Nov r(exps_, c);
  r.truncated_ = r.truncated_ || truncated_;
  return r;
}

std::string Nov::str() const {
  if (exps_.empty()) return "0";
  std::string s;
  for (std::size_t i = 0; i < exps_.size(); ++i) {
    if (i) s += " + ";
    s += "T^{" + q_str(exps_[i]) + "}";
  }
  return s;
}

Nov Nov::parse(const std::string& s) { return parse(s, default_cutoff()); }

Nov Nov::parse(const std::string& raw, const Q& cutoff) {
  std::string s;
  for (char c : raw)
    if (c != ' ' && c != '\t') s.push_back(c);
  if (s.size() >= 2 && s.front() == '(' && s.back() == ')') s = s.substr(1, s.size() - 2);
  if (s == "0") return Nov(cutoff);
  if (s.empty()) throw std::invalid_argument("empty Novikov scalar");
  std::vector<Q> exps;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t next = s.find('+', pos);
    std::string term = s.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
    if (term == "1") {
      exps.emplace_back(0);
    } else if (term == "T") {
      exps.emplace_back(1);
    } else if (term.rfind("T^", 0) == 0) {
      std::string e = term.substr(2);
      if (e.size() >= 2 && e.front() == '{' && e.back() == '}') e = e.substr(1, e.size() - 2);
      exps.push_back(parse_q(e));
    } else {
      throw std::invalid_argument("bad Novikov term: '" + term + "'");
    }
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return Nov(std::move(exps), cutoff);
}

}  // namespace artifact
