#include "artifact/valla.hpp"

#include <stdexcept>

namespace artifact {

XQ level(const FVec& x, const Weights& w) {
  XQ best = XQ::neg_inf();
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (x[j].is_zero()) continue;
    XQ a = XQ(w[j]) - x[j].val();
    if (a > best) best = a;
  }
  return best;
}

std::vector<std::uint64_t> lead_bits(const FVec& x, const Weights& w) {
  std::vector<std::uint64_t> bits((x.size() + 63) / 64, 0);
  XQ l = level(x, w);
  if (!l.finite()) return bits;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (x[j].is_zero()) continue;
    if (XQ(w[j]) - x[j].val() == l) bits[j / 64] |= std::uint64_t(1) << (j % 64);
  }
  return bits;
}

namespace {

using Bits = std::vector<std::uint64_t>;

bool bits_zero(const Bits& b) {
  for (auto x : b)
    if (x) return false;
  return true;
}

void bits_xor(Bits& a, const Bits& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] ^= b[i];
}

long bits_top(const Bits& b) {
  for (std::size_t i = b.size(); i-- > 0;)
    if (b[i]) return static_cast<long>(64 * i + 63 - __builtin_clzll(b[i]));
  return -1;
}

// Incremental GF(2) echelon over lead vectors, remembering which inputs
// make up each stored row.
struct LeadEchelon {
  std::vector<Bits> rows;
  std::vector<Bits> combos;
  std::vector<long> tops;
  std::size_t nvec;

  explicit LeadEchelon(std::size_t n) : nvec(n) {}

  // Reduces `lead` (belonging to input `idx`). Returns the empty combo if it
  // is independent (and stores it), else the dependency set including idx.
  Bits insert(Bits lead, std::size_t idx) {
    Bits combo((nvec + 63) / 64, 0);
    combo[idx / 64] |= std::uint64_t(1) << (idx % 64);
    bool changed = true;
    while (changed && !bits_zero(lead)) {
      changed = false;
      long t = bits_top(lead);
      for (std::size_t r = 0; r < rows.size(); ++r)
        if (tops[r] == t) {
          bits_xor(lead, rows[r]);
          bits_xor(combo, combos[r]);
          changed = true;
          break;
        }
    }
    if (!bits_zero(lead)) {
      rows.push_back(lead);
      combos.push_back(combo);
      tops.push_back(bits_top(lead));
      return {};
    }
    return combo;
  }
};

}  // namespace

bool is_orthogonal(const std::vector<FVec>& vs, const Weights& w) {
  LeadEchelon ech(vs.size());
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (fvec_is_zero(vs[i])) return false;
    if (!ech.insert(lead_bits(vs[i], w), i).empty()) return false;
  }
  return true;
}

void orthogonalize(std::vector<FVec>& vs, std::size_t frozen, const Weights& w,
                   std::vector<FVec>* paired) {
  LeadEchelon ech(vs.size());
  for (std::size_t i = 0; i < vs.size(); ++i) {
    while (true) {
      if (fvec_is_zero(vs[i])) throw std::invalid_argument("orthogonalize: dependent input");
      Bits dep = ech.insert(lead_bits(vs[i], w), i);
      if (dep.empty()) break;
      if (i < frozen) throw std::invalid_argument("orthogonalize: frozen prefix not orthogonal");
      // Bring every member of the dependency to the level of v_i and add.
      XQ li = level(vs[i], w);
      FVec nv = vs[i];
      FVec np;
      if (paired) np = (*paired)[i];
      for (std::size_t j = 0; j < i; ++j) {
        if (!((dep[j / 64] >> (j % 64)) & 1u)) continue;
        Frac c = Frac::mono((level(vs[j], w) - li).value());
        nv = fvec_add(nv, fvec_scale(c, vs[j]));
        if (paired) np = fvec_add(np, fvec_scale(c, (*paired)[j]));
      }
      vs[i] = std::move(nv);
      if (paired) (*paired)[i] = std::move(np);
    }
  }
}

std::vector<FVec> orthogonal_basis(const std::vector<FVec>& vs, const Weights& w) {
  std::vector<FVec> b = independent_subset(vs);
  orthogonalize(b, 0, w);
  return b;
}

std::vector<FVec> extend_orthogonal(const std::vector<FVec>& base,
                                    const std::vector<FVec>& candidates, const Weights& w,
                                    std::vector<FVec>* paired) {
  std::vector<FVec> all = base;
  std::vector<FVec> chosen_pair;
  std::size_t rk = independent_subset(base).size();
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    std::vector<FVec> trial = all;
    trial.push_back(candidates[i]);
    if (independent_subset(trial).size() > rk) {
      all.push_back(candidates[i]);
      ++rk;
      if (paired) chosen_pair.push_back((*paired)[i]);
    }
  }
  std::vector<FVec> pairs;
  if (paired) {
    std::size_t dim = candidates.empty() ? 0 : (*paired).empty() ? 0 : (*paired)[0].size();
    pairs.assign(base.size(), FVec(dim));
    pairs.insert(pairs.end(), chosen_pair.begin(), chosen_pair.end());
  }
  orthogonalize(all, base.size(), w, paired ? &pairs : nullptr);
  std::vector<FVec> out(all.begin() + static_cast<long>(base.size()), all.end());
  if (paired) *paired = std::vector<FVec>(pairs.begin() + static_cast<long>(base.size()), pairs.end());
  return out;
}

std::vector<std::size_t> unit_completion(const std::vector<FVec>& orth, const Weights& w) {
  std::size_t n = w.size();
  LeadEchelon ech(orth.size() + n);
  for (std::size_t i = 0; i < orth.size(); ++i)
    if (!ech.insert(lead_bits(orth[i], w), i).empty())
      throw std::invalid_argument("unit_completion: family not orthogonal");
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < n; ++j) {
    Bits b((n + 63) / 64, 0);
    b[j / 64] |= std::uint64_t(1) << (j % 64);
    if (ech.insert(b, orth.size() + j).empty()) out.push_back(j);
  }
  return out;
}

Distance dist_to_subspace(const FVec& x, const std::vector<FVec>& basis, const Weights& w) {
  if (in_span(basis, x)) return {XQ::neg_inf(), FVec(x.size())};
  std::vector<FVec> vs = orthogonal_basis(basis, w);
  std::size_t k = vs.size();
  vs.push_back(x);
  orthogonalize(vs, k, w);
  return {level(vs[k], w), vs[k]};
}

}  // namespace artifact
