#pragma once

#include "artifact/field.hpp"
#include "artifact/valla.hpp"

#include <optional>
#include <string>
#include <vector>

namespace artifact {

using Chain = std::vector<Nov>;
/// m[i][j]: coefficient of target generator i in the image of source generator j.
using NMat = std::vector<std::vector<Nov>>;

NMat nmat_zero(std::size_t rows, std::size_t cols, const Q& cutoff);
NMat nmat_identity(std::size_t n, const Q& cutoff);
NMat nmat_mul(const NMat& a, const NMat& b);
NMat nmat_add(const NMat& a, const NMat& b);
Chain nmat_apply(const NMat& a, const Chain& x);
bool nmat_is_zero(const NMat& a);
FMat to_fmat_checked(const NMat& m);
NMat to_nmat(const FMat& m, const Q& cutoff);

/// Finite complex over Lambda with a basis and an action value per basis element.
class FilteredComplex {
 public:
  FilteredComplex() = default;
  /// Checks d^2 = 0 and A(d e) <= A(e) for every generator.
  FilteredComplex(std::vector<std::string> names, std::vector<Q> action, NMat d);

  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<Q>& action() const { return action_; }
  const NMat& diff() const { return d_; }
  const Q& cutoff() const { return cutoff_; }
  std::size_t index(const std::string& name) const;

  Chain zero_chain() const { return Chain(size(), Nov(cutoff_)); }
  Chain gen(const std::string& name) const;
  Chain apply_d(const Chain& c) const { return nmat_apply(d_, c); }

  /// Same differential, actions shifted by s.
  FilteredComplex shifted(const Q& s) const;

  /// "gen <name> action <p/q>" and "d <name> = <scalar>*<name> + ..." lines.
  static FilteredComplex parse(const std::string& text);
  std::string str() const;

 private:
  std::vector<std::string> names_;
  std::vector<Q> action_;
  NMat d_;
  Q cutoff_ = default_cutoff();
};

/// Parses "<scalar>*<gen> + <gen> + ..." against the generator list.
Chain parse_chain(const std::string& text, const FilteredComplex& c);
std::string chain_str(const Chain& c, const FilteredComplex& cx);

struct FilteredMap {
  FilteredComplex dom, cod;
  NMat m;
  Q declared_shift = 0;

  /// max over generators of A(f e) - A(e); -inf for the zero map.
  XQ shift() const;
  bool respects_declared_shift() const;
  bool is_chain_map() const;
  Chain apply(const Chain& c) const { return nmat_apply(m, c); }
};

FilteredMap identity_map(const FilteredComplex& c);
FilteredMap compose(const FilteredMap& g, const FilteredMap& f);  // g after f
FilteredMap map_sum(const FilteredMap& f, const FilteredMap& g);

XQ action_level(const Chain& c, const FilteredComplex& cx);

/// Supremal r >= 0 with f(C^{<=a}) in D^{<=a-r}; +inf for the zero map.
/// Throws if f is not strictly filtered.
XQ action_drop(const FilteredMap& f);

struct LevelResult {
  XQ value;
  Chain witness;  ///< primitive attaining the value (empty if none)
};

/// inf{alpha : c = d b, b in C^{<=alpha}}; +inf if c is not a boundary.
LevelResult boundary_level(const Chain& c, const FilteredComplex& cx);
/// B(c) - A(c); throws unless c is a nonzero boundary.
Q boundary_depth_elem(const Chain& c, const FilteredComplex& cx);
/// Minimal r >= 0 such that cycles mapping to boundaries bound within +r.
XQ boundary_depth_map(const FilteredMap& phi);

/// Hom complex Hom(C, D): generator i*|C|+j maps C_j to D_i, action A(D_i) - A(C_j).
FilteredComplex hom_complex(const FilteredComplex& c, const FilteredComplex& d);
Chain map_to_hom_chain(const FilteredMap& f);
NMat hom_chain_to_matrix(const Chain& h, std::size_t rows, std::size_t cols);

struct HomotopyResult {
  XQ value;  ///< -inf for psi = 0, +inf if psi is not null-homotopic
  std::optional<NMat> homotopy;
};
HomotopyResult homotopical_boundary_level(const FilteredMap& psi);

/// Exact variants on matrices over the rational subfield, for maps that are
/// not finite Novikov sums (inverses, solved-for maps).
XQ fmat_shift(const FMat& m, const FilteredComplex& dom, const FilteredComplex& cod);
bool fmat_is_chain_map(const FMat& m, const FilteredComplex& dom, const FilteredComplex& cod);
struct FHomotopy {
  XQ value;
  FMat homotopy;  ///< cod x dom, empty when psi is zero or not null-homotopic
};
FHomotopy homotopical_boundary_level_f(const FMat& psi, const FilteredComplex& dom,
                                       const FilteredComplex& cod);

/// inf over nonzero v in span(V) ∩ Im d of B(v) - A(v); +inf if that space is 0.
XQ robustness(const std::vector<Chain>& v, const FilteredComplex& cx);
bool is_delta_robust(const std::vector<Chain>& v, const Q& delta, const FilteredComplex& cx);

struct RobustSubspace {
  std::vector<Chain> basis;
  std::size_t k = 0;
  XQ drop_d1;  ///< action drop of d1
  bool verified = false;
};
RobustSubspace find_robust_subspace(const FilteredComplex& cx, const NMat& d0, const NMat& d1);

struct RigidityReport {
  bool hypotheses = false;
  std::string failed;  ///< first failing hypothesis
  std::size_t rank_f = 0;
  std::size_t dim_h0 = 0;
  bool conclusion = false;
};
RigidityReport verify_rig_cplx2(const FilteredComplex& cx, const NMat& d0, const NMat& d1,
                                const FilteredMap& f);

struct InjectivityReport {
  bool hypotheses = false;
  std::string failed;
  bool strictly_filtered = false;
  bool injective = false;
};
InjectivityReport check_injectivity_lemma(const FilteredMap& f, const FilteredMap& g);

/// Inverse of f built as (sum_n k^n) g^{-1} with k = g^{-1}(f - g), below the cutoff.
FilteredMap filtered_inverse(const FilteredMap& f, const FilteredMap& g);

std::size_t homology_dim(const NMat& d);

}  // namespace artifact
