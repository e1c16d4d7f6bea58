#pragma once

#include "artifact/wfainf.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace artifact {

// ---------------------------------------------------------------- iterated cones

/// K_0 = Yoneda(L_0), K_i = Cone(phi_i : Yoneda(L_i) -> K_{i-1}; rho_i, delta_i).
/// phi[i-1] is keyed like module maps on Yoneda(L_i) generator tuples, with
/// outputs in K_{i-1}(X) = hom(X, L_{i-1}) + ... + hom(X, L_0) in that order.
struct IteratedConeSpec {
  CategoryPtr cat;
  std::vector<int> objects;  ///< L_0..L_r
  std::vector<OpTable> phi;
  std::vector<Q> rho;
  std::vector<Discrepancy> delta;
};

struct IteratedCone {
  std::vector<ModulePtr> stages;  ///< K_0..K_r
  std::vector<Discrepancy> disc;  ///< inductive discrepancy of each stage
  /// Per object: block sizes of K_r(X) in the order L_r, ..., L_0.
  std::vector<std::vector<std::size_t>> blocks;
  const ModulePtr& top() const { return stages.back(); }
};

IteratedCone build_iterated_cone(const IteratedConeSpec& spec, int max_arity);

// ---------------------------------------------------------------- twisted data

/// Cycles c_{q,p} in hom(L_q, L_p) for p < q, indexed by positions in `objects`.
struct TwistedData {
  std::vector<int> objects;
  std::map<std::pair<int, int>, Chain> c;
  const Chain* get(int q, int p) const;
};

/// Blocks a_{i,j} : hom(X, L_j) -> hom(X, L_i) in the order L_0..L_r.
struct TwistedMatrix {
  std::vector<std::size_t> sizes;
  std::vector<std::vector<NMat>> block;
  std::vector<std::vector<std::string>> symbolic;
  NMat full() const;
};

/// a_{i,i} = mu_1 and, for i < j, a_{i,j}(b) = sum over j = k_0 > ... > k_s = i of
/// mu_{s+1}(b, c_{k_0,k_1}, ..., c_{k_{s-1},k_s}). Needs cap >= r + 1.
TwistedMatrix assemble_twisted_mu1(const WFCategory& cat, int x, const TwistedData& data);
bool check_twisted_square_zero(const TwistedMatrix& m);

/// The attaching maps of the twisted complex as an iterated cone spec, with
/// rho_i = 0 and delta measured from the tables.
IteratedConeSpec twisted_cone_spec(const CategoryPtr& cat, const TwistedData& data, int max_arity);

/// Parses a category followed by "twisted L0 L1 ..." and "c q p: <chain>" lines.
struct TwistedSpecFile {
  CategoryPtr cat;
  TwistedData data;
};
TwistedSpecFile parse_twisted_spec(const std::string& text, int cap = 6);

/// Random dg instance: D = G diag(d) G^{-1} with G block unitriangular, c_{q,p}
/// the off-diagonal blocks of D. Solves the Maurer-Cartan equation exactly.
struct DgTwisted {
  CategoryPtr cat;
  TwistedData data;
};
DgTwisted random_dg_twisted(std::uint64_t seed, int r);

// ---------------------------------------------------------------- bounds

struct ChiXi {
  Q chi, xi;
};
/// chi_{m,d} = sum_{j<=m} sum_{i<=d+m} delta_i^{phi_j} + sum_{i<=d+m} eps_i^A,
/// xi_q = kappa + sum_{i<=q+3} eps_i^A + sum_{j<=q} sum_{i<=q+2} delta_i^{phi_j}.
ChiXi bounds_chi_xi(int m, int d, int q, const Q& kappa, const Discrepancy& ea,
                    const std::vector<Discrepancy>& deltas);

struct AuditReport {
  bool module_map = false;
  bool invertible = false;
  bool triangular = false;
  bool unit_diagonal = false;
  bool inverse_filtered = false;
  bool base_filtration = false;
  XQ shift;
  std::optional<Q> ratio;  ///< shift / xi_r, reported only
  std::string failed;
  bool pass() const {
    return module_map && invertible && triangular && unit_diagonal && inverse_filtered && base_filtration;
  }
};

/// sigma : K_r -> M, where M has the same block layout as K_r.
AuditReport audit_structure_theorem(const IteratedCone& k, const ModulePtr& m, const PreModHom& sigma,
                                    const Q& xi_r, int max_arity);

// ---------------------------------------------------------------- retract energy

/// rho(f) = inf_g max{B_h(g f - id), A(g) + A(f), 0} over left homotopy inverses g.
struct RetractEnergy {
  XQ lower, upper;
  FMat g;        ///< inverse attaining `upper`; empty if none exists
  FMat homotopy; ///< g f - id = d h + h d
  bool exact() const { return lower == upper; }
};

RetractEnergy retract_energy(const FilteredMap& f);
/// max{B_h(g f - id), A(g) + A(f), 0}; +inf when g f is not homotopic to id.
XQ retract_value(const FilteredMap& f, const FMat& g);

struct SubadditivityReport {
  XQ rho_f, rho_fp, rho_composite;
  bool holds = false;
  bool witness_ok = false;  ///< eta' = g eta' f + eta is a homotopy
  XQ eta_shift, eta_bound;
};
/// Checks rho(f' f) <= rho(f) + rho(f') with the composite inverse g g'.
SubadditivityReport check_rho_subadditive(const FilteredMap& f, const FilteredMap& fp);

/// M_1 = Cone(phi : N -> K) and u : N -> N'. Builds M_1' = Cone(phi v : S^{-r} N' -> K)
/// with u' = (u, phi xi + id), v' = (v, id), xi' = (xi, 0).
struct ConeReplace {
  FilteredComplex m1, m1p;
  FilteredMap up, vp;
  FMat xip;
  bool homotopy_ok = false;
  XQ bound;  ///< max{A(u) + A(v), A(xi), 0}
  XQ witness;  ///< max{B_h(v'u' - id), A(v') + A(u'), 0}
  RetractEnergy energy;
};
ConeReplace cone_replace(const FilteredComplex& n, const FilteredComplex& k, const FilteredMap& phi,
                         const FilteredComplex& np, const FilteredMap& u, const FMat& v, const FMat& xi);
/// Same with v and xi taken from the retract energy of u.
ConeReplace cone_replace(const FilteredComplex& n, const FilteredComplex& k, const FilteredMap& phi,
                         const FilteredComplex& np, const FilteredMap& u);

struct Model {
  FilteredMap alpha;
  std::string decomposition;
};
struct WeightResult {
  XQ value;
  int best = -1;
};
/// Minimum over the supplied models of the upper retract energy.
WeightResult weight_wp(const std::vector<Model>& models);

}  // namespace artifact
