#pragma once

#include "artifact/filtcx.hpp"

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace artifact {

// ---------------------------------------------------------------- sequences

enum class DiscKind { Category, Module, Hom };

/// Error sequence eps_1..eps_D. Indexing through at() is 1-based.
struct Discrepancy {
  std::vector<Q> eps;
  DiscKind kind = DiscKind::Hom;

  Discrepancy() = default;
  Discrepancy(std::vector<Q> e, DiscKind k = DiscKind::Hom) : eps(std::move(e)), kind(k) {}
  static Discrepancy zeros(std::size_t cap, DiscKind k = DiscKind::Hom);

  std::size_t cap() const { return eps.size(); }
  const Q& at(std::size_t d) const;
  Q& at(std::size_t d);
  /// Nonnegative, and eps_1 = 0 for categories and modules.
  bool valid() const;
  bool operator==(const Discrepancy& o) const { return eps == o.eps; }
  std::string str() const;
};

Discrepancy disc_max(const std::vector<Discrepancy>& ds);
/// (f * g)_d = max{f_i + g_j : i + j = d + 1}
Discrepancy disc_star(const Discrepancy& f, const Discrepancy& g);
bool check_assumption_E(const Discrepancy& eps, const Discrepancy& em, const Discrepancy& ea);

struct EpsChoice {
  Discrepancy eps;
  /// eps_d / max(delta_1..delta_d, em, ea) style growth factors, reported only.
  std::vector<Q> growth;
};
EpsChoice choose_eps(const Discrepancy& delta, const Discrepancy& em, const Discrepancy& ea);

/// eps_d + eps_1 >= eps_i + eps_j for i + j = d + 1.
bool check_mod_squared_condition(const Discrepancy& eh);

/// max{eM0, eM1, ef - ef_1}
Discrepancy cone_discrepancy(const Discrepancy& em0, const Discrepancy& em1, const Discrepancy& ef);

/// Discrepancy of a pulled back module (or hom when `hom` is set) along a functor.
/// `linear` means F_d = 0 for d >= 2, so only compositions into ones count.
Discrepancy pullback_discrepancy(const Discrepancy& ef, const Discrepancy& em, bool hom = false,
                                 bool linear = false);

Q assh_cone_kappa(const Q& k0, const Q& k1, const Q& u, const Q& zeta, const Discrepancy& ec);

// ---------------------------------------------------------------- tensors

using OpKey = std::vector<int>;
using OpTable = std::map<OpKey, Chain>;

/// Evaluates a multilinear operation stored on generator tuples. The key of a
/// tuple is prefix followed by one generator index per argument.
Chain eval_table(const OpTable& t, const OpKey& prefix, const std::vector<const Chain*>& args,
                 std::size_t out_size, const Q& cutoff);

// ---------------------------------------------------------------- categories

/// Finite weakly filtered A-infinity category with operations up to a cap.
/// mu_d(a_1..a_d) with a_i in hom(X_{i-1}, X_i) lands in hom(X_0, X_d).
class WFCategory {
 public:
  explicit WFCategory(std::vector<std::string> objects, int cap = 6);

  int cap() const { return cap_; }
  std::size_t num_objects() const { return objects_.size(); }
  const std::vector<std::string>& objects() const { return objects_; }
  int object(const std::string& name) const;

  const FilteredComplex& hom(int x, int y) const;
  void set_hom(int x, int y, FilteredComplex c);

  /// d >= 2 entry; objs = X_0..X_d, gens one per input.
  void set_mu(const std::vector<int>& objs, const std::vector<int>& gens, Chain out);
  const OpTable& table() const { return mu_; }

  /// mu_d on chains; d = args.size(), mu_1 is the hom differential.
  Chain mu(const std::vector<int>& objs, const std::vector<Chain>& args) const;

  /// max over stored generator tuples of A(out) - sum A(in); -inf if none.
  XQ excess(int d) const;
  Discrepancy measured_discrepancy() const;

  /// Sum over all splittings of mu(.., mu(..), ..) vanishes up to max_arity.
  bool check_relations(int max_arity, std::string* why = nullptr) const;

  void set_unit(int x, Chain e);
  const std::optional<Chain>& unit(int x) const { return units_[static_cast<std::size_t>(x)]; }
  /// max A(e_X) over objects with units.
  XQ unit_bound() const;

  /// Object list, hom blocks and sparse "mu d (g1,...,gd) -> scalar*g" lines.
  static WFCategory parse(const std::string& text, int cap = 6);
  std::string str() const;

 private:
  friend class WFModule;
  void check_arity(std::size_t d) const;
  std::vector<std::string> objects_;
  int cap_;
  std::map<std::pair<int, int>, FilteredComplex> homs_;
  OpTable mu_;
  std::vector<std::optional<Chain>> units_;
};

using CategoryPtr = std::shared_ptr<const WFCategory>;

/// dg category whose objects are complexes V_X. hom(X, Y) is the space of
/// maps V_Y -> V_X with E_uv (v -> u) at action A(u) - A(v) + offset(X, Y),
/// mu_1 a = d a + a d and mu_2(a, b) = a b. Units are the identities.
WFCategory dg_category(const std::vector<std::string>& names, const std::vector<FilteredComplex>& spaces,
                       const std::vector<std::vector<Q>>& offset, int cap = 6);
/// Generator index of E_uv inside hom(X, Y).
int dg_elementary(const WFCategory& c, int x, int y, std::size_t u, std::size_t v);

// ---------------------------------------------------------------- modules

/// mu_d(a_1..a_{d-1}, b) with a_i in hom(X_{i-1}, X_i), b in M(X_{d-1}), lands in M(X_0).
class WFModule {
 public:
  WFModule(CategoryPtr cat, std::vector<FilteredComplex> values);

  const CategoryPtr& category() const { return cat_; }
  const WFCategory& cat() const { return *cat_; }
  const FilteredComplex& value(int x) const { return values_[static_cast<std::size_t>(x)]; }
  const std::vector<FilteredComplex>& values() const { return values_; }

  void set_mu(const std::vector<int>& objs, const std::vector<int>& gens, int m, Chain out);
  const OpTable& table() const { return mu_; }
  OpTable& table() { return mu_; }

  /// objs = X_0..X_{d-1}; d = as.size() + 1.
  Chain mu(const std::vector<int>& objs, const std::vector<Chain>& as, const Chain& b) const;

  XQ excess(int d) const;
  Discrepancy measured_discrepancy() const;
  bool check_relations(int max_arity, std::string* why = nullptr) const;

 private:
  CategoryPtr cat_;
  std::vector<FilteredComplex> values_;
  OpTable mu_;
};

using ModulePtr = std::shared_ptr<const WFModule>;

WFModule yoneda(const CategoryPtr& cat, int y);
/// Action shift by nu: the new action is A - nu.
WFModule shift_module(const WFModule& m, const Q& nu);

/// Pre-module homomorphism with components f_d, keyed like module operations.
struct PreModHom {
  ModulePtr dom, cod;
  OpTable f;
  Q rho = 0;
  Discrepancy disc;

  Chain apply(const std::vector<int>& objs, const std::vector<Chain>& as, const Chain& b) const;
  /// max over stored tuples of A(f_d(..)) - sum A(in) for this arity.
  XQ excess(int d) const;
  /// f_d raises action by at most sum + rho + eps_d for every d.
  bool within(const Q& rho, const Discrepancy& eps) const;
  bool is_zero() const;
};

using ModuleOp = std::function<Chain(const std::vector<int>&, const std::vector<Chain>&, const Chain&)>;
/// Evaluates fn on every generator tuple (X_0..X_{n-1}, g_1..g_{n-1}, m) of `dom`
/// with lo <= n <= hi and keeps the nonzero results, keyed like module maps.
OpTable tabulate_module_map(const WFModule& dom, int lo, int hi, const ModuleOp& fn);

PreModHom zero_hom(const ModulePtr& dom, const ModulePtr& cod);
PreModHom identity_hom(const ModulePtr& m);
/// mu_1^mod(f), computed on all generator tuples up to max_arity.
PreModHom mu1_mod(const PreModHom& f, int max_arity);
/// mu_2^mod(f, g) = g after f; lands in shift rho_f + rho_g with disc_star discrepancy.
PreModHom mu2_mod(const PreModHom& f, const PreModHom& g, int max_arity);
PreModHom hom_sum(const PreModHom& f, const PreModHom& g);

/// For every elementary pre-hom at the top of hom^{<=rho; eh} (arity <= max_arity),
/// checks that mu_1^mod of it stays inside.
bool verify_hom_filtration(const ModulePtr& m0, const ModulePtr& m1, const Q& rho,
                           const Discrepancy& eh, int max_arity, std::string* why = nullptr);

// ---------------------------------------------------------------- cones

struct ConeModule {
  ModulePtr module;
  Q rho;
  Discrepancy ef;
  std::vector<std::size_t> split;  ///< |M_0(X)|; those generators come first
  std::size_t n0(int x) const { return split[static_cast<std::size_t>(x)]; }
};

/// Cone of f : M0 -> M1. M0 generators are raised by rho + ef_1.
ConeModule cone(const PreModHom& f, const Q& rho, const Discrepancy& ef, int max_arity = 6);

/// psi : Cone(f) -> Cone(xi f) with psi_1(b0, b1) = (b0, xi_1 b1).
struct ConeCompose {
  ConeModule target;
  PreModHom psi;
  bool square_commutes = false;
};
ConeCompose cone_compose(const ConeModule& c, const PreModHom& f, const PreModHom& xi, const Q& s,
                         const Discrepancy& exi, int max_arity = 6);

/// theta : M0 -> M1; returns Cone(f + mu_1 theta) and the map from Cone(f).
struct ConeCorrection {
  ConeModule target;
  PreModHom vartheta;
};
ConeCorrection cone_boundary_correction(const ConeModule& c, const PreModHom& f,
                                        const PreModHom& theta, int max_arity = 6);

// ---------------------------------------------------------------- functors

/// F_d(a_1..a_d) keyed like category operations, objects mapped by `objmap`.
struct Functor {
  CategoryPtr src, dst;
  std::vector<int> objmap;
  OpTable f;

  Chain apply(const std::vector<int>& objs, const std::vector<Chain>& args) const;
  XQ excess(int d) const;
};

Functor identity_functor(const CategoryPtr& c);
WFModule pullback_module(const Functor& F, const WFModule& m, int max_arity);
PreModHom pullback_hom(const Functor& F, const PreModHom& f, const ModulePtr& dom,
                       const ModulePtr& cod, int max_arity);

// ---------------------------------------------------------------- lambda map and units

/// lambda(c)_d(a_1..a_{d-1}, b) = mu_{d+1}(a_1..a_{d-1}, b, c), c in M(Y).
PreModHom lambda_map(const ModulePtr& yon, const ModulePtr& m, int y, const Chain& c, int max_arity);

struct UnitCheck {
  bool pass = false;
  XQ minimal;  ///< least parameter for which the assumption holds
};

/// mu_2(e, e) = e + mu_1 c with A(c) <= zeta.
UnitCheck check_Ue(const WFCategory& a, const Q& zeta);
/// b -> mu_2(e_X, b) agrees in homology with the inclusion shifted by kappa.
UnitCheck check_Uw(const WFModule& m, const Q& kappa);
/// Over a field the strong and weak forms coincide.
UnitCheck check_Us(const WFModule& m, const Q& kappa);
/// b -> mu_2(b, e_Y) on hom(X, Y) is homotopic to id with shift <= kappa.
UnitCheck check_URe(const WFCategory& a, int y, const Q& kappa);

/// h(b) = mu_3(e, e, b) + mu_2(c, b) on M(X); verifies v v - v = d h + h d and
/// reports the shift of h.
struct UnitHomotopy {
  bool homotopy_ok = false;
  XQ shift;
  XQ bound;  ///< max{2u + eps_3, zeta + eps_2}
};
UnitHomotopy unit_homotopy(const WFModule& m, int x);

}  // namespace artifact
