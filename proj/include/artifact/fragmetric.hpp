#pragma once

#include "artifact/surface.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace artifact {

/// One closed piece of a move's planar footprint: a unit-height rectangle of
/// width `area` placed in a column. Pieces in the same column overlap.
struct FootprintPiece {
  Q column;
  Q area;
  bool operator==(const FootprintPiece& o) const { return column == o.column && area == o.area; }
};

/// A cone-decomposition tree: each internal node is a move whose positive end
/// is `label` and whose negative ends are the children, in order. Leaves are
/// the linearization.
struct DecompNode {
  std::string label;
  std::string move;  ///< empty for a leaf
  std::vector<FootprintPiece> footprint;
  std::vector<DecompNode> children;

  static DecompNode leaf(const std::string& l) { return DecompNode{l, "", {}, {}}; }
  bool is_leaf() const { return move.empty(); }
  std::vector<std::string> linearization() const;
  std::vector<FootprintPiece> all_pieces() const;
  /// "move(child, child, ...)" with leaves printed as labels.
  std::string str() const;
};

/// Substitutes psi at the leaf of phi with index `leaf` (or, by default, the
/// first leaf labelled psi.label).
DecompNode compose_decomp(const DecompNode& phi, const DecompNode& psi, std::optional<std::size_t> leaf = {});

/// Planar diagram of a footprint: the rectangles, spaced so that distinct
/// columns never overlap.
PlanarDiagram footprint_diagram(const std::vector<FootprintPiece>& pieces);
/// planar_shadow of footprint_diagram.
Q footprint_shadow(const std::vector<FootprintPiece>& pieces);
/// Shadow of the union computed directly: sum over columns of the largest area.
Q footprint_union_area(const std::vector<FootprintPiece>& pieces);

using Weight = std::function<Q(const DecompNode&)>;
Q shadow_weight(const DecompNode& t);

/// w(identity) = 0, w >= 0, and w(phi o psi) <= w(phi) + w(psi) on every pair
/// (psi substituted at its first matching leaf).
bool check_weight_axioms(const Weight& w, const std::vector<std::pair<DecompNode, DecompNode>>& samples,
                         std::string* why = nullptr);

// ---------------------------------------------------------------- moves

enum class MoveKind { Suspension, Surgery, UTurn, Declared };

/// A generator of cobordisms. Suspensions are used in both directions; a
/// surgery rewrites its result into its two inputs; a U-turn adds two copies
/// of a curve beside any end; a declared move rewrites `top` into `ends`.
struct Move {
  MoveKind kind = MoveKind::Declared;
  std::string name;
  std::string top;
  std::vector<std::string> ends;
  Q area;    ///< Hofer length, handle area or declared shadow
  Q column;  ///< footprint column
};

/// Curves, families and moves for the metric queries.
class MoveSystem {
 public:
  void add_curve(const TorusCurve& c);
  const TorusCurve& curve(const std::string& name) const;
  bool has_curve(const std::string& name) const;
  /// Name of the first curve with the same point set (the canonical name).
  std::string canonical(const std::string& name) const;
  const std::vector<TorusCurve>& curves() const { return curves_; }

  void add_move(Move m);
  const std::vector<Move>& moves() const { return moves_; }
  /// Adds the surgery result as a curve and registers the move.
  const TorusCurve& add_surgery(const std::string& result, const std::string& l, const std::string& s, const Pt& at,
                                const Q& area, std::optional<Q> column = {});
  void add_suspension(const std::string& a, const std::string& b, const Q& length, std::optional<Q> column = {});
  void add_uturn(const std::string& b);
  void add_declared(const std::string& name, const std::string& top, const std::vector<std::string>& ends,
                    const Q& shadow, std::optional<Q> column = {});

  void set_family(const std::string& name, const std::vector<std::string>& members);
  const std::vector<std::string>& family(const std::string& name) const;

  void add_probe(const std::string& n) { probes_.push_back(canonical(n)); }
  const std::vector<std::string>& probes() const { return probes_; }

  /// Monotone mode caps every width bound at the declared minimal disk area.
  void set_monotone(const Q& a_l) { monotone_ = a_l; }
  const std::optional<Q>& monotone() const { return monotone_; }

 private:
  Q next_column();
  std::vector<TorusCurve> curves_;
  std::map<std::string, std::string> canon_;
  std::vector<Move> moves_;
  std::map<std::string, std::vector<std::string>> families_;
  std::vector<std::string> probes_;
  std::optional<Q> monotone_;
  long columns_ = 0;
};

// ---------------------------------------------------------------- bounds

/// Half the relative width (capped at A_L in monotone mode).
Q prune_lower_bound(const TorusCurve& l, const std::vector<TorusCurve>& s, std::optional<Q> monotone = {});

/// Lower bound on the shadow of any cobordism whose ends are exactly `ends`:
/// any end can be bent to be the positive one, so the bound is the largest
/// prune_lower_bound(end; other ends), raised by the intersection probes.
struct FamilyBound {
  XQ value;
  std::string reason;
};
FamilyBound ends_lower_bound(const MoveSystem& sys, const std::vector<std::string>& ends);

// ---------------------------------------------------------------- metrics

struct MetricResult {
  XQ lower = XQ(Q(0));
  XQ upper = XQ::pos_inf();
  std::optional<DecompNode> witness;
  std::string certificate;  ///< which family realised the lower bound
  bool exhausted = false;   ///< the search budget ran out
  /// The width bound exceeds a witnessed shadow: the declared inequalities and
  /// the move data disagree.
  bool contradiction = false;
  std::string str() const;  ///< "[lower, upper]"
};

struct SearchBudget {
  std::size_t max_nodes = 20000;
  std::size_t max_depth = 6;
  /// Only accept decompositions whose last end is the partner curve.
  bool top_end_only = false;
};

/// d_k(a, b) relative to the family: cobordisms with ends b and at most k
/// members of the family, searched with either curve as the positive end.
MetricResult d_k(const MoveSystem& sys, const std::string& a, const std::string& b, const std::string& family,
                 int k, const SearchBudget& budget = {});

struct LengthResult {
  int lower = 0;
  std::optional<int> upper;  ///< nullopt means none found up to the largest k tried
  std::string certificate;
  std::string str() const;
};

/// Least k with d_k upper <= a; smaller k are excluded when every family with
/// at most k members has lower bound > a. a = nullopt means no shadow limit.
LengthResult cone_length(const MoveSystem& sys, const std::string& a, const std::string& b,
                         const std::string& family, std::optional<Q> limit, int max_k = 4,
                         const SearchBudget& budget = {});

/// Infimum over k <= max_k.
MetricResult d_F(const MoveSystem& sys, const std::string& a, const std::string& b, const std::string& family,
                 int max_k = 4, const SearchBudget& budget = {});
/// Interval max of d_F over the two families.
MetricResult d_hat(const MoveSystem& sys, const std::string& a, const std::string& b, const std::string& f1,
                   const std::string& f2, int max_k = 4, const SearchBudget& budget = {});

/// Table of d_k values keyed by (a, b, k).
using DkTable = std::map<std::tuple<std::string, std::string, int>, MetricResult>;
/// d_{k+k'}(a, c).upper <= d_k(a, b).upper + d_{k'}(b, c).upper wherever all three are present.
bool check_triangle(const DkTable& t, std::vector<std::string>* violations = nullptr);

/// |d(a, b) - d(pa, pb)| <= 2h on upper bounds, for pairs transported by a
/// Hamiltonian of Hofer length h.
bool quasi_isometry_check(const Q& h, const std::vector<std::pair<MetricResult, MetricResult>>& pairs);

/// Footprint of the connected cobordism with ends (S1, L, S1): a bent curve,
/// a horizontal line and one handle of area eps^2 at their crossing.
PlanarDiagram w_eps_footprint(const Q& eps);

}  // namespace artifact
