#pragma once

#include "artifact/filtcx.hpp"

#include <map>
#include <string>
#include <vector>

namespace artifact {

struct Pt {
  Q x, y;
  Pt() = default;
  Pt(Q a, Q b) : x(std::move(a)), y(std::move(b)) {
    x.canonicalize();
    y.canonicalize();
  }
  bool operator==(const Pt& o) const { return x == o.x && y == o.y; }
  bool operator!=(const Pt& o) const { return !(*this == o); }
  bool operator<(const Pt& o) const { return x < o.x || (x == o.x && y < o.y); }
};

Pt operator+(const Pt& a, const Pt& b);
Pt operator-(const Pt& a, const Pt& b);
Pt operator*(const Q& s, const Pt& a);
Q cross(const Pt& a, const Pt& b);
std::string pt_str(const Pt& p);
Pt parse_pt(const std::string& s);

/// Closed PL curve on T^2 = R^2 / 2Z^2, stored as a path in the universal
/// cover whose last vertex is the first one translated by 2(p, q).
class TorusCurve {
 public:
  TorusCurve() = default;
  /// Checks consecutive vertices distinct, closure in 2Z^2 and embeddedness.
  TorusCurve(std::string name, std::vector<Pt> path);

  const std::string& name() const { return name_; }
  const std::vector<Pt>& path() const { return path_; }
  std::size_t segments() const { return path_.size() - 1; }
  int p() const { return p_; }
  int q() const { return q_; }
  Pt period() const { return Pt(Q(2 * p_), Q(2 * q_)); }
  bool contractible() const { return p_ == 0 && q_ == 0; }
  bool axis_parallel() const;

  /// Start and end of segment g of the infinite lift (g may be any integer).
  Pt seg_start(long g) const;
  Pt seg_end(long g) const;
  Pt at(long g, const Q& t) const;

  /// Flux against the origin: half the integral of x dy - y dx over one
  /// period plus half of cross(start, period). Independent of the starting
  /// vertex; a translation by v adds cross(v, period).
  Q flux() const;

  TorusCurve translated(const Pt& v) const;
  TorusCurve renamed(std::string n) const;
  /// "curve <name>: (x1,y1) (x2,y2) ..."
  std::string str() const;

 private:
  std::string name_;
  std::vector<Pt> path_;
  int p_ = 0, q_ = 0;
};

std::vector<TorusCurve> parse_curves(const std::string& text);
const TorusCurve& find_curve(const std::vector<TorusCurve>& cs, const std::string& name);

/// Reduction of a point into [-1, 1)^2.
Pt reduce_torus(const Pt& p);

/// A transverse crossing: segment/parameter on each curve plus the lifted
/// position on each curve's own path.
struct Crossing {
  Pt point;  ///< reduced into [-1, 1)^2
  std::size_t seg_a = 0, seg_b = 0;
  Q t_a, t_b;
  Pt lift_a, lift_b;
};

/// Sorted by reduced point; throws on collinear overlaps or vertex touches.
std::vector<Crossing> intersections(const TorusCurve& a, const TorusCurve& b);

struct Bigon {
  std::size_t from = 0, to = 0;
  Q area;
  std::vector<Pt> boundary;  ///< counterclockwise, in the universal cover
};

/// Embedded bigons with convex corners from x to y: the loop running along
/// `a` from x to y and back along `b` is counterclockwise.
std::vector<Bigon> floer_bigons(const TorusCurve& a, const TorusCurve& b);

/// Generators are the crossings at action 0; d x = sum over bigons T^{area} y.
FilteredComplex floer_complex(const TorusCurve& a, const TorusCurve& b);
std::size_t hf_rank(const TorusCurve& a, const TorusCurve& b);

/// mu_2 : CF(c0, c1) x CF(c1, c2) -> CF(c0, c2) from embedded triangles with
/// convex corners, keyed by (generator of CF(c0,c1), generator of CF(c1,c2)).
struct Mu2 {
  std::vector<Crossing> x01, x12, x02;
  std::map<std::pair<std::size_t, std::size_t>, Chain> table;
  Chain apply(const Chain& a, const Chain& b) const;
};
Mu2 mu2_triangles(const TorusCurve& c0, const TorusCurve& c1, const TorusCurve& c2);

// ---------------------------------------------------------------- planar diagrams

/// PL curves in R^2. Open curves end in horizontal rays; each ray is declared
/// by an "end left|right y=<h>" line.
struct PlanarDiagram {
  struct End {
    bool left = true;
    Q height;
  };
  std::vector<std::vector<Pt>> curves;  ///< closed when first == last
  std::vector<End> ends;

  static PlanarDiagram parse(const std::string& text);
  std::string str() const;
  /// Checks that open curves end horizontally and match the declared ends.
  void validate() const;
  PlanarDiagram sheared(const Q& k) const;  ///< (x, y) -> (x + k y, y)
  void append(const PlanarDiagram& o);
};

/// Area of the bounded components of the complement of the diagram.
Q planar_shadow(const PlanarDiagram& d);

// ---------------------------------------------------------------- surgery

struct SurgeryResult {
  TorusCurve curve;
  PlanarDiagram trace;  ///< ends for the two inputs, the output, and the handle loop
  Q a, b;               ///< handle sides, a * b = area
};

/// Resolves the crossing `at` of two axis-parallel strands: the incoming arm of
/// l turns onto the outgoing arm of s and vice versa, each corner cut by an
/// a x b rectangle. Column places the handle loop of the trace.
SurgeryResult surgery(const TorusCurve& l, const TorusCurve& s, const Pt& at, const Q& handle_area,
                      const std::string& name, const Q& column = 0);

/// Rational handle side close to sqrt(area) from below.
Q handle_side(const Q& area);

// ---------------------------------------------------------------- widths

/// Curves in the same class are Hamiltonian isotopic exactly when their fluxes
/// agree modulo the torus area 4.
bool hamiltonian_isotopic(const TorusCurve& a, const TorusCurve& b);

/// The two curves have the same image on the torus.
bool same_point_set(const TorusCurve& a, const TorusCurve& b);

/// Faces of T^2 minus the union of the curves.
std::vector<Q> torus_face_areas(const std::vector<TorusCurve>& curves);

/// Relative width: over the arcs of l off q, 2 min(area left, area right) when
/// the two sides are different faces and the face area otherwise; 0 if l lies in q.
Q gromov_width_rel(const TorusCurve& l, const std::vector<TorusCurve>& q);

/// Double point width: every point of sigma is a transverse crossing of the
/// system; the disks' quadrants share faces, so the answer is the least
/// 4 area(F) / (number of quadrants in F). +inf when sigma is empty, 0 when a
/// point lies on q.
XQ gromov_width_double_points(const std::vector<TorusCurve>& system, const std::vector<Pt>& sigma,
                              const std::vector<TorusCurve>& q);

// ---------------------------------------------------------------- svg

std::string svg_curves(const std::vector<TorusCurve>& curves);
std::string svg_diagram(const PlanarDiagram& d);

}  // namespace artifact
