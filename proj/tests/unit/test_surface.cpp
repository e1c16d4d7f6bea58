#include "doctest.h"

#include "artifact/surface.hpp"

#include <random>
#include <set>

using namespace artifact;

namespace {

Pt P(const Q& x, const Q& y) { return Pt(x, y); }

TorusCurve horizontal(const std::string& n, const Q& y) { return TorusCurve(n, {P(-1, y), P(1, y)}); }
TorusCurve vertical(const std::string& n, const Q& x) { return TorusCurve(n, {P(x, -1), P(x, 1)}); }

// A (1,0) curve at height lo that jumps up to hi over [x0, x1].
TorusCurve bump(const std::string& n, const Q& lo, const Q& hi, const Q& x0, const Q& x1) {
  return TorusCurve(n, {P(-1, lo), P(x0, lo), P(x0, hi), P(x1, hi), P(x1, lo), P(1, lo)});
}

struct Config {
  Q eps{1, 8}, delta{1, 256}, a{1, 16}, b{1, 16};
  Q x[4];
  TorusCurve L, N, S[4], Lp;
  Config() {
    x[0] = Q(-1, 2) - eps;
    x[1] = Q(-1, 2) + eps;
    x[2] = Q(1, 2) - eps;
    x[3] = Q(1, 2) + eps;
    for (auto& v : x) v.canonicalize();
    L = horizontal("L", 0);
    N = horizontal("N", Q(-2 * eps));
    for (int i = 0; i < 4; ++i) S[i] = vertical("S" + std::to_string(i + 1), x[i]);
    const Q* X = x;
    Lp = TorusCurve("Lp", {P(-1, 0), P(X[0] - a, 0), P(X[0] - a, b), P(X[0], b), P(X[0], 2 - b), P(X[0] + a, 2 - b),
                           P(X[0] + a, 2), P(X[1] - a, 2), P(X[1] - a, 2 - b), P(X[1], 2 - b), P(X[1], b),
                           P(X[1] + a, b), P(X[1] + a, 0), P(X[2] - a, 0), P(X[2] - a, -b), P(X[2], -b),
                           P(X[2], -2 + b), P(X[2] + a, -2 + b), P(X[2] + a, -2), P(X[3] - a, -2),
                           P(X[3] - a, -2 + b), P(X[3], -2 + b), P(X[3], -b), P(X[3] + a, -b), P(X[3] + a, 0),
                           P(1, 0)});
  }
};

// Crossing count of two axis-parallel curves: every horizontal piece of one
// against every vertical piece of the other over all nearby translates.
std::size_t crossing_oracle(const TorusCurve& a, const TorusCurve& b) {
  std::set<Pt> pts;
  auto scan = [&](const TorusCurve& h, const TorusCurve& v) {
    for (std::size_t i = 0; i < h.segments(); ++i)
      for (std::size_t j = 0; j < v.segments(); ++j) {
        Pt h0 = h.seg_start(long(i)), h1 = h.seg_end(long(i));
        Pt v0 = v.seg_start(long(j)), v1 = v.seg_end(long(j));
        if (h0.y != h1.y || v0.x != v1.x) continue;
        for (int sx = -4; sx <= 4; ++sx)
          for (int sy = -4; sy <= 4; ++sy) {
            Q vx = v0.x + 2 * sx, vy0 = std::min(v0.y, v1.y) + 2 * sy, vy1 = std::max(v0.y, v1.y) + 2 * sy;
            Q hx0 = std::min(h0.x, h1.x), hx1 = std::max(h0.x, h1.x);
            if (hx0 < vx && vx < hx1 && vy0 < h0.y && h0.y < vy1) pts.insert(reduce_torus(P(vx, h0.y)));
          }
      }
  };
  scan(a, b);
  scan(b, a);
  return pts.size();
}

bool d_squared_zero(const FilteredComplex& c) { return nmat_is_zero(nmat_mul(c.diff(), c.diff())); }

}  // namespace

TEST_CASE("curve validation") {
  CHECK_NOTHROW(horizontal("L", 0));
  CHECK(horizontal("L", 0).p() == 1);
  CHECK(vertical("S", 0).q() == 1);
  CHECK_THROWS(TorusCurve("bad", {P(0, 0)}));
  CHECK_THROWS(TorusCurve("bad", {P(0, 0), P(0, 0), P(2, 0)}));
  CHECK_THROWS(TorusCurve("bad", {P(0, 0), P(1, 0)}));            // does not close
  CHECK_THROWS(TorusCurve("bad", {P(-1, 0), P(3, 0)}));           // class (2,0)
  CHECK_THROWS(TorusCurve("bad", {P(0, 0), P(1, 0), P(0, 0)}));   // degenerate loop
  CHECK_THROWS(TorusCurve("bad", {P(-1, 0), P(0, 0), P(0, 1), P(Q(-1, 2), 1), P(Q(-1, 2), Q(-1, 2)), P(Q(1, 2), Q(-1, 2)),
                                  P(Q(1, 2), 0), P(1, 0)}));      // crosses itself
  // a curve running along its own translate
  CHECK_THROWS(TorusCurve("bad", {P(-1, 0), P(0, 0), P(0, 2), P(1, 2)}));
  Config c;
  CHECK(c.Lp.p() == 1);
  CHECK(c.Lp.q() == 0);
  CHECK(c.Lp.axis_parallel());
  TorusCurve loop("loop", {P(0, 0), P(1, 0), P(1, 1), P(0, 1), P(0, 0)});
  CHECK(loop.contractible());
  auto parsed = parse_curves("# curves\ncurve L: (-1,0) (1,0)\ncurve S: (-1/2, -1) (-1/2, 1)\n");
  REQUIRE(parsed.size() == 2);
  CHECK(find_curve(parsed, "S").path()[0] == P(Q(-1, 2), -1));
  CHECK(parse_curves(parsed[0].str())[0].path() == parsed[0].path());
  CHECK_THROWS(find_curve(parsed, "X"));
}

TEST_CASE("intersections agree with the axis-parallel oracle") {
  Config c;
  CHECK(intersections(c.L, c.S[0]).size() == 1);
  CHECK(intersections(c.L, c.N).empty());
  CHECK(intersections(c.Lp, c.N).size() == 4);
  CHECK(crossing_oracle(c.Lp, c.N) == 4);
  CHECK(intersections(c.L, c.S[0])[0].point == P(c.x[0], 0));
  std::vector<TorusCurve> all{c.L, c.N, c.Lp, c.S[0], c.S[1], c.S[2], c.S[3], bump("B", Q(-1, 5), Q(1, 3), Q(-1, 5), Q(2, 5))};
  for (const auto& a : all)
    for (const auto& b : all) {
      if (a.name() == b.name()) continue;
      // Lp runs along L and the four strands
      if ((a.name() == "Lp" || b.name() == "Lp") && a.name() != "N" && b.name() != "N" && a.name() != "B" &&
          b.name() != "B")
        continue;
      CAPTURE(a.name());
      CAPTURE(b.name());
      CHECK(intersections(a, b).size() == crossing_oracle(a, b));
    }
  CHECK_THROWS(intersections(c.L, c.Lp));
  CHECK_THROWS(intersections(c.L, TorusCurve("V", {P(0, 0), P(0, 2)})));  // vertex on L
  // slanted curves
  TorusCurve diag("D", {P(-1, -1), P(1, 1)});
  CHECK(intersections(diag, TorusCurve("E", {P(Q(-1, 3), -1), P(Q(-1, 3), 1)})).size() == 1);
  TorusCurve d21("D21", {P(-1, Q(-1, 3)), P(3, Q(5, 3))});
  CHECK(intersections(d21, TorusCurve("V", {P(Q(1, 7), -1), P(Q(1, 7), 1)})).size() == 2);
}

TEST_CASE("Floer complexes of basic pairs") {
  Config c;
  CHECK(hf_rank(c.L, c.S[0]) == 1);
  CHECK(hf_rank(c.L, c.N) == 0);
  // bump with equal areas above and below: 1 * 1/2 on both sides
  TorusCurve eq = bump("E", Q(-1, 2), Q(1, 2), Q(-1, 2), Q(1, 2));
  auto fe = floer_complex(eq, c.L);
  CHECK(fe.size() == 2);
  CHECK(nmat_is_zero(fe.diff()));
  CHECK(hf_rank(eq, c.L) == 2);
  CHECK(floer_bigons(eq, c.L).size() == 2);
  for (const auto& g : floer_bigons(eq, c.L)) CHECK(g.area == Q(1, 2));
  // areas 1/2 above and 1/4 below
  TorusCurve ne = bump("U", Q(-1, 4), Q(1, 2), Q(-1, 2), Q(1, 2));
  auto fu = floer_complex(ne, c.L);
  CHECK(hf_rank(ne, c.L) == 0);
  Nov entry = fu.diff()[0][1].is_zero() ? fu.diff()[1][0] : fu.diff()[0][1];
  CHECK(entry == Nov::mono(Q(1, 2)) + Nov::mono(Q(1, 4)));
  CHECK_THROWS(floer_complex(TorusCurve("loop", {P(0, 0), P(1, 0), P(1, 1), P(0, 1), P(0, 0)}), c.L));
  // rank invariant under a wiggle that keeps the pattern and areas
  TorusCurve eq2 = bump("E2", Q(-1, 2), Q(1, 2), Q(-1, 3), Q(2, 3));
  CHECK(hf_rank(eq2, c.L) == 2);
  // the minimal bigon area is the minimal action drop
  CHECK(action_drop(FilteredMap{fu, fu, fu.diff(), 0}) == XQ(Q(1, 4)));
}

TEST_CASE("Floer ranks in the four-strand configuration") {
  Config c;
  for (int i = 0; i < 4; ++i) CHECK(hf_rank(c.N, c.S[i]) == 1);
  CHECK(hf_rank(c.N, c.L) == 0);
  CHECK(intersections(c.N, c.Lp).size() == 4);
}

TEST_CASE("d squared vanishes on a suite of small systems") {
  std::vector<TorusCurve> pool{
      horizontal("h0", 0),
      horizontal("h1", Q(1, 3)),
      vertical("v0", Q(1, 5)),
      bump("b1", Q(-1, 2), Q(1, 2), Q(-1, 2), Q(1, 2)),
      bump("b2", Q(-1, 4), Q(1, 2), Q(-2, 3), Q(1, 7)),
      bump("b3", Q(-3, 5), Q(2, 5), Q(-1, 4), Q(3, 4)),
      TorusCurve("w", {P(-1, Q(-1, 7)), P(Q(-3, 4), Q(-1, 7)), P(Q(-3, 4), Q(3, 5)), P(Q(-1, 9), Q(3, 5)),
                       P(Q(-1, 9), Q(-5, 7)), P(Q(1, 3), Q(-5, 7)), P(Q(1, 3), Q(2, 9)), P(Q(5, 7), Q(2, 9)),
                       P(Q(5, 7), Q(-1, 7)), P(1, Q(-1, 7))}),
      TorusCurve("d", {P(-1, Q(-1, 11)), P(1, Q(21, 11))}),
      TorusCurve("vb", {P(Q(1, 9), -1), P(Q(1, 9), Q(-1, 3)), P(Q(5, 9), Q(-1, 3)), P(Q(5, 9), Q(2, 5)),
                        P(Q(1, 9), Q(2, 5)), P(Q(1, 9), 1)}),
  };
  std::size_t pairs = 0, nontrivial = 0;
  for (std::size_t i = 0; i < pool.size(); ++i)
    for (std::size_t j = 0; j < pool.size(); ++j) {
      if (i == j) continue;
      std::vector<Crossing> xs;
      try {
        xs = intersections(pool[i], pool[j]);
      } catch (const std::invalid_argument&) {
        continue;
      }
      CAPTURE(pool[i].name());
      CAPTURE(pool[j].name());
      auto fc = floer_complex(pool[i], pool[j]);
      CHECK(d_squared_zero(fc));
      CHECK(fc.size() == xs.size());
      // the rank depends only on the classes for Hamiltonian-isotopic pairs, and
      // never exceeds the number of generators; parity matches the generator count
      std::size_t r = hf_rank(pool[i], pool[j]);
      CHECK(r <= xs.size());
      CHECK(r % 2 == xs.size() % 2);
      ++pairs;
      if (!nmat_is_zero(fc.diff())) ++nontrivial;
    }
  CHECK(pairs >= 40);
  CHECK(nontrivial >= 4);
}

TEST_CASE("mu2 satisfies the Leibniz rule") {
  TorusCurve c0 = horizontal("c0", 0);
  TorusCurve c1 = vertical("c1", Q(1, 3));
  TorusCurve c2("c2", {P(-1, Q(1, 2)), P(1, Q(-3, 2))});
  Mu2 m = mu2_triangles(c0, c1, c2);
  REQUIRE(m.x01.size() == 1);
  REQUIRE(m.x12.size() == 1);
  REQUIRE(m.x02.size() == 1);
  REQUIRE(m.table.count({0, 0}) == 1);
  // right isosceles triangles in the cover with legs 5/6 + 2j and 7/6 + 2j
  Nov expect;
  for (int j = 0; j < 20; ++j)
    for (Q leg : {Q(Q(5, 6) + 2 * j), Q(Q(7, 6) + 2 * j)}) {
      Q area = Q(leg * leg / 2);
      if (area <= default_cutoff()) expect += Nov::mono(area);
    }
  CHECK(m.table.at({0, 0})[0] == expect);
  // with the middle curve reversed in order, every triangle is clockwise
  CHECK(mu2_triangles(c0, c2.renamed("c2"), c1).table.size() <= 1);

  std::vector<TorusCurve> pool{horizontal("h", 0), bump("b", Q(-1, 4), Q(1, 2), Q(-2, 3), Q(1, 7)),
                               vertical("v", Q(1, 5)),
                               TorusCurve("vb", {P(Q(2, 9), -1), P(Q(2, 9), Q(-1, 3)), P(Q(5, 9), Q(-1, 3)),
                                                 P(Q(5, 9), Q(2, 5)), P(Q(2, 9), Q(2, 5)), P(Q(2, 9), 1)})};
  std::size_t tested = 0;
  for (std::size_t i = 0; i < pool.size(); ++i)
    for (std::size_t j = 0; j < pool.size(); ++j)
      for (std::size_t k = 0; k < pool.size(); ++k) {
        if (i == j || j == k || i == k) continue;
        Mu2 mu;
        try {
          mu = mu2_triangles(pool[i], pool[j], pool[k]);
        } catch (const std::invalid_argument&) {
          continue;
        }
        CAPTURE(pool[i].name() + pool[j].name() + pool[k].name());
        auto d01 = floer_complex(pool[i], pool[j]).diff();
        auto d12 = floer_complex(pool[j], pool[k]).diff();
        auto d02 = floer_complex(pool[i], pool[k]).diff();
        for (std::size_t a = 0; a < mu.x01.size(); ++a)
          for (std::size_t b = 0; b < mu.x12.size(); ++b) {
            Chain ea(mu.x01.size(), Nov()), eb(mu.x12.size(), Nov());
            ea[a] = Nov::mono(0);
            eb[b] = Nov::mono(0);
            Chain lhs = nmat_apply(d02, mu.apply(ea, eb));
            Chain r1 = mu.apply(nmat_apply(d01, ea), eb);
            Chain r2 = mu.apply(ea, nmat_apply(d12, eb));
            for (std::size_t z = 0; z < lhs.size(); ++z) CHECK(lhs[z] + r1[z] + r2[z] == Nov());
          }
        ++tested;
      }
  CHECK(tested >= 6);
}

TEST_CASE("widths from face areas") {
  Config c;
  auto faces = torus_face_areas({c.L});
  REQUIRE(faces.size() == 1);
  CHECK(faces[0] == 4);
  CHECK(gromov_width_rel(c.L, {}) == 4);
  CHECK(gromov_width_rel(c.L, {c.L.renamed("L2")}) == 0);
  CHECK(gromov_width_rel(c.L, {c.N}) == 2 * (2 * c.eps) * 2);  // strip 2 x 2 eps on the thin side
  CHECK(gromov_width_rel(c.Lp, {c.L}) == 8 * c.eps);
  CHECK(gromov_width_rel(c.Lp, {c.L, c.S[1], c.S[2], c.S[3]}) == 8 * c.eps - 2 * c.delta);
  // more obstructions never increase the width
  CHECK(gromov_width_rel(c.Lp, {c.L, c.S[0]}) <= gromov_width_rel(c.Lp, {c.L}));
  Q total = 0;
  for (const Q& f : torus_face_areas({c.Lp, c.L, c.N, c.S[0]})) total += f;
  CHECK(total == 4);
  TorusCurve sq("sq", {P(0, 0), P(Q(1, 2), 0), P(Q(1, 2), Q(1, 3)), P(0, Q(1, 3)), P(0, 0)});
  auto f2 = torus_face_areas({sq});
  REQUIRE(f2.size() == 2);
  CHECK(f2[0] == Q(1, 6));
  CHECK(f2[1] == 4 - Q(1, 6));
  CHECK(gromov_width_rel(sq, {}) == Q(1, 3));
  auto f3 = torus_face_areas({TorusCurve("d", {P(-1, -1), P(1, 1)}), vertical("v", 0)});
  REQUIRE(f3.size() == 1);
  CHECK(f3[0] == 4);
}

TEST_CASE("double point widths") {
  Config c;
  CHECK(gromov_width_double_points({c.L, c.S[0]}, {}, {}).is_pos_inf());
  CHECK(gromov_width_double_points({c.L, c.S[0]}, {P(c.x[0], 0)}, {c.L}) == XQ(0));
  // one crossing: all four quadrants in the single face
  CHECK(gromov_width_double_points({c.L, c.S[0]}, {P(c.x[0], 0)}, {}) == XQ(Q(4)));
  // four strands and N: each quadrant at N cap S1 bounded by the 2 eps strip
  std::vector<TorusCurve> sys{c.N, c.S[0], c.S[1], c.S[2], c.S[3]};
  XQ w = gromov_width_double_points(sys, {P(c.x[0], -2 * c.eps), P(c.x[1], -2 * c.eps)}, {c.L});
  CHECK(w == XQ(Q(8 * c.eps * c.eps)));
  CHECK(XQ(Q(4 * c.eps * c.eps)) <= w);
  CHECK_THROWS(gromov_width_double_points({c.L, c.S[0]}, {P(0, 0)}, {}));

  // probe curve of area A near the first strand
  Q A(1, 1024), g(1, 32), h(1, 32);
  Q t(1, 8);
  Q s = Q(g * (h + t) / (2 - t - h));
  TorusCurve probe("NA", {P(c.x[0] + s, 1), P(c.x[0] + s, h), P(c.x[0] - g, h), P(c.x[0] - g, -t),
                          P(c.x[0] + s, -t), P(c.x[0] + s, -1)});
  auto xs = intersections(probe, c.L);
  REQUIRE(xs.size() == 1);
  CHECK(intersections(probe, c.S[0]).size() == 2);
  CHECK(hf_rank(probe, c.L) == 1);
  CHECK(hf_rank(probe, c.S[0]) == 2);
  std::vector<Pt> sigma;
  for (const auto& x : intersections(probe, c.S[0])) sigma.push_back(x.point);
  XQ ws = gromov_width_double_points({c.L, c.S[0], probe}, sigma, {});
  CHECK(ws == XQ(Q(4 * A)));
}

TEST_CASE("planar shadows") {
  auto loop = PlanarDiagram::parse("curve a: (0,0) (2,0) (2,1/2) (0,1/2) (0,0)\n");
  CHECK(planar_shadow(loop) == 1);
  auto lines = PlanarDiagram::parse("curve a: (-1,0) (1,0)\ncurve b: (-1,1) (1,1)\nend left y=0\nend right y=0\n"
                                    "end left y=1\nend right y=1\n");
  CHECK(planar_shadow(lines) == 0);
  // two overlapping squares: union area
  auto two = PlanarDiagram::parse("curve a: (0,0) (2,0) (2,2) (0,2) (0,0)\ncurve b: (1,1) (3,1) (3,3) (1,3) (1,1)\n");
  CHECK(planar_shadow(two) == 7);
  // a U-turn between two ends bounds nothing
  auto u = PlanarDiagram::parse("curve a: (-1,0) (0,0) (0,1) (-1,1)\nend left y=0\nend left y=1\n");
  CHECK(planar_shadow(u) == 0);
  // a cap closing two ends going right encloses the region between them
  auto cap = PlanarDiagram::parse("curve a: (-1,0) (0,0) (0,1) (-1,1)\ncurve b: (-2,1/2) (2,1/2)\nend left y=0\n"
                                  "end left y=1\nend left y=1/2\nend right y=1/2\n");
  CHECK(planar_shadow(cap) == 0);
  auto tri = PlanarDiagram::parse("curve t: (0,0) (3,0) (0,2) (0,0)\n");
  std::mt19937 rng(7);
  for (int i = 0; i < 10; ++i) {
    Q k(int(rng() % 41) - 20, int(rng() % 7) + 1);
    CHECK(planar_shadow(tri.sheared(k)) == 3);
    CHECK(planar_shadow(two.sheared(k)) == 7);
  }
  CHECK_THROWS(PlanarDiagram::parse("curve a: (-1,0) (1,1)\nend left y=0\nend right y=1\n"));
  CHECK_THROWS(PlanarDiagram::parse("curve a: (-1,0) (1,0)\nend left y=0\n"));
  CHECK_THROWS(PlanarDiagram::parse("curve a: (-1,0) (1,0)\nend left y=0\nend right y=0\nend right y=3\n"));
  CHECK(PlanarDiagram::parse(lines.str()).curves.size() == 2);
}

TEST_CASE("surgery") {
  Config c;
  auto r = surgery(c.L, c.S[0], P(c.x[0], 0), c.delta, "L2");
  CHECK(r.a * r.b == c.delta);
  CHECK(r.a == Q(1, 16));
  CHECK(r.curve.p() == 1);
  CHECK(r.curve.q() == 1);
  CHECK(planar_shadow(r.trace) == c.delta);
  // the crossing is resolved: the new curve leaves that point and only runs along S1
  CHECK_THROWS(intersections(r.curve, c.S[0]));
  CHECK(intersections(r.curve, c.N).size() == 1);
  CHECK_THROWS(surgery(c.L, c.S[0], P(c.x[0], 0), 0, "X"));
  CHECK_THROWS(surgery(c.L, c.S[0], P(0, 0), c.delta, "X"));
  CHECK_THROWS(surgery(c.L, c.S[0], P(c.x[0], 0), 3, "X"));
  CHECK(handle_side(Q(1, 9)) == Q(1, 3));
  Q hs = handle_side(Q(1, 200));
  CHECK(hs * hs <= Q(1, 200));
  // the composite of four surgeries matches the drawn curve
  TorusCurve s2r("S2r", {P(c.x[1], 1), P(c.x[1], -1)});
  TorusCurve s4r("S4r", {P(c.x[3], 1), P(c.x[3], -1)});
  auto r1 = surgery(c.L, c.S[0], P(c.x[0], 0), c.delta, "A");
  auto r2 = surgery(r1.curve, s2r, P(c.x[1], 0), c.delta, "B");
  auto r3 = surgery(r2.curve, c.S[2], P(c.x[2], 0), c.delta, "C");
  auto r4 = surgery(r3.curve, s4r, P(c.x[3], 0), c.delta, "D");
  CHECK(r4.curve.p() == 1);
  CHECK(r4.curve.q() == 0);
  CHECK(intersections(r4.curve, c.N).size() == 4);
  CHECK(gromov_width_rel(r4.curve, {c.L}) == gromov_width_rel(c.Lp, {c.L}));
}

TEST_CASE("svg output") {
  Config c;
  std::string s = svg_curves({c.L, c.Lp});
  CHECK(s.find("<svg") == 0);
  CHECK(s.find("Lp") != std::string::npos);
  auto r = surgery(c.L, c.S[0], P(c.x[0], 0), c.delta, "L2");
  CHECK(svg_diagram(r.trace).find("polyline") != std::string::npos);
}
