#include "artifact/surface.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace artifact {

// ---------------------------------------------------------------- points

Pt operator+(const Pt& a, const Pt& b) { return Pt(Q(a.x + b.x), Q(a.y + b.y)); }
Pt operator-(const Pt& a, const Pt& b) { return Pt(Q(a.x - b.x), Q(a.y - b.y)); }
Pt operator*(const Q& s, const Pt& a) { return Pt(Q(s * a.x), Q(s * a.y)); }
Q cross(const Pt& a, const Pt& b) { return Q(a.x * b.y - a.y * b.x); }
std::string pt_str(const Pt& p) { return "(" + q_str(p.x) + "," + q_str(p.y) + ")"; }

Pt parse_pt(const std::string& raw) {
  std::string s;
  for (char c : raw)
    if (c != ' ' && c != '\t') s.push_back(c);
  if (s.size() < 5 || s.front() != '(' || s.back() != ')') throw std::invalid_argument("bad point: " + raw);
  std::size_t comma = s.find(',');
  if (comma == std::string::npos) throw std::invalid_argument("bad point: " + raw);
  return Pt(parse_q(s.substr(1, comma - 1)), parse_q(s.substr(comma + 1, s.size() - comma - 2)));
}

namespace {

long qfloor(const Q& q) {
  mpz_class f;
  mpz_fdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return f.get_si();
}
long qceil(const Q& q) {
  mpz_class f;
  mpz_cdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return f.get_si();
}
int sgn(const Q& q) { return q > 0 ? 1 : (q < 0 ? -1 : 0); }
double qd(const Q& q) { return q.get_d(); }

enum class Hit { None, Point, Overlap };
struct SegHit {
  Hit kind = Hit::None;
  Q t, u;
};

// p1 + t (p2 - p1) = p3 + u (p4 - p3) with t, u in [0, 1].
SegHit seg_intersect(const Pt& p1, const Pt& p2, const Pt& p3, const Pt& p4) {
  Pt r = p2 - p1, s = p4 - p3, w = p3 - p1;
  Q den = cross(r, s);
  SegHit h;
  if (den == 0) {
    if (cross(w, r) != 0) return h;
    // collinear: compare projections onto r
    Q rr = Q(r.x * r.x + r.y * r.y);
    Q a = Q((w.x * r.x + w.y * r.y) / rr);
    Pt w2 = p4 - p1;
    Q b = Q((w2.x * r.x + w2.y * r.y) / rr);
    Q lo = std::min(a, b), hi = std::max(a, b);
    if (hi < 0 || lo > 1) return h;
    if (hi == 0 || lo == 1) {
      // touching at one endpoint
      h.kind = Hit::Point;
      h.t = hi == 0 ? Q(0) : Q(1);
      Pt p = p1 + h.t * r;
      Q ss = Q(s.x * s.x + s.y * s.y);
      Pt v = p - p3;
      h.u = Q((v.x * s.x + v.y * s.y) / ss);
      return h;
    }
    h.kind = Hit::Overlap;
    return h;
  }
  Q t = Q(cross(w, s) / den), u = Q(cross(w, r) / den);
  if (t < 0 || t > 1 || u < 0 || u > 1) return h;
  h.kind = Hit::Point;
  h.t = t;
  h.u = u;
  return h;
}

struct Box {
  Q x0, x1, y0, y1;
};
Box box_of(const Pt& a, const Pt& b) {
  return {std::min(a.x, b.x), std::max(a.x, b.x), std::min(a.y, b.y), std::max(a.y, b.y)};
}

// Shifts (2i, 2j) for which the translated second box meets the first.
template <class F>
void for_each_shift(const Box& a, const Box& b, F&& f) {
  long i0 = qceil(Q((a.x0 - b.x1) / 2)), i1 = qfloor(Q((a.x1 - b.x0) / 2));
  long j0 = qceil(Q((a.y0 - b.y1) / 2)), j1 = qfloor(Q((a.y1 - b.y0) / 2));
  for (long i = i0; i <= i1; ++i)
    for (long j = j0; j <= j1; ++j) f(Pt(Q(2 * i), Q(2 * j)));
}

// sigma = m * period for an integer m.
bool lattice_multiple(const Pt& sigma, int p, int q, long& m) {
  if (p == 0 && q == 0) {
    m = 0;
    return sigma.x == 0 && sigma.y == 0;
  }
  if (sigma.x * q != sigma.y * p) return false;
  Q mm = p != 0 ? Q(sigma.x / (2 * p)) : Q(sigma.y / (2 * q));
  if (mm.get_den() != 1) return false;
  m = mm.get_num().get_si();
  return true;
}

}  // namespace

Pt reduce_torus(const Pt& p) {
  long kx = qfloor(Q((p.x + 1) / 2)), ky = qfloor(Q((p.y + 1) / 2));
  return Pt(Q(p.x - 2 * kx), Q(p.y - 2 * ky));
}

// ---------------------------------------------------------------- curves

TorusCurve::TorusCurve(std::string name, std::vector<Pt> path) : name_(std::move(name)), path_(std::move(path)) {
  if (path_.size() < 2) throw std::invalid_argument("curve " + name_ + ": needs at least two vertices");
  for (std::size_t i = 0; i + 1 < path_.size(); ++i)
    if (path_[i] == path_[i + 1]) throw std::invalid_argument("curve " + name_ + ": repeated vertex");
  Pt d = path_.back() - path_.front();
  Q hx = Q(d.x / 2), hy = Q(d.y / 2);
  if (hx.get_den() != 1 || hy.get_den() != 1)
    throw std::invalid_argument("curve " + name_ + ": does not close up on the torus");
  p_ = static_cast<int>(hx.get_num().get_si());
  q_ = static_cast<int>(hy.get_num().get_si());
  if (contractible() && path_.size() < 4) throw std::invalid_argument("curve " + name_ + ": degenerate loop");
  if (!contractible() && std::gcd(std::abs(p_), std::abs(q_)) != 1)
    throw std::invalid_argument("curve " + name_ + ": class is not primitive, so it cannot be embedded");
  // Embeddedness: lifted segments meet only where consecutive.
  long n = static_cast<long>(segments());
  for (long i = 0; i < n; ++i)
    for (long j = i; j < n; ++j) {
      Box bi = box_of(seg_start(i), seg_end(i)), bj = box_of(seg_start(j), seg_end(j));
      for_each_shift(bi, bj, [&](const Pt& sigma) {
        long m = 0;
        bool same_lift = lattice_multiple(sigma, p_, q_, m);
        long g1 = i, g2 = j + m * n;
        if (same_lift && g1 == g2) return;
        SegHit h = seg_intersect(seg_start(i), seg_end(i), seg_start(j) + sigma, seg_end(j) + sigma);
        if (h.kind == Hit::None) return;
        if (h.kind == Hit::Point && same_lift) {
          bool next = contractible() ? (j == (i + 1) % n) : (g2 == g1 + 1);
          bool prev = contractible() ? (i == (j + 1) % n) : (g1 == g2 + 1);
          if (next && h.t == 1 && h.u == 0) return;
          if (prev && h.t == 0 && h.u == 1) return;
        }
        throw std::invalid_argument("curve " + name_ + ": not embedded near " +
                                    pt_str(reduce_torus(seg_start(i))));
      });
    }
}

bool TorusCurve::axis_parallel() const {
  for (std::size_t i = 0; i + 1 < path_.size(); ++i)
    if (path_[i].x != path_[i + 1].x && path_[i].y != path_[i + 1].y) return false;
  return true;
}

Pt TorusCurve::seg_start(long g) const {
  long n = static_cast<long>(segments());
  long m = g >= 0 ? g / n : -((-g + n - 1) / n);
  long i = g - m * n;
  return path_[static_cast<std::size_t>(i)] + Q(m) * period();
}
Pt TorusCurve::seg_end(long g) const { return seg_start(g + 1); }
Pt TorusCurve::at(long g, const Q& t) const {
  Pt a = seg_start(g), b = seg_end(g);
  return a + t * (b - a);
}

Q TorusCurve::flux() const {
  Q s = 0;
  for (std::size_t i = 0; i + 1 < path_.size(); ++i) s += cross(path_[i], path_[i + 1]);
  return Q((s + cross(path_.front(), period())) / 2);
}

bool hamiltonian_isotopic(const TorusCurve& a, const TorusCurve& b) {
  if (a.p() != b.p() || a.q() != b.q()) return false;
  Q r = Q((a.flux() - b.flux()) / 4);
  return r.get_den() == 1;
}

TorusCurve TorusCurve::translated(const Pt& v) const {
  std::vector<Pt> p;
  for (const Pt& x : path_) p.push_back(x + v);
  return TorusCurve(name_, p);
}

TorusCurve TorusCurve::renamed(std::string n) const {
  TorusCurve c = *this;
  c.name_ = std::move(n);
  return c;
}

std::string TorusCurve::str() const {
  std::string s = "curve " + name_ + ":";
  for (const Pt& p : path_) s += " " + pt_str(p);
  return s;
}

std::vector<TorusCurve> parse_curves(const std::string& text) {
  std::vector<TorusCurve> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head) || head != "curve") continue;
    std::size_t colon = line.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("curve line without ':'");
    std::string name;
    std::istringstream ns(line.substr(0, colon));
    ns >> head >> name;
    std::vector<Pt> pts;
    std::string rest = line.substr(colon + 1);
    std::size_t pos = 0;
    while ((pos = rest.find('(', pos)) != std::string::npos) {
      std::size_t close = rest.find(')', pos);
      if (close == std::string::npos) throw std::invalid_argument("unclosed point in curve " + name);
      pts.push_back(parse_pt(rest.substr(pos, close - pos + 1)));
      pos = close + 1;
    }
    out.emplace_back(name, pts);
  }
  return out;
}

const TorusCurve& find_curve(const std::vector<TorusCurve>& cs, const std::string& name) {
  for (const TorusCurve& c : cs)
    if (c.name() == name) return c;
  throw std::invalid_argument("unknown curve: " + name);
}

// ---------------------------------------------------------------- crossings

std::vector<Crossing> intersections(const TorusCurve& a, const TorusCurve& b) {
  std::vector<Crossing> out;
  std::set<std::tuple<std::size_t, Q, std::size_t, Q>> seen;
  for (std::size_t i = 0; i < a.segments(); ++i)
    for (std::size_t j = 0; j < b.segments(); ++j) {
      long gi = static_cast<long>(i), gj = static_cast<long>(j);
      Pt a0 = a.seg_start(gi), a1 = a.seg_end(gi), b0 = b.seg_start(gj), b1 = b.seg_end(gj);
      for_each_shift(box_of(a0, a1), box_of(b0, b1), [&](const Pt& sigma) {
        SegHit h = seg_intersect(a0, a1, b0 + sigma, b1 + sigma);
        if (h.kind == Hit::None) return;
        if (h.kind == Hit::Overlap)
          throw std::invalid_argument("curves " + a.name() + " and " + b.name() + " share a segment near " +
                                      pt_str(reduce_torus(a0)));
        if (h.t == 0 || h.t == 1 || h.u == 0 || h.u == 1)
          throw std::invalid_argument("curves " + a.name() + " and " + b.name() + " touch at a vertex " +
                                      pt_str(reduce_torus(a.at(gi, h.t))));
        if (!seen.insert({i, h.t, j, h.u}).second) return;
        Crossing c;
        c.seg_a = i;
        c.seg_b = j;
        c.t_a = h.t;
        c.t_b = h.u;
        c.lift_a = a.at(gi, h.t);
        c.lift_b = b.at(gj, h.u);
        c.point = reduce_torus(c.lift_a);
        out.push_back(c);
      });
    }
  std::sort(out.begin(), out.end(), [](const Crossing& x, const Crossing& y) { return x.point < y.point; });
  for (std::size_t k = 1; k < out.size(); ++k)
    if (out[k].point == out[k - 1].point)
      throw std::invalid_argument("curves " + a.name() + " and " + b.name() + " meet twice at " + pt_str(out[k].point));
  return out;
}

// ---------------------------------------------------------------- lifted arcs

namespace {

struct LiftPoint {
  Pt p;
  Q sa, sb;  // parameters along the two lifts (segment index + t)
};

long seg_index(const TorusCurve& c, long g) {
  long n = static_cast<long>(c.segments());
  return ((g % n) + n) % n;
}

// Crossing index keyed by (segment on a, t, segment on b, t).
std::map<std::tuple<std::size_t, Q, std::size_t, Q>, std::size_t> crossing_index(const std::vector<Crossing>& xs) {
  std::map<std::tuple<std::size_t, Q, std::size_t, Q>, std::size_t> m;
  for (std::size_t k = 0; k < xs.size(); ++k) m[{xs[k].seg_a, xs[k].t_a, xs[k].seg_b, xs[k].t_b}] = k;
  return m;
}

// All meeting points of lifts a (global segments ga0..ga1) and b + shift.
std::vector<LiftPoint> lift_meets(const TorusCurve& a, long ga0, long ga1, const TorusCurve& b, const Pt& shift,
                                  long gb0, long gb1) {
  std::vector<LiftPoint> out;
  std::vector<Box> bb;
  for (long h = gb0; h <= gb1; ++h) bb.push_back(box_of(b.seg_start(h) + shift, b.seg_end(h) + shift));
  for (long g = ga0; g <= ga1; ++g) {
    Pt a0 = a.seg_start(g), a1 = a.seg_end(g);
    Box ba = box_of(a0, a1);
    for (long h = gb0; h <= gb1; ++h) {
      const Box& x = bb[static_cast<std::size_t>(h - gb0)];
      if (x.x1 < ba.x0 || x.x0 > ba.x1 || x.y1 < ba.y0 || x.y0 > ba.y1) continue;
      SegHit hit = seg_intersect(a0, a1, b.seg_start(h) + shift, b.seg_end(h) + shift);
      if (hit.kind == Hit::None) continue;
      if (hit.kind == Hit::Overlap || hit.t == 0 || hit.t == 1 || hit.u == 0 || hit.u == 1)
        throw std::invalid_argument("curves " + a.name() + " and " + b.name() + " are not transverse");
      out.push_back({a0 + hit.t * (a1 - a0), Q(g + hit.t), Q(h + hit.u)});
    }
  }
  return out;
}

// Vertices of a lifted curve travelling from parameter s0 to s1 (inclusive ends).
std::vector<Pt> arc(const TorusCurve& c, const Pt& shift, const Q& s0, const Q& s1) {
  std::vector<Pt> pts;
  auto point = [&](const Q& s) {
    long g = qfloor(s);
    return c.at(g, Q(s - g)) + shift;
  };
  pts.push_back(point(s0));
  if (s1 > s0) {
    for (long k = qfloor(s0) + 1; Q(k) < s1; ++k) pts.push_back(c.seg_start(k) + shift);
  } else {
    for (long k = qceil(s0) - 1; Q(k) > s1; --k) pts.push_back(c.seg_start(k) + shift);
  }
  pts.push_back(point(s1));
  return pts;
}

// Direction of travel at parameter s when moving towards `toward`.
Pt travel_dir(const TorusCurve& c, const Q& s, const Q& toward) {
  long g = qfloor(s);
  Pt d = c.seg_end(g) - c.seg_start(g);
  return toward > s ? d : Q(-1) * d;
}

Q shoelace(const std::vector<Pt>& loop) {
  Q a = 0;
  for (std::size_t i = 0; i < loop.size(); ++i) a += cross(loop[i], loop[(i + 1) % loop.size()]);
  return Q(a / 2);
}

bool strictly_between(const Q& v, const Q& a, const Q& b) { return (a < v && v < b) || (b < v && v < a); }

double curve_deviation(const TorusCurve& c) {
  Pt per = c.period();
  double px = qd(per.x), py = qd(per.y), len = std::hypot(px, py);
  double dev = 0;
  for (const Pt& v : c.path()) {
    Pt w = v - c.path().front();
    dev = std::max(dev, std::abs(qd(w.x) * py - qd(w.y) * px) / len);
  }
  return dev;
}

double curve_length(const TorusCurve& c) {
  double l = 0;
  for (std::size_t i = 0; i + 1 < c.path().size(); ++i) {
    Pt d = c.path()[i + 1] - c.path()[i];
    l += std::hypot(qd(d.x), qd(d.y));
  }
  return l;
}

// Number of periods each lift must be followed so that every meeting point of
// two lifts of different slopes is found.
long initial_window(const TorusCurve& a, const TorusCurve& b) {
  Pt pa = a.period(), pb = b.period();
  Q cr = cross(pa, pb);
  if (cr == 0) return 2;
  double la = std::hypot(qd(pa.x), qd(pa.y)), lb = std::hypot(qd(pb.x), qd(pb.y));
  double sin_t = std::abs(qd(cr)) / (la * lb);
  double ext = 4 * (curve_deviation(a) + curve_deviation(b) + 1) / sin_t;
  double w = std::max((ext + curve_length(a)) / la, (ext + curve_length(b)) / lb);
  return static_cast<long>(std::ceil(w)) + 2;
}

constexpr long kMaxWindow = 256;

}  // namespace

std::vector<Bigon> floer_bigons(const TorusCurve& a, const TorusCurve& b) {
  if (a.contractible() || b.contractible())
    throw std::invalid_argument("Floer complex needs essential curves");
  std::vector<Crossing> xs = intersections(a, b);
  auto index = crossing_index(xs);
  long na = static_cast<long>(a.segments()), nb = static_cast<long>(b.segments());
  std::vector<Bigon> out;
  for (std::size_t xi = 0; xi < xs.size(); ++xi) {
    const Crossing& c = xs[xi];
    Pt shift = c.lift_a - c.lift_b;
    Q sax = Q(static_cast<long>(c.seg_a) + c.t_a), sbx = Q(static_cast<long>(c.seg_b) + c.t_b);
    for (long w = initial_window(a, b);; w *= 2) {
      if (w > kMaxWindow) throw std::runtime_error("bigon search did not close up");
      long ga0 = static_cast<long>(c.seg_a) - w * na, ga1 = static_cast<long>(c.seg_a) + w * na;
      long gb0 = static_cast<long>(c.seg_b) - w * nb, gb1 = static_cast<long>(c.seg_b) + w * nb;
      std::vector<LiftPoint> pts = lift_meets(a, ga0, ga1, b, shift, gb0, gb1);
      std::vector<Bigon> found;
      bool touches = false;
      for (const LiftPoint& z : pts) {
        if (z.sa == sax && z.sb == sbx) continue;
        bool embedded = true;
        for (const LiftPoint& o : pts)
          if (strictly_between(o.sa, sax, z.sa) && strictly_between(o.sb, sbx, z.sb)) {
            embedded = false;
            break;
          }
        if (!embedded) continue;
        std::vector<Pt> loop = arc(a, Pt(), sax, z.sa);
        std::vector<Pt> back = arc(b, shift, z.sb, sbx);
        loop.insert(loop.end(), back.begin() + 1, back.end() - 1);
        Q area = shoelace(loop);
        if (area <= 0 || area > default_cutoff()) continue;
        // arriving at x along b means travelling from z towards x
        Pt in_x = Q(-1) * travel_dir(b, sbx, z.sb);
        Pt out_x = travel_dir(a, sax, z.sa);
        Pt in_z = Q(-1) * travel_dir(a, z.sa, sax);
        Pt out_z = travel_dir(b, z.sb, sbx);
        if (cross(in_x, out_x) <= 0 || cross(in_z, out_z) <= 0) continue;
        long lo_a = qfloor(std::min(sax, z.sa)), hi_a = qceil(std::max(sax, z.sa));
        long lo_b = qfloor(std::min(sbx, z.sb)), hi_b = qceil(std::max(sbx, z.sb));
        if (lo_a <= ga0 + na || hi_a >= ga1 - na || lo_b <= gb0 + nb || hi_b >= gb1 - nb) {
          touches = true;
          break;
        }
        long sga = qfloor(z.sa), sgb = qfloor(z.sb);
        auto key = std::make_tuple(static_cast<std::size_t>(seg_index(a, sga)), Q(z.sa - sga),
                                   static_cast<std::size_t>(seg_index(b, sgb)), Q(z.sb - sgb));
        auto it = index.find(key);
        if (it == index.end()) throw std::logic_error("bigon corner is not a known crossing");
        found.push_back({xi, it->second, area, loop});
      }
      if (touches) continue;
      out.insert(out.end(), found.begin(), found.end());
      break;
    }
  }
  return out;
}

FilteredComplex floer_complex(const TorusCurve& a, const TorusCurve& b) {
  std::vector<Crossing> xs = intersections(a, b);
  std::vector<Bigon> bigons = floer_bigons(a, b);
  std::size_t n = xs.size();
  Q cut = default_cutoff();
  NMat d = nmat_zero(n, n, cut);
  for (const Bigon& g : bigons) d[g.to][g.from] += Nov::mono(g.area, cut);
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("x" + std::to_string(i));
  try {
    return FilteredComplex(names, std::vector<Q>(n, Q(0)), d);
  } catch (const std::invalid_argument& e) {
    throw std::logic_error("Floer differential of " + a.name() + ", " + b.name() + ": " + e.what());
  }
}

std::size_t hf_rank(const TorusCurve& a, const TorusCurve& b) { return homology_dim(floer_complex(a, b).diff()); }

// ---------------------------------------------------------------- triangles

Chain Mu2::apply(const Chain& a, const Chain& b) const {
  Q cut = default_cutoff();
  Chain out(x02.size(), Nov(cut));
  for (const auto& [k, v] : table) {
    const Nov& ca = a[k.first];
    const Nov& cb = b[k.second];
    if (ca.is_zero() || cb.is_zero()) continue;
    Nov s = ca * cb;
    for (std::size_t i = 0; i < v.size(); ++i)
      if (!v[i].is_zero()) out[i] += s * v[i];
  }
  return out;
}

Mu2 mu2_triangles(const TorusCurve& c0, const TorusCurve& c1, const TorusCurve& c2) {
  if (c0.contractible() || c1.contractible() || c2.contractible())
    throw std::invalid_argument("mu_2 needs essential curves");
  Mu2 m;
  m.x01 = intersections(c0, c1);
  m.x12 = intersections(c1, c2);
  m.x02 = intersections(c0, c2);
  for (const Crossing& x : m.x01)
    for (const Crossing& y : m.x12)
      if (x.point == y.point) throw std::invalid_argument("triple point at " + pt_str(x.point));
  auto idx02 = crossing_index(m.x02);
  long n0 = static_cast<long>(c0.segments()), n1 = static_cast<long>(c1.segments()),
       n2 = static_cast<long>(c2.segments());
  Q cut = default_cutoff();
  long w0 = std::max({initial_window(c0, c1), initial_window(c1, c2), initial_window(c0, c2)});
  for (std::size_t i = 0; i < m.x01.size(); ++i) {
    const Crossing& x = m.x01[i];
    Pt sh1 = x.lift_a - x.lift_b;  // c1 lift through X
    Q s0x = Q(static_cast<long>(x.seg_a) + x.t_a), s1x = Q(static_cast<long>(x.seg_b) + x.t_b);
    for (long w = w0;; w *= 2) {
      if (w > kMaxWindow) throw std::runtime_error("triangle search did not close up");
      long g00 = static_cast<long>(x.seg_a) - w * n0, g01 = static_cast<long>(x.seg_a) + w * n0;
      long g10 = static_cast<long>(x.seg_b) - w * n1, g11 = static_cast<long>(x.seg_b) + w * n1;
      std::map<std::pair<std::size_t, std::size_t>, Chain> found;
      bool touches = false;
      std::vector<LiftPoint> p01 = lift_meets(c0, g00, g01, c1, sh1, g10, g11);
      for (std::size_t j = 0; j < m.x12.size() && !touches; ++j) {
        const Crossing& y = m.x12[j];
        for (long k = -w + 1; k <= w - 1 && !touches; ++k) {
          long h1 = static_cast<long>(y.seg_a) + k * n1;
          Q s1y = Q(h1 + y.t_a);
          Pt yp = c1.at(h1, y.t_a) + sh1;
          Pt sh2 = yp - y.lift_b;
          Q s2y = Q(static_cast<long>(y.seg_b) + y.t_b);
          long g20 = static_cast<long>(y.seg_b) - w * n2, g21 = static_cast<long>(y.seg_b) + w * n2;
          std::vector<LiftPoint> p12s = lift_meets(c1.translated(sh1), g10, g11, c2, sh2, g20, g21);
          std::vector<LiftPoint> p02 = lift_meets(c0, g00, g01, c2, sh2, g20, g21);
          for (const LiftPoint& z : p02) {
            // arcs: c0 from X to Z, c2 from Z to Y, c1 from Y to X
            bool ok = true;
            for (const LiftPoint& o : p01)
              if (strictly_between(o.sa, s0x, z.sa) && strictly_between(o.sb, s1y, s1x)) ok = false;
            for (const LiftPoint& o : p12s)
              if (ok && strictly_between(o.sa, s1y, s1x) && strictly_between(o.sb, z.sb, s2y)) ok = false;
            for (const LiftPoint& o : p02)
              if (ok && strictly_between(o.sa, s0x, z.sa) && strictly_between(o.sb, z.sb, s2y)) ok = false;
            if (!ok) continue;
            std::vector<Pt> loop = arc(c0, Pt(), s0x, z.sa);
            std::vector<Pt> a2 = arc(c2, sh2, z.sb, s2y);
            std::vector<Pt> a1 = arc(c1, sh1, s1y, s1x);
            loop.insert(loop.end(), a2.begin() + 1, a2.end());
            loop.insert(loop.end(), a1.begin() + 1, a1.end() - 1);
            Q area = shoelace(loop);
            if (area <= 0 || area > cut) continue;
            Pt in_x = Q(-1) * travel_dir(c1, s1x, s1y), out_x = travel_dir(c0, s0x, z.sa);
            Pt in_z = Q(-1) * travel_dir(c0, z.sa, s0x), out_z = travel_dir(c2, z.sb, s2y);
            Pt in_y = Q(-1) * travel_dir(c2, s2y, z.sb), out_y = travel_dir(c1, s1y, s1x);
            if (cross(in_x, out_x) <= 0 || cross(in_z, out_z) <= 0 || cross(in_y, out_y) <= 0) continue;
            long lo0 = qfloor(std::min(s0x, z.sa)), hi0 = qceil(std::max(s0x, z.sa));
            long lo1 = qfloor(std::min(s1x, s1y)), hi1 = qceil(std::max(s1x, s1y));
            long lo2 = qfloor(std::min(s2y, z.sb)), hi2 = qceil(std::max(s2y, z.sb));
            if (lo0 <= g00 + n0 || hi0 >= g01 - n0 || lo1 <= g10 + n1 || hi1 >= g11 - n1 || lo2 <= g20 + n2 ||
                hi2 >= g21 - n2 || k == -w + 1 || k == w - 1) {
              touches = true;
              break;
            }
            long sg0 = qfloor(z.sa), sg2 = qfloor(z.sb);
            auto key = std::make_tuple(static_cast<std::size_t>(seg_index(c0, sg0)), Q(z.sa - sg0),
                                       static_cast<std::size_t>(seg_index(c2, sg2)), Q(z.sb - sg2));
            auto it = idx02.find(key);
            if (it == idx02.end()) throw std::logic_error("triangle corner is not a known crossing");
            Chain& slot = found[{i, j}];
            if (slot.empty()) slot = Chain(m.x02.size(), Nov(cut));
            slot[it->second] += Nov::mono(area, cut);
          }
        }
      }
      if (touches) continue;
      for (auto& [k, v] : found) {
        bool nz = std::any_of(v.begin(), v.end(), [](const Nov& e) { return !e.is_zero(); });
        if (nz) m.table[k] = v;
      }
      break;
    }
  }
  return m;
}

// ---------------------------------------------------------------- arrangements

namespace {

struct Seg {
  Pt a, b;
  int owner;
};

struct Piece {
  Pt a, b;  // a < b
  std::vector<int> owners;
  bool vertical() const { return a.x == b.x; }
};

struct UnionFind {
  std::vector<int> p;
  explicit UnionFind(std::size_t n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) { return p[static_cast<std::size_t>(x)] == x ? x : p[static_cast<std::size_t>(x)] = find(p[static_cast<std::size_t>(x)]); }
  void unite(int a, int b) { p[static_cast<std::size_t>(find(a))] = find(b); }
};

Q y_at(const Piece& p, const Q& x) { return Q(p.a.y + (p.b.y - p.a.y) * (x - p.a.x) / (p.b.x - p.a.x)); }

// Vertical slab decomposition of a set of segments, either on the torus
// [x0, x0 + 2] x [y0, y0 + 2] with opposite sides glued or in the plane.
class Arrangement {
 public:
  Arrangement(const std::vector<Seg>& segs, bool torus, Q x0, Q x1, Q y0, Q y1)
      : torus_(torus), x0_(std::move(x0)), x1_(std::move(x1)), y0_(std::move(y0)), y1_(std::move(y1)) {
    split(segs);
    build();
  }

  const std::vector<Piece>& pieces() const { return pieces_; }
  std::size_t faces() const { return face_area_.size(); }
  const Q& face_area(int f) const { return face_area_[static_cast<std::size_t>(f)]; }
  bool unbounded(int f) const { return unbounded_[static_cast<std::size_t>(f)]; }

  /// Faces on the two sides of a piece.
  std::pair<int, int> sides(std::size_t pi) const {
    const Piece& p = pieces_[pi];
    if (!p.vertical()) {
      auto [k, r] = first_slot_[pi];
      return {face_of(k, r), face_of(k, r + 1)};
    }
    std::size_t k = slab_index(p.a.x);
    Q ym = Q((p.a.y + p.b.y) / 2);
    std::size_t left = k == 0 ? slabs_.size() - 1 : k - 1;
    return {face_of(left, cell_at(left, xs_[left + 1], ym)), face_of(k, cell_at(k, xs_[k], ym))};
  }

  /// Face containing a point off every piece; nullopt when the point is on a
  /// piece or on a slab boundary.
  std::optional<int> locate(const Pt& q) const {
    Pt p = q;
    if (torus_) p = Pt(Q(p.x - 2 * qfloor(Q((p.x - x0_) / 2))), Q(p.y - 2 * qfloor(Q((p.y - y0_) / 2))));
    auto it = std::upper_bound(xs_.begin(), xs_.end(), p.x);
    if (it == xs_.begin() || it == xs_.end()) return std::nullopt;
    std::size_t k = static_cast<std::size_t>(it - xs_.begin()) - 1;
    if (xs_[k] == p.x) return std::nullopt;
    const std::vector<std::size_t>& ps = slabs_[k];
    std::size_t r = 0;
    for (std::size_t idx : ps) {
      Q y = y_at(pieces_[idx], p.x);
      if (y == p.y) return std::nullopt;
      if (y < p.y) ++r;
    }
    return face_of(k, r);
  }

  /// Whether the open segment from a to b avoids every piece.
  bool clear_path(const Pt& a, const Pt& b) const {
    for (const Piece& p : pieces_) {
      SegHit h = seg_intersect(a, b, p.a, p.b);
      if (h.kind == Hit::Overlap) return false;
      if (h.kind == Hit::Point && h.t > 0) return false;
    }
    return true;
  }

 private:
  void split(const std::vector<Seg>& segs) {
    std::vector<std::vector<Q>> cuts(segs.size());
    for (std::size_t i = 0; i < segs.size(); ++i) {
      cuts[i] = {Q(0), Q(1)};
      for (std::size_t j = 0; j < segs.size(); ++j) {
        if (i == j) continue;
        const Seg& s = segs[i];
        const Seg& t = segs[j];
        Box bs = box_of(s.a, s.b), bt = box_of(t.a, t.b);
        if (bs.x1 < bt.x0 || bs.x0 > bt.x1 || bs.y1 < bt.y0 || bs.y0 > bt.y1) continue;
        SegHit h = seg_intersect(s.a, s.b, t.a, t.b);
        if (h.kind == Hit::Point) {
          cuts[i].push_back(h.t);
        } else if (h.kind == Hit::Overlap) {
          Pt r = s.b - s.a;
          Q rr = Q(r.x * r.x + r.y * r.y);
          for (const Pt& e : {t.a, t.b}) {
            Pt w = e - s.a;
            Q u = Q((w.x * r.x + w.y * r.y) / rr);
            if (u > 0 && u < 1) cuts[i].push_back(u);
          }
        }
      }
    }
    std::map<std::pair<Pt, Pt>, std::set<int>> merged;
    for (std::size_t i = 0; i < segs.size(); ++i) {
      std::vector<Q>& c = cuts[i];
      std::sort(c.begin(), c.end());
      c.erase(std::unique(c.begin(), c.end()), c.end());
      const Seg& s = segs[i];
      for (std::size_t k = 0; k + 1 < c.size(); ++k) {
        Pt a = s.a + c[k] * (s.b - s.a), b = s.a + c[k + 1] * (s.b - s.a);
        if (a == b) continue;
        if (b < a) std::swap(a, b);
        merged[{a, b}].insert(s.owner);
      }
    }
    for (auto& [k, o] : merged) pieces_.push_back({k.first, k.second, std::vector<int>(o.begin(), o.end())});
  }

  void build() {
    std::set<Q> xs{x0_, x1_};
    for (const Piece& p : pieces_) {
      xs.insert(p.a.x);
      xs.insert(p.b.x);
    }
    xs_.assign(xs.begin(), xs.end());
    std::size_t ns = xs_.size() - 1;
    slabs_.assign(ns, {});
    first_slot_.assign(pieces_.size(), {0, 0});
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
      const Piece& p = pieces_[i];
      if (p.vertical()) {
        verticals_[p.a.x].push_back({p.a.y, p.b.y});
        continue;
      }
      for (std::size_t k = slab_index(p.a.x); k < ns && xs_[k] < p.b.x; ++k) slabs_[k].push_back(i);
    }
    for (auto& [x, iv] : verticals_) {
      std::sort(iv.begin(), iv.end());
      std::vector<std::pair<Q, Q>> m;
      for (auto& v : iv) {
        if (!m.empty() && v.first <= m.back().second)
          m.back().second = std::max(m.back().second, v.second);
        else
          m.push_back(v);
      }
      iv = m;
    }
    offset_.assign(ns + 1, 0);
    for (std::size_t k = 0; k < ns; ++k) {
      Q xm = Q((xs_[k] + xs_[k + 1]) / 2);
      std::vector<std::size_t>& ps = slabs_[k];
      std::sort(ps.begin(), ps.end(),
                [&](std::size_t a, std::size_t b) { return y_at(pieces_[a], xm) < y_at(pieces_[b], xm); });
      for (std::size_t r = 0; r < ps.size(); ++r)
        if (xs_[k] == pieces_[ps[r]].a.x) first_slot_[ps[r]] = {k, r};
      offset_[k + 1] = offset_[k] + ps.size() + 1;
    }
    std::size_t ncell = offset_[ns];
    UnionFind uf(ncell);
    std::vector<bool> cell_unb(ncell, false);
    // across each vertical line
    auto connect = [&](std::size_t kl, std::size_t kr, const Q& x) {
      std::size_t nl = slabs_[kl].size() + 1, nr = slabs_[kr].size() + 1;
      std::size_t i = 0, j = 0;
      while (i < nl && j < nr) {
        auto [ll, lu] = interval(kl, i, x);
        auto [rl, ru] = interval(kr, j, x);
        XQ lo = xmax(ll, rl), hi = xmin(lu, ru);
        if (lo < hi && !covered(x, lo, hi)) uf.unite(static_cast<int>(offset_[kl] + i), static_cast<int>(offset_[kr] + j));
        if (lu < ru)
          ++i;
        else if (ru < lu)
          ++j;
        else {
          ++i;
          ++j;
        }
      }
    };
    for (std::size_t k = 1; k < ns; ++k) connect(k - 1, k, xs_[k]);
    if (torus_) {
      // the right edge x1 is glued to the left edge x0 at the same heights
      std::size_t nl = slabs_[ns - 1].size() + 1, nr = slabs_[0].size() + 1;
      std::size_t i = 0, j = 0;
      while (i < nl && j < nr) {
        auto [ll, lu] = interval(ns - 1, i, x1_);
        auto [rl, ru] = interval(0, j, x0_);
        XQ lo = xmax(ll, rl), hi = xmin(lu, ru);
        if (lo < hi) uf.unite(static_cast<int>(offset_[ns - 1] + i), static_cast<int>(offset_[0] + j));
        if (lu < ru)
          ++i;
        else if (ru < lu)
          ++j;
        else {
          ++i;
          ++j;
        }
      }
      for (std::size_t k = 0; k < ns; ++k)
        uf.unite(static_cast<int>(offset_[k]), static_cast<int>(offset_[k] + slabs_[k].size()));
    } else {
      for (std::size_t k = 0; k < ns; ++k) {
        cell_unb[offset_[k]] = true;
        cell_unb[offset_[k] + slabs_[k].size()] = true;
        if (k == 0 || k + 1 == ns)
          for (std::size_t r = 0; r <= slabs_[k].size(); ++r) cell_unb[offset_[k] + r] = true;
      }
    }
    std::map<int, int> fid;
    cell_face_.assign(ncell, 0);
    for (std::size_t c = 0; c < ncell; ++c) {
      int root = uf.find(static_cast<int>(c));
      auto it = fid.find(root);
      if (it == fid.end()) {
        it = fid.emplace(root, static_cast<int>(face_area_.size())).first;
        face_area_.push_back(Q(0));
        unbounded_.push_back(false);
      }
      cell_face_[c] = it->second;
    }
    for (std::size_t k = 0; k < ns; ++k)
      for (std::size_t r = 0; r <= slabs_[k].size(); ++r) {
        std::size_t c = offset_[k] + r;
        std::size_t f = static_cast<std::size_t>(cell_face_[c]);
        if (cell_unb[c]) {
          unbounded_[f] = true;
          continue;
        }
        auto [l0, u0] = interval(k, r, xs_[k]);
        auto [l1, u1] = interval(k, r, xs_[k + 1]);
        Q h = Q((u0.value() - l0.value()) + (u1.value() - l1.value()));
        face_area_[f] += Q((xs_[k + 1] - xs_[k]) * h / 2);
      }
    for (std::size_t f = 0; f < face_area_.size(); ++f)
      if (unbounded_[f]) face_area_[f] = 0;
  }

  std::size_t slab_index(const Q& x) const {
    return static_cast<std::size_t>(std::lower_bound(xs_.begin(), xs_.end(), x) - xs_.begin());
  }

  // y-extent of cell r of slab k on the vertical line x (an edge of the slab).
  std::pair<XQ, XQ> interval(std::size_t k, std::size_t r, const Q& x) const {
    const std::vector<std::size_t>& ps = slabs_[k];
    XQ lo = r == 0 ? (torus_ ? XQ(y0_) : XQ::neg_inf()) : XQ(y_at(pieces_[ps[r - 1]], x));
    XQ hi = r == ps.size() ? (torus_ ? XQ(y1_) : XQ::pos_inf()) : XQ(y_at(pieces_[ps[r]], x));
    return {lo, hi};
  }

  std::size_t cell_at(std::size_t k, const Q& x, const Q& y) const {
    for (std::size_t r = 0; r <= slabs_[k].size(); ++r) {
      auto [lo, hi] = interval(k, r, x);
      if (lo < XQ(y) && XQ(y) < hi) return r;
    }
    throw std::logic_error("arrangement: point on a cell boundary");
  }

  bool covered(const Q& x, const XQ& lo, const XQ& hi) const {
    auto it = verticals_.find(x);
    if (it == verticals_.end()) return false;
    for (const auto& [a, b] : it->second)
      if (XQ(a) <= lo && hi <= XQ(b)) return true;
    return false;
  }

  int face_of(std::size_t k, std::size_t r) const { return cell_face_[offset_[k] + r]; }

  bool torus_;
  Q x0_, x1_, y0_, y1_;
  std::vector<Piece> pieces_;
  std::vector<Q> xs_;
  std::vector<std::vector<std::size_t>> slabs_;
  std::vector<std::pair<std::size_t, std::size_t>> first_slot_;
  std::map<Q, std::vector<std::pair<Q, Q>>> verticals_;
  std::vector<std::size_t> offset_;
  std::vector<int> cell_face_;
  std::vector<Q> face_area_;
  std::vector<bool> unbounded_;
};

// Fundamental domain corner avoiding every vertex coordinate mod 2.
Q domain_corner(const std::vector<Q>& coords) {
  for (long k = 0;; ++k) {
    Q c = Q(-1) + Q(k, 997);
    bool ok = true;
    for (const Q& v : coords) {
      Q r = Q((v - c) / 2);
      if (r.get_den() == 1) {
        ok = false;
        break;
      }
    }
    if (ok) return c;
  }
}

// Clips every curve into the domain [x0, x0 + 2] x [y0, y0 + 2].
std::vector<Seg> torus_segments(const std::vector<TorusCurve>& curves, Q& x0, Q& y0) {
  std::vector<Q> xs, ys;
  for (const TorusCurve& c : curves)
    for (const Pt& p : c.path()) {
      xs.push_back(p.x);
      ys.push_back(p.y);
    }
  x0 = domain_corner(xs);
  y0 = domain_corner(ys);
  std::vector<Seg> out;
  for (std::size_t ci = 0; ci < curves.size(); ++ci) {
    const TorusCurve& c = curves[ci];
    for (std::size_t g = 0; g < c.segments(); ++g) {
      Pt a = c.seg_start(static_cast<long>(g)), b = c.seg_end(static_cast<long>(g));
      std::vector<Q> ts{Q(0), Q(1)};
      auto add_cuts = [&](const Q& pa, const Q& pb, const Q& base) {
        if (pa == pb) return;
        Q lo = std::min(pa, pb), hi = std::max(pa, pb);
        for (long k = qceil(Q((lo - base) / 2)); Q(base + 2 * k) <= hi; ++k) {
          Q t = Q((base + 2 * k - pa) / (pb - pa));
          if (t > 0 && t < 1) ts.push_back(t);
        }
      };
      add_cuts(a.x, b.x, x0);
      add_cuts(a.y, b.y, y0);
      std::sort(ts.begin(), ts.end());
      ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
      for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
        Pt p = a + ts[k] * (b - a), q = a + ts[k + 1] * (b - a);
        Pt m = Q(1, 2) * (p + q);
        long kx = qfloor(Q((m.x - x0) / 2)), ky = qfloor(Q((m.y - y0) / 2));
        Pt sh(Q(-2 * kx), Q(-2 * ky));
        out.push_back({p + sh, q + sh, static_cast<int>(ci)});
      }
    }
  }
  return out;
}

Arrangement torus_arrangement(const std::vector<TorusCurve>& curves) {
  Q x0, y0;
  std::vector<Seg> segs = torus_segments(curves, x0, y0);
  return Arrangement(segs, true, x0, Q(x0 + 2), y0, Q(y0 + 2));
}

Q side_value(const Arrangement& arr, std::pair<int, int> f) {
  if (f.first != f.second) return Q(2 * std::min(arr.face_area(f.first), arr.face_area(f.second)));
  return arr.face_area(f.first);
}

}  // namespace

std::vector<Q> torus_face_areas(const std::vector<TorusCurve>& curves) {
  Arrangement arr = torus_arrangement(curves);
  std::vector<Q> out;
  for (std::size_t f = 0; f < arr.faces(); ++f) out.push_back(arr.face_area(static_cast<int>(f)));
  std::sort(out.begin(), out.end());
  return out;
}

bool same_point_set(const TorusCurve& a, const TorusCurve& b) {
  Arrangement arr = torus_arrangement({a, b});
  for (const Piece& p : arr.pieces())
    if (p.owners.size() != 2) return false;
  return true;
}

Q gromov_width_rel(const TorusCurve& l, const std::vector<TorusCurve>& q) {
  std::vector<TorusCurve> all{l};
  all.insert(all.end(), q.begin(), q.end());
  Arrangement arr = torus_arrangement(all);
  Q best = 0;
  for (std::size_t i = 0; i < arr.pieces().size(); ++i) {
    const Piece& p = arr.pieces()[i];
    if (p.owners != std::vector<int>{0}) continue;
    best = std::max(best, side_value(arr, arr.sides(i)));
  }
  return best;
}

XQ gromov_width_double_points(const std::vector<TorusCurve>& system, const std::vector<Pt>& sigma,
                              const std::vector<TorusCurve>& q) {
  if (sigma.empty()) return XQ::pos_inf();
  std::vector<TorusCurve> all = system;
  all.insert(all.end(), q.begin(), q.end());
  int nsys = static_cast<int>(system.size());
  Q x0, y0;
  std::vector<Seg> segs = torus_segments(all, x0, y0);
  Arrangement arr(segs, true, x0, Q(x0 + 2), y0, Q(y0 + 2));
  std::map<int, int> corners;
  for (const Pt& raw : sigma) {
    Pt x(Q(raw.x - 2 * qfloor(Q((raw.x - x0) / 2))), Q(raw.y - 2 * qfloor(Q((raw.y - y0) / 2))));
    std::vector<Pt> dirs;
    bool on_q = false;
    for (const Piece& p : arr.pieces()) {
      if (p.a != x && p.b != x) continue;
      bool sys = false;
      for (int o : p.owners) {
        if (o < nsys) sys = true;
        else on_q = true;
      }
      if (sys) dirs.push_back(p.a == x ? p.b - x : p.a - x);
    }
    if (on_q) return XQ(0);
    if (dirs.size() != 4) throw std::invalid_argument("not a transverse double point: " + pt_str(raw));
    // order the four branches by angle
    auto half = [](const Pt& d) { return d.y > 0 || (d.y == 0 && d.x > 0) ? 0 : 1; };
    std::sort(dirs.begin(), dirs.end(), [&](const Pt& a, const Pt& b) {
      if (half(a) != half(b)) return half(a) < half(b);
      return cross(a, b) > 0;
    });
    for (std::size_t k = 0; k < 4; ++k)
      if (cross(dirs[k], dirs[(k + 1) % 4]) <= 0)
        throw std::invalid_argument("not a transverse double point: " + pt_str(raw));
    for (std::size_t k = 0; k < 4; ++k) {
      Pt u = dirs[k], v = dirs[(k + 1) % 4];
      Q nu = std::max(abs(u.x), abs(u.y)), nv = std::max(abs(v.x), abs(v.y));
      Pt bis = Q(1 / nu) * u + Q(Q(8, 7) / nv) * v;
      std::optional<int> face;
      for (Q eta(1, 8); eta > Q(1, 1 << 30); eta /= 2) {
        Pt s = x + eta * bis;
        if (!arr.clear_path(x, s)) continue;
        face = arr.locate(s);
        if (face) break;
      }
      if (!face) throw std::logic_error("could not sample a quadrant at " + pt_str(raw));
      corners[*face] += 1;
    }
  }
  XQ best = XQ::pos_inf();
  for (const auto& [f, n] : corners) best = xmin(best, XQ(Q(4 * arr.face_area(f) / n)));
  return best;
}

// ---------------------------------------------------------------- planar diagrams

PlanarDiagram PlanarDiagram::parse(const std::string& text) {
  PlanarDiagram d;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head)) continue;
    if (head == "curve") {
      std::size_t colon = line.find(':');
      if (colon == std::string::npos) throw std::invalid_argument("curve line without ':'");
      std::vector<Pt> pts;
      std::string rest = line.substr(colon + 1);
      std::size_t pos = 0;
      while ((pos = rest.find('(', pos)) != std::string::npos) {
        std::size_t close = rest.find(')', pos);
        if (close == std::string::npos) throw std::invalid_argument("unclosed point");
        pts.push_back(parse_pt(rest.substr(pos, close - pos + 1)));
        pos = close + 1;
      }
      if (pts.size() < 2) throw std::invalid_argument("diagram curve needs two points");
      d.curves.push_back(pts);
    } else if (head == "end") {
      std::string side, h;
      ls >> side >> h;
      if ((side != "left" && side != "right") || h.rfind("y=", 0) != 0)
        throw std::invalid_argument("bad end line: " + line);
      d.ends.push_back({side == "left", parse_q(h.substr(2))});
    } else {
      throw std::invalid_argument("unknown diagram line: " + line);
    }
  }
  d.validate();
  return d;
}

std::string PlanarDiagram::str() const {
  std::string s;
  for (std::size_t i = 0; i < curves.size(); ++i) {
    s += "curve c" + std::to_string(i) + ":";
    for (const Pt& p : curves[i]) s += " " + pt_str(p);
    s += "\n";
  }
  for (const End& e : ends) s += std::string("end ") + (e.left ? "left" : "right") + " y=" + q_str(e.height) + "\n";
  return s;
}

namespace {

bool on_polyline(const Pt& x, const std::vector<Pt>& c) {
  for (std::size_t i = 0; i + 1 < c.size(); ++i) {
    Pt a = c[i], b = c[i + 1];
    if (cross(b - a, x - a) != 0) continue;
    if (std::min(a.x, b.x) <= x.x && x.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= x.y &&
        x.y <= std::max(a.y, b.y))
      return true;
  }
  return false;
}

// For each open curve endpoint: +1 right end, -1 left end, 0 junction.
std::vector<std::array<int, 2>> classify_ends(const PlanarDiagram& d) {
  std::vector<std::array<int, 2>> out(d.curves.size(), {0, 0});
  std::vector<bool> used(d.ends.size(), false);
  for (std::size_t i = 0; i < d.curves.size(); ++i) {
    const std::vector<Pt>& c = d.curves[i];
    if (c.front() == c.back()) continue;
    for (int e = 0; e < 2; ++e) {
      const Pt& p = e == 0 ? c.front() : c.back();
      const Pt& nb = e == 0 ? c[1] : c[c.size() - 2];
      bool junction = false;
      for (std::size_t j = 0; j < d.curves.size() && !junction; ++j)
        if (j != i && on_polyline(p, d.curves[j])) junction = true;
      if (junction) continue;
      if (nb.y != p.y) throw std::invalid_argument("non-horizontal end at " + pt_str(p));
      bool left = p.x < nb.x;
      bool matched = false;
      for (std::size_t k = 0; k < d.ends.size() && !matched; ++k)
        if (!used[k] && d.ends[k].left == left && d.ends[k].height == p.y) {
          used[k] = true;
          matched = true;
        }
      if (!matched) throw std::invalid_argument("undeclared end at " + pt_str(p));
      out[i][static_cast<std::size_t>(e)] = left ? -1 : 1;
    }
  }
  for (std::size_t k = 0; k < d.ends.size(); ++k)
    if (!used[k]) throw std::invalid_argument("declared end y=" + q_str(d.ends[k].height) + " has no curve");
  return out;
}

}  // namespace

void PlanarDiagram::validate() const {
  for (const auto& c : curves) {
    if (c.size() < 2) throw std::invalid_argument("diagram curve needs two points");
    for (std::size_t i = 0; i + 1 < c.size(); ++i)
      if (c[i] == c[i + 1]) throw std::invalid_argument("repeated vertex in diagram curve");
  }
  classify_ends(*this);
}

PlanarDiagram PlanarDiagram::sheared(const Q& k) const {
  PlanarDiagram d = *this;
  for (auto& c : d.curves)
    for (Pt& p : c) p = Pt(Q(p.x + k * p.y), p.y);
  return d;
}

void PlanarDiagram::append(const PlanarDiagram& o) {
  curves.insert(curves.end(), o.curves.begin(), o.curves.end());
  ends.insert(ends.end(), o.ends.begin(), o.ends.end());
}

Q planar_shadow(const PlanarDiagram& d) {
  auto kinds = classify_ends(d);
  if (d.curves.empty()) return Q(0);
  Q xmin = d.curves[0][0].x, xmax = xmin, ymin = d.curves[0][0].y, ymax = ymin;
  for (const auto& c : d.curves)
    for (const Pt& p : c) {
      xmin = std::min(xmin, p.x);
      xmax = std::max(xmax, p.x);
      ymin = std::min(ymin, p.y);
      ymax = std::max(ymax, p.y);
    }
  Q bx0 = Q(xmin - 1), bx1 = Q(xmax + 1);
  std::vector<Seg> segs;
  for (std::size_t i = 0; i < d.curves.size(); ++i) {
    std::vector<Pt> c = d.curves[i];
    // extend declared ends to the edge of the box
    if (kinds[i][0] != 0) c.insert(c.begin(), Pt(kinds[i][0] < 0 ? bx0 : bx1, c.front().y));
    if (kinds[i][1] != 0) c.push_back(Pt(kinds[i][1] < 0 ? bx0 : bx1, c.back().y));
    for (std::size_t k = 0; k + 1 < c.size(); ++k)
      if (c[k] != c[k + 1]) segs.push_back({c[k], c[k + 1], static_cast<int>(i)});
  }
  Arrangement arr(segs, false, bx0, bx1, Q(ymin - 1), Q(ymax + 1));
  Q total = 0;
  for (std::size_t f = 0; f < arr.faces(); ++f)
    if (!arr.unbounded(static_cast<int>(f))) total += arr.face_area(static_cast<int>(f));
  return total;
}

// ---------------------------------------------------------------- surgery

Q handle_side(const Q& area) {
  if (area <= 0) throw std::invalid_argument("handle area must be positive");
  mpz_class num = area.get_num(), den = area.get_den();
  mpz_class rn = sqrt(num), rd = sqrt(den);
  if (rn * rn == num && rd * rd == den) return Q(rn, rd);
  // largest k/2^12 with (k/2^12)^2 <= area
  mpz_class scale = mpz_class(1) << 24;
  mpz_class target = (num * scale) / den;
  mpz_class k = sqrt(target);
  Q a(k, mpz_class(1) << 12);
  a.canonicalize();
  if (a <= 0) throw std::invalid_argument("handle area too small to represent");
  return a;
}

SurgeryResult surgery(const TorusCurve& l, const TorusCurve& s, const Pt& at, const Q& handle_area,
                      const std::string& name, const Q& column) {
  if (handle_area <= 0) throw std::invalid_argument("surgery: degenerate handle");
  std::vector<Crossing> xs = intersections(l, s);
  Pt target = reduce_torus(at);
  const Crossing* c = nullptr;
  for (const Crossing& x : xs)
    if (x.point == target) c = &x;
  if (!c) throw std::invalid_argument("surgery: " + pt_str(at) + " is not a crossing of " + l.name() + " and " + s.name());
  long gl = static_cast<long>(c->seg_a), gs = static_cast<long>(c->seg_b);
  Pt dl = l.seg_end(gl) - l.seg_start(gl), ds = s.seg_end(gs) - s.seg_start(gs);
  auto unit = [](const Pt& d) -> std::optional<Pt> {
    if (d.x == 0) return Pt(Q(0), Q(sgn(d.y)));
    if (d.y == 0) return Pt(Q(sgn(d.x)), Q(0));
    return std::nullopt;
  };
  auto ul = unit(dl), us = unit(ds);
  if (!ul || !us) throw std::invalid_argument("surgery: strands at the crossing must be axis-parallel");
  Q a = handle_side(handle_area);
  Q b = Q(handle_area / a);
  Pt pl = c->lift_a, ps = c->lift_b;
  auto dist = [](const Pt& p, const Pt& q) { return Q(abs(p.x - q.x) + abs(p.y - q.y)); };
  if (dist(pl, l.seg_start(gl)) <= a || dist(pl, l.seg_end(gl)) <= a || dist(ps, s.seg_start(gs)) <= b ||
      dist(ps, s.seg_end(gs)) <= b)
    throw std::invalid_argument("surgery: handle too large for the local gap");
  long nl = static_cast<long>(l.segments()), nsg = static_cast<long>(s.segments());
  Pt PL = l.period(), PS = s.period();
  std::vector<Pt> path;
  path.push_back(pl + a * *ul);
  for (long k = 0; k < nl; ++k) path.push_back(l.seg_end(gl + k));
  path.push_back(pl + PL - a * *ul);
  path.push_back(pl + PL - a * *ul + b * *us);
  Pt sigma = pl + PL - ps;
  path.push_back(ps + sigma + b * *us);
  for (long k = 0; k < nsg; ++k) path.push_back(s.seg_end(gs + k) + sigma);
  path.push_back(ps + PS + sigma - b * *us);
  path.push_back(ps + PS + sigma - b * *us + a * *ul);
  path.push_back(ps + PS + sigma + a * *ul);
  // drop repeated and collinear interior vertices
  std::vector<Pt> clean;
  for (const Pt& p : path) {
    if (!clean.empty() && clean.back() == p) continue;
    while (clean.size() >= 2) {
      const Pt& u = clean[clean.size() - 2];
      const Pt& v = clean.back();
      Pt d1 = v - u, d2 = p - v;
      if (cross(d1, d2) == 0 && d1.x * d2.x + d1.y * d2.y > 0)
        clean.pop_back();
      else
        break;
    }
    clean.push_back(p);
  }
  SurgeryResult r;
  try {
    r.curve = TorusCurve(name, clean);
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(std::string("surgery: handle too large for the local gap (") + e.what() + ")");
  }
  r.a = a;
  r.b = b;
  // Trace: the strand of l passes through, s joins it, and the handle is a
  // closed loop of the handle area placed in its column.
  r.trace.curves.push_back({Pt(Q(-2), Q(1)), Pt(Q(2), Q(1))});
  r.trace.curves.push_back({Pt(Q(-2), Q(2)), Pt(Q(-1), Q(2)), Pt(Q(-1), Q(1))});
  r.trace.curves.push_back({Pt(column, Q(-2)), Pt(Q(column + handle_area), Q(-2)), Pt(Q(column + handle_area), Q(-1)),
                            Pt(column, Q(-1)), Pt(column, Q(-2))});
  r.trace.ends = {{true, Q(1)}, {true, Q(2)}, {false, Q(1)}};
  return r;
}

// ---------------------------------------------------------------- svg

namespace {
std::string num(const Q& q) {
  std::ostringstream s;
  s << q.get_d();
  return s.str();
}
}  // namespace

std::string svg_curves(const std::vector<TorusCurve>& curves) {
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2"};
  Q x0, y0;
  std::vector<Seg> segs = torus_segments(curves, x0, y0);
  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << num(x0) << " " << num(Q(-y0 - 2))
    << " 2 2\" width=\"480\" height=\"480\">\n";
  o << "<rect x=\"" << num(x0) << "\" y=\"" << num(Q(-y0 - 2))
    << "\" width=\"2\" height=\"2\" fill=\"white\" stroke=\"#999\" stroke-width=\"0.005\"/>\n";
  for (const Seg& s : segs)
    o << "<line x1=\"" << num(s.a.x) << "\" y1=\"" << num(Q(-s.a.y)) << "\" x2=\"" << num(s.b.x) << "\" y2=\""
      << num(Q(-s.b.y)) << "\" stroke=\"" << colors[s.owner % 7] << "\" stroke-width=\"0.008\"/>\n";
  for (std::size_t i = 0; i < curves.size(); ++i) {
    Pt p = reduce_torus(curves[i].path().front());
    o << "<text x=\"" << num(p.x) << "\" y=\"" << num(Q(-p.y)) << "\" font-size=\"0.06\" fill=\""
      << colors[i % 7] << "\">" << curves[i].name() << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

std::string svg_diagram(const PlanarDiagram& d) {
  Q xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  bool first = true;
  for (const auto& c : d.curves)
    for (const Pt& p : c) {
      if (first) {
        xmin = xmax = p.x;
        ymin = ymax = p.y;
        first = false;
      }
      xmin = std::min(xmin, p.x);
      xmax = std::max(xmax, p.x);
      ymin = std::min(ymin, p.y);
      ymax = std::max(ymax, p.y);
    }
  Q pad = 1;
  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << num(Q(xmin - pad)) << " " << num(Q(-ymax - pad))
    << " " << num(Q(xmax - xmin + 2 * pad)) << " " << num(Q(ymax - ymin + 2 * pad)) << "\" width=\"640\">\n";
  for (const auto& c : d.curves) {
    o << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"0.02\" points=\"";
    for (const Pt& p : c) o << num(p.x) << "," << num(Q(-p.y)) << " ";
    o << "\"/>\n";
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace artifact
