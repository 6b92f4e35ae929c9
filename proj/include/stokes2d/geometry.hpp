#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "types.hpp"

namespace stokes2d {

// Which field a boundary row constrains.
enum class FieldKind { Psi, U, V, P, Omega };

inline const char* field_name(FieldKind k) {
  switch (k) {
    case FieldKind::Psi: return "psi";
    case FieldKind::U: return "u";
    case FieldKind::V: return "v";
    case FieldKind::P: return "p";
    case FieldKind::Omega: return "omega";
  }
  return "?";
}

// One imposed condition: functional(z) = target(z) along a boundary piece.
struct BoundaryConditionSpec {
  FieldKind functional = FieldKind::U;
  std::function<double(Cplx)> target;  // evaluated at each boundary sample
};

inline BoundaryConditionSpec bc_const(FieldKind k, double value) {
  return {k, [value](Cplx) { return value; }};
}

// Sample distribution over a segment's parameter t in [0,1].
struct Clustering {
  enum class Kind { Uniform, Tanh, CornerGeometric };
  Kind kind = Kind::Uniform;
  double tanh_width = 8.0;  // Tanh: t = (tanh(linspace(-w,w,n)) + 1)/2
  double ratio = 0.5;       // CornerGeometric: t_k = ratio^k walking into the corner
  bool toward_end = false;  // CornerGeometric: cluster toward t=1 instead of t=0
  // CornerGeometric: largest allowed parameter gap between samples (0 = none).
  // Pure geometric spacing grows in proportion to the distance from the
  // corner, so a long wall ends up with gaps that alias everything the basis
  // does between them; the cap grades into uniform spacing away from the
  // corner, at the cost of extra samples.
  double max_gap = 0;

  static Clustering uniform() { return {}; }
  static Clustering tanh(double w) { return {Kind::Tanh, w, 0.5, false}; }
  static Clustering corner(double r, bool toward_end_, double max_gap_ = 0) {
    return {Kind::CornerGeometric, 8.0, r, toward_end_, max_gap_};
  }
};

// A boundary piece: straight line, circular arc, or arbitrary parametric curve.
// Each carries its sample budget, clustering, and the two boundary conditions
// imposed at every sample.
struct Segment {
  enum class Kind { Line, Arc, Curve };
  Kind kind = Kind::Line;

  // Line: a + t*(b-a)
  Cplx a, b;
  // Arc: center + radius*exp(i*(arc0 + t*(arc1-arc0))); |arc1-arc0|=2*pi closes it
  Cplx center;
  double radius = 0, arc0 = 0, arc1 = 0;
  // Curve: any parametrization on t in [0,1] (ellipses, blended bumps, ...)
  std::function<Cplx(double)> curve;

  int n_samples = 0;
  Clustering clustering;
  bool request_aaa = false;   // curved piece that wants adaptively placed poles
  bool corner_start = false;  // t=0 endpoint is a sharp corner (never sampled)
  bool corner_end = false;    // likewise for t=1
  std::array<BoundaryConditionSpec, 2> bc;
  std::string name;
};

inline Segment make_line(Cplx a, Cplx b, int n) {
  Segment s;
  s.kind = Segment::Kind::Line;
  s.a = a;
  s.b = b;
  s.n_samples = n;
  return s;
}

inline Segment make_arc(Cplx center, double radius, double a0, double a1, int n) {
  Segment s;
  s.kind = Segment::Kind::Arc;
  s.center = center;
  s.radius = radius;
  s.arc0 = a0;
  s.arc1 = a1;
  s.n_samples = n;
  return s;
}

inline Segment make_curve(std::function<Cplx(double)> f, int n) {
  Segment s;
  s.kind = Segment::Kind::Curve;
  s.curve = std::move(f);
  s.n_samples = n;
  return s;
}

inline Cplx seg_point(const Segment& s, double t) {
  switch (s.kind) {
    case Segment::Kind::Line:
      return s.a + t * (s.b - s.a);
    case Segment::Kind::Arc:
      return s.center + s.radius * std::exp(Cplx(0, s.arc0 + t * (s.arc1 - s.arc0)));
    case Segment::Kind::Curve:
      return s.curve(t);
  }
  throw GeometryError("segment has no kind");
}

inline void validate_segment(const Segment& s) {
  if (s.n_samples < 1) throw GeometryError("segment needs >= 1 sample: " + s.name);
  switch (s.kind) {
    case Segment::Kind::Line:
      if (!(std::abs(s.b - s.a) > 0))
        throw GeometryError("zero-length line segment: " + s.name);
      break;
    case Segment::Kind::Arc:
      if (!(s.radius > 0) || s.arc0 == s.arc1)
        throw GeometryError("degenerate arc segment: " + s.name);
      break;
    case Segment::Kind::Curve:
      if (!s.curve) throw GeometryError("curve segment without parametrization: " + s.name);
      break;
  }
}

// True when t=0 and t=1 map to the same point (full circle, closed curve).
inline bool segment_is_closed(const Segment& s) {
  Cplx p0 = seg_point(s, 0), p1 = seg_point(s, 1), pm = seg_point(s, 0.5);
  double scale = std::max(std::abs(p0 - pm), std::abs(p1 - pm));
  return std::abs(p0 - p1) <= 1e-9 * scale;
}

inline std::vector<double> sample_params(const Segment& s) {
  validate_segment(s);
  const int n = s.n_samples;
  std::vector<double> t;
  t.reserve(n);
  switch (s.clustering.kind) {
    case Clustering::Kind::Uniform:
      if (segment_is_closed(s)) {
        // periodic: n equispaced points, no duplicate at the seam
        for (int k = 0; k < n; ++k) t.push_back(double(k) / n);
      } else if (s.corner_start || s.corner_end) {
        // midpoint offsets keep corner vertices out of the sample set
        for (int k = 0; k < n; ++k) t.push_back((k + 0.5) / n);
      } else if (n == 1) {
        t.push_back(0.5);
      } else {
        t = linspace(0.0, 1.0, n);
      }
      break;
    case Clustering::Kind::Tanh: {
      const double w = s.clustering.tanh_width;
      if (!(w > 0)) throw GeometryError("tanh clustering needs positive width");
      // endpoints are approached exponentially but never reached, so corner
      // vertices are excluded automatically
      for (double u : linspace(-w, w, n)) t.push_back((std::tanh(u) + 1) / 2);
      break;
    }
    case Clustering::Kind::CornerGeometric: {
      const double r = s.clustering.ratio;
      if (!(r > 0 && r < 1))
        throw GeometryError("corner clustering ratio must lie in (0,1)");
      const double g = s.clustering.max_gap;
      // distances from the corner: r^n, then growing by 1/r per step until
      // the gap cap takes over and the walk continues uniformly
      std::vector<double> dist;
      if (g > 0) {
        for (double x = std::pow(r, n); x < 1; x = std::min(x / r, x + g))
          dist.push_back(x);
      } else {
        for (int k = n; k >= 1; --k) dist.push_back(std::pow(r, k));
      }
      if (s.clustering.toward_end) {
        for (auto it = dist.rbegin(); it != dist.rend(); ++it) t.push_back(1 - *it);
      } else {
        t = dist;
      }
      break;
    }
  }
  return t;
}

inline std::vector<Cplx> sample_segment(const Segment& s) {
  const auto ts = sample_params(s);
  std::vector<Cplx> z(ts.size());
  for (size_t i = 0; i < ts.size(); ++i) z[i] = seg_point(s, ts[i]);
  if (z.size() > 1) {
    double extent = 0;
    for (const Cplx& p : z) extent = std::max(extent, std::abs(p - z[0]));
    if (!(extent > 0)) throw GeometryError("degenerate segment: " + s.name);
  }
  return z;
}

// -------------------------------------------------------------------------
// Corners and their clustered pole ladders.

struct Corner {
  Cplx vertex;
  double direction = 0;  // angle of the exterior bisector (into the solid)
  double scale = 1;      // L: the outermost pole sits at vertex + L*exp(i*direction)
  int pole_count = 0;    // N
  double sigma = 4.0;    // clustering strength
};

// Poles exponentially clustered toward the corner along the exterior bisector:
//   beta_n = vertex + L*exp(i*dir)*exp(-sigma*(sqrt(N)-sqrt(n))), n = 1..N,
// returned innermost (n=1) first.
inline std::vector<Cplx> cluster_corner_poles(const Corner& c) {
  if (c.pole_count <= 0) return {};
  if (!(c.scale > 0) || !(c.sigma > 0))
    throw GeometryError("corner pole ladder needs positive scale and sigma");
  const Cplx dir = std::exp(Cplx(0, c.direction));
  const double rootN = std::sqrt(double(c.pole_count));
  std::vector<Cplx> beta(c.pole_count);
  for (int n = 1; n <= c.pole_count; ++n)
    beta[n - 1] = c.vertex + c.scale * dir * std::exp(-c.sigma * (rootN - std::sqrt(double(n))));
  return beta;
}

// Distance from the vertex to the innermost pole of the ladder.
inline double corner_pole_min_distance(const Corner& c) {
  return c.scale * std::exp(-c.sigma * (std::sqrt(double(c.pole_count)) - 1));
}

// Angle of the bisector pointing out of the fluid at a polygon vertex, given
// the neighbouring vertices in boundary order (fluid on the left). Straight
// (angle pi) corners have no wedge to point into: empty result.
inline std::optional<double> exterior_bisector(Cplx prev, Cplx vertex, Cplx next) {
  Cplx a = prev - vertex, b = next - vertex;
  if (!(std::abs(a) > 0) || !(std::abs(b) > 0))
    throw GeometryError("coincident points give no corner direction");
  a /= std::abs(a);
  b /= std::abs(b);
  double interior = std::arg(a / b);  // fluid wedge angle, measured from b to a
  if (interior <= 0) interior += 2 * kPi;
  if (std::abs(interior - kPi) < 1e-9) return std::nullopt;
  return std::arg(-b * std::exp(Cplx(0, interior / 2)));
}

// The tip of a sliver of solid that the flow rounds through a full turn, like
// the trailing end of a cusped obstacle. Pole ladders cannot serve here: at
// depth d into the sliver the walls are only ~d^{3/2} apart, so any clustered
// pole sits numerically on the boundary. The solver instead adds half-integer
// powers sqrt((z-point)(z-anchor))*(z-point)^k, k = 0..terms-1, whose branch
// cut is the straight segment from the point to the anchor; the anchor must
// be placed so that segment stays inside the solid.
struct SharpEdge {
  Cplx point;            // the edge itself, on the boundary
  Cplx anchor;           // second branch point, strictly inside the solid
  int terms = 12;        // number of half-integer powers
  double keep_away = 0;  // drop adaptive poles within this radius of the edge
};

// -------------------------------------------------------------------------
// Domains.

struct Hole {
  std::vector<Segment> boundary;  // closed loop, traced clockwise
  Cplx laurent_center;            // series + log-block center, strictly inside
  int laurent_degree = 0;
  // auxiliary series centers (no log block), e.g. image points for tight gaps
  std::vector<std::pair<Cplx, int>> extra_centers;
};

struct Domain {
  std::vector<Segment> outer;  // closed loop, traced counter-clockwise
  std::vector<Hole> holes;
  std::vector<Corner> corners;
  std::vector<SharpEdge> edges;
  // Discs (center, radius) whose samples are left out of the adaptive pole
  // fit. Inside a vanishing wedge of fluid the flow dies out beyond all
  // orders, so nothing needs resolving there, but the boundary shape itself
  // is still singular and an unmasked fit burns its whole degree budget on
  // poles inside the wedge -- fluid, so discarded -- before it serves the
  // parts of the boundary that matter.
  std::vector<std::pair<Cplx, double>> aaa_masks;
  std::string name;
};

// Outer segments first, then hole loops in order; indices are stable and used
// as segment ids in residual reports.
inline std::vector<const Segment*> all_segments(const Domain& d) {
  std::vector<const Segment*> v;
  for (const auto& s : d.outer) v.push_back(&s);
  for (const auto& h : d.holes)
    for (const auto& s : h.boundary) v.push_back(&s);
  return v;
}

inline double point_segment_distance(Cplx z, Cplx a, Cplx b) {
  const Cplx ab = b - a;
  const double L2 = std::norm(ab);
  if (L2 == 0) return std::abs(z - a);
  const double t = std::clamp(((z - a) * std::conj(ab)).real() / L2, 0.0, 1.0);
  return std::abs(z - (a + t * ab));
}

// Even-odd rule on a closed polyline; points on (or within eps of) an edge
// count as inside.
inline bool point_in_polyline(Cplx z, const std::vector<Cplx>& poly, double eps) {
  bool in = false;
  for (size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    const Cplx a = poly[j], b = poly[i];
    if (point_segment_distance(z, a, b) <= eps) return true;
    if ((a.imag() > z.imag()) != (b.imag() > z.imag())) {
      double xi = a.real() + (z.imag() - a.imag()) * (b.real() - a.real()) /
                                 (b.imag() - a.imag());
      if (z.real() < xi) in = !in;
    }
  }
  return in;
}

// Polyline through a loop of segments, densified so curved pieces are
// resolved well beyond the collocation grid. Lines contribute exact vertices.
inline std::vector<Cplx> loop_polyline(const std::vector<Segment>& loop, int densify = 4) {
  std::vector<Cplx> poly;
  for (const auto& s : loop) {
    validate_segment(s);
    const int m = (s.kind == Segment::Kind::Line)
                      ? 1
                      : std::max(64, densify * s.n_samples);
    for (int k = 0; k < m; ++k) poly.push_back(seg_point(s, double(k) / m));
  }
  if (poly.size() < 3) throw GeometryError("boundary loop needs at least 3 polyline points");
  return poly;
}

// Point-location oracle for a domain: fluid = inside the outer loop and
// outside every hole loop (hole boundaries count as hole, outer boundary as
// fluid).
struct RegionTester {
  std::vector<Cplx> outer;
  std::vector<std::vector<Cplx>> holes;
  double eps = 0;

  RegionTester() = default;
  explicit RegionTester(const Domain& d, int densify = 4) {
    outer = loop_polyline(d.outer, densify);
    for (const auto& h : d.holes) holes.push_back(loop_polyline(h.boundary, densify));
    double extent = 0;
    for (const Cplx& z : outer) extent = std::max(extent, std::abs(z - outer[0]));
    eps = 1e-12 * std::max(extent, 1.0);
  }

  bool in_outer(Cplx z) const { return point_in_polyline(z, outer, eps); }

  bool in_fluid(Cplx z) const {
    if (!point_in_polyline(z, outer, eps)) return false;
    for (const auto& h : holes)
      if (point_in_polyline(z, h, eps)) return false;
    return true;
  }

  double boundary_distance(Cplx z) const {
    double d = std::numeric_limits<double>::infinity();
    auto sweep = [&](const std::vector<Cplx>& poly) {
      for (size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++)
        d = std::min(d, point_segment_distance(z, poly[j], poly[i]));
    };
    sweep(outer);
    for (const auto& h : holes) sweep(h);
    return d;
  }
};

struct BBox {
  double x0 = 0, x1 = 0, y0 = 0, y1 = 0;
};

inline BBox domain_bbox(const Domain& d) {
  BBox b;
  bool first = true;
  auto absorb = [&](const std::vector<Cplx>& poly) {
    for (const Cplx& z : poly) {
      if (first) {
        b = {z.real(), z.real(), z.imag(), z.imag()};
        first = false;
      } else {
        b.x0 = std::min(b.x0, z.real());
        b.x1 = std::max(b.x1, z.real());
        b.y0 = std::min(b.y0, z.imag());
        b.y1 = std::max(b.y1, z.imag());
      }
    }
  };
  absorb(loop_polyline(d.outer));
  for (const auto& h : d.holes) absorb(loop_polyline(h.boundary));
  return b;
}

inline double domain_scale(const Domain& d) {
  const BBox b = domain_bbox(d);
  return std::hypot(b.x1 - b.x0, b.y1 - b.y0);
}

}  // namespace stokes2d
