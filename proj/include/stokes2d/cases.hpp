#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "geometry.hpp"
#include "solution.hpp"
#include "types.hpp"

namespace stokes2d {

// A ready-to-solve benchmark: the domain plus the solver knobs the case was
// designed around. Degrees for Laurent blocks and corner ladders live inside
// the Domain itself.
struct CaseSetup {
  Domain domain;
  int polynomial_degree = 24;
  double aaa_tol = 1e-8;
  // Cases whose sampling is strongly clustered (cusps, narrow gaps) fit in an
  // arclength-like norm and keep more of the basis: see SolverParams.
  bool weight_rows = false;
  double rcond = 1e-12;
};

// Rigid-body boundary velocity about `center`: (u, v) = (U, V) + Omega x r.
inline std::array<BoundaryConditionSpec, 2> rigid_bc(Cplx center, double U, double V,
                                                     double Omega) {
  std::array<BoundaryConditionSpec, 2> bc;
  bc[0] = {FieldKind::U, [=](Cplx z) { return U - Omega * (z - center).imag(); }};
  bc[1] = {FieldKind::V, [=](Cplx z) { return V + Omega * (z - center).real(); }};
  return bc;
}

// --- constricted channel ----------------------------------------------------

// Gap profile of the channel: full height 1 far away, pinched to 1 - lambda
// at X = 0.
inline double constriction_shape(double X, double lambda) {
  if (!(lambda >= 0 && lambda < 1)) throw ConfigError("constriction amplitude must be in [0,1)");
  if (!(X >= -1 && X <= 1)) throw ConfigError("constriction shape is defined on [-1,1]");
  return 1 - lambda / 2 * (1 + std::cos(kPi * X));
}

// Lubrication-theory pressure drop across the constriction, with the
// second- and fourth-order corrections in the aspect ratio delta.
inline double elt_pressure_drop(double lambda, double delta, int order) {
  if (!(lambda >= 0 && lambda < 1)) throw ConfigError("pressure-drop amplitude must be in [0,1)");
  if (order != 0 && order != 2 && order != 4) throw ConfigError("expansion order must be 0, 2 or 4");
  const double s = std::sqrt(1 - lambda);
  double dp = 3 * (3 * lambda * lambda - 8 * lambda + 8) / std::pow(1 - lambda, 2.5);
  if (order >= 2) dp += delta * delta * 12 * kPi * kPi * lambda * lambda / (5 * s * s * s);
  if (order >= 4) {
    const double num = 428 * (-1 + s) - 214 * (-2 + s) * lambda - 53 * lambda * lambda;
    dp += std::pow(delta, 4) * 8 * std::pow(kPi, 4) * num / (175 * s);
  }
  return dp;
}

struct ConstrictionConfig {
  double lambda = 0.5;
  int polynomial_degree = 100;
  // 1200 per segment: the tanh clustering is aggressive, and half this count
  // leaves the middle of each wall sparse enough that the residual between
  // collocation points is orders worse than at them.
  int samples_per_segment = 1200;
  bool use_aaa = true;       // false: plain polynomial run, uniform sampling
  double tanh_width = 14.0;  // end-clustering of samples in the AAA runs
  double aaa_tol = 1e-8;
};

// Channel X in [-2,2] of height 1, lower wall flat, upper wall dipping to
// 1 - lambda over X in [-1,1]. Poiseuille profile 6Y(1-Y) at the inlet,
// no-slip walls, parallel outflow at zero pressure. The upper boundary is
// four segments; the two curved ones are flagged for adaptive pole placement.
inline CaseSetup build_constricted_channel(const ConstrictionConfig& cfg) {
  if (!(cfg.lambda >= 0 && cfg.lambda < 1))
    throw ConfigError("constriction amplitude must be in [0,1)");
  if (cfg.samples_per_segment < 2 || cfg.polynomial_degree < 0)
    throw ConfigError("constriction needs samples >= 2 and degree >= 0");

  const double lam = cfg.lambda;
  const int n = cfg.samples_per_segment;
  const Clustering cl =
      cfg.use_aaa ? Clustering::tanh(cfg.tanh_width) : Clustering::uniform();
  auto wall = [](Segment s) {
    s.bc[0] = bc_const(FieldKind::U, 0.0);
    s.bc[1] = bc_const(FieldKind::V, 0.0);
    return s;
  };
  auto upper = [&](double x0, double x1) {
    // line for the flat outer pieces, shape-following curve inside [-1,1].
    // All four pieces join the AAA window: the shape function is only
    // piecewise-analytic, and the curvature jumps where the bump meets the
    // flat wall are singularities AAA can only see from both sides.
    Segment s;
    if ((x0 <= -1 && x1 <= -1) || (x0 >= 1 && x1 >= 1)) {
      s = make_line(Cplx(x0, 1), Cplx(x1, 1), n);
    } else {
      s = make_curve(
          [=](double t) {
            const double X = x0 + t * (x1 - x0);
            return Cplx(X, constriction_shape(X, lam));
          },
          n);
    }
    s.request_aaa = cfg.use_aaa;
    s.clustering = cl;
    return wall(s);
  };

  Domain d;
  d.name = "constriction";
  Segment bottom = wall(make_line(Cplx(-2, 0), Cplx(2, 0), n));
  bottom.clustering = cl;
  bottom.name = "lower-wall";
  d.outer.push_back(bottom);

  Segment outlet = make_line(Cplx(2, 0), Cplx(2, 1), n);
  outlet.clustering = cl;
  outlet.bc[0] = bc_const(FieldKind::V, 0.0);
  outlet.bc[1] = bc_const(FieldKind::P, 0.0);
  outlet.name = "outlet";
  d.outer.push_back(outlet);

  Segment u4 = upper(2, 1);
  u4.name = "upper-right";
  Segment u3 = upper(1, 0);
  u3.name = "upper-curve-right";
  Segment u2 = upper(0, -1);
  u2.name = "upper-curve-left";
  Segment u1 = upper(-1, -2);
  u1.name = "upper-left";
  d.outer.push_back(u4);
  d.outer.push_back(u3);
  d.outer.push_back(u2);
  d.outer.push_back(u1);

  Segment inlet = make_line(Cplx(-2, 1), Cplx(-2, 0), n);
  inlet.clustering = cl;
  inlet.bc[0] = {FieldKind::U, [](Cplx z) {
                   const double Y = z.imag();
                   return 6 * Y * (1 - Y);
                 }};
  inlet.bc[1] = bc_const(FieldKind::V, 0.0);
  inlet.name = "inlet";
  d.outer.push_back(inlet);

  return {std::move(d), cfg.polynomial_degree, cfg.aaa_tol};
}

// Pressure taps for the constriction benchmark: between (-1, 0.5) and (1, 0.5).
inline double pressure_drop(const StokesSolution& s, Cplx tap_in, Cplx tap_out) {
  return fields_at(s, tap_in).p - fields_at(s, tap_out).p;
}

inline double constriction_pressure_drop(const StokesSolution& s) {
  return pressure_drop(s, Cplx(-1, 0.5), Cplx(1, 0.5));
}

// --- two rotating/translating cylinders --------------------------------------

struct TwoCylinderConfig {
  double A_in = 0.1;     // inner radius (outer radius is 1)
  double E = 0.8;        // inner center offset along the real axis
  double V = 2;          // inner translation, y component
  double omega_in = -3;  // angular velocities
  double omega_out = 1;
  double U = 1;  // inner translation, x component (velocities are scaled by it)
  int polynomial_degree = 20;
  int laurent_degree = 50;
  int n_outer = 500;
  // Uniform inner samples must track the degree-50 Laurent oscillations on
  // the inner circle itself; 100 is marginal there and the residual between
  // samples betrays it.
  int n_inner = 300;
};

// Nine reference parameter sets (A_in, E, V*, Omega_in, Omega_out).
inline TwoCylinderConfig two_cylinder_case(char name) {
  TwoCylinderConfig c;
  switch (name) {
    case 'a': c.A_in = 0.10; c.E = 0.80; c.V = 2;  c.omega_in = -3; c.omega_out = 1;    break;
    case 'b': c.A_in = 0.40; c.E = 0.30; c.V = 1;  c.omega_in = 5;  c.omega_out = -3;   break;
    case 'c': c.A_in = 0.15; c.E = 0.60; c.V = 1;  c.omega_in = 10; c.omega_out = 0;    break;
    case 'd': c.A_in = 0.10; c.E = 0.10; c.V = 2;  c.omega_in = 0;  c.omega_out = 0;    break;
    case 'e': c.A_in = 0.15; c.E = 0.70; c.V = 0;  c.omega_in = 3.33; c.omega_out = 0.66; break;
    case 'f': c.A_in = 0.15; c.E = 0.70; c.V = -1; c.omega_in = 0;  c.omega_out = 0.66; break;
    case 'g': c.A_in = 0.30; c.E = 0.65; c.V = 0;  c.omega_in = 0;  c.omega_out = -0.2; break;
    case 'h': c.A_in = 0.10; c.E = 0.20; c.V = 1;  c.omega_in = 5;  c.omega_out = -1;   break;
    case 'i': c.A_in = 0.30; c.E = 0.50; c.V = 1;  c.omega_in = 2;  c.omega_out = -2;   break;
    default: throw ConfigError(std::string("unknown two-cylinder case '") + name + "'");
  }
  return c;
}

// Unit outer circle rotating at Omega_out; inner circle of radius A_in at
// (E, 0) rotating at Omega_in and translating with (U, V). Outer samples are
// clustered toward the narrow gap at angle 0; the hole gets a Laurent series
// at its center plus an auxiliary one at the reflected point 1/E.
inline CaseSetup build_two_cylinder(const TwoCylinderConfig& cfg) {
  if (!(cfg.A_in > 0)) throw ConfigError("inner cylinder needs positive radius");
  if (!(cfg.E >= 0)) throw ConfigError("offset must be nonnegative");
  if (cfg.A_in + cfg.E >= 1)
    throw GeometryError("cylinders touch: A_in + E must stay below 1");
  if (cfg.n_outer < 8 || cfg.n_inner < 8) throw ConfigError("too few cylinder samples");

  Domain d;
  d.name = "two-cylinder";
  const double pw = std::ceil(1 / (1 - cfg.E)) + 1;
  Segment outer = make_arc(Cplx(0, 0), 1.0, -2 * kPi, 0.0, cfg.n_outer);
  outer.clustering = Clustering::tanh(pw);
  auto obc = rigid_bc(Cplx(0, 0), 0, 0, cfg.omega_out);
  outer.bc = obc;
  outer.name = "outer-cylinder";
  d.outer.push_back(outer);

  Hole h;
  Segment inner = make_arc(Cplx(cfg.E, 0), cfg.A_in, 2 * kPi, 0.0, cfg.n_inner);
  inner.bc = rigid_bc(Cplx(cfg.E, 0), cfg.U, cfg.V, cfg.omega_in);
  inner.name = "inner-cylinder";
  h.boundary.push_back(inner);
  h.laurent_center = Cplx(cfg.E, 0);
  h.laurent_degree = cfg.laurent_degree;
  if (cfg.E > 0) h.extra_centers.push_back({Cplx(1 / cfg.E, 0), cfg.laurent_degree});
  d.holes.push_back(h);

  return {std::move(d), cfg.polynomial_degree, 1e-8};
}

// Swirl speed between concentric cylinders: u_theta(r) = A r + B / r.
inline double couette_oracle(double r_in, double r_out, double omega_in, double omega_out,
                             double r) {
  if (!(r_in > 0) || !(r_out > r_in)) throw ConfigError("annulus needs 0 < r_in < r_out");
  if (!(r >= r_in && r <= r_out)) throw ConfigError("radius outside the annulus");
  const double denom = r_out * r_out - r_in * r_in;
  const double A = (omega_out * r_out * r_out - omega_in * r_in * r_in) / denom;
  const double B = (omega_in - omega_out) * r_in * r_in * r_out * r_out / denom;
  return A * r + B / r;
}

// --- gallery cases ------------------------------------------------------------

struct GalleryOptions {
  int polynomial_degree = 0;  // 0 = case default
  int laurent_degree = 0;     // 0 = case default
  int corner_poles = 0;       // 0 = case default (bifurcation ladders)
  bool include_hole = true;   // bifurcation only: drop the ellipse
};

namespace detail {

// Corner record for two boundary pieces meeting at `vertex`; the ladder scale
// is the largest extent among the four endpoints involved.
inline Corner corner_between(Cplx prev, Cplx vertex, Cplx next, int N) {
  const auto dir = exterior_bisector(prev, vertex, next);
  if (!dir) throw GeometryError("straight joint cannot host a pole ladder");
  Corner c;
  c.vertex = vertex;
  c.direction = *dir;
  c.scale = std::max({std::abs(prev - vertex), std::abs(next - vertex),
                      std::abs(prev - next)});
  c.pole_count = N;
  return c;
}

// Geometric sampling toward one end, resolving down to the innermost pole.
// n_samples sets the per-decade density of the geometric part; the actual
// sample count is larger once the far-gap cap grades the walk into uniform
// spacing (without the cap, the far end of a long wall is sampled so sparsely
// that basis oscillations alias invisibly between the collocation points).
inline void cluster_into_corner(Segment& s, const Corner& c, bool corner_at_end,
                                double max_gap_abs = 0) {
  const double len = std::abs(seg_point(s, 1) - seg_point(s, 0));
  const double dmin = corner_pole_min_distance(c);
  const int n = s.n_samples;
  const double r = std::pow(std::min(dmin / len, 0.5), 1.0 / n);
  s.clustering =
      Clustering::corner(r, corner_at_end, max_gap_abs > 0 ? max_gap_abs / len : 0.0);
  s.corner_start = !corner_at_end;
  s.corner_end = corner_at_end;
}

}  // namespace detail

// Rotating, translating ellipse inside a fixed ellipse; boundary motion uses
// the same parameters as two-cylinder case 'c'.
inline CaseSetup build_ellipse_in_ellipse(const GalleryOptions& opt = {}) {
  const int poly = opt.polynomial_degree ? opt.polynomial_degree : 40;
  const int laur = opt.laurent_degree ? opt.laurent_degree : 120;
  const TwoCylinderConfig pc = two_cylinder_case('c');

  Domain d;
  d.name = "ellipse-in-ellipse";
  // outer: semi-minor 1, eccentricity 0.6 -> semi-major 1/sqrt(1-0.36) = 1.25
  Segment outer = make_curve(
      [](double t) {
        const double a = 2 * kPi * t;
        return Cplx(1.25 * std::cos(a), std::sin(a));
      },
      1000);
  outer.bc[0] = bc_const(FieldKind::U, 0.0);
  outer.bc[1] = bc_const(FieldKind::V, 0.0);
  outer.name = "outer-ellipse";
  d.outer.push_back(outer);

  // inner: semi-minor 0.15, eccentricity 0.8 -> semi-major 0.25, center (E, 0).
  // The high-degree Laurent series needs several samples per oscillation of
  // its top terms along the flat sides of the ellipse, hence the dense count.
  const Cplx ic(pc.E, 0);
  Hole h;
  Segment inner = make_curve(
      [=](double t) {
        const double a = 2 * kPi * t;
        return ic + Cplx(0.25 * std::cos(a), -0.15 * std::sin(a));
      },
      1500);
  inner.bc = rigid_bc(ic, pc.U, pc.V, pc.omega_in);
  inner.name = "inner-ellipse";
  h.boundary.push_back(inner);
  h.laurent_center = ic;
  h.laurent_degree = laur;
  d.holes.push_back(h);

  CaseSetup cs{std::move(d), poly, 1e-8};
  // An elongated hole pushes the Laurent block to the edge of dependence with
  // the polynomial; the tighter truncation keeps the directions that matter.
  cs.rcond = 1e-14;
  return cs;
}

// Pressure-driven channel flow past a heart-shaped hole. The notch of the
// heart (a reentrant fluid cusp, home to a chain of corner eddies) faces
// upstream; the tip (a sharp solid edge) trails downstream.
inline CaseSetup build_heart_channel(const GalleryOptions& opt = {}) {
  const int poly = opt.polynomial_degree ? opt.polynomial_degree : 120;
  const int laur = opt.laurent_degree ? opt.laurent_degree : 80;

  Domain d;
  d.name = "heart-channel";
  auto wall = [](Segment s, const char* nm) {
    s.bc[0] = bc_const(FieldKind::U, 0.0);
    s.bc[1] = bc_const(FieldKind::V, 0.0);
    s.name = nm;
    return s;
  };
  d.outer.push_back(wall(make_line(Cplx(-1.5, -0.5), Cplx(1.5, -0.5), 250), "lower-wall"));
  Segment outlet = make_line(Cplx(1.5, -0.5), Cplx(1.5, 0.5), 120);
  outlet.bc[0] = bc_const(FieldKind::P, 0.0);
  outlet.bc[1] = bc_const(FieldKind::V, 0.0);
  outlet.name = "outlet";
  d.outer.push_back(outlet);
  d.outer.push_back(wall(make_line(Cplx(1.5, 0.5), Cplx(-1.5, 0.5), 250), "upper-wall"));
  Segment inlet = make_line(Cplx(-1.5, 0.5), Cplx(-1.5, -0.5), 120);
  inlet.bc[0] = bc_const(FieldKind::P, 36.0);
  inlet.bc[1] = bc_const(FieldKind::V, 0.0);
  inlet.name = "inlet";
  d.outer.push_back(inlet);

  // The heart curve has two cusps where z' vanishes, and they are opposite in
  // kind. The notch at s = 0 is a thin wedge of *fluid* (the pocket between
  // the lobes, upstream) whose walls back onto the fat lobes: adaptive poles
  // placed from the boundary shape land in the lobes and resolve it. The tip
  // at s = pi is a thin sliver of *solid* pointing back into the heart: the
  // flow rounds it through a full turn and picks up half-integer powers of
  // the distance, while the sliver at depth d is only ~d^{3/2} wide, far too
  // thin to hold poles. The tip therefore carries an edge family of
  // half-integer powers, with its second branch point buried on the axis of
  // the heart so the cut never leaves the solid, and adaptive poles that
  // chase the tip are dropped.
  auto heart_at = [](double s) {
    const double x = 16 * std::pow(std::sin(s), 3);
    const double y =
        13 * std::cos(s) - 5 * std::cos(2 * s) - 2 * std::cos(3 * s) - std::cos(4 * s);
    return Cplx(-y / 64 - 6.0 / 64, x / 64);
  };
  // Count per half: the mid-lobe arcs pass closest to the Laurent balancing
  // circle, where the highest-order terms are O(1) and oscillate with
  // arc-wavelength 2*pi*r/degree; the spacing the tanh map leaves there has
  // to stay below half a wavelength or wiggles hide between collocation
  // points (at the default degrees, half this count leaves mid-gap residuals
  // two orders worse than at the samples). The tanh strength is capped by the
  // cusps: much past w = 4.5 the flank pairs of the notch wedge pinch below
  // machine separation.
  const int n_half = std::max(800, 20 * laur);
  Hole h;
  auto heart_piece = [&](double s0, double s1, const char* nm) {
    Segment seg = make_curve([=](double t) { return heart_at(s0 + t * (s1 - s0)); }, n_half);
    seg.bc[0] = bc_const(FieldKind::U, 0.0);
    seg.bc[1] = bc_const(FieldKind::V, 0.0);
    seg.clustering = Clustering::tanh(4.5);
    seg.request_aaa = true;
    seg.name = nm;
    return seg;
  };
  h.boundary.push_back(heart_piece(0, kPi, "heart-upper"));  // notch -> tip
  h.boundary.push_back(heart_piece(kPi, 2 * kPi, "heart-lower"));
  h.laurent_center = Cplx(0, 0);
  h.laurent_degree = laur;
  d.holes.push_back(h);

  // Tip edge: anchor well inside the heart, clear of the notch vertex at
  // x = -11/64; the cut runs along the symmetry axis, interior throughout.
  d.edges.push_back(SharpEdge{heart_at(kPi), Cplx(-5.0 / 64, 0), 15, 0.08});
  // Keep the shape fit out of the notch wedge: the flow there dies out
  // beyond all orders, and poles chasing the wedge land in the fluid.
  d.aaa_masks.push_back({heart_at(0), 0.03});

  CaseSetup cs{std::move(d), poly, 1e-8};
  // The tanh clustering spans five orders of magnitude in sample spacing;
  // unweighted rows let the cusp clusters outvote the lobes by head count.
  cs.weight_rows = true;
  cs.rcond = 1e-14;
  return cs;
}

// Location of the heart's notch vertex (the reentrant cusp) for eddy hunts.
inline Cplx heart_notch() { return Cplx(-11.0 / 64, 0); }

// Channel bifurcating into two vertical branches around a smooth divider,
// with an elliptical obstacle upstream. Two sharp reentrant corners carry
// pole ladders; the divider is flagged for adaptive poles; the upper outlet
// runs at a higher pressure than the lower one.
inline CaseSetup build_bifurcation(const GalleryOptions& opt = {}) {
  const int poly = opt.polynomial_degree ? opt.polynomial_degree : 96;
  const int laur = opt.laurent_degree ? opt.laurent_degree : 48;
  const int N = opt.corner_poles ? opt.corner_poles : 48;
  const int n_corner_wall = std::max(3 * N, 120);

  Domain d;
  d.name = "bifurcation";
  auto wall = [](Segment s, const char* nm) {
    s.bc[0] = bc_const(FieldKind::U, 0.0);
    s.bc[1] = bc_const(FieldKind::V, 0.0);
    s.name = nm;
    return s;
  };

  const Cplx cA(-2, -0.5), cB(0.3, -0.5), cC(0.3, -1.6), cD(1, -1.6);
  const Cplx cE(1, -0.35), cF(1, 0.35), cG(1, 1.6), cH(0.3, 1.6);
  const Cplx cI(0.3, 0.5), cJ(-2, 0.5);

  Segment bottom = wall(make_line(cA, cB, n_corner_wall), "inlet-lower-wall");
  Segment branchL1 = wall(make_line(cB, cC, n_corner_wall), "lower-branch-left");
  Segment outlo = make_line(cC, cD, 80);
  outlo.bc[0] = bc_const(FieldKind::U, 0.0);
  outlo.bc[1] = bc_const(FieldKind::P, 0.0);
  outlo.name = "lower-outlet";
  Segment branchR1 = wall(make_line(cD, cE, 100), "lower-branch-right");

  // divider: cosine bump reaching from the right wall to x = 0.55, C^1 at both ends
  Segment divider = wall(make_curve(
                             [=](double t) {
                               const double y = -0.35 + 0.7 * t;
                               const double x =
                                   1 - 0.45 * 0.5 * (1 + std::cos(kPi * y / 0.35));
                               return Cplx(x, y);
                             },
                             320),
                         "divider");
  divider.clustering = Clustering::tanh(10);
  divider.request_aaa = true;

  Segment branchR2 = wall(make_line(cF, cG, 100), "upper-branch-right");
  Segment outhi = make_line(cG, cH, 80);
  outhi.bc[0] = bc_const(FieldKind::U, 0.0);
  outhi.bc[1] = bc_const(FieldKind::P, 1.0);
  outhi.name = "upper-outlet";
  Segment branchL2 = wall(make_line(cH, cI, n_corner_wall), "upper-branch-left");
  Segment top = wall(make_line(cI, cJ, n_corner_wall), "inlet-upper-wall");
  Segment inlet = make_line(cJ, cA, 100);
  inlet.bc[0] = bc_const(FieldKind::P, 8.0);
  inlet.bc[1] = bc_const(FieldKind::V, 0.0);
  inlet.name = "inlet";

  // The two sharp reentrant corners where the inlet channel meets the
  // branches. Far from a corner its wall is sampled at the same ~0.02 spacing
  // the plain walls get.
  Corner lowC = detail::corner_between(cA, cB, cC, N);
  Corner uppC = detail::corner_between(cH, cI, cJ, N);
  detail::cluster_into_corner(bottom, lowC, true, 0.02);
  detail::cluster_into_corner(branchL1, lowC, false, 0.02);
  detail::cluster_into_corner(branchL2, uppC, true, 0.02);
  detail::cluster_into_corner(top, uppC, false, 0.02);
  d.corners.push_back(lowC);
  d.corners.push_back(uppC);

  d.outer = {bottom, branchL1, outlo, branchR1, divider,
             branchR2, outhi, branchL2, top, inlet};

  if (opt.include_hole) {
    const Cplx ec(-0.8, 0);
    Hole h;
    Segment ell = make_curve(
        [=](double t) {
          const double a = 2 * kPi * t;
          return ec + Cplx(0.3 * std::cos(a), -0.18 * std::sin(a));
        },
        240);
    ell.bc[0] = bc_const(FieldKind::U, 0.0);
    ell.bc[1] = bc_const(FieldKind::V, 0.0);
    ell.name = "ellipse";
    h.boundary.push_back(ell);
    h.laurent_center = ec;
    h.laurent_degree = laur;
    d.holes.push_back(h);
  }

  CaseSetup cs{std::move(d), poly, 1e-8};
  // Geometric corner sampling spans ~12 decades of spacing, and the deepest
  // ladder poles sit close enough to dependence that the default truncation
  // throws away useful directions; weighting plus the tighter cutoff recovers
  // two orders of residual at the full ladder depth.
  cs.weight_rows = true;
  cs.rcond = 1e-14;
  return cs;
}

inline CaseSetup build_gallery_case(const std::string& name, const GalleryOptions& opt = {}) {
  if (name == "ellipse-in-ellipse") return build_ellipse_in_ellipse(opt);
  if (name == "heart-hole-channel") return build_heart_channel(opt);
  if (name == "bifurcation-ellipse") return build_bifurcation(opt);
  throw ConfigError("unknown gallery case '" + name + "'");
}

}  // namespace stokes2d
