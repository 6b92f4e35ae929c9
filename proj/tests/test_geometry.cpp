#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <random>

#include "stokes2d/geometry.hpp"

using namespace stokes2d;
using Catch::Approx;

namespace {

// Independent point-in-polygon oracle: signed winding number by summing
// subtended angles. Only valid off the boundary, which is all we compare on.
bool winding_inside(Cplx z, const std::vector<Cplx>& poly) {
  double total = 0;
  for (size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++)
    total += std::arg((poly[i] - z) / (poly[j] - z));
  return std::abs(total) > kPi;  // |winding| >= 2*pi inside, ~0 outside
}

double angle_diff(double a, double b) {
  double d = std::fmod(a - b, 2 * kPi);
  if (d > kPi) d -= 2 * kPi;
  if (d < -kPi) d += 2 * kPi;
  return std::abs(d);
}

}  // namespace

TEST_CASE("exterior bisector of a convex square corner points into the solid") {
  // CCW unit square, vertex at the origin: fluid occupies the first quadrant
  // locally, so the outward bisector points into the third.
  auto th = exterior_bisector(Cplx(0, 1), Cplx(0, 0), Cplx(1, 0));
  REQUIRE(th.has_value());
  CHECK(angle_diff(*th, 5 * kPi / 4) < 1e-14);
}

TEST_CASE("exterior bisector of a re-entrant corner points into the notch") {
  // L-shaped fluid with the re-entrant vertex at (1,1); boundary runs
  // ... (2,1) -> (1,1) -> (1,2) ... so the solid wedge is the upper-right
  // quadrant of the vertex.
  auto th = exterior_bisector(Cplx(2, 1), Cplx(1, 1), Cplx(1, 2));
  REQUIRE(th.has_value());
  CHECK(angle_diff(*th, kPi / 4) < 1e-14);
}

TEST_CASE("collinear neighbours have no exterior bisector") {
  auto th = exterior_bisector(Cplx(-1, 0), Cplx(0, 0), Cplx(1, 0));
  CHECK_FALSE(th.has_value());
  CHECK_THROWS_AS(exterior_bisector(Cplx(0, 0), Cplx(0, 0), Cplx(1, 0)), GeometryError);
}

TEST_CASE("corner pole ladder clusters exponentially toward the vertex") {
  Corner c;
  c.vertex = Cplx(0, 0);
  c.direction = 0;
  c.scale = 1;
  c.pole_count = 4;
  c.sigma = 4;
  auto beta = cluster_corner_poles(c);
  REQUIRE(beta.size() == 4);
  // frozen: exp(-4*(2 - sqrt(n))) for n = 1..4
  CHECK(beta[0].real() == Approx(0.01831563888873418).epsilon(1e-15));
  CHECK(beta[1].real() == Approx(0.096025091631184463).epsilon(1e-15));
  CHECK(beta[2].real() == Approx(0.34239276344906882).epsilon(1e-15));
  CHECK(beta[3].real() == Approx(1.0).epsilon(1e-15));
  for (auto b : beta) CHECK(b.imag() == 0.0);

  // direction and offset carry through
  c.vertex = Cplx(2, 1);
  c.direction = kPi / 2;
  auto beta2 = cluster_corner_poles(c);
  CHECK(std::abs(beta2[3] - Cplx(2, 2)) < 1e-15);
  CHECK(std::abs(beta2[0] - Cplx(2, 1 + 0.01831563888873418)) < 1e-16);

  c.pole_count = 24;
  CHECK(corner_pole_min_distance(c) == Approx(1.6856946072668253e-7).epsilon(1e-14));

  c.pole_count = 0;
  CHECK(cluster_corner_poles(c).empty());
  c.pole_count = 4;
  c.scale = 0;
  CHECK_THROWS_AS(cluster_corner_poles(c), GeometryError);
}

TEST_CASE("corner-geometric sampling walks powers of the ratio into the corner") {
  Segment s = make_line(Cplx(0, 0), Cplx(1, 0), 4);
  s.clustering = Clustering::corner(0.5, false);
  auto t = sample_params(s);
  REQUIRE(t.size() == 4);
  // exact in floating point: {1/16, 1/8, 1/4, 1/2}
  CHECK(t[0] == 0.0625);
  CHECK(t[1] == 0.125);
  CHECK(t[2] == 0.25);
  CHECK(t[3] == 0.5);

  s.clustering = Clustering::corner(0.5, true);
  auto u = sample_params(s);
  CHECK(u[0] == 0.5);
  CHECK(u[3] == 0.9375);
  CHECK(std::is_sorted(u.begin(), u.end()));

  s.clustering = Clustering::corner(1.0, false);
  CHECK_THROWS_AS(sample_params(s), GeometryError);
}

TEST_CASE("tanh sampling matches the hyperbolic map and avoids endpoints") {
  Segment s = make_line(Cplx(0, 0), Cplx(1, 0), 5);
  s.clustering = Clustering::tanh(2.0);
  auto t = sample_params(s);
  REQUIRE(t.size() == 5);
  // frozen: (tanh(linspace(-2,2,5)) + 1)/2
  CHECK(t[0] == Approx(0.017986209962091558).epsilon(1e-15));
  CHECK(t[1] == Approx(0.11920292202211756).epsilon(1e-15));
  CHECK(t[2] == Approx(0.5).epsilon(1e-15));
  CHECK(t[3] == Approx(0.88079707797788244).epsilon(1e-15));
  CHECK(t[4] == Approx(0.98201379003790844).epsilon(1e-15));

  s.n_samples = 600;
  s.clustering = Clustering::tanh(14.0);
  auto big = sample_params(s);
  // cancellation in (tanh(u)+1)/2 near u=-14 limits doubles to ~1e-4 relative
  CHECK(big.front() == Approx(6.9144001069354221e-13).epsilon(1e-4));
  CHECK(big.front() > 0.0);
  CHECK(big.back() < 1.0);
}

TEST_CASE("uniform sampling: inclusive open, midpoint at corners, periodic closed") {
  Segment open = make_line(Cplx(0, 0), Cplx(1, 0), 3);
  auto t = sample_params(open);
  CHECK(t == std::vector<double>{0.0, 0.5, 1.0});

  Segment cornered = make_line(Cplx(0, 0), Cplx(1, 0), 4);
  cornered.corner_start = true;
  auto tc = sample_params(cornered);
  CHECK(tc == std::vector<double>{0.125, 0.375, 0.625, 0.875});

  Segment circle = make_arc(Cplx(2, 1), 0.5, -2 * kPi, 0, 4);
  auto z = sample_segment(circle);
  REQUIRE(z.size() == 4);
  CHECK(std::abs(z[0] - Cplx(2.5, 1)) < 1e-12);
  CHECK(std::abs(z[1] - Cplx(2, 1.5)) < 1e-12);
  CHECK(std::abs(z[2] - Cplx(1.5, 1)) < 1e-12);
  CHECK(std::abs(z[3] - Cplx(2, 0.5)) < 1e-12);
}

TEST_CASE("degenerate segments are rejected") {
  CHECK_THROWS_AS(sample_segment(make_line(Cplx(1, 1), Cplx(1, 1), 8)), GeometryError);
  CHECK_THROWS_AS(sample_segment(make_arc(Cplx(0, 0), 0.0, 0, 1, 8)), GeometryError);
  CHECK_THROWS_AS(sample_segment(make_arc(Cplx(0, 0), 1.0, 1, 1, 8)), GeometryError);
  CHECK_THROWS_AS(sample_segment(make_curve({}, 8)), GeometryError);
  CHECK_THROWS_AS(sample_segment(make_curve([](double) { return Cplx(3, 4); }, 8)),
                  GeometryError);
  Segment s = make_line(Cplx(0, 0), Cplx(1, 0), 0);
  CHECK_THROWS_AS(sample_params(s), GeometryError);
}

TEST_CASE("even-odd point location agrees with a winding-number oracle") {
  // L-shaped hexagon
  std::vector<Cplx> poly = {{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}};
  std::mt19937 rng(1234);
  std::uniform_real_distribution<double> U(-0.5, 2.5);
  int checked = 0;
  for (int k = 0; k < 2000; ++k) {
    Cplx z(U(rng), U(rng));
    // skip points essentially on the boundary, where the oracle is undefined
    double d = std::numeric_limits<double>::infinity();
    for (size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++)
      d = std::min(d, point_segment_distance(z, poly[j], poly[i]));
    if (d < 1e-6) continue;
    ++checked;
    CHECK(point_in_polyline(z, poly, 1e-12) == winding_inside(z, poly));
  }
  CHECK(checked > 1900);

  // boundary and vertex points count as inside
  CHECK(point_in_polyline(Cplx(1.0, 0.0), poly, 1e-12));
  CHECK(point_in_polyline(Cplx(0.0, 0.0), poly, 1e-12));
  CHECK(point_in_polyline(Cplx(1.0, 1.5), poly, 1e-12));
}

TEST_CASE("region tester separates fluid, hole and exterior in an annulus") {
  Domain d;
  d.name = "annulus";
  d.outer.push_back(make_arc(Cplx(0, 0), 1.0, 0, 2 * kPi, 128));
  Hole h;
  h.boundary.push_back(make_arc(Cplx(0, 0), 0.5, 0, -2 * kPi, 128));
  h.laurent_center = Cplx(0, 0);
  d.holes.push_back(h);

  RegionTester rt(d);
  CHECK(rt.in_fluid(Cplx(0.75, 0)));
  CHECK(rt.in_fluid(Cplx(0, -0.8)));
  CHECK_FALSE(rt.in_fluid(Cplx(0, 0)));       // inside the hole
  CHECK_FALSE(rt.in_fluid(Cplx(0.3, 0.2)));   // still inside the hole
  CHECK_FALSE(rt.in_fluid(Cplx(1.5, 0)));     // outside
  CHECK_FALSE(rt.in_outer(Cplx(0, 1.01)));
  CHECK(rt.in_outer(Cplx(0, 0)));             // outer loop alone contains the hole

  CHECK(rt.boundary_distance(Cplx(0.75, 0)) == Approx(0.25).margin(2e-3));
  CHECK(rt.boundary_distance(Cplx(0, 0)) == Approx(0.5).margin(2e-3));

  BBox b = domain_bbox(d);
  CHECK(b.x0 == Approx(-1).margin(2e-3));
  CHECK(b.x1 == Approx(1).margin(2e-3));
  CHECK(b.y0 == Approx(-1).margin(2e-3));
  CHECK(b.y1 == Approx(1).margin(2e-3));
  CHECK(domain_scale(d) == Approx(2 * std::sqrt(2.0)).margin(5e-3));
}

TEST_CASE("fluid test honours boundary conventions on a square with a square hole") {
  Domain d;
  d.outer.push_back(make_line(Cplx(0, 0), Cplx(3, 0), 10));
  d.outer.push_back(make_line(Cplx(3, 0), Cplx(3, 3), 10));
  d.outer.push_back(make_line(Cplx(3, 3), Cplx(0, 3), 10));
  d.outer.push_back(make_line(Cplx(0, 3), Cplx(0, 0), 10));
  Hole h;
  h.boundary.push_back(make_line(Cplx(1, 1), Cplx(1, 2), 5));
  h.boundary.push_back(make_line(Cplx(1, 2), Cplx(2, 2), 5));
  h.boundary.push_back(make_line(Cplx(2, 2), Cplx(2, 1), 5));
  h.boundary.push_back(make_line(Cplx(2, 1), Cplx(1, 1), 5));
  h.laurent_center = Cplx(1.5, 1.5);
  d.holes.push_back(h);

  RegionTester rt(d);
  CHECK(rt.in_fluid(Cplx(0.5, 0.5)));
  CHECK_FALSE(rt.in_fluid(Cplx(1.5, 1.5)));
  CHECK(rt.in_fluid(Cplx(0.0, 1.5)));        // on the outer boundary: fluid
  CHECK_FALSE(rt.in_fluid(Cplx(1.0, 1.5)));  // on the hole boundary: hole
  CHECK_FALSE(rt.in_fluid(Cplx(3.2, 1.5)));

  auto segs = all_segments(d);
  CHECK(segs.size() == 8);
  CHECK(segs[0] == &d.outer[0]);
  CHECK(segs[4] == &d.holes[0].boundary[0]);
}

TEST_CASE("closed curve segments sample periodically without a duplicate seam") {
  // unit circle as a parametric curve
  Segment s = make_curve([](double t) { return std::exp(Cplx(0, 2 * kPi * t)); }, 8);
  REQUIRE(segment_is_closed(s));
  auto z = sample_segment(s);
  REQUIRE(z.size() == 8);
  for (size_t i = 0; i < z.size(); ++i)
    for (size_t j = i + 1; j < z.size(); ++j) CHECK(std::abs(z[i] - z[j]) > 1e-3);

  Segment open_arc = make_arc(Cplx(0, 0), 1.0, 0, kPi, 5);
  CHECK_FALSE(segment_is_closed(open_arc));
  auto w = sample_segment(open_arc);
  CHECK(std::abs(w.front() - Cplx(1, 0)) < 1e-14);
  CHECK(std::abs(w.back() - Cplx(-1, 0)) < 1e-14);
}
