#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "stokes2d/basis.hpp"
#include "stokes2d/geometry.hpp"
#include "stokes2d/system.hpp"

using namespace stokes2d;

namespace {

struct FieldSet {
  double psi, u, v, p, omega;
};

// Independent evaluation of all five fields straight from the Goursat
// representation, bypassing the row-assembly code entirely:
//   f(z) = sum_j cf_j q_j(z) + sum_h f0_h log(z - c_h)
//   g(z) = sum_j cg_j q_j(z)
//          + sum_h [g0_h log(z - c_h) - conj(f0_h)((z - c_h)log(z - c_h) - z)]
//   psi = Im[conj(z) f + g],  u = Re[conj(z) f' - f + g'],
//   v = Im[-conj(z) f' - f - g'],  p = Re[4 f'],  omega = Im[-4 f'].
FieldSet direct_fields(Cplx z, const std::vector<OrthogonalBasisRecord>& recs,
                       const GoursatCoefficients& co, const std::vector<Cplx>& centers) {
  CVec zs(1);
  zs(0) = z;
  const BasisEval be = evaluate_basis(recs, zs);
  Cplx f = (be.R0.row(0) * co.cf)(0);
  Cplx fp = (be.R1.row(0) * co.cf)(0);
  Cplx g = (be.R0.row(0) * co.cg)(0);
  Cplx gp = (be.R1.row(0) * co.cg)(0);
  for (size_t h = 0; h < centers.size(); ++h) {
    const Cplx w = z - centers[h];
    const Cplx lw = std::log(w);
    f += co.f0[h] * lw;
    fp += co.f0[h] / w;
    g += co.g0[h] * lw - std::conj(co.f0[h]) * (w * lw - z);
    gp += co.g0[h] / w - std::conj(co.f0[h]) * lw;
  }
  const Cplx cz = std::conj(z);
  FieldSet out;
  out.psi = std::imag(cz * f + g);
  out.u = std::real(cz * fp - f + gp);
  out.v = std::imag(-cz * fp - f - gp);
  out.p = std::real(4.0 * fp);
  out.omega = std::imag(-4.0 * fp);
  return out;
}

// pack complex coefficients into the real unknown vector
RVec pack(const GoursatCoefficients& co, const ColumnMap& map) {
  RVec x = RVec::Zero(map.nreal());
  for (int j = 0; j < map.ncols; ++j) {
    x(map.re(map.cf(j))) = co.cf(j).real();
    x(map.im(map.cf(j))) = co.cf(j).imag();
    x(map.re(map.cg(j))) = co.cg(j).real();
    x(map.im(map.cg(j))) = co.cg(j).imag();
  }
  for (int h = 0; h < map.nholes; ++h) {
    x(map.re(map.f0(h))) = co.f0[h].real();
    x(map.im(map.f0(h))) = co.f0[h].imag();
    x(map.re(map.g0(h))) = co.g0[h].real();
    x(map.im(map.g0(h))) = co.g0[h].imag();
  }
  return x;
}

GoursatCoefficients random_coeffs(int ncols, int nholes, unsigned seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  GoursatCoefficients co;
  co.cf.resize(ncols);
  co.cg.resize(ncols);
  for (int j = 0; j < ncols; ++j) {
    co.cf(j) = Cplx(uni(gen), uni(gen));
    co.cg(j) = Cplx(uni(gen), uni(gen));
  }
  for (int h = 0; h < nholes; ++h) {
    co.f0.push_back(Cplx(uni(gen), uni(gen)));
    co.g0.push_back(Cplx(uni(gen), uni(gen)));
  }
  return co;
}

Domain unit_square_domain(int n_per_side) {
  Domain d;
  d.name = "square";
  const Cplx a(-1, -1), b(1, -1), c(1, 1), e(-1, 1);
  d.outer.push_back(make_line(a, b, n_per_side));
  d.outer.push_back(make_line(b, c, n_per_side));
  d.outer.push_back(make_line(c, e, n_per_side));
  d.outer.push_back(make_line(e, a, n_per_side));
  return d;
}

}  // namespace

TEST_CASE("column map layout") {
  ColumnMap map;
  map.ncols = 3;
  map.nholes = 2;
  REQUIRE(map.ncplx() == 10);
  REQUIRE(map.nreal() == 20);
  REQUIRE(map.cf(0) == 0);
  REQUIRE(map.cg(0) == 3);
  REQUIRE(map.f0(1) == 7);
  REQUIRE(map.g0(0) == 8);
  REQUIRE(map.re(4) == 4);
  REQUIRE(map.im(4) == 14);
}

TEST_CASE("rows reproduce the direct Goursat field evaluation") {
  // basis with a polynomial part and a Laurent part, plus one log block
  std::vector<Cplx> ring;
  for (int k = 0; k < 48; ++k) {
    const double t = 2 * kPi * k / 48;
    ring.push_back(Cplx(2 * std::cos(t), 2 * std::sin(t)));
    ring.push_back(Cplx(0.5 * std::cos(t) + 0.1, 0.5 * std::sin(t)));
  }
  CVec train = Eigen::Map<CVec>(ring.data(), ring.size());
  std::vector<BasisFamily> fams = {PolynomialFamily{4}, LaurentFamily{Cplx(0.1, 0), 3}};
  const auto recs = orthogonalize_basis(train, fams);

  ColumnMap map;
  map.ncols = total_columns(recs);
  map.nholes = 1;
  const std::vector<Cplx> centers = {Cplx(0.1, 0)};
  const auto co = random_coeffs(map.ncols, map.nholes, 99u);
  const RVec x = pack(co, map);

  // probe points away from the training set
  std::vector<Cplx> probes = {Cplx(1.3, 0.4), Cplx(-0.9, 0.8), Cplx(0.0, -1.1),
                              Cplx(1.7, -0.2)};
  CVec Zs = Eigen::Map<CVec>(probes.data(), probes.size());
  const BasisEval be = evaluate_basis(recs, Zs);

  for (const FieldKind kind : {FieldKind::Psi, FieldKind::U, FieldKind::V, FieldKind::P,
                               FieldKind::Omega}) {
    const RMat rows = functional_rows(kind, Zs, be, centers, map);
    const RVec got = rows * x;
    for (Eigen::Index i = 0; i < Zs.size(); ++i) {
      const FieldSet ref = direct_fields(Zs(i), recs, co, centers);
      double want = 0;
      switch (kind) {
        case FieldKind::Psi: want = ref.psi; break;
        case FieldKind::U: want = ref.u; break;
        case FieldKind::V: want = ref.v; break;
        case FieldKind::P: want = ref.p; break;
        case FieldKind::Omega: want = ref.omega; break;
      }
      INFO(field_name(kind) << " at z = " << Zs(i));
      REQUIRE(got(i) == Catch::Approx(want).margin(1e-11 * std::max(1.0, std::abs(want))));
    }
  }
}

TEST_CASE("velocity, pressure and vorticity rows kill the g-constant gauge column") {
  // Re(cg_0) never enters any field; Im(cg_0) only shifts psi. Both columns
  // of the constant g coefficient must vanish identically in U/V/P/Omega rows.
  std::vector<Cplx> pts;
  for (int k = 0; k < 32; ++k)
    pts.push_back(Cplx(std::cos(2 * kPi * k / 32), std::sin(2 * kPi * k / 32)));
  CVec train = Eigen::Map<CVec>(pts.data(), pts.size());
  std::vector<BasisFamily> fams = {PolynomialFamily{5}};
  const auto recs = orthogonalize_basis(train, fams);

  ColumnMap map;
  map.ncols = total_columns(recs);
  map.nholes = 0;
  CVec Zs(3);
  Zs << Cplx(0.2, 0.3), Cplx(-0.5, 0.1), Cplx(0.9, -0.4);
  const BasisEval be = evaluate_basis(recs, Zs);

  for (const FieldKind kind : {FieldKind::U, FieldKind::V, FieldKind::P, FieldKind::Omega}) {
    const RMat rows = functional_rows(kind, Zs, be, {}, map);
    REQUIRE(rows.col(map.re(map.cg(0))).cwiseAbs().maxCoeff() == 0.0);
    REQUIRE(rows.col(map.im(map.cg(0))).cwiseAbs().maxCoeff() == 0.0);
  }
  // psi does see the imaginary part (it is the stream-function constant)
  const RMat psi_rows = functional_rows(FieldKind::Psi, Zs, be, {}, map);
  REQUIRE(psi_rows.col(map.im(map.cg(0))).cwiseAbs().maxCoeff() > 0.5);
  REQUIRE(psi_rows.col(map.re(map.cg(0))).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("sample plan flattens segments with local spacing") {
  Domain d = unit_square_domain(10);
  const SamplePlan plan = plan_samples(d);
  REQUIRE(plan.points.size() == 40);
  REQUIRE(plan.seg_id.front() == 0);
  REQUIRE(plan.seg_id.back() == 3);
  // open segments sample inclusively: 10 points on a side of length 2
  for (size_t k = 1; k + 1 < 10; ++k)
    REQUIRE(plan.spacing[k] == Catch::Approx(2.0 / 9.0).epsilon(1e-12));
}

TEST_CASE("manufactured polynomial flow is reproduced through assemble and solve") {
  Domain d = unit_square_domain(60);
  const SamplePlan plan = plan_samples(d);
  std::vector<BasisFamily> fams = {PolynomialFamily{6}};
  const auto recs = orthogonalize_basis(plan.points, fams);

  const int ncols = total_columns(recs);
  const auto ref = random_coeffs(ncols, 0, 7u);

  // velocity data on bottom/right/top, pressure + stream function on the left
  // (the (p, psi) pair pins both gauge constants)
  auto u_of = [&](Cplx z) { return direct_fields(z, recs, ref, {}).u; };
  auto v_of = [&](Cplx z) { return direct_fields(z, recs, ref, {}).v; };
  auto p_of = [&](Cplx z) { return direct_fields(z, recs, ref, {}).p; };
  auto psi_of = [&](Cplx z) { return direct_fields(z, recs, ref, {}).psi; };
  for (int s = 0; s < 3; ++s) {
    d.outer[s].bc[0] = {FieldKind::U, u_of};
    d.outer[s].bc[1] = {FieldKind::V, v_of};
  }
  d.outer[3].bc[0] = {FieldKind::P, p_of};
  d.outer[3].bc[1] = {FieldKind::Psi, psi_of};

  const BasisEval be = evaluate_basis(recs, plan.points);
  const StokesLinearSystem sys = assemble(d, plan, be);
  REQUIRE(sys.A.rows() == 2 * plan.points.size());
  const auto [co, rep] = solve_system(sys);

  REQUIRE(rep.max_residual < 1e-11);
  REQUIRE(rep.rows == 480);
  // Three directions are invisible to every functional: Re(cg_0), and the
  // two-real-parameter shift (f, g) -> (f + b, g + conj(b) z). The rank-
  // revealing solve truncates them; the fields stay unique.
  REQUIRE(rep.rank >= rep.columns - 3);
  REQUIRE(rep.rank_deficient);

  std::mt19937 gen(123);
  std::uniform_real_distribution<double> uni(-0.85, 0.85);
  for (int k = 0; k < 20; ++k) {
    const Cplx z(uni(gen), uni(gen));
    const FieldSet want = direct_fields(z, recs, ref, {});
    const FieldSet got = direct_fields(z, recs, co, {});
    REQUIRE(got.psi == Catch::Approx(want.psi).margin(1e-10));
    REQUIRE(got.u == Catch::Approx(want.u).margin(1e-10));
    REQUIRE(got.v == Catch::Approx(want.v).margin(1e-10));
    REQUIRE(got.p == Catch::Approx(want.p).margin(1e-9));
    REQUIRE(got.omega == Catch::Approx(want.omega).margin(1e-9));
  }
}

TEST_CASE("per-segment residual table covers every segment") {
  Domain d = unit_square_domain(20);
  for (auto& seg : d.outer) {
    seg.bc[0] = bc_const(FieldKind::U, 0.0);
    seg.bc[1] = bc_const(FieldKind::V, 0.0);
  }
  const SamplePlan plan = plan_samples(d);
  std::vector<BasisFamily> fams = {PolynomialFamily{3}};
  const auto recs = orthogonalize_basis(plan.points, fams);
  const BasisEval be = evaluate_basis(recs, plan.points);
  const auto sys = assemble(d, plan, be);
  const auto [co, rep] = solve_system(sys);
  REQUIRE(rep.per_segment.size() == 4);
  for (const auto& sr : rep.per_segment) {
    REQUIRE(sr.max_abs >= sr.rms);
    REQUIRE(sr.max_abs < 1e-10);  // rest state is exactly representable
  }
}

TEST_CASE("assembly and solve reject malformed input") {
  Domain d = unit_square_domain(8);
  const SamplePlan plan = plan_samples(d);
  std::vector<BasisFamily> fams = {PolynomialFamily{2}};
  const auto recs = orthogonalize_basis(plan.points, fams);
  const BasisEval be = evaluate_basis(recs, plan.points);

  SECTION("missing boundary target") {
    d.outer[0].bc[0] = {FieldKind::U, nullptr};
    d.outer[0].bc[1] = bc_const(FieldKind::V, 0.0);
    for (int s = 1; s < 4; ++s) {
      d.outer[s].bc[0] = bc_const(FieldKind::U, 0.0);
      d.outer[s].bc[1] = bc_const(FieldKind::V, 0.0);
    }
    REQUIRE_THROWS_AS(assemble(d, plan, be), SolverError);
  }

  SECTION("sample on a log center") {
    ColumnMap map;
    map.ncols = total_columns(recs);
    map.nholes = 1;
    CVec Zs(2);
    Zs << Cplx(0.5, 0.5), Cplx(0.25, 0.25);
    CVec dense(2);
    dense << Zs(0), Zs(1);
    BasisEval small = evaluate_basis(recs, dense);
    REQUIRE_THROWS_AS(functional_rows(FieldKind::Psi, Zs, small, {Cplx(0.25, 0.25)}, map),
                      SolverError);
  }

  SECTION("non-finite rhs") {
    for (auto& seg : d.outer) {
      seg.bc[0] = {FieldKind::U, [](Cplx) { return std::nan(""); }};
      seg.bc[1] = bc_const(FieldKind::V, 0.0);
    }
    const auto sys = assemble(d, plan, be);
    REQUIRE_THROWS_AS(solve_system(sys), SolverError);
  }
}

TEST_CASE("row weighting scales rows by local spacing") {
  Domain d = unit_square_domain(16);
  for (auto& seg : d.outer) {
    seg.bc[0] = bc_const(FieldKind::U, 1.0);
    seg.bc[1] = bc_const(FieldKind::V, 0.0);
  }
  // cluster one side so spacings differ
  d.outer[0].clustering = Clustering::tanh(4);
  d.outer[0].n_samples = 17;  // open-type sampling needs its own count
  const SamplePlan plan = plan_samples(d);
  std::vector<BasisFamily> fams = {PolynomialFamily{2}};
  const auto recs = orthogonalize_basis(plan.points, fams);
  const BasisEval be = evaluate_basis(recs, plan.points);
  const auto plain = assemble(d, plan, be, false);
  const auto weighted = assemble(d, plan, be, true);
  REQUIRE(plain.A.rows() == weighted.A.rows());
  // weighted rows differ where spacing deviates from the mean
  REQUIRE((plain.A - weighted.A).cwiseAbs().maxCoeff() > 1e-6);
  // both remain solvable to the same rest state
  const auto [c1, r1] = solve_system(plain);
  const auto [c2, r2] = solve_system(weighted);
  REQUIRE(std::abs(c1.cf(1) - c2.cf(1)) < 1e-8);
}
