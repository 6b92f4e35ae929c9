#pragma once

#include <algorithm>
#include <chrono>
#include <utility>
#include <vector>

#include "aaa.hpp"
#include "basis.hpp"
#include "cases.hpp"
#include "geometry.hpp"
#include "solution.hpp"
#include "system.hpp"

namespace stokes2d {

struct SolverParams {
  int polynomial_degree = 24;
  double aaa_tol = 1e-8;
  int aaa_max_degree = 100;
  double froissart_tol = 1e-13;
  bool weight_rows = false;
  double rcond = 1e-12;
};

inline SolverParams params_for(const CaseSetup& cs) {
  SolverParams p;
  p.polynomial_degree = cs.polynomial_degree;
  p.aaa_tol = cs.aaa_tol;
  p.weight_rows = cs.weight_rows;
  p.rcond = cs.rcond;
  return p;
}

struct PoleCounts {
  int corner = 0;         // ladder poles at sharp corners
  int aaa_kept = 0;       // adaptive poles that survived the fluid filter
  int aaa_discarded = 0;  // adaptive poles that landed in the fluid
};

struct RunReport {
  BoundaryReport boundary;  // residual table over samples + midpoints
  SolveReport lsq;          // least-squares diagnostics at the samples
  int samples = 0;
  PoleCounts poles;
  std::vector<Cplx> pole_corner, pole_aaa;  // retained pole locations
  std::vector<BranchCutProbe> branch_cuts;  // one per hole
  double basis_regen_drift = 0;  // worst Gram deviation when re-running the recurrences
  double ms_plan = 0, ms_aaa = 0, ms_basis = 0, ms_assemble = 0, ms_solve = 0,
         ms_total = 0;
};

struct DriveResult {
  StokesSolution solution;
  RunReport report;
};

namespace detail {

inline double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
      .count();
}

// The product recurrence is happiest when each new pole is tamer than the
// ones already absorbed, so feed groups farthest-from-the-boundary first.
inline void sort_poles_for_recurrence(std::vector<Cplx>& poles, const CVec& samples) {
  std::vector<double> dist(poles.size());
  for (size_t k = 0; k < poles.size(); ++k)
    dist[k] = (samples.array() - poles[k]).abs().minCoeff();
  std::vector<size_t> order(poles.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    if (dist[a] != dist[b]) return dist[a] > dist[b];
    if (poles[a].real() != poles[b].real()) return poles[a].real() < poles[b].real();
    return poles[a].imag() < poles[b].imag();
  });
  std::vector<Cplx> sorted(poles.size());
  for (size_t k = 0; k < poles.size(); ++k) sorted[k] = poles[order[k]];
  poles.swap(sorted);
}

// Worst deviation of the regenerated family Grams from the identity over the
// set each family was orthogonalized on (training samples; the balancing
// circle for Laurent blocks). Large drift means the stored recurrence does
// not reproduce the basis it was built from.
inline double regeneration_drift(const std::vector<OrthogonalBasisRecord>& recs,
                                 const BasisEval& be, const CVec& train) {
  double worst = 0;
  int at = 0;
  for (const auto& rec : recs) {
    const int nc = family_columns(rec.family);
    if (nc > 0) {
      CMat Q;
      if (const auto* lf = std::get_if<LaurentFamily>(&rec.family)) {
        const CVec circle =
            laurent_circle(lf->center, laurent_scale(train, lf->center), lf->degree);
        Q = evaluate_basis({rec}, circle).R0;
      } else {
        Q = be.R0.middleCols(at, nc);
      }
      const CMat G = (Q.adjoint() * Q) / double(Q.rows());
      worst = std::max(worst, (G - CMat::Identity(nc, nc)).cwiseAbs().maxCoeff());
    }
    at += nc;
  }
  return worst;
}

}  // namespace detail

// End-to-end solve: sample the boundary, place poles (corner ladders plus
// adaptive ones on the segments that asked), build the orthogonal basis,
// assemble the boundary-condition rows and least-squares fit the Goursat
// coefficients.
inline DriveResult solve_domain(const Domain& domain, const SolverParams& prm) {
  using clock = std::chrono::steady_clock;
  const auto t_total = clock::now();
  if (prm.polynomial_degree < 0) throw ConfigError("polynomial degree must be >= 0");

  auto t0 = clock::now();
  const SamplePlan plan = plan_samples(domain);
  const RegionTester region(domain);
  RunReport rep;
  rep.ms_plan = detail::ms_since(t0);
  rep.samples = static_cast<int>(plan.points.size());

  // corner ladders, clustered geometrically into each sharp corner
  for (const Corner& c : domain.corners) {
    const auto ladder = cluster_corner_poles(c);
    rep.pole_corner.insert(rep.pole_corner.end(), ladder.begin(), ladder.end());
  }
  rep.poles.corner = static_cast<int>(rep.pole_corner.size());

  // adaptive poles: fit conj(z) over each boundary loop's flagged samples and
  // keep the poles the rational approximant pushes outside the fluid. One fit
  // per loop, not per segment: a singularity at a joint between segments (a
  // curvature jump, say) is invisible to a fit that stops at the joint, and
  // the approximant needs to see the function from both sides to put a pole
  // there.
  t0 = clock::now();
  std::vector<std::vector<Cplx>> aaa_groups;
  {
    const auto segs = all_segments(domain);
    std::vector<int> loop_of(segs.size());
    {
      size_t si = 0;
      for (size_t k = 0; k < domain.outer.size(); ++k) loop_of[si++] = 0;
      for (size_t h = 0; h < domain.holes.size(); ++h)
        for (size_t k = 0; k < domain.holes[h].boundary.size(); ++k)
          loop_of[si++] = static_cast<int>(h) + 1;
    }
    const int n_loops = 1 + static_cast<int>(domain.holes.size());
    for (int loop = 0; loop < n_loops; ++loop) {
      std::vector<Cplx> zb;
      for (Eigen::Index i = 0; i < plan.points.size(); ++i) {
        const int si = plan.seg_id[i];
        if (loop_of[si] != loop || !segs[si]->request_aaa) continue;
        // Samples backing onto a sharp edge describe the cusp the edge
        // family already carries, and samples inside a masked disc describe
        // a singularity of the shape alone; leave both out so the fit
        // spends its degrees on singularities nothing else covers.
        bool masked = false;
        for (const SharpEdge& e : domain.edges)
          masked |= e.keep_away > 0 && std::abs(plan.points(i) - e.point) < e.keep_away;
        for (const auto& [c, r] : domain.aaa_masks)
          masked |= std::abs(plan.points(i) - c) < r;
        if (!masked) zb.push_back(plan.points(i));
      }
      if (zb.size() < 2) continue;
      CVec Z = Eigen::Map<const CVec>(zb.data(), zb.size());
      const CVec F = Z.conjugate();
      BarycentricRational fit = aaa_fit(Z, F, prm.aaa_tol, prm.aaa_max_degree);
      fit = froissart_cleanup(fit, Z, F, prm.froissart_tol);
      const PoleReport pr = compute_poles(fit);
      auto kept = discard_fluid_poles(pr.poles, region);
      // Spurious near-cancelling pole pairs occasionally leave one survivor
      // parked thousands of diameters away; its column is numerically a
      // constant and collides with the polynomial block, so drop it.
      const double diam =
          std::hypot(plan.points.real().maxCoeff() - plan.points.real().minCoeff(),
                     plan.points.imag().maxCoeff() - plan.points.imag().minCoeff());
      std::erase_if(kept, [&](Cplx p) {
        return (plan.points.array() - p).abs().minCoeff() > 1e3 * diam;
      });
      // Poles chasing a sharp edge land in the thin sliver of solid behind
      // it, numerically on the boundary; the half-integer powers already
      // carry that behaviour, so such poles are useless and destabilizing.
      for (const SharpEdge& e : domain.edges)
        if (e.keep_away > 0)
          std::erase_if(kept,
                        [&](Cplx p) { return std::abs(p - e.point) < e.keep_away; });
      rep.poles.aaa_discarded += static_cast<int>(pr.poles.size() - kept.size());
      if (!kept.empty()) aaa_groups.push_back(kept);
      rep.pole_aaa.insert(rep.pole_aaa.end(), kept.begin(), kept.end());
    }
  }
  rep.poles.aaa_kept = static_cast<int>(rep.pole_aaa.size());
  rep.ms_aaa = detail::ms_since(t0);

  // basis: one polynomial block, a Laurent block per hole center (the hole's
  // own plus any auxiliary centers), one pole group per corner / AAA loop,
  // half-integer powers per sharp edge
  t0 = clock::now();
  std::vector<BasisFamily> families;
  families.push_back(PolynomialFamily{prm.polynomial_degree});
  for (const Hole& h : domain.holes) {
    if (h.laurent_degree > 0) families.push_back(LaurentFamily{h.laurent_center, h.laurent_degree});
    for (const auto& [center, degree] : h.extra_centers)
      if (degree > 0) families.push_back(LaurentFamily{center, degree});
  }
  for (const Corner& c : domain.corners) {
    auto ladder = cluster_corner_poles(c);
    if (ladder.empty()) continue;
    detail::sort_poles_for_recurrence(ladder, plan.points);
    families.push_back(PoleGroupFamily{std::move(ladder)});
  }
  for (const SharpEdge& e : domain.edges)
    if (e.terms > 0) families.push_back(EdgeFamily{e.point, e.anchor, e.terms});
  for (auto& g : aaa_groups) {
    detail::sort_poles_for_recurrence(g, plan.points);
    families.push_back(PoleGroupFamily{std::move(g)});
  }

  const auto recs = orthogonalize_basis(plan.points, families);
  const BasisEval be = evaluate_basis(recs, plan.points);
  rep.basis_regen_drift = detail::regeneration_drift(recs, be, plan.points);
  rep.ms_basis = detail::ms_since(t0);

  t0 = clock::now();
  const StokesLinearSystem sys = assemble(domain, plan, be, prm.weight_rows);
  rep.ms_assemble = detail::ms_since(t0);

  t0 = clock::now();
  auto [coeffs, lsq] = solve_system(sys, prm.rcond);
  rep.lsq = std::move(lsq);
  rep.ms_solve = detail::ms_since(t0);

  DriveResult out{make_solution(domain, recs, std::move(coeffs)), std::move(rep)};
  out.report.boundary = boundary_residual(out.solution);
  out.report.branch_cuts = branch_cut_check(out.solution);
  out.report.ms_total = detail::ms_since(t_total);
  return out;
}

inline DriveResult solve_case(const CaseSetup& cs) {
  return solve_domain(cs.domain, params_for(cs));
}

}  // namespace stokes2d
