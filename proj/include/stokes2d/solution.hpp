#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "basis.hpp"
#include "geometry.hpp"
#include "system.hpp"
#include "types.hpp"

namespace stokes2d {

// A solved flow: the domain, the orthogonalized basis it was fit on, the
// Goursat coefficients, and the log centers of the holes. Everything needed
// to evaluate psi/u/v/p/omega anywhere.
struct StokesSolution {
  Domain domain;
  std::vector<OrthogonalBasisRecord> records;
  GoursatCoefficients coeffs;
  std::vector<Cplx> centers;  // one log center per hole
  RegionTester region;
};

inline StokesSolution make_solution(Domain d, std::vector<OrthogonalBasisRecord> recs,
                                    GoursatCoefficients co) {
  StokesSolution s;
  s.centers = log_centers(d);
  s.region = RegionTester(d);
  s.domain = std::move(d);
  s.records = std::move(recs);
  s.coeffs = std::move(co);
  return s;
}

struct FieldValues {
  double psi = 0, u = 0, v = 0, p = 0, omega = 0;
  double by(FieldKind k) const {
    switch (k) {
      case FieldKind::Psi: return psi;
      case FieldKind::U: return u;
      case FieldKind::V: return v;
      case FieldKind::P: return p;
      case FieldKind::Omega: return omega;
    }
    return 0;
  }
};

struct FieldArrays {
  RVec psi, u, v, p, omega;
};

// Batch evaluation straight from the representation
//   f(z) = sum cf_j q_j + sum_h f0_h log(z-c_h)
//   g(z) = sum cg_j q_j + sum_h [g0_h log(z-c_h) - conj(f0_h)((z-c_h)log(z-c_h) - z)]
inline FieldArrays fields(const StokesSolution& s, const CVec& Zs) {
  const BasisEval be = evaluate_basis(s.records, Zs);
  CVec f = be.R0 * s.coeffs.cf;
  CVec fp = be.R1 * s.coeffs.cf;
  CVec g = be.R0 * s.coeffs.cg;
  CVec gp = be.R1 * s.coeffs.cg;
  for (size_t h = 0; h < s.centers.size(); ++h) {
    const Cplx f0 = s.coeffs.f0[h], g0 = s.coeffs.g0[h];
    const CVec w = Zs.array() - s.centers[h];
    const CVec lw = w.array().log();
    const CVec ow = w.cwiseInverse();
    f += f0 * lw;
    fp += f0 * ow;
    g += g0 * lw - std::conj(f0) * (w.cwiseProduct(lw) - Zs);
    gp += g0 * ow - std::conj(f0) * lw;
  }
  const CVec cz = Zs.conjugate();
  FieldArrays out;
  out.psi = (cz.cwiseProduct(f) + g).imag();
  out.u = (cz.cwiseProduct(fp) - f + gp).real();
  out.v = (-cz.cwiseProduct(fp) - f - gp).imag();
  out.p = (4.0 * fp).real();
  out.omega = (-4.0 * fp).imag();
  return out;
}

inline FieldValues fields_at(const StokesSolution& s, Cplx z) {
  CVec zs(1);
  zs(0) = z;
  const FieldArrays fa = fields(s, zs);
  return {fa.psi(0), fa.u(0), fa.v(0), fa.p(0), fa.omega(0)};
}

// --- boundary error -------------------------------------------------------

struct SegmentError {
  std::string name;
  int seg_id = 0;
  double max_abs = 0;
  double rms = 0;
};

struct BoundaryReport {
  double max_error = 0;
  double scale = 1;  // max(1, largest |target| seen)
  double accuracy_digits = 0;  // -log10(max_error), the headline digit count
  std::vector<SegmentError> per_segment;
};

// Measure how well the solution honours its boundary data. Probes each
// segment at the collocation parameters plus the midpoints between them, so
// the fit is judged partly off the points it was trained on.
inline BoundaryReport boundary_residual(const StokesSolution& s) {
  const auto segs = all_segments(s.domain);
  BoundaryReport rep;
  for (size_t si = 0; si < segs.size(); ++si) {
    const Segment& seg = *segs[si];
    const auto ts = sample_params(seg);
    std::vector<double> probe(ts.begin(), ts.end());
    for (size_t k = 0; k + 1 < ts.size(); ++k) probe.push_back((ts[k] + ts[k + 1]) / 2);
    if (segment_is_closed(seg) && !ts.empty())
      probe.push_back(std::fmod((ts.back() + ts.front() + 1.0) / 2, 1.0));

    CVec Zs(probe.size());
    for (size_t k = 0; k < probe.size(); ++k) Zs(k) = seg_point(seg, probe[k]);
    const FieldArrays fa = fields(s, Zs);

    SegmentError err{seg.name, static_cast<int>(si), 0, 0};
    int n = 0;
    for (int cond = 0; cond < 2; ++cond) {
      if (!seg.bc[cond].target) continue;
      for (Eigen::Index i = 0; i < Zs.size(); ++i) {
        const double want = seg.bc[cond].target(Zs(i));
        double got = 0;
        switch (seg.bc[cond].functional) {
          case FieldKind::Psi: got = fa.psi(i); break;
          case FieldKind::U: got = fa.u(i); break;
          case FieldKind::V: got = fa.v(i); break;
          case FieldKind::P: got = fa.p(i); break;
          case FieldKind::Omega: got = fa.omega(i); break;
        }
        const double e = std::abs(got - want);
        err.max_abs = std::max(err.max_abs, e);
        err.rms += e * e;
        ++n;
        rep.scale = std::max(rep.scale, std::abs(want));
      }
    }
    err.rms = n ? std::sqrt(err.rms / n) : 0;
    rep.max_error = std::max(rep.max_error, err.max_abs);
    rep.per_segment.push_back(std::move(err));
  }
  rep.accuracy_digits =
      rep.max_error > 0 ? std::min(16.0, -std::log10(rep.max_error)) : 16.0;
  return rep;
}

// --- interior consistency checks ------------------------------------------

struct StencilResult {
  double value = 0;      // the stencil combination itself
  double magnitude = 0;  // sum of |term|, same scaling — cancellation yardstick
  double relative() const { return magnitude > 0 ? std::abs(value) / magnitude : 0.0; }
};

// 13-point biharmonic stencil on psi:
//   [20 psi0 - 8 (4 nearest) + 2 (4 diagonals) + (4 at distance 2h)] / h^4.
// For a true solution the value is round-off deep cancellation; relative()
// reports how many of the summed digits cancel.
inline StencilResult biharmonic_stencil(const StokesSolution& s, Cplx z, double h) {
  const Cplx ih(0, h);
  const std::vector<std::pair<double, Cplx>> taps = {
      {20, z},
      {-8, z + h}, {-8, z - h}, {-8, z + ih}, {-8, z - ih},
      {2, z + h + ih}, {2, z + h - ih}, {2, z - h + ih}, {2, z - h - ih},
      {1, z + 2 * h}, {1, z - 2 * h}, {1, z + 2.0 * ih}, {1, z - 2.0 * ih}};
  CVec Zs(taps.size());
  for (size_t k = 0; k < taps.size(); ++k) Zs(k) = taps[k].second;
  const FieldArrays fa = fields(s, Zs);
  StencilResult r;
  const double h4 = h * h * h * h;
  for (size_t k = 0; k < taps.size(); ++k) {
    const double term = taps[k].first * fa.psi(k) / h4;
    r.value += term;
    r.magnitude += std::abs(term);
  }
  return r;
}

// --- branch-cut diagnostics -----------------------------------------------

// Each log term carries a branch cut along {center - t : t > 0}. Crossing it
// jumps psi by the position-independent constant 2*pi*Re[g0 + conj(f0)*c]
// while u, v, p and omega stay continuous. This probes straddling points on
// the cut and reports the worst deviation from that prediction.
struct BranchCutProbe {
  int hole = 0;
  Cplx center;
  double psi_jump_predicted = 0;
  double psi_jump_measured = 0;   // probe value farthest from the prediction
  double psi_jump_error = 0;      // |measured - predicted|, worst probe
  double velocity_jump = 0;       // worst |[u]|, |[v]| across the cut
  int probes = 0;                 // 0 means no fluid point found on the cut
};

inline std::vector<BranchCutProbe> branch_cut_check(const StokesSolution& s) {
  std::vector<BranchCutProbe> out;
  const double scale = domain_scale(s.domain);
  const double eps = 1e-8 * scale;
  const BBox bb = domain_bbox(s.domain);

  for (size_t h = 0; h < s.centers.size(); ++h) {
    const Cplx c = s.centers[h];
    BranchCutProbe pr;
    pr.hole = static_cast<int>(h);
    pr.center = c;
    pr.psi_jump_predicted =
        2 * kPi * std::real(s.coeffs.g0[h] + std::conj(s.coeffs.f0[h]) * c);

    // walk leftward from the center; keep straddling pairs inside the fluid
    const double tmax = c.real() - bb.x0 + 0.25 * scale;
    std::vector<Cplx> above, below;
    for (int k = 1; k <= 200 && static_cast<int>(above.size()) < 8; ++k) {
      const double t = tmax * k / 200.0;
      const Cplx z = c - t;
      const Cplx za = z + Cplx(0, eps), zb = z - Cplx(0, eps);
      if (s.region.in_fluid(za) && s.region.in_fluid(zb) &&
          s.region.boundary_distance(z) > 16 * eps) {
        above.push_back(za);
        below.push_back(zb);
      }
    }
    pr.probes = static_cast<int>(above.size());
    if (pr.probes > 0) {
      CVec Za(pr.probes), Zb(pr.probes);
      for (int k = 0; k < pr.probes; ++k) {
        Za(k) = above[k];
        Zb(k) = below[k];
      }
      const FieldArrays fa = fields(s, Za), fb = fields(s, Zb);
      pr.psi_jump_measured = pr.psi_jump_predicted;
      for (int k = 0; k < pr.probes; ++k) {
        const double jump = fa.psi(k) - fb.psi(k);
        const double dev = std::abs(jump - pr.psi_jump_predicted);
        if (dev >= pr.psi_jump_error) {
          pr.psi_jump_error = dev;
          pr.psi_jump_measured = jump;
        }
        pr.velocity_jump = std::max({pr.velocity_jump, std::abs(fa.u(k) - fb.u(k)),
                                     std::abs(fa.v(k) - fb.v(k))});
      }
    }
    out.push_back(pr);
  }
  return out;
}

// --- grid evaluation --------------------------------------------------------

struct FieldGrid {
  BBox bbox;
  int nx = 0, ny = 0;
  // row i = y index (ascending), column j = x index
  Eigen::Array<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic> mask;
  RMat psi, u, v, p, omega;

  double x(int j) const { return nx > 1 ? bbox.x0 + (bbox.x1 - bbox.x0) * j / (nx - 1) : bbox.x0; }
  double y(int i) const { return ny > 1 ? bbox.y0 + (bbox.y1 - bbox.y0) * i / (ny - 1) : bbox.y0; }
};

inline FieldGrid grid_eval(const StokesSolution& s, int nx, int ny) {
  if (nx < 2 || ny < 2) throw SolverError("grid evaluation needs at least 2x2 points");
  FieldGrid g;
  g.bbox = domain_bbox(s.domain);
  g.nx = nx;
  g.ny = ny;
  g.mask.setZero(ny, nx);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  g.psi = RMat::Constant(ny, nx, nan);
  g.u = g.psi;
  g.v = g.psi;
  g.p = g.psi;
  g.omega = g.psi;

  std::vector<Cplx> pts;
  std::vector<std::pair<int, int>> where;
  for (int i = 0; i < ny; ++i)
    for (int j = 0; j < nx; ++j) {
      const Cplx z(g.x(j), g.y(i));
      if (s.region.in_fluid(z)) {
        g.mask(i, j) = 1;
        pts.push_back(z);
        where.emplace_back(i, j);
      }
    }
  if (!pts.empty()) {
    CVec Zs = Eigen::Map<CVec>(pts.data(), pts.size());
    const FieldArrays fa = fields(s, Zs);
    for (size_t k = 0; k < where.size(); ++k) {
      const auto [i, j] = where[k];
      g.psi(i, j) = fa.psi(k);
      g.u(i, j) = fa.u(k);
      g.v(i, j) = fa.v(k);
      g.p(i, j) = fa.p(k);
      g.omega(i, j) = fa.omega(k);
    }
  }
  return g;
}

}  // namespace stokes2d
