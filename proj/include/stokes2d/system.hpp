#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "basis.hpp"
#include "geometry.hpp"
#include "linalg.hpp"
#include "types.hpp"

namespace stokes2d {

// Unknown layout. Complex unknowns are ordered
//   [cf_0..cf_{n-1} | cg_0..cg_{n-1} | f0 per hole | g0 per hole]
// and the real system stacks all real parts first, then all imaginary parts.
struct ColumnMap {
  int ncols = 0;   // complex basis columns (same count for f and g)
  int nholes = 0;  // log-term blocks, one per hole

  int ncplx() const { return 2 * ncols + 2 * nholes; }
  int nreal() const { return 2 * ncplx(); }
  int cf(int j) const { return j; }
  int cg(int j) const { return ncols + j; }
  int f0(int h) const { return 2 * ncols + h; }
  int g0(int h) const { return 2 * ncols + nholes + h; }
  int re(int cplx_idx) const { return cplx_idx; }
  int im(int cplx_idx) const { return ncplx() + cplx_idx; }
};

// Boundary rows for one functional at the given samples. The five field
// functionals are linear in the Goursat data (f, g) = (sum cf_j q_j +
// sum_h f0_h log(z-c_h), sum cg_j q_j + sum_h [g0_h log(z-c_h) -
// conj(f0_h)((z-c_h)log(z-c_h) - z)]):
//
//   psi   = Im[conj(z) f + g]
//   u     = Re[conj(z) f' - f + g']
//   v     = Im[-conj(z) f' - f - g']
//   p     = Re[4 f']
//   omega = Im[-4 f']
//
// For a complex unknown gamma entering a row as A*gamma + B*conj(gamma), the
// real/imaginary columns receive
//   Im-type rows:  (Im[A+B], Re[A-B])
//   Re-type rows:  (Re[A+B], -Im[A-B]).
inline RMat functional_rows(FieldKind kind, const CVec& Zs, const BasisEval& be,
                            const std::vector<Cplx>& log_centers, const ColumnMap& map) {
  const Eigen::Index M = Zs.size();
  if (be.R0.rows() != M || be.R1.rows() != M)
    throw SolverError("basis evaluation rows do not match the sample count");
  if (map.ncols != be.R0.cols())
    throw SolverError("column map does not match the basis width");
  if (map.nholes != static_cast<int>(log_centers.size()))
    throw SolverError("column map does not match the log-center count");

  RMat out = RMat::Zero(M, map.nreal());
  const CVec cZ = Zs.conjugate();

  CMat CF, CG;
  switch (kind) {
    case FieldKind::Psi:
      CF = cZ.asDiagonal() * be.R0;
      CG = be.R0;
      break;
    case FieldKind::U:
      CF = cZ.asDiagonal() * be.R1 - be.R0;
      CG = be.R1;
      break;
    case FieldKind::V:
      CF = -(cZ.asDiagonal() * be.R1) - be.R0;
      CG = -be.R1;
      break;
    case FieldKind::P:
      CF = 4.0 * be.R1;
      CG = CMat::Zero(M, map.ncols);
      break;
    case FieldKind::Omega:
      CF = -4.0 * be.R1;
      CG = CMat::Zero(M, map.ncols);
      break;
  }
  const bool im_kind =
      (kind == FieldKind::Psi || kind == FieldKind::V || kind == FieldKind::Omega);

  auto put_plain = [&](int c0, const CMat& C) {  // columns without a conj part
    if (im_kind) {
      out.middleCols(map.re(c0), C.cols()) = C.imag();
      out.middleCols(map.im(c0), C.cols()) = C.real();
    } else {
      out.middleCols(map.re(c0), C.cols()) = C.real();
      out.middleCols(map.im(c0), C.cols()) = -C.imag();
    }
  };
  put_plain(map.cf(0), CF);
  put_plain(map.cg(0), CG);

  for (int h = 0; h < map.nholes; ++h) {
    CVec w = Zs.array() - log_centers[h];
    for (Eigen::Index i = 0; i < M; ++i)
      if (w(i) == Cplx(0, 0))
        throw SolverError("boundary sample coincides with a log center");
    const CVec oZ = w.cwiseInverse();
    const CVec lZ = w.array().log();

    CVec Af0, Bf0, Ag0;  // f0 enters as A*f0 + B*conj(f0); g0 has no conj part
    switch (kind) {
      case FieldKind::Psi:
        Af0 = cZ.cwiseProduct(lZ);
        Bf0 = -(w.cwiseProduct(lZ) - Zs);
        Ag0 = lZ;
        break;
      case FieldKind::U:
        Af0 = cZ.cwiseProduct(oZ) - lZ;
        Bf0 = -lZ;
        Ag0 = oZ;
        break;
      case FieldKind::V:
        Af0 = -cZ.cwiseProduct(oZ) - lZ;
        Bf0 = lZ;
        Ag0 = -oZ;
        break;
      case FieldKind::P:
        Af0 = 4.0 * oZ;
        Bf0 = CVec::Zero(M);
        Ag0 = CVec::Zero(M);
        break;
      case FieldKind::Omega:
        Af0 = -4.0 * oZ;
        Bf0 = CVec::Zero(M);
        Ag0 = CVec::Zero(M);
        break;
    }
    if (im_kind) {
      out.col(map.re(map.f0(h))) = (Af0 + Bf0).imag();
      out.col(map.im(map.f0(h))) = (Af0 - Bf0).real();
      out.col(map.re(map.g0(h))) = Ag0.imag();
      out.col(map.im(map.g0(h))) = Ag0.real();
    } else {
      out.col(map.re(map.f0(h))) = (Af0 + Bf0).real();
      out.col(map.im(map.f0(h))) = -(Af0 - Bf0).imag();
      out.col(map.re(map.g0(h))) = Ag0.real();
      out.col(map.im(map.g0(h))) = -Ag0.imag();
    }
  }
  return out;
}

// Flattened collocation plan over every boundary segment.
struct SamplePlan {
  CVec points;
  std::vector<int> seg_id;      // flattened segment index per sample
  std::vector<double> params;   // parameter of the sample on its segment
  std::vector<double> spacing;  // local arclength spacing (row weighting)
  std::vector<const Segment*> segments;
};

inline SamplePlan plan_samples(const Domain& d) {
  SamplePlan plan;
  plan.segments = all_segments(d);
  std::vector<Cplx> pts;
  for (size_t s = 0; s < plan.segments.size(); ++s) {
    const Segment& seg = *plan.segments[s];
    const auto ts = sample_params(seg);
    const size_t first = pts.size();
    for (const double t : ts) {
      pts.push_back(seg_point(seg, t));
      plan.seg_id.push_back(static_cast<int>(s));
      plan.params.push_back(t);
    }
    // local spacing from neighbouring samples on the same segment
    const size_t n = ts.size();
    for (size_t k = 0; k < n; ++k) {
      double dl = 0, dr = 0;
      if (k > 0) dl = std::abs(pts[first + k] - pts[first + k - 1]);
      if (k + 1 < n) dr = std::abs(pts[first + k + 1] - pts[first + k]);
      if (k == 0) dl = dr;
      if (k + 1 == n) dr = dl;
      plan.spacing.push_back((dl + dr) / 2);
    }
  }
  if (pts.empty()) throw GeometryError("domain produced no boundary samples");
  plan.points = Eigen::Map<CVec>(pts.data(), pts.size());
  return plan;
}

inline std::vector<Cplx> log_centers(const Domain& d) {
  std::vector<Cplx> c;
  c.reserve(d.holes.size());
  for (const auto& h : d.holes) c.push_back(h.laurent_center);
  return c;
}

struct StokesLinearSystem {
  RMat A;   // 2M x nreal; rows [0,M) first condition, [M,2M) second
  RVec rhs;
  ColumnMap map;
  std::vector<int> row_seg;  // segment id per row
  int nsamples = 0;
};

// Collect both boundary conditions of every sample into one real
// least-squares system. Rows are grouped internally by functional so each of
// the five row kinds is built once per condition slot.
inline StokesLinearSystem assemble(const Domain& d, const SamplePlan& plan,
                                   const BasisEval& be, bool weight_rows = false) {
  const Eigen::Index M = plan.points.size();
  if (be.R0.rows() != M) throw SolverError("basis evaluation does not cover the sample plan");

  StokesLinearSystem sys;
  sys.map.ncols = static_cast<int>(be.R0.cols());
  sys.map.nholes = static_cast<int>(d.holes.size());
  sys.nsamples = static_cast<int>(M);
  sys.A = RMat::Zero(2 * M, sys.map.nreal());
  sys.rhs = RVec::Zero(2 * M);
  sys.row_seg.resize(2 * M);
  const auto centers = log_centers(d);

  for (int cond = 0; cond < 2; ++cond) {
    for (const FieldKind kind : {FieldKind::Psi, FieldKind::U, FieldKind::V, FieldKind::P,
                                 FieldKind::Omega}) {
      std::vector<int> idx;
      for (Eigen::Index i = 0; i < M; ++i)
        if (plan.segments[plan.seg_id[i]]->bc[cond].functional == kind)
          idx.push_back(static_cast<int>(i));
      if (idx.empty()) continue;

      CVec Zs(idx.size());
      for (size_t k = 0; k < idx.size(); ++k) Zs(k) = plan.points(idx[k]);
      BasisEval sub;
      sub.R0 = be.R0(idx, Eigen::all);
      sub.R1 = be.R1(idx, Eigen::all);
      const RMat rows = functional_rows(kind, Zs, sub, centers, sys.map);

      for (size_t k = 0; k < idx.size(); ++k) {
        const int i = idx[k];
        const Segment& seg = *plan.segments[plan.seg_id[i]];
        if (!seg.bc[cond].target)
          throw SolverError("segment '" + seg.name + "' is missing a boundary target");
        const Eigen::Index row = cond * M + i;
        sys.A.row(row) = rows.row(k);
        sys.rhs(row) = seg.bc[cond].target(plan.points(i));
        sys.row_seg[row] = plan.seg_id[i];
      }
    }
  }

  if (weight_rows) {
    double mean = 0;
    for (const double s : plan.spacing) mean += s;
    mean /= double(M);
    if (mean > 0) {
      for (Eigen::Index i = 0; i < M; ++i) {
        // sqrt-of-spacing rows approximate an arclength L2 norm, stopping
        // sample clusters from dominating the fit by head count. The floor
        // keeps the deepest rows of a cluster from losing their say
        // entirely: unpinned, the fit's value at the clustered feature
        // drifts to many times the residual elsewhere.
        const double w = std::sqrt(std::max(plan.spacing[i], mean / 25) / mean);
        sys.A.row(i) *= w;
        sys.rhs(i) *= w;
        sys.A.row(M + i) *= w;
        sys.rhs(M + i) *= w;
      }
    }
  }
  return sys;
}

struct GoursatCoefficients {
  CVec cf, cg;
  std::vector<Cplx> f0, g0;  // per hole
};

struct SegmentResidual {
  std::string name;
  int seg_id = 0;
  double max_abs = 0;
  double rms = 0;
};

struct SolveReport {
  double max_residual = 0;
  std::vector<SegmentResidual> per_segment;
  int rank = 0;
  int columns = 0;
  int rows = 0;
  bool rank_deficient = false;  // expected when gauge directions are unpinned
  bool underdetermined = false;
};

inline std::pair<GoursatCoefficients, SolveReport> solve_system(const StokesLinearSystem& sys,
                                                                double rcond = 1e-12) {
  if (!sys.A.allFinite() || !sys.rhs.allFinite())
    throw SolverError("non-finite entries in the assembled system");

  SolveReport rep;
  rep.rows = static_cast<int>(sys.A.rows());
  rep.columns = static_cast<int>(sys.A.cols());
  rep.underdetermined = rep.rows < rep.columns;

  const auto lsq = solve_least_squares(sys.A, sys.rhs, rcond);
  rep.rank = static_cast<int>(lsq.rank);
  rep.rank_deficient = rep.rank < rep.columns;

  const RVec resid = sys.A * lsq.x - sys.rhs;
  rep.max_residual = resid.cwiseAbs().maxCoeff();

  // per-segment residual table
  int nseg = 0;
  for (const int s : sys.row_seg) nseg = std::max(nseg, s + 1);
  std::vector<double> mx(nseg, 0), sum2(nseg, 0);
  std::vector<int> cnt(nseg, 0);
  for (Eigen::Index r = 0; r < resid.size(); ++r) {
    const int s = sys.row_seg[r];
    mx[s] = std::max(mx[s], std::abs(resid(r)));
    sum2[s] += resid(r) * resid(r);
    ++cnt[s];
  }
  for (int s = 0; s < nseg; ++s)
    rep.per_segment.push_back(
        {"", s, mx[s], cnt[s] ? std::sqrt(sum2[s] / cnt[s]) : 0.0});

  GoursatCoefficients co;
  const ColumnMap& map = sys.map;
  co.cf.resize(map.ncols);
  co.cg.resize(map.ncols);
  for (int j = 0; j < map.ncols; ++j) {
    co.cf(j) = Cplx(lsq.x(map.re(map.cf(j))), lsq.x(map.im(map.cf(j))));
    co.cg(j) = Cplx(lsq.x(map.re(map.cg(j))), lsq.x(map.im(map.cg(j))));
  }
  for (int h = 0; h < map.nholes; ++h) {
    co.f0.push_back(Cplx(lsq.x(map.re(map.f0(h))), lsq.x(map.im(map.f0(h)))));
    co.g0.push_back(Cplx(lsq.x(map.re(map.g0(h))), lsq.x(map.im(map.g0(h)))));
  }
  return {co, rep};
}

}  // namespace stokes2d
