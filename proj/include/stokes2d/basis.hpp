#pragma once

#include <cmath>
#include <string>
#include <variant>
#include <vector>

#include "linalg.hpp"
#include "types.hpp"

namespace stokes2d {

// One generated column family of the rational approximation space.
//
//   Polynomial: 1, z, z^2, ...            (multiplier z each step)
//   Laurent:    1, 1/(z-c), 1/(z-c)^2, ...(multiplier 1/(z-c) each step)
//   PoleGroup:  successive products 1/((z-b1)...(z-bk)), one new pole per
//               step; together with the constant this spans the same space as
//               the partial fractions 1/(z-b_k) for distinct poles.
//   Edge:       chi(z)*(z-a), chi(z)*(z-a)^2, ... with
//               chi = sqrt((z-a)(z-b)); near a these are the half-integer
//               powers (z-a)^{3/2}, (z-a)^{5/2}, ...
struct PolynomialFamily {
  int degree = 0;
};
struct LaurentFamily {
  Cplx center;
  int degree = 0;
};
struct PoleGroupFamily {
  std::vector<Cplx> poles;
};
// Half-integer powers for the edge of a thin obstacle. The flow past such an
// edge carries (z-a)^{1/2}, (z-a)^{3/2}, ... there, and clustered poles
// cannot reach it: a sliver of solid only ~d^{3/2} wide at depth d leaves no
// room for a pole that is not numerically on the boundary. chi pairs the edge
// with a second branch point buried in the solid so the cut is the segment
// [a,b] and every function is single-valued in the fluid. The chi^1 member's
// derivative blows up at the edge, but pairings of it between the two Goursat
// functions keep the velocity finite, and the fit settles on those; without
// the member an entire branch of the edge behaviour is unreachable.
struct EdgeFamily {
  Cplx edge;    // branch point a, on the boundary
  Cplx anchor;  // branch point b, strictly inside the solid
  int count = 0;
};
using BasisFamily = std::variant<PolynomialFamily, LaurentFamily, PoleGroupFamily, EdgeFamily>;

inline int family_degree(const BasisFamily& f) {
  if (const auto* p = std::get_if<PolynomialFamily>(&f)) return p->degree;
  if (const auto* l = std::get_if<LaurentFamily>(&f)) return l->degree;
  if (const auto* e = std::get_if<EdgeFamily>(&f)) return e->count;
  return static_cast<int>(std::get<PoleGroupFamily>(f).poles.size());
}

// Columns the family contributes to the concatenated basis: non-polynomial
// families drop their leading constant so only one constant column survives.
inline int family_columns(const BasisFamily& f) {
  const int d = family_degree(f);
  return std::holds_alternative<PolynomialFamily>(f) ? d + 1 : d;
}

// The orthogonalization is fully described by the family and the Hessenberg
// recurrence coefficients: column k is reproduced anywhere from
//   Q_k = (m_k .* Q_{k-1} - sum_j H(j,k-1) Q_j) / H(k,k-1).
struct OrthogonalBasisRecord {
  BasisFamily family;
  CMat hessenberg;  // (d+1) x d, subdiagonal real positive
};

namespace detail {

// multiplier m_k(Z) and its z-derivative for step k (1-based)
inline void family_step(const BasisFamily& f, int k, const CVec& Z, CVec& m, CVec& dm) {
  if (std::holds_alternative<PolynomialFamily>(f)) {
    m = Z;
    dm = CVec::Ones(Z.size());
    return;
  }
  if (const auto* ef = std::get_if<EdgeFamily>(&f)) {
    // Both square roots are taken in coordinates aligned with b-a, so their
    // sign flips cancel everywhere except on the segment [a,b]: that segment
    // is the entire branch cut of chi = sqrt((z-a)(z-b)).
    const Cplx span = ef->anchor - ef->edge;
    const double S = std::abs(span);
    if (!(S > 0)) throw BasisError("edge family needs two distinct branch points");
    const Cplx e = span / S;
    if (k == 1) {
      m.resize(Z.size());
      dm.resize(Z.size());
      for (Eigen::Index i = 0; i < Z.size(); ++i) {
        const Cplx za = Z(i) - ef->edge, zb = Z(i) - ef->anchor;
        const Cplx su = std::sqrt(za / e), sw = std::sqrt(zb / e);
        const Cplx chi = e * su * sw;  // chi^2 = (z-a)(z-b)
        // chi' = ((z-a)+(z-b))/(2 chi); su/sw and sw/su are the two halves
        // of that ratio. It is infinite at the edge itself, which is why
        // samples and probes never land exactly on an edge point.
        m(i) = chi / S;
        dm(i) = (su / sw + sw / su) / (2.0 * S);
      }
    } else {
      m = (Z.array() - ef->edge) / S;
      dm = CVec::Constant(Z.size(), Cplx(1.0 / S, 0));
    }
    return;
  }
  const Cplx pole = std::holds_alternative<LaurentFamily>(f)
                        ? std::get<LaurentFamily>(f).center
                        : std::get<PoleGroupFamily>(f).poles[k - 1];
  CVec w = Z.array() - pole;
  for (Eigen::Index i = 0; i < w.size(); ++i)
    if (w(i) == Cplx(0, 0))
      throw BasisError("evaluation point coincides with a basis pole/center");
  m = w.cwiseInverse();
  dm = -m.cwiseProduct(m);
}

inline double discrete_norm(const CVec& q) { return q.norm() / std::sqrt(double(q.size())); }

inline OrthogonalBasisRecord arnoldi_over(const CVec& Z, const BasisFamily& fam);

}  // namespace detail

// Radius of the circle used to balance a Laurent family: the closest
// approach of the samples to the center.
inline double laurent_scale(const CVec& Z, Cplx center) {
  const double s = (Z.array() - center).abs().minCoeff();
  if (!(s > 0)) throw BasisError("Laurent center coincides with a sample point");
  return s;
}

inline CVec laurent_circle(Cplx center, double s, int degree) {
  const int ns = std::max(4 * (degree + 1), 256);
  CVec Zc(ns);
  for (int k = 0; k < ns; ++k) Zc(k) = center + s * std::exp(Cplx(0, 2 * kPi * k / ns));
  return Zc;
}

// Orthogonalize one family over the boundary samples Z under the discrete
// mean inner product <u,v> = (u^H v)/M. A second Gram-Schmidt sweep runs
// whenever the first pass left more than 1e-8 relative residue; its
// corrections fold into H so the evaluation recurrence stays exact.
//
// Laurent families are the exception: inverse powers over a sample set that
// mixes near and far points develop an enormous dynamic range, and while the
// Arnoldi factorization itself succeeds, re-running its recurrence amplifies
// roundoff like (max|1/(z-c)| / h_sub)^k — tens of digits lost by degree 80.
// On a circle around the center the inverse powers are already orthogonal,
// so orthogonalizing there costs nothing in span, makes H essentially
// bidiagonal, and turns the recurrence into a contraction for every point
// outside the circle. The circle radius is the samples' closest approach, so
// all fluid-side evaluation points of a star-shaped hole lie on or outside it.
inline OrthogonalBasisRecord orthogonalize_family(const CVec& Z, const BasisFamily& fam) {
  if (Z.size() == 0) throw BasisError("cannot orthogonalize over an empty sample set");
  if (const auto* lf = std::get_if<LaurentFamily>(&fam)) {
    const double s = laurent_scale(Z, lf->center);
    return detail::arnoldi_over(laurent_circle(lf->center, s, lf->degree), fam);
  }
  return detail::arnoldi_over(Z, fam);
}

namespace detail {

inline OrthogonalBasisRecord arnoldi_over(const CVec& Z, const BasisFamily& fam) {
  const Eigen::Index M = Z.size();
  if (M == 0) throw BasisError("cannot orthogonalize over an empty sample set");
  const int d = family_degree(fam);
  if (d < 0) throw BasisError("negative basis degree");

  CMat Q(M, d + 1);
  CMat H = CMat::Zero(d + 1, d);
  Q.col(0).setOnes();
  CVec m, dm;
  for (int k = 1; k <= d; ++k) {
    detail::family_step(fam, k, Z, m, dm);
    CVec q = m.cwiseProduct(Q.col(k - 1));
    const double norm0 = detail::discrete_norm(q);
    for (int j = 0; j < k; ++j) {
      const Cplx h = Q.col(j).dot(q) / double(M);
      H(j, k - 1) += h;
      q -= h * Q.col(j);
    }
    double loss2 = 0;
    CVec h2(k);
    for (int j = 0; j < k; ++j) {
      h2(j) = Q.col(j).dot(q) / double(M);
      loss2 += std::norm(h2(j));
    }
    if (std::sqrt(loss2) > 1e-8 * norm0) {
      for (int j = 0; j < k; ++j) {
        H(j, k - 1) += h2(j);
        q -= h2(j) * Q.col(j);
      }
    }
    const double nq = detail::discrete_norm(q);
    if (!(nq > 1e-14 * std::max(norm0, 1.0)))
      throw BasisError("basis columns are numerically dependent at step " + std::to_string(k) +
                       " (too few samples or coincident poles)");
    H(k, k - 1) = nq;
    Q.col(k) = q / nq;
  }
  return {fam, H};
}

}  // namespace detail

inline std::vector<OrthogonalBasisRecord> orthogonalize_basis(
    const CVec& Z, const std::vector<BasisFamily>& families) {
  std::vector<OrthogonalBasisRecord> recs;
  recs.reserve(families.size());
  for (const auto& f : families) recs.push_back(orthogonalize_family(Z, f));
  return recs;
}

inline int total_columns(const std::vector<OrthogonalBasisRecord>& recs) {
  int n = 0;
  for (const auto& r : recs) n += family_columns(r.family);
  return n;
}

// Basis values and first derivatives at the evaluation points, columns
// concatenated family by family (polynomial families keep their constant,
// the others drop it).
struct BasisEval {
  CMat R0, R1;
};

namespace detail {

inline void eval_family(const OrthogonalBasisRecord& rec, const CVec& Z, CMat& Q, CMat& D) {
  const int d = family_degree(rec.family);
  const Eigen::Index M = Z.size();
  Q.resize(M, d + 1);
  D = CMat::Zero(M, d + 1);
  Q.col(0).setOnes();
  const CMat& H = rec.hessenberg;
  CVec m, dm;
  for (int k = 1; k <= d; ++k) {
    family_step(rec.family, k, Z, m, dm);
    CVec q = m.cwiseProduct(Q.col(k - 1));
    CVec dq = m.cwiseProduct(D.col(k - 1)) + dm.cwiseProduct(Q.col(k - 1));
    for (int j = 0; j < k; ++j) {
      q -= H(j, k - 1) * Q.col(j);
      dq -= H(j, k - 1) * D.col(j);
    }
    Q.col(k) = q / H(k, k - 1);
    D.col(k) = dq / H(k, k - 1);
  }
}

}  // namespace detail

inline BasisEval evaluate_basis(const std::vector<OrthogonalBasisRecord>& recs, const CVec& Z) {
  if (Z.size() == 0) throw BasisError("cannot evaluate basis at an empty point set");
  BasisEval out;
  const int total = total_columns(recs);
  out.R0.resize(Z.size(), total);
  out.R1.resize(Z.size(), total);
  int at = 0;
  CMat Q, D;
  for (const auto& rec : recs) {
    detail::eval_family(rec, Z, Q, D);
    const int ncols = family_columns(rec.family);
    const int skip = std::holds_alternative<PolynomialFamily>(rec.family) ? 0 : 1;
    out.R0.middleCols(at, ncols) = Q.middleCols(skip, ncols);
    out.R1.middleCols(at, ncols) = D.middleCols(skip, ncols);
    at += ncols;
  }
  return out;
}

}  // namespace stokes2d
