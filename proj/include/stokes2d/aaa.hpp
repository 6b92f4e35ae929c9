#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "geometry.hpp"
#include "linalg.hpp"
#include "types.hpp"

namespace stokes2d {

// Rational interpolant in barycentric form: r = N/D with
//   N(z) = sum_j w_j f_j/(z - z_j),  D(z) = sum_j w_j/(z - z_j).
struct BarycentricRational {
  CVec support, values, weights;

  int degree() const { return static_cast<int>(support.size()) - 1; }

  Cplx operator()(Cplx z) const {
    Cplx num = 0, den = 0;
    for (Eigen::Index j = 0; j < support.size(); ++j) {
      if (z == support(j)) return values(j);  // interpolation points hit exactly
      const Cplx c = weights(j) / (z - support(j));
      num += c * values(j);
      den += c;
    }
    return num / den;
  }
};

namespace detail {

// weights = right singular vector of the smallest singular value of the
// Loewner matrix taken over the non-support rows
inline CVec loewner_weights(const CVec& Z, const CVec& F, const std::vector<int>& sup,
                            const std::vector<char>& is_sup) {
  const Eigen::Index M = Z.size();
  const int m = static_cast<int>(sup.size());
  const Eigen::Index rows = M - m;
  if (rows == 0) return CVec::Ones(m) / std::sqrt(double(m));
  CMat L(rows, m);
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < M; ++i) {
    if (is_sup[i]) continue;
    for (int j = 0; j < m; ++j) L(r, j) = (F(i) - F(sup[j])) / (Z(i) - Z(sup[j]));
    ++r;
  }
  return smallest_singular_vector(std::move(L));
}

}  // namespace detail

// Greedy adaptive fit: repeatedly promote the worst-fit sample to the support
// set (first index wins ties, keeping runs bit-reproducible), re-solve for
// weights, stop when the residual drops below tol*max|F| or the degree cap is
// reached.
inline BarycentricRational aaa_fit(const CVec& Z, const CVec& F, double tol = 1e-8,
                                   int max_degree = 100) {
  const Eigen::Index M = Z.size();
  if (F.size() != M) throw AaaError("sample and value vectors differ in length");
  if (M < 2) throw AaaError("need at least two samples to fit");
  if (tol < 0) throw AaaError("negative tolerance");
  if (max_degree < 0) throw AaaError("negative degree cap");
  {
    std::vector<int> order(M);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      return Z(a).real() != Z(b).real() ? Z(a).real() < Z(b).real()
                                        : Z(a).imag() < Z(b).imag();
    });
    for (Eigen::Index k = 1; k < M; ++k)
      if (Z(order[k]) == Z(order[k - 1])) throw AaaError("duplicate sample points");
  }

  const double fscale = F.cwiseAbs().maxCoeff();
  std::vector<int> sup;
  std::vector<char> is_sup(M, 0);
  CVec R = CVec::Constant(M, F.mean());
  CVec w;
  while (true) {
    int jstar = -1;
    double worst = -1;
    for (Eigen::Index i = 0; i < M; ++i) {
      if (is_sup[i]) continue;
      const double e = std::abs(F(i) - R(i));
      if (e > worst) {
        worst = e;
        jstar = static_cast<int>(i);
      }
    }
    if (jstar < 0) break;  // every sample became a support point
    sup.push_back(jstar);
    is_sup[jstar] = 1;
    const int m = static_cast<int>(sup.size());

    w = detail::loewner_weights(Z, F, sup, is_sup);

    double err = 0;
    for (Eigen::Index i = 0; i < M; ++i) {
      if (is_sup[i]) continue;
      Cplx num = 0, den = 0;
      for (int j = 0; j < m; ++j) {
        const Cplx c = w(j) / (Z(i) - Z(sup[j]));
        num += c * F(sup[j]);
        den += c;
      }
      R(i) = num / den;
      err = std::max(err, std::abs(F(i) - R(i)));
    }
    if (err <= tol * fscale || m == max_degree + 1 || m == M) break;
  }

  BarycentricRational rep;
  const int m = static_cast<int>(sup.size());
  rep.support.resize(m);
  rep.values.resize(m);
  rep.weights = w;
  for (int j = 0; j < m; ++j) {
    rep.support(j) = Z(sup[j]);
    rep.values(j) = F(sup[j]);
  }
  return rep;
}

struct PoleReport {
  std::vector<Cplx> poles;
  std::vector<Cplx> residues;  // N(p)/D'(p) at each pole
};

// Poles of the barycentric denominator: eigenvalues of the (m+2) arrowhead
// pencil; the bordering rows add exactly two infinite eigenvalues, which are
// dropped as the two of smallest |beta|.
inline PoleReport compute_poles(const BarycentricRational& r) {
  PoleReport out;
  const int mp1 = static_cast<int>(r.support.size());
  if (mp1 <= 1) return out;  // a constant has no poles
  const int n = mp1 + 1;
  CMat A = CMat::Zero(n, n), B = CMat::Zero(n, n);
  for (int j = 0; j < mp1; ++j) {
    A(0, j + 1) = r.weights(j);
    A(j + 1, 0) = 1;
    A(j + 1, j + 1) = r.support(j);
    B(j + 1, j + 1) = 1;
  }
  const auto eig = generalized_eigenvalues(A, B);

  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
    return std::abs(eig.beta(a)) < std::abs(eig.beta(b));
  });
  for (int k = 2; k < n; ++k) {
    const Cplx pole = eig.alpha(idx[k]) / eig.beta(idx[k]);
    if (std::isfinite(pole.real()) && std::isfinite(pole.imag())) out.poles.push_back(pole);
  }
  std::sort(out.poles.begin(), out.poles.end(), [](Cplx a, Cplx b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });

  out.residues.reserve(out.poles.size());
  for (const Cplx p : out.poles) {
    Cplx num = 0, dden = 0;
    for (int j = 0; j < mp1; ++j) {
      const Cplx d = p - r.support(j);
      num += r.weights(j) * r.values(j) / d;
      dden -= r.weights(j) / (d * d);
    }
    Cplx res = num / dden;
    // a pole numerically on top of a support point is spurious by definition
    if (!std::isfinite(res.real()) || !std::isfinite(res.imag())) res = 0;
    out.residues.push_back(res);
  }
  return out;
}

// Drop spurious pole/zero doublets: a pole is spurious when its residue is
// tiny relative to the data scale and its separation from the samples. The
// support point nearest each spurious pole is removed and the weights are
// refit once. residue_tol <= 0 disables the cleanup.
inline BarycentricRational froissart_cleanup(const BarycentricRational& rep, const CVec& Z,
                                             const CVec& F, double residue_tol = 1e-13) {
  if (residue_tol <= 0 || rep.degree() < 1) return rep;
  const double fscale = F.cwiseAbs().maxCoeff();
  if (!(fscale > 0)) return rep;

  const PoleReport pr = compute_poles(rep);
  const int mp1 = static_cast<int>(rep.support.size());
  std::vector<char> drop(mp1, 0);
  int ndrop = 0;
  for (size_t k = 0; k < pr.poles.size(); ++k) {
    double dist = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < Z.size(); ++i)
      dist = std::min(dist, std::abs(pr.poles[k] - Z(i)));
    if (std::abs(pr.residues[k]) >= residue_tol * fscale * dist) continue;
    int jn = 0;
    double dn = std::numeric_limits<double>::infinity();
    for (int j = 0; j < mp1; ++j) {
      const double d = std::abs(pr.poles[k] - rep.support(j));
      if (d < dn) {
        dn = d;
        jn = j;
      }
    }
    if (!drop[jn]) {
      drop[jn] = 1;
      ++ndrop;
    }
  }
  if (ndrop == 0 || ndrop == mp1) return rep;

  BarycentricRational out;
  out.support.resize(mp1 - ndrop);
  out.values.resize(mp1 - ndrop);
  std::vector<int> sup;
  std::vector<char> is_sup(Z.size(), 0);
  int at = 0;
  for (int j = 0; j < mp1; ++j) {
    if (drop[j]) continue;
    out.support(at) = rep.support(j);
    out.values(at) = rep.values(j);
    ++at;
    for (Eigen::Index i = 0; i < Z.size(); ++i)
      if (!is_sup[i] && Z(i) == rep.support(j)) {
        sup.push_back(static_cast<int>(i));
        is_sup[i] = 1;
        break;
      }
  }
  out.weights = detail::loewner_weights(Z, F, sup, is_sup);
  return out;
}

// Pole hygiene for the solver: rational-basis poles must live outside the
// fluid (inside holes or beyond the outer boundary is fine).
inline std::vector<Cplx> discard_fluid_poles(const std::vector<Cplx>& poles,
                                             const RegionTester& rt) {
  std::vector<Cplx> keep;
  keep.reserve(poles.size());
  for (const Cplx p : poles)
    if (!rt.in_fluid(p)) keep.push_back(p);
  return keep;
}

inline std::vector<Cplx> discard_fluid_poles(const std::vector<Cplx>& poles, const Domain& d) {
  return discard_fluid_poles(poles, RegionTester(d));
}

}  // namespace stokes2d
