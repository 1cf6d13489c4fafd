// Divided-difference machinery for the first variation of the matrix
// logarithm. For sigma with eigenvalues a_k (descending) the kernel holds
//   T_kl = (log a_k - log a_l)/(a_k - a_l),  S_kl = (a_k - a_l)/(log a_k - log a_l)
// on the support and 0 outside, with the coincident-eigenvalue convention
// T_kk = 1/a_k and S_kk = a_k. Applications are Hadamard products in the
// eigenbasis:
//   L_sigma(beta)      = U ((U^dag beta U) o T) U^dag
//   L_sigma^pinv(beta) = U ((U^dag beta U) o S) U^dag
// L is represented implicitly (rotate -> Hadamard -> rotate), never as an
// n^2 x n^2 matrix.

#pragma once

#include "reecss/linalg.hpp"

namespace reecss {

// First divided difference of log at positive a, b. Near-degenerate pairs
// (|a-b| <= 1e-8 (a+b)) use the midpoint limit 2/(a+b); the exact quotient
// is catastrophically cancellative there.
inline double log_dd1(double a, double b) {
  if (std::abs(a - b) <= tol::near_degenerate * (a + b)) return 2.0 / (a + b);
  return (std::log(a) - std::log(b)) / (a - b);
}

// Inverse divided difference, the entrywise inverse of log_dd1 on the
// support: (a-b)/(log a - log b), midpoint limit (a+b)/2.
inline double log_dd1_inv(double a, double b) {
  if (std::abs(a - b) <= tol::near_degenerate * (a + b)) return 0.5 * (a + b);
  return (a - b) / (std::log(a) - std::log(b));
}

namespace detail {

// d/dx log[x, c] evaluated away from c; stable when |x - c| is not small.
inline double log_dd1_deriv(double x, double c) {
  return (1.0 / x - log_dd1(x, c)) / (x - c);
}

}  // namespace detail

// Second divided difference of log at positive a, b, c, stable under all
// coincidence patterns. Used by the oracle's curvature computations.
inline double log_dd2(double a, double b, double c) {
  const double scale = (a + b + c) / 3.0;
  const double theta = 1e-4 * scale;
  const double ab = std::abs(a - b), bc = std::abs(b - c), ac = std::abs(a - c);
  if (ab <= theta && bc <= theta && ac <= theta) {
    // All three coincide: Newton series around the mean m, where
    // sum(x_i - m) = 0 kills the linear term; through degree 3 the error
    // is O((d/m)^4 / m^2), far below roundoff at this threshold.
    const double m = scale;
    const double d0 = a - m, d1 = b - m, d2 = c - m;
    const double e2 = d0 * d1 + d0 * d2 + d1 * d2;  // elementary symmetric
    const double e3 = d0 * d1 * d2;
    const double h2 = -e2;  // complete homogeneous in (d0,d1,d2), e1 = 0
    const double h3 = e3;
    const double m2 = m * m;
    return -0.5 / m2 + h2 * (-1.0 / (4.0 * m2 * m2)) + h3 * (1.0 / (5.0 * m2 * m2 * m));
  }
  // Two coincide (or nearly): differentiate g(x) = log[x, far] at the pair
  // midpoint; midpoint rule keeps the error O((pair gap)^2 g''').
  if (ab <= theta) return detail::log_dd1_deriv(0.5 * (a + b), c);
  if (bc <= theta) return detail::log_dd1_deriv(0.5 * (b + c), a);
  if (ac <= theta) return detail::log_dd1_deriv(0.5 * (a + c), b);
  return (log_dd1(a, b) - log_dd1(b, c)) / (a - c);
}

// Divided-difference kernel of a PSD sigma: the eigenbasis plus the T/S
// tables restricted to the support (descending eigenvalues put the support
// on the leading r x r block).
struct DividedDifferenceKernel {
  Spectrum basis;
  RealMatrix tmat;
  RealMatrix smat;
  Index support_rank = 0;
  Dims dims;

  Index order() const { return basis.order(); }
};

inline DividedDifferenceKernel build_kernel(const HermitianMatrix& sigma,
                                            double tol = tol::rank_rel) {
  Spectrum s = eigh(sigma);
  const Index n = s.order();
  const double lmax = s.max_eigenvalue();
  if (!(lmax > 0.0)) throw DomainError("build_kernel: sigma must be nonzero and PSD");
  if (s.min_eigenvalue() < -tol * std::max(1.0, lmax))
    throw DomainError("build_kernel: sigma is not positive semidefinite, lambda_min = " +
                      std::to_string(s.min_eigenvalue()));
  const double cutoff = tol * lmax;
  Index r = 0;
  while (r < n && s.eigenvalues()(r) > cutoff) ++r;

  RealMatrix tmat = RealMatrix::Zero(n, n), smat = RealMatrix::Zero(n, n);
  for (Index k = 0; k < r; ++k) {
    for (Index l = 0; l < r; ++l) {
      const double a = s.eigenvalues()(k), b = s.eigenvalues()(l);
      tmat(k, l) = log_dd1(a, b);
      smat(k, l) = log_dd1_inv(a, b);
    }
  }
  return DividedDifferenceKernel{std::move(s), std::move(tmat), std::move(smat), r,
                                 sigma.dims()};
}

namespace detail {

inline HermitianMatrix hadamard_in_basis(const DividedDifferenceKernel& k,
                                         const HermitianMatrix& beta, const RealMatrix& table) {
  if (beta.order() != k.order())
    throw DimensionError("kernel application: dimension mismatch");
  const Matrix& u = k.basis.eigenvectors();
  Matrix tilde = u.adjoint() * beta.mat() * u;
  tilde = tilde.cwiseProduct(table.cast<Complex>());
  return HermitianMatrix(k.dims, u * tilde * u.adjoint());
}

}  // namespace detail

// First variation of log at sigma, applied to beta. Self-adjoint for
// trace_inner; L_sigma(sigma) equals the support projector.
inline HermitianMatrix apply_L(const DividedDifferenceKernel& k, const HermitianMatrix& beta) {
  return detail::hadamard_in_basis(k, beta, k.tmat);
}

// Moore-Penrose-style inverse of apply_L on the support:
// apply_L o apply_L_pinv = apply_L_pinv o apply_L = conjugation by P_sigma.
inline HermitianMatrix apply_L_pinv(const DividedDifferenceKernel& k,
                                    const HermitianMatrix& beta) {
  return detail::hadamard_in_basis(k, beta, k.smat);
}

inline HermitianMatrix support_projector(const DividedDifferenceKernel& k) {
  const Matrix& u = k.basis.eigenvectors();
  Matrix p = u.leftCols(k.support_rank) * u.leftCols(k.support_rank).adjoint();
  return HermitianMatrix(k.dims, std::move(p));
}

// |Tr(rho log(sigma + t xi)) - Tr(rho log sigma) - t Tr(rho L_sigma(xi))|.
// Tests use this to confirm the decay rate O(t^2) when sigma is full rank
// and O(t^2 |log t|) in the singular case (xi strictly positive on ker sigma
// and rho vanishing there).
inline double expansion_residual(const HermitianMatrix& sigma, const HermitianMatrix& xi,
                                 const HermitianMatrix& rho, double t,
                                 double tol = tol::rank_rel) {
  if (!(t > 0.0)) throw DomainError("expansion_residual: t must be positive");
  if (sigma.order() != xi.order() || sigma.order() != rho.order())
    throw DimensionError("expansion_residual: dimension mismatch");
  DividedDifferenceKernel k = build_kernel(sigma, tol);
  const Index n = k.order(), r = k.support_rank;
  if (r < n) {
    // Singular case preconditions: xi positive definite on ker sigma, rho
    // vanishing on ker sigma.
    const Matrix q = k.basis.eigenvectors().rightCols(n - r);
    const Matrix xi_ker = q.adjoint() * xi.mat() * q;
    if (eigh(Matrix(xi_ker)).min_eigenvalue() <= 0.0)
      throw DomainError("expansion_residual: xi is not strictly positive on ker sigma");
    if ((rho.mat() * q).norm() > 1e-9 * (1.0 + rho.frobenius_norm()))
      throw DomainError("expansion_residual: rho does not vanish on ker sigma");
  }
  HermitianMatrix shifted(sigma.dims(), sigma.mat() + t * xi.mat());
  const Spectrum ss = eigh(shifted);
  if (ss.min_eigenvalue() < -tol * std::max(1.0, ss.max_eigenvalue()))
    throw DomainError("expansion_residual: sigma + t xi is not positive on the support");
  const double lhs = trace_inner(rho, mat_log_support(shifted, tol));
  const double rhs = trace_inner(rho, mat_log_support(sigma, tol)) +
                     t * trace_inner(rho, apply_L(k, xi));
  return std::abs(lhs - rhs);
}

}  // namespace reecss
