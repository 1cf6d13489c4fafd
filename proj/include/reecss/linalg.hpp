// Dense hermitian linear algebra on small multipartite systems: typed
// carriers (HermitianMatrix, DensityMatrix, Spectrum), eigendecomposition,
// matrix logarithm on the support, partial transposition over declared
// tensor factors, and PSD/rank queries with explicit tolerances.
//
// Conventions fixed here and used repo-wide:
//   - tensor factor ordering is row-major: the first factor is the slowest
//     index, so index I of C^{n1 x ... x ns} decodes as (i1,...,is) with
//     I = ((i1*n2 + i2)*n3 + ...).
//   - eigenvalues are sorted descending.
//   - rank/kernel decisions use a relative eigenvalue threshold of 1e-10.

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace reecss {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;
using Dims = std::vector<Index>;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// Bad arguments or violated preconditions (CLI exit code 1).
struct DomainError : Error {
  using Error::Error;
};
struct DimensionError : DomainError {
  using DomainError::DomainError;
};
// Iterative procedure exhausted its budget without meeting its contract.
struct ConvergenceError : Error {
  using Error::Error;
};
// A requested verification did not hold (CLI exit code 2).
struct VerificationError : Error {
  using Error::Error;
};

namespace tol {
// Construction-time hermitian symmetrization bound for file input.
inline constexpr double herm_sym = 1e-12;
// Relative eigenvalue threshold for rank/kernel/support decisions.
inline constexpr double rank_rel = 1e-10;
// DensityMatrix admission: lambda_min >= -psd_floor, |Tr-1| <= trace_dev.
inline constexpr double psd_floor = 1e-10;
inline constexpr double trace_dev = 1e-10;
// Near-degenerate eigenvalue pair threshold for divided differences.
inline constexpr double near_degenerate = 1e-8;
// Orthonormality / reconstruction bounds for Spectrum.
inline constexpr double spectrum_orth = 1e-10;
inline constexpr double spectrum_reconstruct = 1e-9;
}  // namespace tol

inline Index dims_product(const Dims& dims) {
  Index n = 1;
  for (Index d : dims) {
    if (d <= 0) throw DimensionError("tensor factor dimensions must be positive");
    n *= d;
  }
  return n;
}

// Hermitian matrix with a declared tensor factorization n = n1*...*ns.
// The stored matrix is symmetrized m <- (m + m^dag)/2 at construction, so
// entries(k,l) == conj(entries(l,k)) holds exactly afterwards.
class HermitianMatrix {
 public:
  HermitianMatrix(Dims dims, Matrix m) : dims_(std::move(dims)) {
    if (m.rows() != m.cols()) throw DimensionError("matrix must be square");
    if (dims_product(dims_) != m.rows())
      throw DimensionError("product of tensor dims must equal the matrix order");
    mat_ = 0.5 * (m + m.adjoint()).eval();
  }

  // Single-factor constructor: dims = {n}.
  explicit HermitianMatrix(Matrix m) : HermitianMatrix(Dims{m.rows()}, std::move(m)) {}

  Index order() const { return mat_.rows(); }
  const Dims& dims() const { return dims_; }
  const Matrix& mat() const { return mat_; }

  double trace() const { return mat_.trace().real(); }
  double frobenius_norm() const { return mat_.norm(); }

 private:
  Dims dims_;
  Matrix mat_;
};

// Eigenvalues (descending) plus orthonormal eigenvectors (columns).
class Spectrum {
 public:
  Spectrum(RealVector eigenvalues, Matrix eigenvectors)
      : eigenvalues_(std::move(eigenvalues)), eigenvectors_(std::move(eigenvectors)) {
    const Index n = eigenvalues_.size();
    if (eigenvectors_.rows() != n || eigenvectors_.cols() != n)
      throw DimensionError("Spectrum: eigenvector matrix must be n x n");
    for (Index i = 0; i + 1 < n; ++i)
      if (eigenvalues_(i) < eigenvalues_(i + 1))
        throw DomainError("Spectrum: eigenvalues must be sorted descending");
    const double orth =
        (eigenvectors_.adjoint() * eigenvectors_ - Matrix::Identity(n, n)).norm();
    if (orth > tol::spectrum_orth)
      throw DomainError("Spectrum: eigenvector matrix is not orthonormal, ||U^dag U - I||_F = " +
                        std::to_string(orth));
  }

  Index order() const { return eigenvalues_.size(); }
  const RealVector& eigenvalues() const { return eigenvalues_; }
  const Matrix& eigenvectors() const { return eigenvectors_; }

  double min_eigenvalue() const { return eigenvalues_(eigenvalues_.size() - 1); }
  double max_eigenvalue() const { return eigenvalues_(0); }

  Matrix reconstruct() const {
    return eigenvectors_ * eigenvalues_.asDiagonal() * eigenvectors_.adjoint();
  }

  // U diag(f(lambda_i)) U^dag.
  template <typename F>
  Matrix map(F&& f) const {
    RealVector mapped(eigenvalues_.size());
    for (Index i = 0; i < eigenvalues_.size(); ++i) mapped(i) = f(eigenvalues_(i));
    return eigenvectors_ * mapped.asDiagonal() * eigenvectors_.adjoint();
  }

 private:
  RealVector eigenvalues_;
  Matrix eigenvectors_;
};

inline Spectrum eigh(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
  if (solver.info() != Eigen::Success)
    throw ConvergenceError(
        "eigh: eigensolver did not converge (Eigen SelfAdjointEigenSolver, "
        "internal QL iteration budget exhausted)");
  const Index n = m.rows();
  RealVector vals(n);
  Matrix vecs(n, n);
  for (Index i = 0; i < n; ++i) {  // ascending -> descending
    vals(i) = solver.eigenvalues()(n - 1 - i);
    vecs.col(i) = solver.eigenvectors().col(n - 1 - i);
  }
  return Spectrum(std::move(vals), std::move(vecs));
}

inline Spectrum eigh(const HermitianMatrix& m) { return eigh(m.mat()); }

struct PsdRank {
  bool is_psd = false;
  Index rank = 0;
};

// is_psd <=> lambda_min >= -tol*max(1, lambda_max); rank counts eigenvalues
// whose magnitude exceeds tol*max(1, lambda_max).
inline PsdRank psd_rank(const Spectrum& s, double tol = tol::rank_rel) {
  const double scale = std::max(1.0, s.max_eigenvalue());
  PsdRank r;
  r.is_psd = s.min_eigenvalue() >= -tol * scale;
  for (Index i = 0; i < s.order(); ++i)
    if (std::abs(s.eigenvalues()(i)) > tol * scale) ++r.rank;
  return r;
}

inline PsdRank psd_rank(const HermitianMatrix& m, double tol = tol::rank_rel) {
  return psd_rank(eigh(m), tol);
}

// Tr(a b), real for hermitian arguments; computed entrywise as
// sum_{kl} a_{kl} conj(b_{kl}).
inline double trace_inner(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError("trace_inner: dimension mismatch");
  return a.cwiseProduct(b.conjugate()).sum().real();
}

inline double trace_inner(const HermitianMatrix& a, const HermitianMatrix& b) {
  return trace_inner(a.mat(), b.mat());
}

// Logarithm restricted to the support: eigenvalues <= tol*lambda_max map to 0.
// Equals the principal matrix logarithm for positive definite input.
inline HermitianMatrix mat_log_support(const HermitianMatrix& m, double tol = tol::rank_rel) {
  const Spectrum s = eigh(m);
  const double lmax = s.max_eigenvalue();
  if (!(lmax > 0.0) || s.eigenvalues().maxCoeff() <= tol * std::max(1.0, lmax))
    throw DomainError("mat_log_support: zero matrix has no logarithm");
  if (s.min_eigenvalue() < -tol * std::max(1.0, lmax))
    throw DomainError("mat_log_support: matrix is not positive semidefinite, lambda_min = " +
                      std::to_string(s.min_eigenvalue()));
  const double cutoff = tol * lmax;
  return HermitianMatrix(m.dims(), s.map([cutoff](double x) {
    return x > cutoff ? std::log(x) : 0.0;
  }));
}

namespace detail {

inline void decode_index(Index flat, const Dims& dims, std::vector<Index>& out) {
  for (Index p = static_cast<Index>(dims.size()) - 1; p >= 0; --p) {
    out[p] = flat % dims[p];
    flat /= dims[p];
  }
}

inline Index encode_index(const std::vector<Index>& idx, const Dims& dims) {
  Index flat = 0;
  for (std::size_t p = 0; p < dims.size(); ++p) flat = flat * dims[p] + idx[p];
  return flat;
}

}  // namespace detail

// Transpose of the listed tensor factors (1-based party indices). An
// involution; preserves hermiticity and the trace.
inline HermitianMatrix partial_transpose(const HermitianMatrix& m,
                                         const std::vector<int>& parties) {
  const Dims& dims = m.dims();
  const auto s = static_cast<int>(dims.size());
  std::vector<bool> flip(dims.size(), false);
  for (int p : parties) {
    if (p < 1 || p > s)
      throw DomainError("partial_transpose: party index " + std::to_string(p) +
                        " out of range 1.." + std::to_string(s));
    flip[static_cast<std::size_t>(p - 1)] = true;
  }
  const Index n = m.order();
  Matrix out(n, n);
  std::vector<Index> ri(dims.size()), ci(dims.size());
  for (Index r = 0; r < n; ++r) {
    detail::decode_index(r, dims, ri);
    for (Index c = 0; c < n; ++c) {
      detail::decode_index(c, dims, ci);
      std::vector<Index> rr = ri, cc = ci;
      for (std::size_t p = 0; p < dims.size(); ++p)
        if (flip[p]) std::swap(rr[p], cc[p]);
      out(detail::encode_index(rr, dims), detail::encode_index(cc, dims)) = m.mat()(r, c);
    }
  }
  return HermitianMatrix(dims, std::move(out));
}

// Kronecker product; dims concatenate, consistent with the row-major
// factor ordering.
inline HermitianMatrix kron(const HermitianMatrix& a, const HermitianMatrix& b) {
  const Index na = a.order(), nb = b.order();
  Matrix out(na * nb, na * nb);
  for (Index i = 0; i < na; ++i)
    for (Index j = 0; j < na; ++j)
      out.block(i * nb, j * nb, nb, nb) = a.mat()(i, j) * b.mat();
  Dims dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  return HermitianMatrix(std::move(dims), std::move(out));
}

inline HermitianMatrix identity(const Dims& dims) {
  const Index n = dims_product(dims);
  return HermitianMatrix(dims, Matrix::Identity(n, n));
}

// Positive semidefinite (within 1e-10) hermitian matrix of unit trace.
class DensityMatrix : public HermitianMatrix {
 public:
  DensityMatrix(Dims dims, Matrix m) : HermitianMatrix(std::move(dims), std::move(m)) {
    validate();
  }
  explicit DensityMatrix(HermitianMatrix h) : HermitianMatrix(std::move(h)) { validate(); }

 private:
  void validate() const {
    const double tr = trace();
    if (std::abs(tr - 1.0) > tol::trace_dev)
      throw DomainError("DensityMatrix: trace deviates from one by " +
                        std::to_string(tr - 1.0));
    const double lmin = eigh(*this).min_eigenvalue();
    if (lmin < -tol::psd_floor)
      throw DomainError("DensityMatrix: not positive semidefinite, lambda_min = " +
                        std::to_string(lmin));
  }
};

inline DensityMatrix maximally_mixed(const Dims& dims) {
  const Index n = dims_product(dims);
  return DensityMatrix(dims, Matrix::Identity(n, n) / static_cast<double>(n));
}

}  // namespace reecss
