// Seeded sampling: Haar-ish random unitaries via QR of complex Gaussian
// matrices, random hermitian/density matrices, random product vectors.
// Every generator takes an explicit engine so runs are reproducible.

#pragma once

#include <random>

#include "reecss/linalg.hpp"

namespace reecss {

using RngEngine = std::mt19937_64;

inline Matrix ginibre(Index rows, Index cols, RngEngine& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix g(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) g(i, j) = Complex(gauss(rng), gauss(rng));
  return g;
}

// QR of a Ginibre matrix with the R-diagonal phase fix.
inline Matrix haar_unitary(Index n, RngEngine& rng) {
  Matrix g = ginibre(n, n, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index i = 0; i < n; ++i) {
    const Complex d = r(i, i);
    const double a = std::abs(d);
    q.col(i) *= (a > 0) ? d / a : Complex(1, 0);
  }
  return q;
}

inline Vector random_unit_vector(Index n, RngEngine& rng) {
  Vector v = ginibre(n, 1, rng).col(0);
  return v / v.norm();
}

// GUE-normalized hermitian matrix, entries O(1).
inline HermitianMatrix random_hermitian(const Dims& dims, RngEngine& rng) {
  const Index n = dims_product(dims);
  Matrix g = ginibre(n, n, rng);
  return HermitianMatrix(dims, (g + g.adjoint()) / (2.0 * std::sqrt(static_cast<double>(n))));
}

// Wishart-style random state; rank 0 means full rank.
inline DensityMatrix random_density(const Dims& dims, RngEngine& rng, Index rank = 0) {
  const Index n = dims_product(dims);
  if (rank <= 0 || rank > n) rank = n;
  Matrix g = ginibre(n, rank, rng);
  Matrix w = g * g.adjoint();
  return DensityMatrix(dims, w / w.trace().real());
}

// Pure product state as per-party unit vectors.
inline std::vector<Vector> random_product_vectors(const Dims& dims, RngEngine& rng) {
  std::vector<Vector> out;
  out.reserve(dims.size());
  for (Index d : dims) out.push_back(random_unit_vector(d, rng));
  return out;
}

inline Vector product_vector(const std::vector<Vector>& parts) {
  Vector v = parts.front();
  for (std::size_t p = 1; p < parts.size(); ++p) {
    Vector w(v.size() * parts[p].size());
    for (Index i = 0; i < v.size(); ++i)
      w.segment(i * parts[p].size(), parts[p].size()) = v(i) * parts[p];
    v = std::move(w);
  }
  return v;
}

inline DensityMatrix pure_state(const Dims& dims, const Vector& v) {
  return DensityMatrix(dims, v * v.adjoint() / v.squaredNorm());
}

// Derive an independent stream from a base seed and a stream index.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t x = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

}  // namespace reecss
