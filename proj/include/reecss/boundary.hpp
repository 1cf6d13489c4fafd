// Geometry of the PPT set D = {sigma >= 0, sigma^PT >= 0, Tr sigma = 1}
// with respect to a declared partial-transpose cut: boundary membership,
// supporting-hyperplane extraction from ker(sigma^PT), the psi-witness for
// singular boundary states, tensor-product hyperplanes, and a constructive
// generator of full-rank 2 x m boundary states with prescribed PT kernel
// dimension.

#pragma once

#include <algorithm>
#include <functional>

#include "reecss/linalg.hpp"
#include "reecss/lsigma.hpp"
#include "reecss/random.hpp"

namespace reecss {

inline const std::vector<int>& default_cut() {
  static const std::vector<int> cut{1};
  return cut;
}

enum class Membership { interior, boundary, outside };

inline const char* to_string(Membership m) {
  switch (m) {
    case Membership::interior: return "interior";
    case Membership::boundary: return "boundary";
    default: return "outside";
  }
}

// outside when sigma^PT has an eigenvalue below -tol (relative), interior
// when both sigma and sigma^PT are strictly positive at tolerance, boundary
// otherwise.
inline Membership boundary_membership(const DensityMatrix& sigma,
                                      const std::vector<int>& parties = default_cut(),
                                      double tol = tol::rank_rel) {
  const Spectrum s = eigh(sigma);
  const Spectrum spt = eigh(partial_transpose(sigma, parties));
  const double cut_pt = tol * std::max(1.0, spt.max_eigenvalue());
  const double cut_s = tol * std::max(1.0, s.max_eigenvalue());
  if (spt.min_eigenvalue() < -cut_pt) return Membership::outside;
  if (spt.min_eigenvalue() > cut_pt && s.min_eigenvalue() > cut_s) return Membership::interior;
  return Membership::boundary;
}

// Orthonormal basis of the numerical kernel of sigma^PT (eigenvalues at or
// below tol * lambda_max), most-null vector first.
inline std::vector<Vector> pt_kernel(const DensityMatrix& sigma,
                                     const std::vector<int>& parties = default_cut(),
                                     double tol = tol::rank_rel) {
  const Spectrum spt = eigh(partial_transpose(sigma, parties));
  const double lmax = spt.max_eigenvalue();
  if (spt.min_eigenvalue() < -tol * std::max(1.0, lmax))
    throw DomainError("pt_kernel: sigma^PT is not positive semidefinite");
  std::vector<Vector> kernel;
  const Index n = spt.order();
  for (Index i = n - 1; i >= 0; --i) {
    if (spt.eigenvalues()(i) <= tol * lmax)
      kernel.push_back(spt.eigenvectors().col(i));
    else
      break;
  }
  if (kernel.empty())
    throw DomainError("pt_kernel: sigma is not on the PT-boundary (empty kernel)");
  return kernel;
}

// Normalized supporting hyperplane phi of D at sigma_ref:
// Tr phi^2 = 1, Tr(phi sigma_ref) = 0, Tr(phi sigma') >= 0 on D.
struct Hyperplane {
  HermitianMatrix phi;
  DensityMatrix sigma_ref;
  Vector kernel_coeffs;  // combination of ker(sigma^PT) used, when PT-derived
  std::vector<int> parties;
};

// phi = (|v><v|)^PT for |v> the normalized combination of kernel vectors.
// Tr phi^2 = 1 is automatic (partial transposition preserves the Frobenius
// norm) and Tr(phi sigma) = Tr(|v><v| sigma^PT) = 0 by self-adjointness of
// the partial transpose.
inline Hyperplane hyperplane_from_kernel(const DensityMatrix& sigma, const Vector& coeffs,
                                         const std::vector<int>& parties = default_cut(),
                                         double tol = tol::rank_rel) {
  const std::vector<Vector> kernel = pt_kernel(sigma, parties, tol);
  if (coeffs.size() != static_cast<Index>(kernel.size()))
    throw DimensionError("hyperplane_from_kernel: coefficient count " +
                         std::to_string(coeffs.size()) + " != kernel dimension " +
                         std::to_string(kernel.size()));
  Vector v = Vector::Zero(sigma.order());
  for (std::size_t i = 0; i < kernel.size(); ++i) v += coeffs(static_cast<Index>(i)) * kernel[i];
  const double norm = v.norm();
  if (norm < 1e-14) throw DomainError("hyperplane_from_kernel: zero coefficient vector");
  v /= norm;
  HermitianMatrix proj(sigma.dims(), v * v.adjoint());
  HermitianMatrix phi = partial_transpose(proj, parties);
  const double overlap = trace_inner(phi, sigma);
  if (std::abs(overlap) > 1e-9)
    throw DomainError("hyperplane_from_kernel: Tr(phi sigma) = " + std::to_string(overlap));
  return Hyperplane{std::move(phi), sigma, coeffs, parties};
}

inline Hyperplane hyperplane_from_kernel(const DensityMatrix& sigma,
                                         const std::vector<int>& parties = default_cut(),
                                         double tol = tol::rank_rel) {
  const std::size_t dim = pt_kernel(sigma, parties, tol).size();
  Vector coeffs = Vector::Zero(static_cast<Index>(dim));
  coeffs(0) = 1.0;
  return hyperplane_from_kernel(sigma, coeffs, parties, tol);
}

// Witness in the psi-representation: Tr(psi sigma') <= Tr(psi sigma) = 1 on
// D, with psi vanishing outside the support of sigma.
struct PsiWitness {
  HermitianMatrix psi;
  DensityMatrix sigma_ref;
};

// psi = P (I - phi) P, rescaled so Tr(psi sigma) = 1, where P projects onto
// the support of sigma. For full-rank sigma this is exactly I - phi.
inline PsiWitness psi_from_phi(const Hyperplane& h, double tol = tol::rank_rel) {
  const DensityMatrix& sigma = h.sigma_ref;
  const DividedDifferenceKernel k = build_kernel(sigma, tol);
  const HermitianMatrix p = support_projector(k);
  Matrix raw = p.mat() * (Matrix::Identity(sigma.order(), sigma.order()) - h.phi.mat()) * p.mat();
  HermitianMatrix psi0(sigma.dims(), std::move(raw));
  const double scale = trace_inner(psi0, sigma);
  if (std::abs(scale) < 1e-12)
    throw DomainError("psi_from_phi: Tr(psi sigma) vanishes");
  HermitianMatrix psi(sigma.dims(), psi0.mat() / scale);
  if ((psi.mat() - p.mat()).norm() <= 1e-9)
    throw DomainError("psi_from_phi: degenerate witness (psi equals the support projector)");
  return PsiWitness{std::move(psi), sigma};
}

// Blend psi(x) = x psi + (1-x) P_sigma, x in [0,1]; satisfies the same
// witness conditions as psi.
inline PsiWitness psi_blend(const PsiWitness& w, double x, double tol = tol::rank_rel) {
  if (x < 0.0 || x > 1.0) throw DomainError("psi_blend: x must lie in [0,1]");
  const HermitianMatrix p = support_projector(build_kernel(w.sigma_ref, tol));
  HermitianMatrix psi(w.sigma_ref.dims(), x * w.psi.mat() + (1.0 - x) * p.mat());
  return PsiWitness{std::move(psi), w.sigma_ref};
}

// phi_a (x) phi_b supports sigma_a (x) sigma_b on the boundary of the
// composite PPT set, provided phi_b is a unit-Frobenius entanglement witness
// nonnegative on the B-side separable states.
inline Hyperplane tensor_hyperplane(const Hyperplane& phi_a, const DensityMatrix& sigma_b,
                                    const HermitianMatrix& phi_b) {
  if (std::abs(phi_b.frobenius_norm() - 1.0) > 1e-9)
    throw DomainError("tensor_hyperplane: phi_b must have unit Frobenius norm");
  if (std::abs(phi_a.phi.frobenius_norm() - 1.0) > 1e-9)
    throw DomainError("tensor_hyperplane: phi_a must have unit Frobenius norm");
  if (sigma_b.order() != phi_b.order())
    throw DimensionError("tensor_hyperplane: sigma_b / phi_b dimension mismatch");
  HermitianMatrix phi = kron(phi_a.phi, phi_b);
  DensityMatrix sigma(kron(phi_a.sigma_ref, sigma_b));
  Vector coeffs = phi_a.kernel_coeffs;
  return Hyperplane{std::move(phi), std::move(sigma), std::move(coeffs), phi_a.parties};
}

namespace detail {

// Real symmetric matrix with zero diagonal and prescribed spectrum (which
// must sum to zero), built by a chain of Givens rotations that zeroes one
// diagonal entry per step while preserving the spectrum.
inline RealMatrix zero_diagonal_with_spectrum(const RealVector& lambda) {
  const Index m = lambda.size();
  const double scale = lambda.cwiseAbs().maxCoeff();
  if (std::abs(lambda.sum()) > 1e-12 * std::max(1.0, scale))
    throw DomainError("zero_diagonal_with_spectrum: eigenvalues must sum to zero");
  RealMatrix a = RealMatrix::Zero(m, m);
  a.diagonal() = lambda;
  for (Index step = 0; step < m; ++step) {
    // Pick a straddling pair: the rotation solving c t^2 + 2 b t + a0 = 0
    // needs a0 * c < 0 for a real root.
    Index imax = 0, imin = 0;
    a.diagonal().maxCoeff(&imax);
    a.diagonal().minCoeff(&imin);
    if (a(imax, imax) <= 1e-13 * std::max(1.0, scale) &&
        a(imin, imin) >= -1e-13 * std::max(1.0, scale))
      break;
    const Index i = imax, j = imin;
    const double a0 = a(i, i), b = a(i, j), c = a(j, j);
    if (!(a0 > 0.0 && c < 0.0))
      throw ConvergenceError("zero_diagonal_with_spectrum: no straddling pair found");
    const double disc = std::sqrt(b * b - a0 * c);
    const double q = -(b + (b >= 0 ? disc : -disc));
    const double t1 = q / c, t2 = a0 / q;
    const double t = std::abs(t1) < std::abs(t2) ? t1 : t2;
    const double cs = 1.0 / std::sqrt(1.0 + t * t), sn = t * cs;
    // Apply G^T a G with G the rotation in the (i,j) plane.
    for (Index r = 0; r < m; ++r) {
      const double ari = a(r, i), arj = a(r, j);
      a(r, i) = cs * ari + sn * arj;
      a(r, j) = -sn * ari + cs * arj;
    }
    for (Index r = 0; r < m; ++r) {
      const double air = a(i, r), ajr = a(j, r);
      a(i, r) = cs * air + sn * ajr;
      a(j, r) = -sn * air + cs * ajr;
    }
    a(i, i) = 0.0;  // zeroed by construction; pin it exactly
    a = 0.5 * (a + a.transpose()).eval();
  }
  if (a.diagonal().cwiseAbs().maxCoeff() > 1e-10)
    throw ConvergenceError("zero_diagonal_with_spectrum: diagonal not annihilated");
  Eigen::SelfAdjointEigenSolver<RealMatrix> check(a);
  RealVector got = check.eigenvalues().reverse();
  if ((got - lambda).cwiseAbs().maxCoeff() > 1e-9 * std::max(1.0, scale))
    throw ConvergenceError("zero_diagonal_with_spectrum: spectrum drifted");
  return a;
}

}  // namespace detail

// Full-rank 2m x 2m state sigma > 0 with sigma^PT >= 0 and
// rank(sigma^PT) = 2m - k, i.e. a PT kernel of dimension exactly k.
//
// Construction: pick a real symmetric H with zero diagonal and m-1 strictly
// positive eigenvalues; form F = t0 D + H for a large t0 and a descending
// positive diagonal D, so that G = F - Lambda(F) inherits H's signature.
// With A = I and B = U Lambda^(1/2) (from F = U Lambda U^dag), set
// C = B B^dag + E where E >= 0 is built from G's eigenvectors with
// rank E = m - k, which makes the PT Schur complement equal E while
// G + E > 0 keeps sigma itself positive definite. The assembled state is
// scrambled by a random local unitary and verified; failed draws retry
// with a derived seed.
inline DensityMatrix gen_boundary_state(int m, int k, std::uint64_t seed,
                                        double tol = tol::rank_rel) {
  if (m < 2) throw DomainError("gen_boundary_state: m must be at least 2");
  if (k < 0 || k > m - 1)
    throw DomainError("gen_boundary_state: k must lie in [0, m-1]");
  const Index mm = m;
  constexpr int max_attempts = 32;
  std::string last_failure;
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    RngEngine rng(derive_seed(seed, static_cast<std::uint64_t>(attempt)));
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    // Descending diagonal with comfortable gaps.
    RealVector d(mm);
    for (Index i = 0; i < mm; ++i)
      d(i) = 1.0 + static_cast<double>(mm - i) * (1.0 + 0.2 * unif(rng)) / static_cast<double>(mm);
    std::sort(d.data(), d.data() + mm, std::greater<double>());

    // Spectrum for H: m-1 positives, last entry balances the trace.
    RealVector lambda(mm);
    for (Index i = 0; i + 1 < mm; ++i) lambda(i) = 0.5 + unif(rng);
    lambda(mm - 1) = -lambda.head(mm - 1).sum();
    std::sort(lambda.data(), lambda.data() + mm, std::greater<double>());
    const RealMatrix h = detail::zero_diagonal_with_spectrum(lambda);

    // Grow t0 until F > 0 and G = F - Lambda(F) has H's signature
    // (exactly m-1 strictly positive eigenvalues and one negative).
    double t0 = 1000.0;
    Matrix u;
    RealVector fvals;
    RealMatrix g;
    bool signature_ok = false;
    for (int doubling = 0; doubling < 24; ++doubling, t0 *= 2.0) {
      RealMatrix f = t0 * RealMatrix(d.asDiagonal()) + h;
      Eigen::SelfAdjointEigenSolver<RealMatrix> es(f);
      if (es.info() != Eigen::Success) continue;
      if (es.eigenvalues()(0) <= 0.0) continue;  // F must be positive definite
      RealVector vals(mm);
      RealMatrix vecs(mm, mm);
      for (Index i = 0; i < mm; ++i) {  // descending, aligned with D's order
        vals(i) = es.eigenvalues()(mm - 1 - i);
        vecs.col(i) = es.eigenvectors().col(mm - 1 - i);
      }
      g = f - RealMatrix(vals.asDiagonal());
      Eigen::SelfAdjointEigenSolver<RealMatrix> eg(g);
      const double gscale = std::max(1.0, eg.eigenvalues().cwiseAbs().maxCoeff());
      Index pos = 0, neg = 0;
      for (Index i = 0; i < mm; ++i) {
        if (eg.eigenvalues()(i) > 1e-8 * gscale) ++pos;
        if (eg.eigenvalues()(i) < -1e-8 * gscale) ++neg;
      }
      if (pos == mm - 1 && neg == 1) {
        u = vecs.cast<Complex>();
        fvals = vals;
        signature_ok = true;
        break;
      }
    }
    if (!signature_ok) {
      last_failure = "G never reached the required signature";
      continue;
    }

    // E = -2 gamma_min |u><u| plus enough of G's other eigenvectors to make
    // rank E = m - k exactly; G + E > 0 by construction.
    Eigen::SelfAdjointEigenSolver<RealMatrix> eg(g);
    const RealVector gvals = eg.eigenvalues();  // ascending
    const RealMatrix gvecs = eg.eigenvectors();
    RealMatrix e = RealMatrix::Zero(mm, mm);
    const double gamma_min = gvals(0);
    e += (-2.0 * gamma_min) * gvecs.col(0) * gvecs.col(0).transpose();
    const int extra = (m - k) - 1;
    for (int i = 0; i < extra; ++i) {
      const double c = (-gamma_min) * (0.5 + unif(rng));
      e += c * gvecs.col(mm - 1 - i) * gvecs.col(mm - 1 - i).transpose();
    }

    Matrix b = u * fvals.cwiseSqrt().asDiagonal();
    Matrix c_block = b * b.adjoint() + e.cast<Complex>();
    Matrix raw(2 * mm, 2 * mm);
    raw.topLeftCorner(mm, mm) = Matrix::Identity(mm, mm);
    raw.topRightCorner(mm, mm) = b;
    raw.bottomLeftCorner(mm, mm) = b.adjoint();
    raw.bottomRightCorner(mm, mm) = c_block;
    raw /= raw.trace().real();

    // Scramble by a local unitary: preserves positivity, the PT spectrum
    // and therefore all rank counts.
    Matrix ua = haar_unitary(2, rng), ub = haar_unitary(mm, rng);
    Matrix scramble(2 * mm, 2 * mm);
    for (Index i = 0; i < 2; ++i)
      for (Index j = 0; j < 2; ++j)
        scramble.block(i * mm, j * mm, mm, mm) = ua(i, j) * ub;
    raw = scramble * raw * scramble.adjoint();

    HermitianMatrix candidate(Dims{2, mm}, std::move(raw));
    const Spectrum s = eigh(candidate);
    if (!(s.min_eigenvalue() > 0.0)) {
      last_failure = "assembled sigma is not strictly positive";
      continue;
    }
    const PsdRank pr = psd_rank(partial_transpose(candidate, default_cut()), tol);
    if (!pr.is_psd || pr.rank != 2 * mm - k) {
      last_failure = "sigma^PT rank check failed (rank " + std::to_string(pr.rank) +
                     ", wanted " + std::to_string(2 * m - k) + ")";
      continue;
    }
    return DensityMatrix(std::move(candidate));
  }
  throw ConvergenceError("gen_boundary_state: verification failed after " +
                         std::to_string(max_attempts) + " attempts (" + last_failure + ")");
}

// The strictly positive 6x6 boundary state of a 2x3 system whose partial
// transpose has a two-dimensional kernel; entries are integers over 229.
inline DensityMatrix example_sigma_2x3() {
  constexpr int num[6][6] = {
      {1, 0, 0, 0, 6, 8},  {0, 1, 0, 1, 0, 0},   {0, 0, 1, 0, 0, 0},
      {0, 1, 0, 100, 0, 0}, {6, 0, 0, 0, 46, 60}, {8, 0, 0, 0, 60, 80},
  };
  Matrix m(6, 6);
  for (Index i = 0; i < 6; ++i)
    for (Index j = 0; j < 6; ++j) m(i, j) = static_cast<double>(num[i][j]) / 229.0;
  return DensityMatrix(Dims{2, 3}, std::move(m));
}

}  // namespace reecss
