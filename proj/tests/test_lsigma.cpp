#include <doctest.h>

#include "reecss/lsigma.hpp"
#include "reecss/random.hpp"

using namespace reecss;

namespace {

HermitianMatrix diag2(double a, double b) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return HermitianMatrix(Dims{2}, m);
}

}  // namespace

TEST_SUITE_BEGIN("lsigma");

TEST_CASE("kernel tables: equal-eigenvalue convention and the exact quotient") {
  DividedDifferenceKernel k = build_kernel(diag2(0.7, 0.7));
  CHECK(k.support_rank == 2);
  for (Index i = 0; i < 2; ++i)
    for (Index j = 0; j < 2; ++j) {
      CHECK(k.tmat(i, j) == doctest::Approx(1.0 / 0.7).epsilon(1e-13));
      CHECK(k.smat(i, j) == doctest::Approx(0.7).epsilon(1e-13));
    }

  DividedDifferenceKernel ke = build_kernel(diag2(std::exp(1.0), 1.0));
  CHECK(ke.tmat(0, 1) == doctest::Approx(1.0 / (std::exp(1.0) - 1.0)).epsilon(1e-13));
  CHECK(ke.tmat(0, 1) == doctest::Approx(0.5819767068693265).epsilon(1e-10));
  CHECK(ke.tmat(0, 0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-13));
  CHECK(ke.smat(0, 0) == doctest::Approx(std::exp(1.0)).epsilon(1e-13));

  DividedDifferenceKernel ks = build_kernel(diag2(1.0, 0.0));
  CHECK(ks.support_rank == 1);
  CHECK(ks.tmat(0, 0) == doctest::Approx(1.0));
  CHECK(ks.tmat(1, 1) == 0.0);
  CHECK(ks.tmat(0, 1) == 0.0);
  CHECK(ks.smat(0, 0) == doctest::Approx(1.0));
  CHECK(ks.smat(1, 0) == 0.0);

  Matrix neg(2, 2);
  neg << 1, 0, 0, -0.5;
  CHECK_THROWS_AS(build_kernel(HermitianMatrix(Dims{2}, neg)), DomainError);
}

TEST_CASE("tmat o smat equals the support indicator") {
  RngEngine rng(31);
  DensityMatrix sigma = random_density(Dims{5}, rng, 3);
  DividedDifferenceKernel k = build_kernel(sigma);
  REQUIRE(k.support_rank == 3);
  for (Index i = 0; i < 5; ++i)
    for (Index j = 0; j < 5; ++j) {
      const double expected = (i < 3 && j < 3) ? 1.0 : 0.0;
      CHECK(std::abs(k.tmat(i, j) * k.smat(i, j) - expected) <= 1e-10);
    }
}

TEST_CASE("apply_L(sigma) is the support projector; identity sigma acts trivially") {
  RngEngine rng(37);
  DensityMatrix full = random_density(Dims{4}, rng);
  DividedDifferenceKernel kf = build_kernel(full);
  CHECK((apply_L(kf, full).mat() - Matrix::Identity(4, 4)).norm() <= 1e-9);

  DensityMatrix sing = random_density(Dims{4}, rng, 2);
  DividedDifferenceKernel ks = build_kernel(sing);
  HermitianMatrix p = support_projector(ks);
  CHECK((apply_L(ks, sing).mat() - p.mat()).norm() <= 1e-9);
  CHECK((p.mat() * p.mat() - p.mat()).norm() <= 1e-10);
  CHECK(p.trace() == doctest::Approx(2.0).epsilon(1e-12));
  CHECK((p.mat() * sing.mat() - sing.mat() * p.mat()).norm() <= 1e-12);

  // sigma = I/1: tmat is identically one, so L is the identity map.
  HermitianMatrix id = identity(Dims{3});
  DividedDifferenceKernel ki = build_kernel(id);
  HermitianMatrix beta = random_hermitian(Dims{3}, rng);
  CHECK((apply_L(ki, beta).mat() - beta.mat()).norm() <= 1e-12);
}

TEST_CASE("apply_L_pinv inverts apply_L on the support") {
  RngEngine rng(41);
  DensityMatrix full = random_density(Dims{4}, rng);
  DividedDifferenceKernel kf = build_kernel(full);
  CHECK((apply_L_pinv(kf, identity(Dims{4})).mat() - full.mat()).norm() <= 1e-9);

  DensityMatrix sing = random_density(Dims{5}, rng, 3);
  DividedDifferenceKernel ks = build_kernel(sing);
  HermitianMatrix p = support_projector(ks);
  CHECK((apply_L_pinv(ks, p).mat() - sing.mat()).norm() <= 1e-9);

  // Round trip on a random beta supported on supp(sigma).
  HermitianMatrix raw = random_hermitian(Dims{5}, rng);
  HermitianMatrix beta(Dims{5}, p.mat() * raw.mat() * p.mat());
  CHECK((apply_L_pinv(ks, apply_L(ks, beta)).mat() - beta.mat()).norm() <= 1e-9);

  // Composition law in both orders equals conjugation by the projector.
  HermitianMatrix any = random_hermitian(Dims{5}, rng);
  Matrix pinched = p.mat() * any.mat() * p.mat();
  CHECK((apply_L(ks, apply_L_pinv(ks, any)).mat() - pinched).norm() <= 1e-9);
  CHECK((apply_L_pinv(ks, apply_L(ks, any)).mat() - pinched).norm() <= 1e-9);
}

TEST_CASE("self-adjointness of L and its pseudo-inverse") {
  RngEngine rng(43);
  for (int trial = 0; trial < 100; ++trial) {
    DensityMatrix sigma = random_density(Dims{4}, rng, trial % 3 == 0 ? 3 : 4);
    DividedDifferenceKernel k = build_kernel(sigma);
    HermitianMatrix beta = random_hermitian(Dims{4}, rng);
    HermitianMatrix gamma = random_hermitian(Dims{4}, rng);
    CHECK(std::abs(trace_inner(apply_L(k, beta), gamma) -
                   trace_inner(beta, apply_L(k, gamma))) <= 1e-10);
    CHECK(std::abs(trace_inner(apply_L_pinv(k, beta), gamma) -
                   trace_inner(beta, apply_L_pinv(k, gamma))) <= 1e-10);
  }
}

TEST_CASE("basis covariance under eigenvalue degeneracy") {
  // sigma with a twofold degenerate eigenvalue; two different orthonormal
  // eigenbases must induce the same operator.
  RngEngine rng(47);
  Matrix u = haar_unitary(4, rng);
  RealVector vals(4);
  vals << 0.5, 0.3, 0.3, 0.2;  // applied in descending order below
  Matrix sig = u * vals.asDiagonal() * u.adjoint();
  HermitianMatrix sigma(Dims{4}, sig);

  Spectrum s1(vals, u);
  // Rotate inside the degenerate eigenspace (columns 1,2).
  Matrix r = Matrix::Identity(4, 4);
  Matrix block = haar_unitary(2, rng);
  r.block(1, 1, 2, 2) = block;
  Spectrum s2(vals, u * r);

  DividedDifferenceKernel k1{s1, RealMatrix(), RealMatrix(), 4, Dims{4}};
  DividedDifferenceKernel k2{s2, RealMatrix(), RealMatrix(), 4, Dims{4}};
  // Rebuild the tables for each basis the same way build_kernel does.
  auto fill = [](DividedDifferenceKernel& k) {
    const Index n = k.basis.order();
    k.tmat = RealMatrix::Zero(n, n);
    k.smat = RealMatrix::Zero(n, n);
    for (Index a = 0; a < n; ++a)
      for (Index b = 0; b < n; ++b) {
        k.tmat(a, b) = log_dd1(k.basis.eigenvalues()(a), k.basis.eigenvalues()(b));
        k.smat(a, b) = log_dd1_inv(k.basis.eigenvalues()(a), k.basis.eigenvalues()(b));
      }
  };
  fill(k1);
  fill(k2);

  HermitianMatrix beta = random_hermitian(Dims{4}, rng);
  CHECK((apply_L(k1, beta).mat() - apply_L(k2, beta).mat()).norm() <= 1e-9);
  CHECK((apply_L_pinv(k1, beta).mat() - apply_L_pinv(k2, beta).mat()).norm() <= 1e-9);
}

TEST_CASE("expansion_residual: scalar Taylor case and quadratic decay") {
  // sigma = I, xi = I, rho = I/n: residual = |log(1+t) - t|.
  HermitianMatrix id = identity(Dims{3});
  DensityMatrix mixed = maximally_mixed(Dims{3});
  const double t = 1e-2;
  CHECK(expansion_residual(id, id, mixed, t) ==
        doctest::Approx(std::abs(std::log1p(t) - t)).epsilon(1e-6));

  // Full-rank case: halving t divides the residual by about four.
  RngEngine rng(53);
  Matrix base = ginibre(4, 4, rng);
  HermitianMatrix sigma(Dims{4}, base * base.adjoint() / 4.0 + 0.3 * Matrix::Identity(4, 4));
  HermitianMatrix xi = random_hermitian(Dims{4}, rng);
  DensityMatrix rho = random_density(Dims{4}, rng);
  const double r1 = expansion_residual(sigma, xi, rho, 1e-2);
  const double r2 = expansion_residual(sigma, xi, rho, 5e-3);
  CHECK(r2 / r1 == doctest::Approx(0.25).epsilon(0.12));

  // residual / t^2 stays bounded along a decreasing t sequence.
  double bound = r1 / 1e-4;
  for (double tt : {5e-3, 2.5e-3, 1.25e-3}) {
    const double ratio = expansion_residual(sigma, xi, rho, tt) / (tt * tt);
    CHECK(ratio <= 2.0 * bound + 1e-9);
  }
}

TEST_CASE("expansion_residual: commuting singular blocks are exact") {
  Matrix sig = Matrix::Zero(2, 2), xi = Matrix::Zero(2, 2), rho = Matrix::Zero(2, 2);
  sig(0, 0) = 1.0;
  xi(1, 1) = 1.0;
  rho(0, 0) = 1.0;
  const double r = expansion_residual(HermitianMatrix(Dims{2}, sig),
                                      HermitianMatrix(Dims{2}, xi),
                                      HermitianMatrix(Dims{2}, rho), 1e-3);
  CHECK(r <= 1e-14);
}

TEST_CASE("expansion_residual: singular-case preconditions are enforced") {
  Matrix sig = Matrix::Zero(2, 2);
  sig(0, 0) = 1.0;
  HermitianMatrix sigma(Dims{2}, sig);
  HermitianMatrix xi_bad(Dims{2}, sig);  // vanishes on ker sigma
  DensityMatrix rho_ok(Dims{2}, sig);
  CHECK_THROWS_AS(expansion_residual(sigma, xi_bad, rho_ok, 1e-3), DomainError);

  HermitianMatrix xi_ok = identity(Dims{2});
  Matrix leak = Matrix::Zero(2, 2);
  leak(0, 0) = 0.5;
  leak(1, 1) = 0.5;
  CHECK_THROWS_AS(
      expansion_residual(sigma, xi_ok, HermitianMatrix(Dims{2}, leak), 1e-3), DomainError);
  CHECK_THROWS_AS(expansion_residual(sigma, xi_ok, rho_ok, 0.0), DomainError);
}

TEST_CASE("second divided difference of log: oracle comparison") {
  // Against high-precision direct evaluation at well-separated nodes and
  // against series limits at coincidences.
  auto direct = [](double a, double b, double c) {
    return ((std::log(a) - std::log(b)) / (a - b) - (std::log(b) - std::log(c)) / (b - c)) /
           (a - c);
  };
  CHECK(log_dd2(2.0, 1.0, 0.5) == doctest::Approx(direct(2.0, 1.0, 0.5)).epsilon(1e-12));
  CHECK(log_dd2(3.0, 3.0, 3.0) == doctest::Approx(-1.0 / 18.0).epsilon(1e-12));
  // Pair coincidence: d/da log[a, c] at a=1, c=2: (1/a - log[a,c])/(a-c).
  const double exact = (1.0 - (std::log(1.0) - std::log(2.0)) / (1.0 - 2.0)) / (1.0 - 2.0);
  CHECK(log_dd2(1.0, 1.0, 2.0) == doctest::Approx(exact).epsilon(1e-12));
  // Near-coincident nodes agree with slightly-separated direct evaluation.
  CHECK(log_dd2(1.0 + 1e-5, 1.0, 2.0) ==
        doctest::Approx(log_dd2(1.0 + 1e-3, 1.0, 2.0)).epsilon(2e-3));
  // Symmetry in all arguments.
  CHECK(log_dd2(0.3, 1.7, 0.9) == doctest::Approx(log_dd2(0.9, 0.3, 1.7)).epsilon(1e-12));
}

TEST_SUITE_END();
