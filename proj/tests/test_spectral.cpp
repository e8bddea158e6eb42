#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gdem/graphio.hpp"
#include "gdem/spectral.hpp"
#include "support/testgraphs.hpp"

using namespace gdem;
using namespace gdem::test;

TEST_CASE("eig_symmetric: P3 spectrum {0, 1, 2}") {
  Mat l = normalized_laplacian(make_path(3));
  EigResult eig = eig_symmetric(l);
  Vec oracle = eig3_closed_form(l);
  for (int i = 0; i < 3; ++i)
    CHECK(eig.values(i) == doctest::Approx(oracle(i)).epsilon(1e-9));
  CHECK(eig.values(0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(eig.values(1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(eig.values(2) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("eig_symmetric: K_n spectrum is {0, n/(n-1) x (n-1)}") {
  for (int n : {3, 5, 8}) {
    Mat l = normalized_laplacian(make_clique(n));
    EigResult eig = eig_symmetric(l);
    CHECK(eig.values(0) == doctest::Approx(0.0).epsilon(1e-10));
    for (int i = 1; i < n; ++i)
      CHECK(eig.values(i) ==
            doctest::Approx(double(n) / double(n - 1)).epsilon(1e-10));
  }
}

TEST_CASE("eig_symmetric: identity has a flat unit spectrum") {
  EigResult eig = eig_symmetric(Mat::Identity(5, 5));
  for (int i = 0; i < 5; ++i)
    CHECK(eig.values(i) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK((eig.vectors.transpose() * eig.vectors - Mat::Identity(5, 5))
            .cwiseAbs()
            .maxCoeff() < 1e-10);
}

TEST_CASE("eig_symmetric reconstructs the input") {
  RealGraph g = make_planted_two_block(60, 5, 21);
  Mat l = normalized_laplacian(g);
  EigResult eig = eig_symmetric(l);
  Mat rec = eig.vectors * eig.values.asDiagonal() * eig.vectors.transpose();
  CHECK((rec - l).norm() / l.norm() < 1e-8);
  CHECK(eig.values.minCoeff() > -1e-9);
  CHECK(eig.values.maxCoeff() < 2.0 + 1e-9);
}

TEST_CASE("eig_symmetric rejects non-symmetric input") {
  Mat m = Mat::Zero(3, 3);
  m(0, 1) = 1.0;
  CHECK_THROWS_AS(eig_symmetric(m), ValidationError);
}

TEST_CASE("select_principal_basis picks both spectrum ends") {
  Mat l = normalized_laplacian(make_path(3));
  EigResult eig = eig_symmetric(l);
  SpectralBasis b = select_principal_basis(eig, 1, 1);
  CHECK(b.k() == 2);
  CHECK(b.eigenvalues(0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(b.eigenvalues(1) == doctest::Approx(2.0).epsilon(1e-12));
  for (int k = 0; k < 2; ++k) {
    Vec resid = l * b.vectors.col(k) - b.eigenvalues(k) * b.vectors.col(k);
    CHECK(resid.norm() < 1e-10);
  }
}

TEST_CASE("select_principal_basis with k1=N reproduces the full spectrum") {
  RealGraph g = make_planted_two_block(24, 3, 4);
  Mat l = normalized_laplacian(g);
  EigResult eig = eig_symmetric(l);
  SpectralBasis b = select_principal_basis(eig, g.n, 0);
  Mat rec = b.vectors * b.eigenvalues.asDiagonal() * b.vectors.transpose();
  CHECK((rec - l).norm() / l.norm() < 1e-8);
  for (int i = 1; i < g.n; ++i) CHECK(b.eigenvalues(i) >= b.eigenvalues(i - 1));
}

TEST_CASE("select_principal_basis with k2=0 has no high-frequency columns") {
  Mat l = normalized_laplacian(make_clique(5));
  SpectralBasis b = select_principal_basis(eig_symmetric(l), 3, 0);
  CHECK(b.k2 == 0);
  CHECK(b.vectors.cols() == 3);
  CHECK(b.eigenvalues(0) == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("select_principal_basis rejects k1+k2 > N") {
  Mat l = normalized_laplacian(make_clique(4));
  CHECK_THROWS_AS(select_principal_basis(eig_symmetric(l), 3, 2),
                  ValidationError);
}

TEST_CASE("Rayleigh quotients stay inside the spectrum") {
  RealGraph g = make_planted_two_block(40, 4, 13);
  Mat l = normalized_laplacian(g);
  EigResult eig = eig_symmetric(l);
  Rng rng(99);
  std::normal_distribution<double> gauss;
  for (int trial = 0; trial < 20; ++trial) {
    Vec x(g.n);
    for (int i = 0; i < g.n; ++i) x(i) = gauss(rng);
    x.normalize();
    double r = x.dot(l * x);
    CHECK(r >= eig.values.minCoeff() - 1e-10);
    CHECK(r <= eig.values.maxCoeff() + 1e-10);
  }
}

TEST_CASE("total_variation: constant column on a regular graph is 0") {
  RealGraph g = make_clique(6);  // 5-regular
  Mat x = Mat::Ones(6, 1);
  TvProfile tv = total_variation(normalized_laplacian(g), x);
  CHECK(tv.per_dim(0) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("total_variation of an eigenvector column equals its eigenvalue") {
  Mat l = normalized_laplacian(make_path(3));
  EigResult eig = eig_symmetric(l);
  Mat x = eig.vectors;  // each column an eigenvector
  TvProfile tv = total_variation(l, x);
  for (int k = 0; k < 3; ++k)
    CHECK(tv.per_dim(k) == doctest::Approx(eig.values(k)).epsilon(1e-10));
}

TEST_CASE("total_variation: zero columns contribute 0") {
  Mat l = normalized_laplacian(make_clique(4));
  Mat x = Mat::Zero(4, 2);
  x.col(1).setOnes();
  TvProfile tv = total_variation(l, x);
  CHECK(tv.per_dim(0) == 0.0);
  CHECK(tv.average == doctest::Approx(tv.per_dim.mean()));
}

TEST_CASE("total_variation agrees with the degree-weighted edge sum") {
  RealGraph g = make_planted_two_block(30, 6, 31);
  TvProfile quad = total_variation(normalized_laplacian_sparse(g), g.features);
  Vec edge_sum = tv_edge_sum(g, g.features);
  for (int j = 0; j < 6; ++j)
    CHECK(std::abs(quad.per_dim(j) - edge_sum(j)) < 1e-8);
  CHECK(quad.per_dim.minCoeff() >= 0.0);
  CHECK(quad.per_dim.maxCoeff() <= 2.0 + 1e-9);
}

TEST_CASE("lanczos_extremal matches the dense solver on both ends") {
  RealGraph g = make_planted_two_block(500, 3, 77, 0.05, 0.005);
  SpMat l = normalized_laplacian_sparse(g);
  SpectralBasis dense = select_principal_basis(eig_symmetric(Mat(l)), 8, 4);
  SpectralBasis fast = lanczos_extremal(l, 8, 4);
  for (int i = 0; i < 12; ++i)
    CHECK(fast.eigenvalues(i) ==
          doctest::Approx(dense.eigenvalues(i)).epsilon(1e-7));
  // residuals and orthonormality of the Ritz vectors
  for (int i = 0; i < 12; ++i) {
    Vec resid = l * fast.vectors.col(i) -
                fast.eigenvalues(i) * fast.vectors.col(i);
    CHECK(resid.norm() < 1e-6);
  }
  Mat gram = fast.vectors.transpose() * fast.vectors;
  CHECK((gram - Mat::Identity(12, 12)).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("principal_basis dispatches to Lanczos above the threshold") {
  RealGraph g = make_planted_two_block(300, 3, 123, 0.06, 0.01);
  SpMat l = normalized_laplacian_sparse(g);
  SpectralOptions opts;
  opts.dense_threshold = 100;  // force the iterative path
  SpectralBasis fast = principal_basis(l, 5, 2, opts);
  SpectralBasis dense = select_principal_basis(eig_symmetric(Mat(l)), 5, 2);
  for (int i = 0; i < 7; ++i)
    CHECK(fast.eigenvalues(i) ==
          doctest::Approx(dense.eigenvalues(i)).epsilon(1e-7));
}
