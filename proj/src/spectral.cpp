#include "gdem/spectral.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#ifdef GDEM_USE_LAPACKE
#include <lapacke.h>
#endif

namespace gdem {

namespace {

void require_symmetric(const Mat& l, double tol) {
  if (l.rows() != l.cols()) throw ValidationError("matrix not square");
  double dev = (l - l.transpose()).cwiseAbs().maxCoeff();
  if (dev > tol)
    throw ValidationError("matrix not symmetric (max deviation " +
                          format_double(dev) + ")");
}

}  // namespace

EigResult eig_symmetric(const Mat& l) {
  require_symmetric(l, 1e-10);
  EigResult r;
#ifdef GDEM_USE_LAPACKE
  const auto n = static_cast<lapack_int>(l.rows());
  r.vectors = l;
  r.values.resize(n);
  lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n,
                                   r.vectors.data(), n, r.values.data());
  if (info != 0)
    throw NumericalError("dsyevd failed with info=" + std::to_string(info));
#else
  Eigen::SelfAdjointEigenSolver<Mat> solver(l);
  if (solver.info() != Eigen::Success)
    throw NumericalError("symmetric eigendecomposition failed");
  r.values = solver.eigenvalues();
  r.vectors = solver.eigenvectors();
#endif
  return r;
}

SpectralBasis select_principal_basis(const EigResult& eig, int k1, int k2) {
  const int n = static_cast<int>(eig.values.size());
  if (k1 < 0 || k2 < 0 || k1 + k2 > n)
    throw ValidationError("k1+k2 must lie in [0, N]; got k1=" +
                          std::to_string(k1) + " k2=" + std::to_string(k2) +
                          " N=" + std::to_string(n));
  SpectralBasis b;
  b.k1 = k1;
  b.k2 = k2;
  b.eigenvalues.resize(k1 + k2);
  b.vectors.resize(eig.vectors.rows(), k1 + k2);
  for (int i = 0; i < k1; ++i) {
    b.eigenvalues(i) = eig.values(i);
    b.vectors.col(i) = eig.vectors.col(i);
  }
  for (int i = 0; i < k2; ++i) {
    int src = n - k2 + i;  // ascending within the top block
    b.eigenvalues(k1 + i) = eig.values(src);
    b.vectors.col(k1 + i) = eig.vectors.col(src);
  }
  return b;
}

namespace {

// Lanczos with full reorthogonalization and thick restarts. The projected
// matrix is kept dense: after a restart it is an arrowhead plus the
// tridiagonal extension, and solving it densely at m <= a few hundred is
// cheap next to the matvecs.
class ThickRestartLanczos {
 public:
  ThickRestartLanczos(const SpMat& l, int k1, int k2, const LanczosOptions& o)
      : l_(l), n_(static_cast<int>(l.rows())), k1_(k1), k2_(k2), opts_(o) {
    nev_ = k1 + k2;
    m_ = opts_.subspace > 0 ? opts_.subspace
                            : std::max(2 * nev_ + 40, 60);
    m_ = std::min(m_, n_);
  }

  SpectralBasis run() {
    Rng rng(opts_.seed);
    v_ = Mat::Zero(n_, m_ + 1);
    h_ = Mat::Zero(m_ + 1, m_ + 1);
    v_.col(0) = random_unit(rng);
    int locked = 0;  // columns holding kept Ritz vectors after a restart

    for (int cycle = 0; cycle <= opts_.max_restarts; ++cycle) {
      int j = expand(locked);
      // Ritz pairs of the projected matrix.
      Eigen::SelfAdjointEigenSolver<Mat> small(h_.topLeftCorner(j, j));
      Vec theta = small.eigenvalues();
      Mat s = small.eigenvectors();
      double beta = h_(j, j - 1);

      std::vector<int> wanted = wanted_indices(j);
      bool done = true;
      for (int idx : wanted) {
        double resid = std::abs(beta * s(j - 1, idx));
        if (resid > opts_.tol * std::max(std::abs(theta(idx)), 1.0)) {
          done = false;
          break;
        }
      }
      if (done || j >= n_) return assemble(theta, s, j, rng);

      // Thick restart: keep a window around both wanted ends.
      int keep_lo = std::min(j - 1, k1_ + 15);
      int keep_hi = std::min(j - 1 - keep_lo, k2_ + 15);
      std::vector<int> keep;
      for (int i = 0; i < keep_lo; ++i) keep.push_back(i);
      for (int i = 0; i < keep_hi; ++i) keep.push_back(j - 1 - i);
      int l = static_cast<int>(keep.size());

      Mat newv(n_, m_ + 1);
      Mat newh = Mat::Zero(m_ + 1, m_ + 1);
      for (int i = 0; i < l; ++i) {
        newv.col(i) = v_.leftCols(j) * s.col(keep[i]);
        newh(i, i) = theta(keep[i]);
        newh(l, i) = newh(i, l) = beta * s(j - 1, keep[i]);
      }
      newv.col(l) = v_.col(j);  // the residual direction continues the basis
      v_.swap(newv);
      h_.swap(newh);
      locked = l;
    }
    throw NumericalError("Lanczos did not converge within restart cap");
  }

 private:
  Vec random_unit(Rng& rng) {
    std::normal_distribution<double> dist;
    Vec v(n_);
    for (int i = 0; i < n_; ++i) v(i) = dist(rng);
    return v / v.norm();
  }

  // Grows the basis from column `start` to m_, returning the reached size.
  int expand(int start) {
    Rng deflation_rng(opts_.seed ^ 0x9e3779b97f4a7c15ull);
    for (int j = start; j < m_; ++j) {
      Vec w = l_ * v_.col(j);
      // Two classical Gram-Schmidt passes keep the basis orthonormal.
      Vec coef = v_.leftCols(j + 1).transpose() * w;
      w -= v_.leftCols(j + 1) * coef;
      Vec coef2 = v_.leftCols(j + 1).transpose() * w;
      w -= v_.leftCols(j + 1) * coef2;
      coef += coef2;
      for (int i = 0; i <= j; ++i) h_(i, j) = h_(j, i) = coef(i);

      double beta = w.norm();
      if (beta < 1e-12) {
        // Invariant subspace hit; continue with a fresh direction.
        w = random_unit(deflation_rng);
        Vec c = v_.leftCols(j + 1).transpose() * w;
        w -= v_.leftCols(j + 1) * c;
        beta = w.norm();
        if (beta < 1e-12) return j + 1;
        h_(j + 1, j) = h_(j, j + 1) = 0.0;
        v_.col(j + 1) = w / beta;
        continue;
      }
      h_(j + 1, j) = h_(j, j + 1) = beta;
      v_.col(j + 1) = w / beta;
    }
    return m_;
  }

  SpectralBasis assemble(const Vec& theta, const Mat& s, int j, Rng&) {
    SpectralBasis b;
    b.k1 = k1_;
    b.k2 = k2_;
    b.eigenvalues.resize(nev_);
    b.vectors.resize(n_, nev_);
    for (int i = 0; i < k1_; ++i) {
      b.eigenvalues(i) = theta(i);
      b.vectors.col(i) = v_.leftCols(j) * s.col(i);
    }
    for (int i = 0; i < k2_; ++i) {
      int src = j - k2_ + i;
      b.eigenvalues(k1_ + i) = theta(src);
      b.vectors.col(k1_ + i) = v_.leftCols(j) * s.col(src);
    }
    for (int c = 0; c < nev_; ++c) b.vectors.col(c).normalize();
    return b;
  }

  std::vector<int> wanted_indices(int j) const {
    std::vector<int> idx;
    for (int i = 0; i < k1_; ++i) idx.push_back(i);
    for (int i = 0; i < k2_; ++i) idx.push_back(j - 1 - i);
    return idx;
  }

  const SpMat& l_;
  int n_, k1_, k2_, nev_, m_;
  LanczosOptions opts_;
  Mat v_, h_;
};

}  // namespace

SpectralBasis lanczos_extremal(const SpMat& l, int k1, int k2,
                               const LanczosOptions& opts) {
  const int n = static_cast<int>(l.rows());
  if (l.rows() != l.cols()) throw ValidationError("matrix not square");
  if (k1 < 0 || k2 < 0 || k1 + k2 > n || k1 + k2 == 0)
    throw ValidationError("invalid k1/k2 for Lanczos");
  // Tiny problems or near-full spectra: dense is both faster and exact.
  if (n <= 64 || 3 * (k1 + k2) >= n)
    return select_principal_basis(eig_symmetric(Mat(l)), k1, k2);
  return ThickRestartLanczos(l, k1, k2, opts).run();
}

SpectralBasis principal_basis(const SpMat& l, int k1, int k2,
                              const SpectralOptions& opts) {
  if (l.rows() <= opts.dense_threshold)
    return select_principal_basis(eig_symmetric(Mat(l)), k1, k2);
  return lanczos_extremal(l, k1, k2, opts.lanczos);
}

namespace {

template <typename MatType>
TvProfile tv_impl(const MatType& l, const Mat& x) {
  if (l.rows() != x.rows())
    throw ValidationError("Laplacian size does not match feature rows");
  TvProfile p;
  const int d = static_cast<int>(x.cols());
  p.per_dim.resize(d);
  for (int j = 0; j < d; ++j) {
    double nrm = x.col(j).norm();
    if (nrm == 0.0) {
      p.per_dim(j) = 0.0;  // zero columns carry no signal
      continue;
    }
    Vec xc = x.col(j) / nrm;
    double tv = xc.dot(l * xc);
    if (tv < 0.0 && tv > -1e-9) tv = 0.0;
    p.per_dim(j) = tv;
  }
  p.average = d > 0 ? p.per_dim.mean() : 0.0;
  return p;
}

}  // namespace

TvProfile total_variation(const Mat& l, const Mat& x) { return tv_impl(l, x); }
TvProfile total_variation(const SpMat& l, const Mat& x) { return tv_impl(l, x); }

}  // namespace gdem
