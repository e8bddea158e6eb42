#pragma once

#include "gdem/common.hpp"

namespace gdem {

/// Full symmetric eigendecomposition, eigenvalues ascending.
struct EigResult {
  Vec values;
  Mat vectors;  // columns aligned with values
};

/// The k1 smallest plus k2 largest eigenpairs of a normalized Laplacian.
/// Eigenvalue order: entries [0, k1) ascending smallest, entries [k1, k)
/// ascending largest block.
struct SpectralBasis {
  Vec eigenvalues;  // length k1 + k2
  Mat vectors;      // N x (k1 + k2), column-orthonormal
  int k1 = 0;
  int k2 = 0;

  int k() const { return k1 + k2; }
};

struct TvProfile {
  Vec per_dim;     // one total variation per feature column, in [0, 2]
  double average = 0.0;
};

/// Throws ValidationError if the input deviates from symmetry by more
/// than 1e-10 (max-abs).
EigResult eig_symmetric(const Mat& l);

SpectralBasis select_principal_basis(const EigResult& eig, int k1, int k2);

struct LanczosOptions {
  double tol = 1e-8;       // relative residual per requested pair
  int max_restarts = 200;
  int subspace = 0;        // 0: auto (>= 2k + 20)
  std::uint64_t seed = 7;
};

/// Thick-restart Lanczos for extremal pairs of a large sparse Laplacian.
/// Both ends of the spectrum converge from the same Krylov subspace.
SpectralBasis lanczos_extremal(const SpMat& l, int k1, int k2,
                               const LanczosOptions& opts = {});

struct SpectralOptions {
  int dense_threshold = 8000;  // above this, use the Lanczos backend
  LanczosOptions lanczos;
};

/// Dispatches between the dense solver and Lanczos on matrix size.
SpectralBasis principal_basis(const SpMat& l, int k1, int k2,
                              const SpectralOptions& opts = {});

/// Per-column x^T L x after unit-normalizing each column. All-zero
/// columns contribute 0.
TvProfile total_variation(const Mat& l, const Mat& x);
TvProfile total_variation(const SpMat& l, const Mat& x);

}  // namespace gdem
