#pragma once

#include "gdem/distill.hpp"
#include "gdem/graphio.hpp"
#include "gdem/spectral.hpp"

namespace gdem {

enum class FilterKind { lowpass, highpass, custom };

/// Scalar filter g(lambda). Custom filters are polynomials in lambda with
/// the given coefficients (constant term first).
struct FilterSpec {
  FilterKind kind = FilterKind::lowpass;
  std::vector<double> coeffs;

  double operator()(double lambda) const;
  static FilterSpec lowpass() { return {FilterKind::lowpass, {}}; }
  static FilterSpec highpass() { return {FilterKind::highpass, {}}; }
};

/// How strongly each eigenvalue dominates the filtered target
/// distribution g(L)^{2t}: coefficient g(lambda_k)^{2t} and its share.
struct DominanceProfile {
  Vec eigenvalues;
  Vec coefficients;
  Vec normalized_share;
  int t = 1;
};

DominanceProfile dominance_profile(const SpectralBasis& basis,
                                   const FilterSpec& filter, int t);

/// One-layer gradient-matching toy: optimizes (A', X') so the linear
/// model's gradient matches the real one under a low- or high-pass
/// filter. A' is a symmetric latent squashed into [0, 1].
struct ToyResult {
  Mat a_syn;
  Mat x_syn;
  std::vector<double> loss_trace;
};

struct ToyOptions {
  int steps = 300;
  double lr = 0.05;
  int w_draws = 5;  // fresh parameter draws averaged per step
  std::uint64_t seed = 0;
};

ToyResult toy_gradient_matching(const RealGraph& g, FilterKind filter,
                                int n_syn, const ToyOptions& opts = {});

/// Loss and gradients of the matching objective for one fixed W, given
/// the real-side gradient matrix; exposed for finite-difference checks.
double toy_matching_loss(const Mat& g_real, const Mat& a_syn, const Mat& x_syn,
                         const Mat& y_syn, FilterKind filter, const Mat& w,
                         Mat* da_syn, Mat* dx_syn);

struct TvComparison {
  TvProfile real;
  TvProfile synthetic;
  double delta = 0.0;  // synthetic average minus real average
};

TvComparison tv_compare(const RealGraph& g, const SyntheticGraph& syn);
TvComparison tv_compare(const RealGraph& g, const Mat& a_syn, const Mat& x_syn);

/// Restricted-spectral-similarity data for one feature column.
struct RssColumn {
  double real_quad;       // x^T L x (full Laplacian)
  double syn_quad;        // x'^T L' x'
  double gap;             // |real_quad - syn_quad|
  double truncated_gap;   // |sum lambda_k (u_k^T x)^2 - syn_quad|
  double bound;           // sum lambda_k |...| + |delta|
  double delta_residual;  // x'^T L' x' - sum lambda_k (u_k'^T x')^2
};

struct RssReport {
  std::vector<RssColumn> per_column;
  double epsilon = 0.0;  // max bound over columns
};

RssReport rss_check(const SpectralBasis& basis, const SpMat& l_real,
                    const Mat& x_real, const SyntheticGraph& syn);

}  // namespace gdem
