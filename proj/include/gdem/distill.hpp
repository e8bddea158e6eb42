#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gdem/graphio.hpp"
#include "gdem/spectral.hpp"

namespace gdem {

/// Everything the optimizer needs, matching the config-file schema plus
/// fixed optimizer constants.
struct DistillConfig {
  int epochs = 500;
  int k1 = -1;  // -1: derive from rk and n_syn
  int k2 = -1;
  int tau1 = 5;
  int tau2 = 1;
  double alpha = 1.0;
  double beta = 1e-5;
  double gamma = 1.0;
  double lr_feat = 1e-4;
  double lr_eigenvecs = 1e-2;
  double ratio = 0.018;
  double rk = 0.9;
  std::uint64_t seed = 0;
  std::string init_features = "mlp";  // "mlp" | "class_sample"
  double sbm_p_intra = -1.0;          // -1: auto from block sizes
  double sbm_p_inter = -1.0;          // -1: p_intra / 10
  std::string ratio_base = "all_nodes";  // "all_nodes" | "train_nodes"

  // Adam constants (not part of the config-file schema).
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;

  int n_syn_for(const RealGraph& g) const;
  /// k1/k2 after resolving the rk split against n_syn.
  std::pair<int, int> resolve_k(int n_syn) const;
  void validate(int n_syn) const;

  static DistillConfig from_json(const nlohmann::json& j);
  static DistillConfig from_json_file(const std::filesystem::path& p);
  nlohmann::json to_json() const;
};

/// The distilled artifact: learned eigenbasis and features, fixed labels,
/// and the real spectrum they are paired with.
struct SyntheticGraph {
  Mat u_syn;        // N' x K
  Mat x_syn;        // N' x d
  Mat y_syn;        // N' x C, one-hot rows grouped by class
  Vec eigenvalues;  // K, copied from the real basis

  int n() const { return static_cast<int>(u_syn.rows()); }
  int k() const { return static_cast<int>(u_syn.cols()); }
};

/// Real-graph quantities computed once and reused every epoch.
struct PrecomputedReal {
  SpectralBasis basis;
  Mat proj;    // K x d, row k = u_k^T X
  Mat h_real;  // C x d, Y^T A X over training labels
};

PrecomputedReal precompute_real(const RealGraph& g, int k1, int k2,
                                const SpectralOptions& opts = {});

/// Eigenbasis init: eigenvectors of the normalized Laplacian of an SBM
/// draw whose blocks follow the predefined labels. Isolated nodes trigger
/// bounded redraws, then get wired to an in-block neighbor.
Mat init_eigenbasis_sbm(int n_syn, int k1, int k2, const Mat& y_syn,
                        std::uint64_t seed, double p_intra, double p_inter);

/// Frozen-MLP accuracy on the synthetic labels, before (plain class
/// means) and after the refinement steps.
struct FeatureInitReport {
  double baseline_accuracy = 0.0;
  double final_accuracy = 0.0;
};

/// Feature init. "mlp": class-mean + noise refined against a frozen MLP
/// trained on the real training features. "class_sample": rows drawn from
/// same-class training rows, no optimization.
Mat init_features(const RealGraph& g, const Mat& y_syn,
                  const DistillConfig& cfg,
                  FeatureInitReport* report = nullptr);

double loss_eigenbasis(const PrecomputedReal& pre, const Mat& u_syn,
                       const Mat& x_syn);
double loss_orthogonality(const Mat& u_syn);
double loss_discrimination(const PrecomputedReal& pre, const Mat& u_syn,
                           const Mat& x_syn, const Mat& y_syn,
                           const Vec& eigenvalues);
double total_loss(const DistillConfig& cfg, double l_e, double l_d, double l_o);

struct LossGrads {
  double l_e = 0.0, l_o = 0.0, l_d = 0.0, l_total = 0.0;
  Mat du;  // dL_total/dU'
  Mat dx;  // dL_total/dX'
};

LossGrads grad_losses(const PrecomputedReal& pre, const Mat& u_syn,
                      const Mat& x_syn, const Mat& y_syn,
                      const Vec& eigenvalues, const DistillConfig& cfg);

struct TraceRow {
  int epoch;
  double l_e, l_o, l_d, l_total;
  char updated;  // 'U' or 'X'
};

struct DistillResult {
  SyntheticGraph graph;
  std::vector<TraceRow> trace;
};

/// Called with epoch 0 before the first update and epoch t+1 after each
/// epoch; used for TV / RSS convergence diagnostics.
using CheckpointHook = std::function<void(int epoch, const SyntheticGraph&)>;

/// Algorithm: alternating Adam steps on U' then X' on a tau1/tau2 cycle.
/// Throws NumericalError (with epoch and loss breakdown) on NaN/Inf.
DistillResult distill(const RealGraph& g, const PrecomputedReal& pre,
                      const DistillConfig& cfg,
                      const CheckpointHook& hook = {});

struct ConstructedGraph {
  Mat a_syn;  // sum (1 - lambda_k) u'_k u'_k^T
  Mat l_syn;  // sum lambda_k u'_k u'_k^T
};

ConstructedGraph construct_synthetic(const SyntheticGraph& syn);

/// On-disk synthetic-run format: u_syn.csv, x_syn.csv, y_syn.csv,
/// spectrum.csv, trace.csv.
void save_synthetic(const SyntheticGraph& syn,
                    const std::vector<TraceRow>& trace,
                    const std::filesystem::path& dir);
SyntheticGraph load_synthetic(const std::filesystem::path& dir);

}  // namespace gdem
