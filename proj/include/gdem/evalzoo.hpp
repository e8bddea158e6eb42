#pragma once

#include <memory>
#include <string>
#include <vector>

#include <Eigen/SparseLU>

#include "gdem/distill.hpp"
#include "gdem/graphio.hpp"

namespace gdem {

enum class ModelKind { sgc, gcn, ppnp, cheby, bern, gpr };

ModelKind model_kind_from_string(const std::string& s);
std::string to_string(ModelKind k);
bool is_polynomial(ModelKind k);

struct EvalModelSpec {
  ModelKind kind = ModelKind::gcn;
  int depth_or_order = 2;  // aggregation depth (spatial) or poly order
  int hidden = 256;
  double dropout = 0.5;
  double lr = 1e-2;
  double weight_decay = 5e-4;
  int epochs = 2000;
  int eval_interval = 10;
  double ppnp_alpha = 0.1;

  static EvalModelSpec defaults(ModelKind k);
};

/// Explicit propagation matrices. Spatial kinds get one matrix (negative
/// entries clamped to zero, self-loops added, symmetric renormalization);
/// polynomial kinds get the basis stack of L up to `depth_or_order`.
std::vector<Mat> build_propagation(ModelKind kind, const Mat& a_or_l,
                                   const EvalModelSpec& spec);

/// A propagation operator that is either the dense stack above or a
/// sparse-backed equivalent for large real graphs.
struct Propagation {
  ModelKind kind = ModelKind::gcn;
  int order = 2;
  double ppnp_alpha = 0.1;

  std::vector<Mat> dense;  // dense path
  SpMat sp;                // sparse path: A-hat or L
  std::shared_ptr<Eigen::SparseLU<SpMat>> ppnp_solver;
  bool sparse = false;

  static Propagation make_dense(ModelKind kind, const Mat& a_or_l,
                                const EvalModelSpec& spec);
  static Propagation make_sparse(ModelKind kind, const RealGraph& g,
                                 const EvalModelSpec& spec);

  Mat apply_step(const Mat& h) const;  // one A-hat application
  Mat apply_full(const Mat& h) const;  // A-hat^depth or the PPNP kernel
  std::vector<Mat> apply_bases(const Mat& h) const;  // B_j h per basis term
};

/// Trained parameters. sgc: w1 is the single d x C map. gcn/ppnp: w1, w2.
/// Polynomial kinds add per-basis-term coefficients theta.
struct TrainedModel {
  ModelKind kind = ModelKind::gcn;
  Mat w1, w2;
  Vec theta;

  int num_classes() const;
};

/// What eval models train on: a dense reduced graph with one-hot labels.
struct TrainingGraph {
  Mat a;  // adjacency (raw weights; clamping happens in build_propagation)
  Mat l;  // Laplacian for spectral kinds
  Mat x;
  Mat y;
};

TrainingGraph training_graph_from(const SyntheticGraph& syn);

/// Real-graph evaluation side, built once per (graph, spec) and reused
/// across seeds. Features switch to sparse storage when they are sparse.
struct RealSide {
  const RealGraph* g = nullptr;
  Propagation prop;
  SpMat x_sparse;
  bool use_sparse_x = false;
  std::vector<int> train_rows, val_rows, test_rows;
};

RealSide make_real_side(const RealGraph& g, const EvalModelSpec& spec);

/// Forward pass without dropout (shared by checkpointing and evaluate).
Mat model_logits(const TrainedModel& m, const EvalModelSpec& spec,
                 const Propagation& prop, const Mat& x_dense);
Mat model_logits(const TrainedModel& m, const EvalModelSpec& spec,
                 const RealSide& real);

struct TrainOutcome {
  TrainedModel model;  // best validation checkpoint
  double best_val_acc = 0.0;
  double test_acc = 0.0;
};

/// Full-batch Adam on the training graph; checkpoint selection by
/// real-graph validation accuracy every eval_interval epochs.
TrainOutcome train_model(const TrainingGraph& tg, const EvalModelSpec& spec,
                         const RealSide& real, std::uint64_t seed);

enum class Split { train, val, test };

double evaluate(const TrainedModel& m, const EvalModelSpec& spec,
                const RealSide& real, Split split);

/// Class-stratified uniform sample of training nodes with the induced
/// subgraph; the per-class counts follow predefined_class_counts.
struct Coreset {
  std::vector<int> nodes;
  Mat a;
  Mat x;
  Mat y;
};

Coreset random_coreset(const RealGraph& g, int n_syn, std::uint64_t seed);
TrainingGraph training_graph_from(const Coreset& coreset);

struct RunRecord {
  ModelKind kind;
  std::uint64_t seed;
  double val_acc, test_acc;
};

struct EvalReport {
  std::vector<ModelKind> kinds;
  std::vector<std::pair<double, double>> per_model;  // (mean, std) test acc
  double avg = 0.0;
  double std_across_models = 0.0;  // population std of the per-model means
  int seeds_per_model = 0;
  std::vector<RunRecord> runs;
};

EvalReport cross_architecture_report(const TrainingGraph& tg,
                                     const RealGraph& g,
                                     const std::vector<EvalModelSpec>& specs,
                                     const std::vector<std::uint64_t>& seeds);

}  // namespace gdem
