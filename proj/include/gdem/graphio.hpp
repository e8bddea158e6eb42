#pragma once

#include <filesystem>
#include <vector>

#include "gdem/common.hpp"

namespace gdem {

/// An undirected node-classification dataset held in memory.
/// Adjacency is symmetric 0/1 with a zero diagonal; features are dense;
/// labels use -1 for unlabeled nodes; the three masks are disjoint.
struct RealGraph {
  int n = 0;
  int num_classes = 0;
  SpMat adjacency;             // n x n
  Mat features;                // n x d
  IVec labels;                 // n, -1 = unlabeled
  std::vector<std::uint8_t> train_mask, val_mask, test_mask;

  int dim() const { return static_cast<int>(features.cols()); }
  Vec degrees() const;
  int train_count() const;

  /// Throws ValidationError when any structural invariant is broken.
  void validate() const;
};

/// Reads the on-disk layout: meta.json, edges.csv, features.csv,
/// labels.csv, splits.json. Edges are symmetrized and self-loops dropped.
RealGraph load_graph(const std::filesystem::path& dataset_dir);

/// Inverse of load_graph for valid graphs (round-trips exactly).
void save_graph(const RealGraph& g, const std::filesystem::path& dataset_dir);

/// Subgraph induced on the largest connected component, indices remapped
/// contiguously. Connected input comes back unchanged.
RealGraph extract_lcc(const RealGraph& g);

/// L = I - D^{-1/2} A D^{-1/2}. Every node must have degree >= 1.
Mat normalized_laplacian(const RealGraph& g);
SpMat normalized_laplacian_sparse(const RealGraph& g);

/// Weighted variant used for reduced graphs (coresets, reconstructed A'):
/// zero-degree rows fall back to an identity row instead of erroring.
Mat normalized_laplacian_dense(const Mat& adjacency);

/// N x C one-hot rows for training nodes, zero rows elsewhere, so that
/// Y^T A X aggregates supervised messages only.
Mat label_matrix(const RealGraph& g);

/// Largest-remainder split of n_syn nodes across classes, proportional to
/// the training label distribution, with a floor of one node per class.
std::vector<int> predefined_class_counts(const RealGraph& g, int n_syn);

/// N' x C one-hot label matrix with rows grouped by class.
Mat predefine_labels(const RealGraph& g, int n_syn);

/// FNV-1a over the five dataset files; stored in run manifests.
std::uint64_t dataset_checksum(const std::filesystem::path& dataset_dir);

}  // namespace gdem
