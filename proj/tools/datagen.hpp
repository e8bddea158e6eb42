#pragma once

// Deterministic citation-style benchmark generator: a sparse homophilic
// graph with bag-of-words features, sized like the Citeseer benchmark by
// default. Used for demos and for the acceptance suite when no real
// dataset directory is supplied.

#include "gdem/graphio.hpp"

namespace gdem {

struct BenchmarkSpec {
  int n = 3327;
  int d = 3703;
  int num_classes = 6;
  int train_per_class = 20;
  int val_size = 500;
  int test_size = 1000;
  int edges = 4732;
  double homophily = 0.72;    // fraction of intra-class edges drawn
  int words_per_node = 32;    // bag-of-words draws per node
  double core_share = 0.5;    // probability a word comes from the class topic
  int topic_stride = 250;     // distinct topic words per class
  int topic_width = 500;      // topic window; width-stride overlaps the next class
  double zipf_exponent = 0.9; // skew of the global word-frequency law
  // Classes split into small citation-style clusters: most intra-class
  // edges stay inside a cluster, and each cluster focuses on a sub-window
  // of the class topic, which limits what neighborhood averaging recovers.
  int cluster_min = 5;
  int cluster_max = 15;
  double intra_cluster_share = 0.85;
  double cluster_focus = 0.4;  // sub-window width as a fraction of topic_width
  std::uint64_t seed = 11;
};

RealGraph make_benchmark_graph(const BenchmarkSpec& spec = {});

}  // namespace gdem
