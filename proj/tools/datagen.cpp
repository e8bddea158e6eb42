#include "datagen.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace gdem {

RealGraph make_benchmark_graph(const BenchmarkSpec& spec) {
  if (spec.num_classes * spec.topic_stride + (spec.topic_width - spec.topic_stride) >
      spec.d)
    throw ValidationError("vocabulary too small for the class topics");
  if (spec.topic_width < spec.topic_stride)
    throw ValidationError("topic_width must be >= topic_stride");
  if (spec.train_per_class * spec.num_classes + spec.val_size + spec.test_size >
      spec.n)
    throw ValidationError("splits larger than the node count");

  Rng rng(spec.seed);
  const int n = spec.n, c = spec.num_classes, d = spec.d;

  // Mildly uneven class sizes, in the spirit of citation benchmarks.
  std::vector<double> weight = {1.20, 1.35, 1.40, 0.55, 1.20, 1.00};
  weight.resize(c, 1.0);
  double wsum = std::accumulate(weight.begin(), weight.end(), 0.0);
  std::vector<int> class_size(c);
  int assigned = 0;
  for (int j = 0; j < c; ++j) {
    class_size[j] = static_cast<int>(std::floor(weight[j] / wsum * n));
    assigned += class_size[j];
  }
  for (int j = 0; assigned < n; j = (j + 1) % c) {
    ++class_size[j];
    ++assigned;
  }

  IVec labels(n);
  {
    std::vector<int> pool;
    pool.reserve(n);
    for (int j = 0; j < c; ++j) pool.insert(pool.end(), class_size[j], j);
    std::shuffle(pool.begin(), pool.end(), rng);
    for (int i = 0; i < n; ++i) labels(i) = pool[i];
  }
  std::vector<std::vector<int>> members(c);
  for (int i = 0; i < n; ++i) members[labels(i)].push_back(i);

  // Citation-style clusters inside each class.
  std::vector<std::vector<int>> cluster_of_node(n);  // members of own cluster
  std::vector<int> cluster_id(n, 0);
  std::vector<double> cluster_offset(n, 0.0);  // topic focus per cluster
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  {
    std::uniform_int_distribution<int> span(spec.cluster_min, spec.cluster_max);
    int next_id = 0;
    for (int j = 0; j < c; ++j) {
      std::vector<int> order = members[j];
      std::shuffle(order.begin(), order.end(), rng);
      std::size_t at = 0;
      while (at < order.size()) {
        std::size_t take = std::min<std::size_t>(span(rng), order.size() - at);
        std::vector<int> group(order.begin() + at, order.begin() + at + take);
        double offset = unit(rng);
        for (int node : group) {
          cluster_of_node[node] = group;
          cluster_id[node] = next_id;
          cluster_offset[node] = offset;
        }
        ++next_id;
        at += take;
      }
    }
  }

  // Edges: homophilic edges stay mostly inside a cluster; the rest of the
  // intra-class mass and all cross-class edges are drawn uniformly.
  std::set<std::pair<int, int>> edges;
  std::uniform_int_distribution<int> any_node(0, n - 1);
  auto add_edge = [&](int u, int v) {
    if (u == v) return false;
    if (u > v) std::swap(u, v);
    return edges.emplace(u, v).second;
  };
  while (static_cast<int>(edges.size()) < spec.edges) {
    int u = any_node(rng);
    int v;
    if (unit(rng) < spec.homophily) {
      const auto& group = cluster_of_node[u];
      if (group.size() > 1 && unit(rng) < spec.intra_cluster_share) {
        v = group[std::uniform_int_distribution<int>(
            0, static_cast<int>(group.size()) - 1)(rng)];
      } else {
        const auto& mates = members[labels(u)];
        v = mates[std::uniform_int_distribution<int>(
            0, static_cast<int>(mates.size()) - 1)(rng)];
      }
    } else {
      v = any_node(rng);
      if (labels(v) == labels(u)) continue;
    }
    add_edge(u, v);
  }

  // No isolated nodes: the normalized Laplacian needs degree >= 1.
  {
    std::vector<int> deg(n, 0);
    for (auto [u, v] : edges) {
      ++deg[u];
      ++deg[v];
    }
    for (int i = 0; i < n; ++i) {
      while (deg[i] == 0) {
        const auto& mates = members[labels(i)];
        int v = mates[std::uniform_int_distribution<int>(
            0, static_cast<int>(mates.size()) - 1)(rng)];
        if (add_edge(i, v)) {
          ++deg[i];
          ++deg[v];
        }
      }
    }
  }

  // Bag-of-words features. Class topics sit on a ring over the permuted
  // vocabulary so adjacent classes share topic_width - topic_stride words,
  // and noise draws follow a Zipf law over the whole vocabulary.
  std::vector<int> vocab(d);
  std::iota(vocab.begin(), vocab.end(), 0);
  std::shuffle(vocab.begin(), vocab.end(), rng);

  std::vector<double> zipf(d);
  for (int j = 0; j < d; ++j) zipf[j] = 1.0 / std::pow(j + 10.0, spec.zipf_exponent);
  std::discrete_distribution<int> noise_word(zipf.begin(), zipf.end());

  const int ring = c * spec.topic_stride;
  const int sub_width =
      std::max(1, static_cast<int>(spec.cluster_focus * spec.topic_width));
  Mat x = Mat::Zero(n, d);
  std::uniform_int_distribution<int> sub_offset(0, sub_width - 1);
  for (int i = 0; i < n; ++i) {
    int base = labels(i) * spec.topic_stride;
    // each cluster reads a focused slice of its class topic
    int focus =
        static_cast<int>(cluster_offset[i] * (spec.topic_width - sub_width));
    for (int w = 0; w < spec.words_per_node; ++w) {
      int word;
      if (unit(rng) < spec.core_share)
        word = vocab[(base + focus + sub_offset(rng)) % ring];
      else
        word = vocab[noise_word(rng)];
      x(i, word) = 1.0;
    }
  }
  // Row-normalized bag of words, the form citation pipelines consume.
  for (int i = 0; i < n; ++i) {
    double sum = x.row(i).sum();
    if (sum > 0.0) x.row(i) /= sum;
  }

  // Stratified train split, then random val/test from the rest.
  std::vector<std::uint8_t> train(n, 0), val(n, 0), test(n, 0);
  std::vector<int> rest;
  for (int j = 0; j < c; ++j) {
    std::vector<int> order = members[j];
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t k = 0; k < order.size(); ++k) {
      if (k < static_cast<std::size_t>(spec.train_per_class))
        train[order[k]] = 1;
      else
        rest.push_back(order[k]);
    }
  }
  std::shuffle(rest.begin(), rest.end(), rng);
  for (int k = 0; k < spec.val_size; ++k) val[rest[k]] = 1;
  for (int k = 0; k < spec.test_size; ++k) test[rest[spec.val_size + k]] = 1;

  Mat a = Mat::Zero(n, n);
  for (auto [u, v] : edges) a(u, v) = a(v, u) = 1.0;

  RealGraph g;
  g.n = n;
  g.num_classes = c;
  g.features = std::move(x);
  g.labels = labels;
  g.train_mask = std::move(train);
  g.val_mask = std::move(val);
  g.test_mask = std::move(test);
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(edges.size() * 2);
  for (auto [u, v] : edges) {
    trips.emplace_back(u, v, 1.0);
    trips.emplace_back(v, u, 1.0);
  }
  g.adjacency.resize(n, n);
  g.adjacency.setFromTriplets(trips.begin(), trips.end());
  g.validate();
  return g;
}

}  // namespace gdem
