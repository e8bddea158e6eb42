// Writes a deterministic citation-style demo dataset in the on-disk
// layout the gdem CLI consumes.

#include <iostream>

#include <CLI11.hpp>

#include "datagen.hpp"

int main(int argc, char** argv) {
  CLI::App app{"generate a demo graph dataset"};
  std::filesystem::path out;
  gdem::BenchmarkSpec spec;
  app.add_option("--out", out, "output directory")->required();
  app.add_option("--seed", spec.seed, "rng seed")->capture_default_str();
  app.add_option("--nodes", spec.n, "node count")->capture_default_str();
  app.add_option("--features", spec.d, "feature dimension")->capture_default_str();
  app.add_option("--classes", spec.num_classes, "class count")
      ->capture_default_str();
  app.add_option("--edges", spec.edges, "edge count")->capture_default_str();
  app.add_option("--train-per-class", spec.train_per_class,
                 "training labels per class")->capture_default_str();
  app.add_option("--val", spec.val_size, "validation-set size")
      ->capture_default_str();
  app.add_option("--test", spec.test_size, "test-set size")
      ->capture_default_str();
  app.add_option("--words", spec.words_per_node, "bag-of-words draws per node")
      ->capture_default_str();
  app.add_option("--core-share", spec.core_share,
                 "probability a word comes from the class topic")
      ->capture_default_str();
  app.add_option("--topic-stride", spec.topic_stride,
                 "distinct topic words per class")->capture_default_str();
  app.add_option("--topic-width", spec.topic_width,
                 "topic window width (overlap = width - stride)")
      ->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  try {
    gdem::RealGraph g = gdem::make_benchmark_graph(spec);
    gdem::save_graph(g, out);
    std::cerr << "wrote N=" << g.n << " d=" << g.dim() << " C=" << g.num_classes
              << " to " << out.string() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
