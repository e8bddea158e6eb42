#include "gdem/graphio.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace gdem {

namespace {

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ValidationError("missing file: " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json(const fs::path& p) {
  try {
    return json::parse(read_file(p));
  } catch (const json::exception& e) {
    throw ValidationError(p.string() + ": " + e.what());
  }
}

double parse_double(std::string_view tok, const fs::path& p, int line) {
  double v = 0.0;
  auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
    throw ValidationError(p.string() + ":" + std::to_string(line) +
                          ": bad number '" + std::string(tok) + "'");
  return v;
}

long parse_int(std::string_view tok, const fs::path& p, int line) {
  long v = 0;
  auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
    throw ValidationError(p.string() + ":" + std::to_string(line) +
                          ": bad integer '" + std::string(tok) + "'");
  return v;
}

// Splits a CSV line in place; tolerates a trailing \r from CRLF files.
void split_csv(std::string_view line, std::vector<std::string_view>& out) {
  out.clear();
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  std::size_t start = 0;
  while (true) {
    std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

void apply_split(const json& ids, int n, const char* name,
                 std::vector<std::uint8_t>& mask) {
  mask.assign(n, 0);
  if (!ids.is_array())
    throw ValidationError(std::string("splits.json: '") + name +
                          "' must be an array");
  for (const auto& v : ids) {
    long i = v.get<long>();
    if (i < 0 || i >= n)
      throw ValidationError(std::string("splits.json: ") + name +
                            " index out of range: " + std::to_string(i));
    mask[static_cast<std::size_t>(i)] = 1;
  }
}

}  // namespace

Vec RealGraph::degrees() const {
  Vec d = Vec::Zero(n);
  for (int k = 0; k < adjacency.outerSize(); ++k)
    for (SpMat::InnerIterator it(adjacency, k); it; ++it)
      d(it.row()) += it.value();
  return d;
}

int RealGraph::train_count() const {
  return static_cast<int>(std::count(train_mask.begin(), train_mask.end(), 1));
}

void RealGraph::validate() const {
  if (n <= 0) throw ValidationError("graph has no nodes");
  if (adjacency.rows() != n || adjacency.cols() != n)
    throw ValidationError("adjacency shape mismatch");
  if (features.rows() != n) throw ValidationError("feature row count mismatch");
  if (labels.size() != n) throw ValidationError("label count mismatch");
  if (static_cast<int>(train_mask.size()) != n ||
      static_cast<int>(val_mask.size()) != n ||
      static_cast<int>(test_mask.size()) != n)
    throw ValidationError("mask length mismatch");

  SpMat diff = SpMat(adjacency.transpose()) - adjacency;
  if (diff.coeffs().size() > 0 && diff.coeffs().cwiseAbs().maxCoeff() > 0)
    throw ValidationError("adjacency not symmetric");
  for (int k = 0; k < adjacency.outerSize(); ++k)
    for (SpMat::InnerIterator it(adjacency, k); it; ++it) {
      if (it.row() == it.col() && it.value() != 0.0)
        throw ValidationError("adjacency has a self-loop");
      if (it.value() != 0.0 && it.value() != 1.0)
        throw ValidationError("adjacency entry not in {0,1}");
    }

  for (int i = 0; i < n; ++i) {
    int overlap = int(train_mask[i]) + int(val_mask[i]) + int(test_mask[i]);
    if (overlap > 1)
      throw ValidationError("masks overlap at node " + std::to_string(i));
    if (labels(i) < -1 || labels(i) >= num_classes)
      throw ValidationError("label out of range at node " + std::to_string(i));
    if (train_mask[i] && labels(i) < 0)
      throw ValidationError("train node " + std::to_string(i) + " has no label");
  }
}

RealGraph load_graph(const fs::path& dir) {
  RealGraph g;

  json meta = read_json(dir / "meta.json");
  g.n = meta.at("num_nodes").get<int>();
  int d = meta.at("num_features").get<int>();
  g.num_classes = meta.at("num_classes").get<int>();
  if (g.n <= 0 || d <= 0 || g.num_classes <= 0)
    throw ValidationError("meta.json: counts must be positive");

  // edges.csv: one "u,v" per line; symmetrize, drop self-loops and dups.
  {
    fs::path p = dir / "edges.csv";
    std::string text = read_file(p);
    std::istringstream in(text);
    std::string line;
    std::vector<std::string_view> tok;
    std::set<std::pair<int, int>> edges;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty() || line == "\r") continue;
      split_csv(line, tok);
      if (tok.size() != 2)
        throw ValidationError(p.string() + ":" + std::to_string(lineno) +
                              ": expected 'u,v'");
      long u = parse_int(tok[0], p, lineno);
      long v = parse_int(tok[1], p, lineno);
      if (u < 0 || u >= g.n || v < 0 || v >= g.n)
        throw ValidationError(p.string() + ":" + std::to_string(lineno) +
                              ": node index out of range");
      if (u == v) continue;
      edges.emplace(int(u), int(v));
      edges.emplace(int(v), int(u));
    }
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(edges.size());
    for (auto [u, v] : edges) trips.emplace_back(u, v, 1.0);
    g.adjacency.resize(g.n, g.n);
    g.adjacency.setFromTriplets(trips.begin(), trips.end());
  }

  // features.csv: n rows of d comma-separated values.
  {
    fs::path p = dir / "features.csv";
    std::string text = read_file(p);
    std::istringstream in(text);
    std::string line;
    std::vector<std::string_view> tok;
    g.features.resize(g.n, d);
    int row = 0;
    while (std::getline(in, line)) {
      if (line.empty() || line == "\r") continue;
      if (row >= g.n)
        throw ValidationError(p.string() + ": more rows than num_nodes");
      split_csv(line, tok);
      if (static_cast<int>(tok.size()) != d)
        throw ValidationError(p.string() + ":" + std::to_string(row + 1) +
                              ": expected " + std::to_string(d) + " values, got " +
                              std::to_string(tok.size()));
      for (int j = 0; j < d; ++j)
        g.features(row, j) = parse_double(tok[j], p, row + 1);
      ++row;
    }
    if (row != g.n)
      throw ValidationError(p.string() + ": expected " + std::to_string(g.n) +
                            " rows, got " + std::to_string(row));
  }

  // labels.csv: n integers, -1 for unlabeled.
  {
    fs::path p = dir / "labels.csv";
    std::string text = read_file(p);
    std::istringstream in(text);
    std::string line;
    g.labels.resize(g.n);
    int row = 0;
    while (std::getline(in, line)) {
      if (line.empty() || line == "\r") continue;
      if (row >= g.n)
        throw ValidationError(p.string() + ": more rows than num_nodes");
      if (!line.empty() && line.back() == '\r') line.pop_back();
      long y = parse_int(line, p, row + 1);
      if (y < -1 || y >= g.num_classes)
        throw ValidationError(p.string() + ":" + std::to_string(row + 1) +
                              ": label outside [0," +
                              std::to_string(g.num_classes) + ")");
      g.labels(row) = static_cast<int>(y);
      ++row;
    }
    if (row != g.n)
      throw ValidationError(p.string() + ": expected " + std::to_string(g.n) +
                            " rows, got " + std::to_string(row));
  }

  {
    json splits = read_json(dir / "splits.json");
    apply_split(splits.at("train"), g.n, "train", g.train_mask);
    apply_split(splits.at("val"), g.n, "val", g.val_mask);
    apply_split(splits.at("test"), g.n, "test", g.test_mask);
  }

  g.validate();
  return g;
}

void save_graph(const RealGraph& g, const fs::path& dir) {
  g.validate();
  fs::create_directories(dir);

  {
    json meta = {{"num_nodes", g.n},
                 {"num_features", g.dim()},
                 {"num_classes", g.num_classes}};
    std::ofstream out(dir / "meta.json", std::ios::binary);
    out << meta.dump(2) << "\n";
  }
  {
    std::ofstream out(dir / "edges.csv", std::ios::binary);
    for (int k = 0; k < g.adjacency.outerSize(); ++k)
      for (SpMat::InnerIterator it(g.adjacency, k); it; ++it)
        if (it.row() < it.col())
          out << it.row() << "," << it.col() << "\n";
  }
  {
    std::ofstream out(dir / "features.csv", std::ios::binary);
    std::string line;
    for (int i = 0; i < g.n; ++i) {
      line.clear();
      for (int j = 0; j < g.dim(); ++j) {
        if (j) line += ',';
        line += format_double(g.features(i, j));
      }
      line += '\n';
      out << line;
    }
  }
  {
    std::ofstream out(dir / "labels.csv", std::ios::binary);
    for (int i = 0; i < g.n; ++i) out << g.labels(i) << "\n";
  }
  {
    json splits;
    auto ids = [&](const std::vector<std::uint8_t>& mask) {
      json arr = json::array();
      for (int i = 0; i < g.n; ++i)
        if (mask[i]) arr.push_back(i);
      return arr;
    };
    splits["train"] = ids(g.train_mask);
    splits["val"] = ids(g.val_mask);
    splits["test"] = ids(g.test_mask);
    std::ofstream out(dir / "splits.json", std::ios::binary);
    out << splits.dump(2) << "\n";
  }
}

RealGraph extract_lcc(const RealGraph& g) {
  g.validate();
  std::vector<int> comp(g.n, -1);
  int n_comp = 0;
  for (int s = 0; s < g.n; ++s) {
    if (comp[s] >= 0) continue;
    std::queue<int> q;
    q.push(s);
    comp[s] = n_comp;
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (SpMat::InnerIterator it(g.adjacency, u); it; ++it) {
        int v = static_cast<int>(it.row());
        if (comp[v] < 0) {
          comp[v] = n_comp;
          q.push(v);
        }
      }
    }
    ++n_comp;
  }

  std::vector<int> size(n_comp, 0);
  for (int c : comp) ++size[c];
  int best = static_cast<int>(std::max_element(size.begin(), size.end()) -
                              size.begin());
  if (size[best] == g.n) return g;

  std::vector<int> old_of;
  std::vector<int> new_of(g.n, -1);
  old_of.reserve(size[best]);
  for (int i = 0; i < g.n; ++i)
    if (comp[i] == best) {
      new_of[i] = static_cast<int>(old_of.size());
      old_of.push_back(i);
    }

  RealGraph out;
  out.n = size[best];
  out.num_classes = g.num_classes;
  out.features.resize(out.n, g.dim());
  out.labels.resize(out.n);
  out.train_mask.resize(out.n);
  out.val_mask.resize(out.n);
  out.test_mask.resize(out.n);
  for (int i = 0; i < out.n; ++i) {
    int o = old_of[i];
    out.features.row(i) = g.features.row(o);
    out.labels(i) = g.labels(o);
    out.train_mask[i] = g.train_mask[o];
    out.val_mask[i] = g.val_mask[o];
    out.test_mask[i] = g.test_mask[o];
  }
  std::vector<Eigen::Triplet<double>> trips;
  for (int k = 0; k < g.adjacency.outerSize(); ++k)
    for (SpMat::InnerIterator it(g.adjacency, k); it; ++it) {
      int u = new_of[it.row()], v = new_of[it.col()];
      if (u >= 0 && v >= 0) trips.emplace_back(u, v, it.value());
    }
  out.adjacency.resize(out.n, out.n);
  out.adjacency.setFromTriplets(trips.begin(), trips.end());
  return out;
}

SpMat normalized_laplacian_sparse(const RealGraph& g) {
  Vec deg = g.degrees();
  for (int i = 0; i < g.n; ++i)
    if (deg(i) <= 0.0)
      throw ValidationError("node " + std::to_string(i) +
                            " has degree 0; run extract_lcc first");
  Vec dinv = deg.array().rsqrt();
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(g.adjacency.nonZeros() + g.n);
  for (int i = 0; i < g.n; ++i) trips.emplace_back(i, i, 1.0);
  for (int k = 0; k < g.adjacency.outerSize(); ++k)
    for (SpMat::InnerIterator it(g.adjacency, k); it; ++it)
      trips.emplace_back(it.row(), it.col(),
                         -it.value() * dinv(it.row()) * dinv(it.col()));
  SpMat L(g.n, g.n);
  L.setFromTriplets(trips.begin(), trips.end());
  return L;
}

Mat normalized_laplacian(const RealGraph& g) {
  return Mat(normalized_laplacian_sparse(g));
}

Mat normalized_laplacian_dense(const Mat& a) {
  if (a.rows() != a.cols()) throw ValidationError("adjacency must be square");
  const int n = static_cast<int>(a.rows());
  Vec deg = a.rowwise().sum();
  Vec dinv(n);
  for (int i = 0; i < n; ++i) dinv(i) = deg(i) > 0.0 ? 1.0 / std::sqrt(deg(i)) : 0.0;
  Mat l = -(dinv.asDiagonal() * a * dinv.asDiagonal());
  l.diagonal().array() += 1.0;
  return l;
}

Mat label_matrix(const RealGraph& g) {
  Mat y = Mat::Zero(g.n, g.num_classes);
  for (int i = 0; i < g.n; ++i)
    if (g.train_mask[i]) y(i, g.labels(i)) = 1.0;
  return y;
}

std::vector<int> predefined_class_counts(const RealGraph& g, int n_syn) {
  const int c = g.num_classes;
  if (n_syn < c)
    throw ValidationError("n_syn (" + std::to_string(n_syn) +
                          ") smaller than class count (" + std::to_string(c) + ")");
  std::vector<long> n_c(c, 0);
  long n_l = 0;
  for (int i = 0; i < g.n; ++i)
    if (g.train_mask[i]) {
      ++n_c[g.labels(i)];
      ++n_l;
    }
  if (n_l == 0) throw ValidationError("no training labels");

  // Largest-remainder rounding of the proportional quotas.
  std::vector<int> counts(c, 0);
  std::vector<std::pair<double, int>> rema(c);
  long assigned = 0;
  for (int j = 0; j < c; ++j) {
    double quota = double(n_c[j]) * double(n_syn) / double(n_l);
    counts[j] = static_cast<int>(std::floor(quota));
    assigned += counts[j];
    rema[j] = {quota - std::floor(quota), j};
  }
  std::stable_sort(rema.begin(), rema.end(), [](const auto& a, const auto& b) {
    return a.first > b.first;
  });
  for (long k = 0; k < n_syn - assigned; ++k) ++counts[rema[k % c].second];

  // Give every class at least one node, taking from the largest classes.
  for (int j = 0; j < c; ++j) {
    while (counts[j] < 1) {
      int big = static_cast<int>(std::max_element(counts.begin(), counts.end()) -
                                 counts.begin());
      if (counts[big] <= 1)
        throw ValidationError("cannot give every class a node with n_syn=" +
                              std::to_string(n_syn));
      --counts[big];
      ++counts[j];
    }
  }
  return counts;
}

Mat predefine_labels(const RealGraph& g, int n_syn) {
  std::vector<int> counts = predefined_class_counts(g, n_syn);
  Mat y = Mat::Zero(n_syn, g.num_classes);
  int row = 0;
  for (int j = 0; j < g.num_classes; ++j)
    for (int k = 0; k < counts[j]; ++k) y(row++, j) = 1.0;
  return y;
}

std::uint64_t dataset_checksum(const fs::path& dir) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const char* name :
       {"meta.json", "edges.csv", "features.csv", "labels.csv", "splits.json"}) {
    std::string body = read_file(dir / name);
    h = fnv1a64(name, std::string_view(name).size(), h);
    h = fnv1a64(body.data(), body.size(), h);
  }
  return h;
}

}  // namespace gdem
