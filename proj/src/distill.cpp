#include "gdem/distill.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "gdem/nn.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace gdem {

// ---------------------------------------------------------------- config

int DistillConfig::n_syn_for(const RealGraph& g) const {
  long base = ratio_base == "train_nodes" ? g.train_count() : g.n;
  int n = static_cast<int>(std::lround(ratio * double(base)));
  return std::max(n, 1);
}

std::pair<int, int> DistillConfig::resolve_k(int n_syn) const {
  if (k1 >= 0) {
    int kk2 = k2 >= 0 ? k2 : std::max(0, n_syn - k1);
    return {k1, kk2};
  }
  // K1 = rk N', K2 = (1 - rk) N', with K1 + K2 = N'.
  int kk1 = static_cast<int>(std::lround(rk * n_syn));
  kk1 = std::clamp(kk1, 0, n_syn);
  return {kk1, n_syn - kk1};
}

void DistillConfig::validate(int n_syn) const {
  auto [kk1, kk2] = resolve_k(n_syn);
  if (epochs < 1) throw ValidationError("epochs must be >= 1");
  if (kk1 < 0 || kk2 < 0 || kk1 + kk2 < 1)
    throw ValidationError("k1+k2 must be >= 1");
  if (kk1 + kk2 > n_syn)
    throw ValidationError("k1+k2 (" + std::to_string(kk1 + kk2) +
                          ") exceeds n_syn (" + std::to_string(n_syn) + ")");
  if (tau1 < 0 || tau2 < 0 || tau1 + tau2 < 1)
    throw ValidationError("tau1+tau2 must be >= 1");
  if (alpha < 0 || beta < 0 || gamma < 0)
    throw ValidationError("loss weights must be nonnegative");
  if (lr_feat <= 0 || lr_eigenvecs <= 0)
    throw ValidationError("learning rates must be positive");
  if (ratio <= 0) throw ValidationError("ratio must be positive");
  if (rk <= 0 || rk > 1) throw ValidationError("rk must lie in (0, 1]");
  if (init_features != "mlp" && init_features != "class_sample")
    throw ValidationError("init_features must be 'mlp' or 'class_sample'");
  if (ratio_base != "all_nodes" && ratio_base != "train_nodes")
    throw ValidationError("ratio_base must be 'all_nodes' or 'train_nodes'");
}

DistillConfig DistillConfig::from_json(const json& j) {
  static const std::vector<std::string> allowed = {
      "epochs", "k1", "k2", "tau1", "tau2", "alpha", "beta", "gamma",
      "lr_feat", "lr_eigenvecs", "ratio", "rk", "seed", "init_features",
      "sbm_p_intra", "sbm_p_inter", "ratio_base"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
      throw ValidationError("unknown config key '" + it.key() + "'");

  DistillConfig c;
  auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
  };
  get("epochs", c.epochs);
  get("k1", c.k1);
  get("k2", c.k2);
  get("tau1", c.tau1);
  get("tau2", c.tau2);
  get("alpha", c.alpha);
  get("beta", c.beta);
  get("gamma", c.gamma);
  get("lr_feat", c.lr_feat);
  get("lr_eigenvecs", c.lr_eigenvecs);
  get("ratio", c.ratio);
  get("rk", c.rk);
  get("seed", c.seed);
  get("init_features", c.init_features);
  get("sbm_p_intra", c.sbm_p_intra);
  get("sbm_p_inter", c.sbm_p_inter);
  get("ratio_base", c.ratio_base);
  return c;
}

DistillConfig DistillConfig::from_json_file(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw ValidationError("missing config file: " + p.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ValidationError(p.string() + ": " + e.what());
  }
  return from_json(j);
}

json DistillConfig::to_json() const {
  return json{{"epochs", epochs},
              {"k1", k1},
              {"k2", k2},
              {"tau1", tau1},
              {"tau2", tau2},
              {"alpha", alpha},
              {"beta", beta},
              {"gamma", gamma},
              {"lr_feat", lr_feat},
              {"lr_eigenvecs", lr_eigenvecs},
              {"ratio", ratio},
              {"rk", rk},
              {"seed", seed},
              {"init_features", init_features},
              {"sbm_p_intra", sbm_p_intra},
              {"sbm_p_inter", sbm_p_inter},
              {"ratio_base", ratio_base}};
}

// ---------------------------------------------------------- precompute

PrecomputedReal precompute_real(const RealGraph& g, int k1, int k2,
                                const SpectralOptions& opts) {
  PrecomputedReal pre;
  SpMat l = normalized_laplacian_sparse(g);
  pre.basis = principal_basis(l, k1, k2, opts);
  pre.proj = pre.basis.vectors.transpose() * g.features;

  // H = Y^T A X accumulated over training nodes only; walking neighbor
  // rows avoids materializing A X.
  pre.h_real = Mat::Zero(g.num_classes, g.dim());
  for (int i = 0; i < g.n; ++i) {
    if (!g.train_mask[i]) continue;
    for (SpMat::InnerIterator it(g.adjacency, i); it; ++it)
      pre.h_real.row(g.labels(i)) +=
          it.value() * g.features.row(static_cast<int>(it.row()));
  }
  return pre;
}

// ------------------------------------------------------- initialization

namespace {

std::vector<int> blocks_from_labels(const Mat& y_syn) {
  std::vector<int> block(y_syn.rows());
  for (int i = 0; i < y_syn.rows(); ++i) {
    int c = 0;
    y_syn.row(i).maxCoeff(&c);
    block[i] = c;
  }
  return block;
}

Mat draw_sbm(int n, const std::vector<int>& block, double p_intra,
             double p_inter, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Mat a = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double p = block[i] == block[j] ? p_intra : p_inter;
      if (unit(rng) < p) a(i, j) = a(j, i) = 1.0;
    }
  return a;
}

}  // namespace

Mat init_eigenbasis_sbm(int n_syn, int k1, int k2, const Mat& y_syn,
                        std::uint64_t seed, double p_intra, double p_inter) {
  const int k = k1 + k2;
  if (k > n_syn) throw ValidationError("k1+k2 exceeds n_syn");
  if (y_syn.rows() != n_syn) throw ValidationError("y_syn rows != n_syn");
  std::vector<int> block = blocks_from_labels(y_syn);

  if (p_intra < 0) {
    double avg_block = double(n_syn) / double(y_syn.cols());
    p_intra = std::min(1.0, 10.0 / std::max(avg_block, 1.0));
  }
  if (p_inter < 0) p_inter = p_intra / 10.0;
  if (!(p_inter < p_intra) || p_intra > 1.0 || p_inter < 0.0)
    throw ValidationError("SBM probabilities need 0 <= p_inter < p_intra <= 1");

  Rng rng(seed);
  Mat a;
  bool ok = false;
  for (int attempt = 0; attempt < 20 && !ok; ++attempt) {
    a = draw_sbm(n_syn, block, p_intra, p_inter, rng);
    ok = (a.rowwise().sum().minCoeff() > 0.0);
  }
  if (!ok) {
    // Wire the leftover isolated nodes to an in-block neighbor.
    std::uniform_int_distribution<int> pick(0, n_syn - 1);
    for (int i = 0; i < n_syn; ++i) {
      if (a.row(i).sum() > 0.0) continue;
      std::vector<int> mates;
      for (int j = 0; j < n_syn; ++j)
        if (j != i && block[j] == block[i]) mates.push_back(j);
      if (mates.empty())
        for (int j = 0; j < n_syn; ++j)
          if (j != i) mates.push_back(j);
      int j = mates[pick(rng) % mates.size()];
      a(i, j) = a(j, i) = 1.0;
    }
  }

  Mat l = normalized_laplacian_dense(a);
  return select_principal_basis(eig_symmetric(l), k1, k2).vectors;
}

namespace {

struct FrozenMlp {
  Mat w1, w2;
  Vec b1, b2;

  Mat logits(const Mat& x) const {
    Mat h = ((x * w1).rowwise() + b1.transpose()).cwiseMax(0.0);
    return (h * w2).rowwise() + b2.transpose();
  }
};

FrozenMlp train_feature_mlp(const Mat& x_train, const Mat& y_train,
                            const DistillConfig& cfg, Rng& rng) {
  const int d = static_cast<int>(x_train.cols());
  const int c = static_cast<int>(y_train.cols());
  const int hidden = 256;

  FrozenMlp mlp;
  mlp.w1 = nn::glorot(d, hidden, rng);
  mlp.w2 = nn::glorot(hidden, c, rng);
  mlp.b1 = Vec::Zero(hidden);
  mlp.b2 = Vec::Zero(c);

  nn::Adam opt_w1(1e-2, cfg.adam_beta1, cfg.adam_beta2, cfg.adam_eps);
  nn::Adam opt_w2 = opt_w1, opt_b1 = opt_w1, opt_b2 = opt_w1;

  for (int step = 0; step < 500; ++step) {
    Mat pre1 = (x_train * mlp.w1).rowwise() + mlp.b1.transpose();
    Mat h = pre1.cwiseMax(0.0);
    Mat logits = (h * mlp.w2).rowwise() + mlp.b2.transpose();
    Mat dlogits;
    double loss = nn::softmax_cross_entropy(logits, y_train, {}, &dlogits);
    if (!std::isfinite(loss))
      throw NumericalError("feature-init MLP diverged at step " +
                           std::to_string(step));
    Mat dw2 = h.transpose() * dlogits;
    Vec db2 = dlogits.colwise().sum();
    Mat dh = dlogits * mlp.w2.transpose();
    Mat dpre1 = nn::relu_backward(dh, pre1);
    Mat dw1 = x_train.transpose() * dpre1;
    Vec db1 = dpre1.colwise().sum();
    opt_w1.step(mlp.w1, dw1);
    opt_w2.step(mlp.w2, dw2);
    Mat b1m = mlp.b1, b2m = mlp.b2;
    opt_b1.step(b1m, Mat(db1));
    opt_b2.step(b2m, Mat(db2));
    mlp.b1 = b1m;
    mlp.b2 = b2m;
  }
  return mlp;
}

Mat class_mean_features(const RealGraph& g, const Mat& y_syn) {
  const int c = g.num_classes;
  const int d = g.dim();
  Mat means = Mat::Zero(c, d);
  Vec counts = Vec::Zero(c);
  Vec global = Vec::Zero(d);
  long total = 0;
  for (int i = 0; i < g.n; ++i) {
    if (!g.train_mask[i]) continue;
    means.row(g.labels(i)) += g.features.row(i);
    counts(g.labels(i)) += 1.0;
    global += g.features.row(i).transpose();
    ++total;
  }
  if (total == 0) throw ValidationError("no training labels for feature init");
  global /= double(total);
  for (int j = 0; j < c; ++j) {
    if (counts(j) > 0)
      means.row(j) /= counts(j);
    else
      means.row(j) = global.transpose();
  }
  Mat x(y_syn.rows(), d);
  std::vector<int> block = blocks_from_labels(y_syn);
  for (int i = 0; i < y_syn.rows(); ++i) x.row(i) = means.row(block[i]);
  return x;
}

}  // namespace

namespace {

double mlp_accuracy(const FrozenMlp& mlp, const Mat& x, const Mat& y_onehot) {
  IVec pred = nn::argmax_rows(mlp.logits(x));
  int hit = 0;
  for (int i = 0; i < x.rows(); ++i) {
    int want = 0;
    y_onehot.row(i).maxCoeff(&want);
    if (pred(i) == want) ++hit;
  }
  return double(hit) / double(x.rows());
}

}  // namespace

Mat init_features(const RealGraph& g, const Mat& y_syn,
                  const DistillConfig& cfg, FeatureInitReport* report) {
  std::vector<int> block = blocks_from_labels(y_syn);
  Rng rng(cfg.seed ^ 0x7f4a7c15ull);

  if (cfg.init_features == "class_sample") {
    std::vector<std::vector<int>> rows_of(g.num_classes);
    for (int i = 0; i < g.n; ++i)
      if (g.train_mask[i]) rows_of[g.labels(i)].push_back(i);
    Mat x(y_syn.rows(), g.dim());
    std::vector<std::vector<int>> order = rows_of;
    for (auto& v : order) std::shuffle(v.begin(), v.end(), rng);
    std::vector<int> next(g.num_classes, 0);
    for (int i = 0; i < y_syn.rows(); ++i) {
      int c = block[i];
      if (order[c].empty())
        throw ValidationError("class " + std::to_string(c) +
                              " has no training rows to sample");
      int src = order[c][next[c] % order[c].size()];
      ++next[c];
      x.row(i) = g.features.row(src);
    }
    return x;
  }

  // mlp path: class-mean base plus noise, refined against a frozen MLP.
  Mat x_train(g.train_count(), g.dim());
  Mat y_train = Mat::Zero(g.train_count(), g.num_classes);
  int r = 0;
  for (int i = 0; i < g.n; ++i) {
    if (!g.train_mask[i]) continue;
    x_train.row(r) = g.features.row(i);
    y_train(r, g.labels(i)) = 1.0;
    ++r;
  }
  FrozenMlp mlp = train_feature_mlp(x_train, y_train, cfg, rng);

  Mat x = class_mean_features(g, y_syn);
  if (report) report->baseline_accuracy = mlp_accuracy(mlp, x, y_syn);
  std::normal_distribution<double> noise(0.0, 1.0);
  double scale = 0.01 * std::max(x.cwiseAbs().maxCoeff(), 1e-12);
  for (int i = 0; i < x.rows(); ++i)
    for (int j = 0; j < x.cols(); ++j) x(i, j) += scale * noise(rng);

  nn::Adam opt(1e-2, cfg.adam_beta1, cfg.adam_beta2, cfg.adam_eps);
  for (int step = 0; step < 500; ++step) {
    Mat pre1 = (x * mlp.w1).rowwise() + mlp.b1.transpose();
    Mat h = pre1.cwiseMax(0.0);
    Mat logits = (h * mlp.w2).rowwise() + mlp.b2.transpose();
    Mat dlogits;
    double loss = nn::softmax_cross_entropy(logits, y_syn, {}, &dlogits);
    if (!std::isfinite(loss))
      throw NumericalError("feature-init refinement diverged at step " +
                           std::to_string(step));
    Mat dh = dlogits * mlp.w2.transpose();
    Mat dpre1 = nn::relu_backward(dh, pre1);
    Mat dx = dpre1 * mlp.w1.transpose();
    opt.step(x, dx);
  }
  if (report) report->final_accuracy = mlp_accuracy(mlp, x, y_syn);
  return x;
}

// ---------------------------------------------------------------- losses

double loss_eigenbasis(const PrecomputedReal& pre, const Mat& u_syn,
                       const Mat& x_syn) {
  if (pre.proj.rows() != u_syn.cols())
    throw ValidationError("basis size mismatch between pre and u_syn");
  Mat q = u_syn.transpose() * x_syn;  // K x d
  double total = 0.0;
  for (int k = 0; k < q.rows(); ++k) {
    // ||p p^T - q q^T||_F^2 without forming the d x d outer products.
    double pp = pre.proj.row(k).squaredNorm();
    double qq = q.row(k).squaredNorm();
    double pq = pre.proj.row(k).dot(q.row(k));
    total += pp * pp - 2.0 * pq * pq + qq * qq;
  }
  return total;
}

double loss_orthogonality(const Mat& u_syn) {
  Mat m = u_syn.transpose() * u_syn;
  m.diagonal().array() -= 1.0;
  return m.squaredNorm();
}

namespace {

constexpr double kCosGuard = 1e-12;

// Category representations of the synthetic side: H' = (Y'^T U') W Q with
// W = diag(1 - lambda) and Q = U'^T X'.
Mat synthetic_h(const Mat& u_syn, const Mat& x_syn, const Mat& y_syn,
                const Vec& eigenvalues) {
  Vec w = (1.0 - eigenvalues.array()).matrix();
  return (y_syn.transpose() * u_syn) * w.asDiagonal() *
         (u_syn.transpose() * x_syn);
}

}  // namespace

double loss_discrimination(const PrecomputedReal& pre, const Mat& u_syn,
                           const Mat& x_syn, const Mat& y_syn,
                           const Vec& eigenvalues) {
  Mat h_syn = synthetic_h(u_syn, x_syn, y_syn, eigenvalues);
  const int c = static_cast<int>(pre.h_real.rows());
  if (h_syn.rows() != c) throw ValidationError("class count mismatch in L_d");

  double loss = 0.0;
  for (int i = 0; i < c; ++i) {
    double ni = pre.h_real.row(i).norm();
    for (int j = 0; j < c; ++j) {
      double mj = h_syn.row(j).norm();
      bool degenerate = ni < kCosGuard || mj < kCosGuard;
      double cos_ij =
          degenerate ? 0.0 : pre.h_real.row(i).dot(h_syn.row(j)) / (ni * mj);
      if (i == j)
        loss += 1.0 - cos_ij;
      else if (!degenerate)
        loss += cos_ij;
    }
  }
  return loss;
}

double total_loss(const DistillConfig& cfg, double l_e, double l_d,
                  double l_o) {
  return cfg.alpha * l_e + cfg.beta * l_d + cfg.gamma * l_o;
}

LossGrads grad_losses(const PrecomputedReal& pre, const Mat& u_syn,
                      const Mat& x_syn, const Mat& y_syn,
                      const Vec& eigenvalues, const DistillConfig& cfg) {
  const int k = static_cast<int>(u_syn.cols());
  const int c = static_cast<int>(pre.h_real.rows());
  Mat q = u_syn.transpose() * x_syn;  // K x d

  LossGrads out;

  // L_e and its gradient through q.
  Mat dq_e = Mat::Zero(q.rows(), q.cols());
  for (int r = 0; r < k; ++r) {
    double pp = pre.proj.row(r).squaredNorm();
    double qq = q.row(r).squaredNorm();
    double pq = pre.proj.row(r).dot(q.row(r));
    out.l_e += pp * pp - 2.0 * pq * pq + qq * qq;
    dq_e.row(r) = 4.0 * (qq * q.row(r) - pq * pre.proj.row(r));
  }

  // L_o.
  Mat m = u_syn.transpose() * u_syn;
  m.diagonal().array() -= 1.0;
  out.l_o = m.squaredNorm();
  Mat du_o = 4.0 * u_syn * m;

  // L_d: H' = B W Q with B = Y'^T U'.
  Vec w = (1.0 - eigenvalues.array()).matrix();
  Mat b = y_syn.transpose() * u_syn;  // C x K
  Mat h_syn = b * w.asDiagonal() * q;
  Mat dh = Mat::Zero(c, h_syn.cols());
  for (int i = 0; i < c; ++i) {
    double ni = pre.h_real.row(i).norm();
    for (int j = 0; j < c; ++j) {
      double mj = h_syn.row(j).norm();
      bool degenerate = ni < kCosGuard || mj < kCosGuard;
      double cos_ij =
          degenerate ? 0.0 : pre.h_real.row(i).dot(h_syn.row(j)) / (ni * mj);
      double sign;
      if (i == j) {
        out.l_d += 1.0 - cos_ij;
        sign = -1.0;
      } else {
        if (!degenerate) out.l_d += cos_ij;
        sign = 1.0;
      }
      if (degenerate) continue;
      dh.row(j) += sign * (pre.h_real.row(i) / (ni * mj) -
                           cos_ij * h_syn.row(j) / (mj * mj));
    }
  }
  Mat dq_d = w.asDiagonal() * b.transpose() * dh;  // K x d
  Mat db = dh * q.transpose() * w.asDiagonal();    // C x K

  out.l_total = total_loss(cfg, out.l_e, out.l_d, out.l_o);

  // Chain rule back to U' and X'. q enters L_e and L_d; b enters L_d.
  Mat dq_total = cfg.alpha * dq_e + cfg.beta * dq_d;
  out.du = x_syn * dq_total.transpose() + cfg.gamma * du_o +
           cfg.beta * (y_syn * db);
  out.dx = u_syn * dq_total;
  return out;
}

// ------------------------------------------------------------- training

DistillResult distill(const RealGraph& g, const PrecomputedReal& pre,
                      const DistillConfig& cfg, const CheckpointHook& hook) {
  const int n_syn = cfg.n_syn_for(g);
  cfg.validate(n_syn);
  auto [k1, k2] = cfg.resolve_k(n_syn);
  if (pre.basis.k1 != k1 || pre.basis.k2 != k2)
    throw ValidationError(
        "PrecomputedReal basis (k1=" + std::to_string(pre.basis.k1) +
        ",k2=" + std::to_string(pre.basis.k2) + ") does not match config (k1=" +
        std::to_string(k1) + ",k2=" + std::to_string(k2) + ")");
  if (cfg.tau1 == 0)
    std::cerr << "warning: tau1=0, the eigenbasis is never updated\n";
  if (cfg.tau2 == 0)
    std::cerr << "warning: tau2=0, the features are never updated\n";

  SyntheticGraph syn;
  syn.y_syn = predefine_labels(g, n_syn);
  syn.u_syn = init_eigenbasis_sbm(n_syn, k1, k2, syn.y_syn, cfg.seed,
                                  cfg.sbm_p_intra, cfg.sbm_p_inter);
  syn.x_syn = init_features(g, syn.y_syn, cfg);
  syn.eigenvalues = pre.basis.eigenvalues;

  nn::Adam opt_u(cfg.lr_eigenvecs, cfg.adam_beta1, cfg.adam_beta2, cfg.adam_eps);
  nn::Adam opt_x(cfg.lr_feat, cfg.adam_beta1, cfg.adam_beta2, cfg.adam_eps);

  DistillResult result;
  result.trace.reserve(cfg.epochs);
  if (hook) hook(0, syn);

  const int cycle = cfg.tau1 + cfg.tau2;
  for (int t = 0; t < cfg.epochs; ++t) {
    LossGrads lg = grad_losses(pre, syn.u_syn, syn.x_syn, syn.y_syn,
                               syn.eigenvalues, cfg);
    if (!std::isfinite(lg.l_total))
      throw NumericalError(
          "non-finite loss at epoch " + std::to_string(t) + " (l_e=" +
          format_double(lg.l_e) + ", l_o=" + format_double(lg.l_o) +
          ", l_d=" + format_double(lg.l_d) + ")");

    bool update_u = (t % cycle) < cfg.tau1;
    if (update_u)
      opt_u.step(syn.u_syn, lg.du);
    else
      opt_x.step(syn.x_syn, lg.dx);

    result.trace.push_back(
        {t, lg.l_e, lg.l_o, lg.l_d, lg.l_total, update_u ? 'U' : 'X'});
    if (hook) hook(t + 1, syn);
  }

  if (!syn.u_syn.allFinite() || !syn.x_syn.allFinite())
    throw NumericalError("non-finite synthetic state after training");
  result.graph = std::move(syn);
  return result;
}

ConstructedGraph construct_synthetic(const SyntheticGraph& syn) {
  Vec lam = syn.eigenvalues;
  Mat l = syn.u_syn * lam.asDiagonal() * syn.u_syn.transpose();
  Mat a = syn.u_syn * (1.0 - lam.array()).matrix().asDiagonal() *
          syn.u_syn.transpose();
  // Symmetrize away rounding skew so strict symmetry checks downstream hold.
  ConstructedGraph out;
  out.l_syn = 0.5 * (l + l.transpose());
  out.a_syn = 0.5 * (a + a.transpose());
  return out;
}

// ----------------------------------------------------------------- io

namespace {

void write_csv_matrix(const fs::path& p, const Mat& m) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + p.string());
  std::string line;
  for (int i = 0; i < m.rows(); ++i) {
    line.clear();
    for (int j = 0; j < m.cols(); ++j) {
      if (j) line += ',';
      line += format_double(m(i, j));
    }
    line += '\n';
    out << line;
  }
}

Mat read_csv_matrix(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ValidationError("missing file: " + p.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    std::size_t start = 0;
    while (true) {
      std::size_t comma = line.find(',', start);
      std::string_view tok(line.data() + start,
                           (comma == std::string::npos ? line.size() : comma) -
                               start);
      double v = 0.0;
      auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
        throw ValidationError(p.string() + ": bad number '" +
                              std::string(tok) + "'");
      row.push_back(v);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw ValidationError(p.string() + ": ragged rows");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ValidationError(p.string() + ": empty matrix");
  Mat m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  return m;
}

}  // namespace

void save_synthetic(const SyntheticGraph& syn,
                    const std::vector<TraceRow>& trace, const fs::path& dir) {
  fs::create_directories(dir);
  write_csv_matrix(dir / "u_syn.csv", syn.u_syn);
  write_csv_matrix(dir / "x_syn.csv", syn.x_syn);
  write_csv_matrix(dir / "y_syn.csv", syn.y_syn);
  {
    std::ofstream out(dir / "spectrum.csv", std::ios::binary);
    for (int i = 0; i < syn.eigenvalues.size(); ++i)
      out << format_double(syn.eigenvalues(i)) << "\n";
  }
  {
    std::ofstream out(dir / "trace.csv", std::ios::binary);
    out << "epoch,l_e,l_o,l_d,l_total,updated\n";
    for (const auto& row : trace)
      out << row.epoch << ',' << format_double(row.l_e) << ','
          << format_double(row.l_o) << ',' << format_double(row.l_d) << ','
          << format_double(row.l_total) << ',' << row.updated << "\n";
  }
}

SyntheticGraph load_synthetic(const fs::path& dir) {
  SyntheticGraph syn;
  syn.u_syn = read_csv_matrix(dir / "u_syn.csv");
  syn.x_syn = read_csv_matrix(dir / "x_syn.csv");
  syn.y_syn = read_csv_matrix(dir / "y_syn.csv");
  Mat spec = read_csv_matrix(dir / "spectrum.csv");
  if (spec.cols() != 1)
    throw ValidationError("spectrum.csv must have one value per line");
  syn.eigenvalues = spec.col(0);
  if (syn.x_syn.rows() != syn.u_syn.rows() ||
      syn.y_syn.rows() != syn.u_syn.rows())
    throw ValidationError("synthetic files disagree on node count");
  if (syn.eigenvalues.size() != syn.u_syn.cols())
    throw ValidationError("spectrum length does not match eigenbasis width");
  return syn;
}

}  // namespace gdem
