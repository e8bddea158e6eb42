#include "gdem/evalzoo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gdem/nn.hpp"

namespace gdem {

// ----------------------------------------------------------- model kinds

ModelKind model_kind_from_string(const std::string& s) {
  if (s == "sgc") return ModelKind::sgc;
  if (s == "gcn") return ModelKind::gcn;
  if (s == "ppnp") return ModelKind::ppnp;
  if (s == "cheby") return ModelKind::cheby;
  if (s == "bern") return ModelKind::bern;
  if (s == "gpr") return ModelKind::gpr;
  throw ValidationError("unknown model kind '" + s + "'");
}

std::string to_string(ModelKind k) {
  switch (k) {
    case ModelKind::sgc: return "sgc";
    case ModelKind::gcn: return "gcn";
    case ModelKind::ppnp: return "ppnp";
    case ModelKind::cheby: return "cheby";
    case ModelKind::bern: return "bern";
    case ModelKind::gpr: return "gpr";
  }
  return "?";
}

bool is_polynomial(ModelKind k) {
  return k == ModelKind::cheby || k == ModelKind::bern || k == ModelKind::gpr;
}

EvalModelSpec EvalModelSpec::defaults(ModelKind k) {
  EvalModelSpec s;
  s.kind = k;
  s.depth_or_order = is_polynomial(k) ? 10 : 2;
  return s;
}

// ----------------------------------------------------------- propagation

namespace {

void require_symmetric(const Mat& m, const char* what) {
  if (m.rows() != m.cols())
    throw ValidationError(std::string(what) + ": matrix not square");
  double dev = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (dev > 1e-10)
    throw ValidationError(std::string(what) + ": matrix not symmetric");
}

// D~^{-1/2} (A + I) D~^{-1/2} with negative weights clamped first.
Mat gcn_normalize(const Mat& a) {
  Mat clamped = a.cwiseMax(0.0);
  clamped.diagonal().array() += 1.0;
  Vec deg = clamped.rowwise().sum();
  Vec dinv = deg.array().rsqrt();
  return dinv.asDiagonal() * clamped * dinv.asDiagonal();
}

std::vector<long> binomial_row(int n) {
  std::vector<long> row(n + 1, 1);
  for (int j = 1; j <= n; ++j) row[j] = row[j - 1] * (n - j + 1) / j;
  return row;
}

}  // namespace

std::vector<Mat> build_propagation(ModelKind kind, const Mat& a_or_l,
                                   const EvalModelSpec& spec) {
  require_symmetric(a_or_l, "build_propagation");
  const int n = static_cast<int>(a_or_l.rows());
  const int order = spec.depth_or_order;
  std::vector<Mat> out;

  switch (kind) {
    case ModelKind::sgc: {
      Mat ahat = gcn_normalize(a_or_l);
      Mat p = Mat::Identity(n, n);
      for (int i = 0; i < order; ++i) p = ahat * p;
      out.push_back(std::move(p));
      break;
    }
    case ModelKind::gcn:
      out.push_back(gcn_normalize(a_or_l));
      break;
    case ModelKind::ppnp: {
      Mat ahat = gcn_normalize(a_or_l);
      Mat m = Mat::Identity(n, n) - (1.0 - spec.ppnp_alpha) * ahat;
      out.push_back(spec.ppnp_alpha * m.inverse());
      break;
    }
    case ModelKind::cheby: {
      // T_j of L - I (the [-1, 1] rescaling of a normalized Laplacian).
      Mat lt = a_or_l - Mat::Identity(n, n);
      out.push_back(Mat::Identity(n, n));
      if (order >= 1) out.push_back(lt);
      for (int j = 2; j <= order; ++j)
        out.push_back(2.0 * lt * out[j - 1] - out[j - 2]);
      break;
    }
    case ModelKind::bern: {
      Mat half = 0.5 * a_or_l;
      Mat comp = Mat::Identity(n, n) - half;
      std::vector<long> binom = binomial_row(order);
      std::vector<Mat> half_pow{Mat::Identity(n, n)};
      std::vector<Mat> comp_pow{Mat::Identity(n, n)};
      for (int j = 1; j <= order; ++j) {
        half_pow.push_back(half * half_pow[j - 1]);
        comp_pow.push_back(comp * comp_pow[j - 1]);
      }
      for (int j = 0; j <= order; ++j)
        out.push_back(double(binom[j]) * half_pow[j] * comp_pow[order - j]);
      break;
    }
    case ModelKind::gpr: {
      Mat base = Mat::Identity(n, n) - 0.5 * a_or_l;
      out.push_back(Mat::Identity(n, n));
      for (int j = 1; j <= order; ++j) out.push_back(base * out[j - 1]);
      break;
    }
  }
  return out;
}

Propagation Propagation::make_dense(ModelKind kind, const Mat& a_or_l,
                                    const EvalModelSpec& spec) {
  Propagation p;
  p.kind = kind;
  p.order = spec.depth_or_order;
  p.ppnp_alpha = spec.ppnp_alpha;
  p.dense = build_propagation(kind, a_or_l, spec);
  return p;
}

namespace {

// Sparse A-hat with self-loops; works for any nonnegative adjacency.
SpMat sparse_gcn_normalize(const SpMat& a) {
  const int n = static_cast<int>(a.rows());
  Vec deg = Vec::Ones(n);  // self-loop
  for (int k = 0; k < a.outerSize(); ++k)
    for (SpMat::InnerIterator it(a, k); it; ++it) deg(it.row()) += it.value();
  Vec dinv = deg.array().rsqrt();
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(a.nonZeros() + n);
  for (int i = 0; i < n; ++i) trips.emplace_back(i, i, dinv(i) * dinv(i));
  for (int k = 0; k < a.outerSize(); ++k)
    for (SpMat::InnerIterator it(a, k); it; ++it)
      trips.emplace_back(it.row(), it.col(),
                         it.value() * dinv(it.row()) * dinv(it.col()));
  SpMat out(n, n);
  out.setFromTriplets(trips.begin(), trips.end());
  return out;
}

// Eval-side Laplacian: identity rows for isolated nodes instead of the
// strict graphio error, since evaluation must run on whatever the split
// leaves connected.
SpMat sparse_laplacian_lenient(const SpMat& a) {
  const int n = static_cast<int>(a.rows());
  Vec deg = Vec::Zero(n);
  for (int k = 0; k < a.outerSize(); ++k)
    for (SpMat::InnerIterator it(a, k); it; ++it) deg(it.row()) += it.value();
  Vec dinv(n);
  for (int i = 0; i < n; ++i) dinv(i) = deg(i) > 0 ? 1.0 / std::sqrt(deg(i)) : 0.0;
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(a.nonZeros() + n);
  for (int i = 0; i < n; ++i) trips.emplace_back(i, i, 1.0);
  for (int k = 0; k < a.outerSize(); ++k)
    for (SpMat::InnerIterator it(a, k); it; ++it)
      trips.emplace_back(it.row(), it.col(),
                         -it.value() * dinv(it.row()) * dinv(it.col()));
  SpMat out(n, n);
  out.setFromTriplets(trips.begin(), trips.end());
  return out;
}

}  // namespace

Propagation Propagation::make_sparse(ModelKind kind, const RealGraph& g,
                                     const EvalModelSpec& spec) {
  Propagation p;
  p.kind = kind;
  p.order = spec.depth_or_order;
  p.ppnp_alpha = spec.ppnp_alpha;
  p.sparse = true;
  if (is_polynomial(kind)) {
    p.sp = sparse_laplacian_lenient(g.adjacency);
  } else {
    p.sp = sparse_gcn_normalize(g.adjacency);
    if (kind == ModelKind::ppnp) {
      SpMat m = -(1.0 - spec.ppnp_alpha) * p.sp;
      SpMat eye(m.rows(), m.cols());
      eye.setIdentity();
      m = m + eye;
      m.makeCompressed();
      p.ppnp_solver = std::make_shared<Eigen::SparseLU<SpMat>>();
      p.ppnp_solver->compute(m);
      if (p.ppnp_solver->info() != Eigen::Success)
        throw NumericalError("PPNP sparse factorization failed");
    }
  }
  return p;
}

Mat Propagation::apply_step(const Mat& h) const {
  if (sparse) return sp * h;
  return dense.at(0) * h;
}

Mat Propagation::apply_full(const Mat& h) const {
  if (kind == ModelKind::ppnp) {
    if (sparse) return ppnp_alpha * ppnp_solver->solve(h);
    return dense.at(0) * h;
  }
  if (!sparse) return dense.at(0) * h;  // sgc stores A-hat^depth
  Mat out = h;
  for (int i = 0; i < order; ++i) out = sp * out;
  return out;
}

std::vector<Mat> Propagation::apply_bases(const Mat& h) const {
  std::vector<Mat> out;
  if (!sparse) {
    out.reserve(dense.size());
    for (const Mat& b : dense) out.push_back(b * h);
    return out;
  }
  out.resize(order + 1);
  switch (kind) {
    case ModelKind::cheby: {
      out[0] = h;
      if (order >= 1) out[1] = sp * h - h;
      for (int j = 2; j <= order; ++j)
        out[j] = 2.0 * (sp * out[j - 1] - out[j - 1]) - out[j - 2];
      break;
    }
    case ModelKind::gpr: {
      out[0] = h;
      for (int j = 1; j <= order; ++j)
        out[j] = out[j - 1] - 0.5 * (sp * out[j - 1]);
      break;
    }
    case ModelKind::bern: {
      std::vector<long> binom = binomial_row(order);
      std::vector<Mat> comp(order + 1);  // (I - L/2)^m h
      comp[0] = h;
      for (int m = 1; m <= order; ++m)
        comp[m] = comp[m - 1] - 0.5 * (sp * comp[m - 1]);
      for (int j = 0; j <= order; ++j) {
        Mat t = comp[order - j];
        for (int i = 0; i < j; ++i) t = 0.5 * (sp * t);
        out[j] = double(binom[j]) * t;
      }
      break;
    }
    default:
      throw ValidationError("apply_bases is only defined for polynomial kinds");
  }
  return out;
}

// ------------------------------------------------------------ real side

namespace {

std::vector<int> mask_rows(const std::vector<std::uint8_t>& mask) {
  std::vector<int> rows;
  for (std::size_t i = 0; i < mask.size(); ++i)
    if (mask[i]) rows.push_back(static_cast<int>(i));
  return rows;
}

}  // namespace

RealSide make_real_side(const RealGraph& g, const EvalModelSpec& spec) {
  RealSide r;
  r.g = &g;
  r.prop = Propagation::make_sparse(spec.kind, g, spec);
  r.train_rows = mask_rows(g.train_mask);
  r.val_rows = mask_rows(g.val_mask);
  r.test_rows = mask_rows(g.test_mask);

  double nnz = (g.features.array() != 0.0).count();
  double fill = nnz / double(g.features.size());
  if (fill < 0.05 && g.n > 256) {
    r.use_sparse_x = true;
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<std::size_t>(nnz));
    for (int i = 0; i < g.features.rows(); ++i)
      for (int j = 0; j < g.features.cols(); ++j)
        if (g.features(i, j) != 0.0) trips.emplace_back(i, j, g.features(i, j));
    r.x_sparse.resize(g.features.rows(), g.features.cols());
    r.x_sparse.setFromTriplets(trips.begin(), trips.end());
  }
  return r;
}

// --------------------------------------------------------------- forward

int TrainedModel::num_classes() const {
  if (kind == ModelKind::sgc) return static_cast<int>(w1.cols());
  return static_cast<int>(w2.cols());
}

namespace {

// First linear layer, exploiting sparse features when available.
Mat feature_transform(const RealSide* real, const Mat& x_dense, const Mat& w) {
  if (real && real->use_sparse_x) return real->x_sparse * w;
  return x_dense * w;
}

Mat logits_impl(const TrainedModel& m, const EvalModelSpec& spec,
                const Propagation& prop, const RealSide* real,
                const Mat& x_dense) {
  switch (m.kind) {
    case ModelKind::sgc:
      return prop.apply_full(feature_transform(real, x_dense, m.w1));
    case ModelKind::gcn: {
      Mat h = prop.apply_step(feature_transform(real, x_dense, m.w1))
                  .cwiseMax(0.0);
      return prop.apply_step(h * m.w2);
    }
    case ModelKind::ppnp: {
      Mat h = feature_transform(real, x_dense, m.w1).cwiseMax(0.0);
      return prop.apply_full(h * m.w2);
    }
    default: {  // polynomial filters
      Mat h = feature_transform(real, x_dense, m.w1).cwiseMax(0.0);
      std::vector<Mat> stack = prop.apply_bases(h * m.w2);
      Mat z = Mat::Zero(stack[0].rows(), stack[0].cols());
      for (std::size_t j = 0; j < stack.size(); ++j)
        z += m.theta(static_cast<int>(j)) * stack[j];
      return z;
    }
  }
}

}  // namespace

Mat model_logits(const TrainedModel& m, const EvalModelSpec& spec,
                 const Propagation& prop, const Mat& x_dense) {
  return logits_impl(m, spec, prop, nullptr, x_dense);
}

Mat model_logits(const TrainedModel& m, const EvalModelSpec& spec,
                 const RealSide& real) {
  return logits_impl(m, spec, real.prop, &real, real.g->features);
}

// -------------------------------------------------------------- training

namespace {

double accuracy_on_rows(const Mat& logits, const IVec& labels,
                        const std::vector<int>& rows) {
  if (rows.empty()) return 0.0;
  int hit = 0;
  for (int i : rows) {
    int best = 0;
    logits.row(i).maxCoeff(&best);
    if (best == labels(i)) ++hit;
  }
  return double(hit) / double(rows.size());
}

Vec init_theta(ModelKind kind, int order) {
  Vec theta = Vec::Zero(order + 1);
  switch (kind) {
    case ModelKind::gpr:
      for (int j = 0; j <= order; ++j) theta(j) = std::pow(0.9, j);
      break;
    case ModelKind::bern:
      theta.setOnes();  // partition of unity makes this the identity filter
      break;
    default:
      theta(0) = 1.0;
      break;
  }
  return theta;
}

struct DropMask {
  Mat mask;  // entries 0 or 1/keep
  Mat apply(const Mat& x) const { return x.cwiseProduct(mask); }
};

DropMask make_mask(int rows, int cols, double rate, Rng& rng) {
  DropMask d;
  if (rate <= 0.0) {
    d.mask = Mat::Ones(rows, cols);
    return d;
  }
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  double keep = 1.0 - rate;
  d.mask.resize(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i)
      d.mask(i, j) = dist(rng) < keep ? 1.0 / keep : 0.0;
  return d;
}

}  // namespace

TrainOutcome train_model(const TrainingGraph& tg, const EvalModelSpec& spec,
                         const RealSide& real, std::uint64_t seed) {
  if (static_cast<int>(tg.y.cols()) != real.g->num_classes)
    throw ValidationError("class count mismatch between training graph and "
                          "evaluation graph");
  const int n = static_cast<int>(tg.x.rows());
  const int d = static_cast<int>(tg.x.cols());
  const int c = static_cast<int>(tg.y.cols());
  Rng rng(seed);

  Propagation prop =
      Propagation::make_dense(spec.kind, is_polynomial(spec.kind) ? tg.l : tg.a,
                              spec);

  TrainedModel m;
  m.kind = spec.kind;
  if (spec.kind == ModelKind::sgc) {
    m.w1 = nn::glorot(d, c, rng);
  } else {
    m.w1 = nn::glorot(d, spec.hidden, rng);
    m.w2 = nn::glorot(spec.hidden, c, rng);
  }
  if (is_polynomial(spec.kind)) m.theta = init_theta(spec.kind, spec.depth_or_order);

  nn::Adam opt_w1(spec.lr, 0.9, 0.999, 1e-8, spec.weight_decay);
  nn::Adam opt_w2 = opt_w1, opt_theta = opt_w1;

  // SGC trains a linear model on propagated features.
  Mat sgc_features;
  if (spec.kind == ModelKind::sgc) sgc_features = prop.apply_full(tg.x);

  TrainedModel best = m;
  double best_val = -1.0;

  for (int epoch = 0; epoch < spec.epochs; ++epoch) {
    Mat dlogits;
    double loss = 0.0;

    switch (spec.kind) {
      case ModelKind::sgc: {
        DropMask dm = make_mask(n, d, spec.dropout, rng);
        Mat s = dm.apply(sgc_features);
        Mat logits = s * m.w1;
        loss = nn::softmax_cross_entropy(logits, tg.y, {}, &dlogits);
        Mat dw1 = s.transpose() * dlogits;
        opt_w1.step(m.w1, dw1);
        break;
      }
      case ModelKind::gcn: {
        DropMask d0 = make_mask(n, d, spec.dropout, rng);
        Mat x0 = d0.apply(tg.x);
        Mat pre1 = prop.apply_step(x0 * m.w1);
        Mat h1 = pre1.cwiseMax(0.0);
        DropMask d1 = make_mask(n, spec.hidden, spec.dropout, rng);
        Mat h1d = d1.apply(h1);
        Mat logits = prop.apply_step(h1d * m.w2);
        loss = nn::softmax_cross_entropy(logits, tg.y, {}, &dlogits);
        Mat dback = prop.apply_step(dlogits);  // propagation is symmetric
        Mat dw2 = h1d.transpose() * dback;
        Mat dh1 = d1.apply(dback * m.w2.transpose());
        Mat dpre1 = nn::relu_backward(dh1, pre1);
        Mat dw1 = x0.transpose() * prop.apply_step(dpre1);
        opt_w1.step(m.w1, dw1);
        opt_w2.step(m.w2, dw2);
        break;
      }
      case ModelKind::ppnp: {
        DropMask d0 = make_mask(n, d, spec.dropout, rng);
        Mat x0 = d0.apply(tg.x);
        Mat pre1 = x0 * m.w1;
        Mat h1 = pre1.cwiseMax(0.0);
        DropMask d1 = make_mask(n, spec.hidden, spec.dropout, rng);
        Mat h1d = d1.apply(h1);
        Mat logits = prop.apply_full(h1d * m.w2);
        loss = nn::softmax_cross_entropy(logits, tg.y, {}, &dlogits);
        Mat dback = prop.apply_full(dlogits);  // PPNP kernel is symmetric
        Mat dw2 = h1d.transpose() * dback;
        Mat dh1 = d1.apply(dback * m.w2.transpose());
        Mat dpre1 = nn::relu_backward(dh1, pre1);
        Mat dw1 = x0.transpose() * dpre1;
        opt_w1.step(m.w1, dw1);
        opt_w2.step(m.w2, dw2);
        break;
      }
      default: {  // polynomial filters
        DropMask d0 = make_mask(n, d, spec.dropout, rng);
        Mat x0 = d0.apply(tg.x);
        Mat pre1 = x0 * m.w1;
        Mat h1 = pre1.cwiseMax(0.0);
        DropMask d1 = make_mask(n, spec.hidden, spec.dropout, rng);
        Mat h1d = d1.apply(h1);
        Mat hc = h1d * m.w2;
        std::vector<Mat> stack = prop.apply_bases(hc);
        Mat logits = Mat::Zero(n, c);
        for (int j = 0; j <= spec.depth_or_order; ++j)
          logits += m.theta(j) * stack[j];
        loss = nn::softmax_cross_entropy(logits, tg.y, {}, &dlogits);

        Vec dtheta(spec.depth_or_order + 1);
        for (int j = 0; j <= spec.depth_or_order; ++j)
          dtheta(j) = stack[j].cwiseProduct(dlogits).sum();
        std::vector<Mat> back = prop.apply_bases(dlogits);  // bases symmetric
        Mat dhc = Mat::Zero(n, c);
        for (int j = 0; j <= spec.depth_or_order; ++j)
          dhc += m.theta(j) * back[j];
        Mat dw2 = h1d.transpose() * dhc;
        Mat dh1 = d1.apply(dhc * m.w2.transpose());
        Mat dpre1 = nn::relu_backward(dh1, pre1);
        Mat dw1 = x0.transpose() * dpre1;
        opt_w1.step(m.w1, dw1);
        opt_w2.step(m.w2, dw2);
        Mat theta_m = m.theta;
        opt_theta.step(theta_m, Mat(dtheta));
        m.theta = theta_m;
        break;
      }
    }

    if (!std::isfinite(loss))
      throw NumericalError("eval-model training hit a non-finite loss at "
                           "epoch " + std::to_string(epoch) + " (" +
                           to_string(spec.kind) + ")");

    if ((epoch + 1) % spec.eval_interval == 0 || epoch + 1 == spec.epochs) {
      Mat logits = model_logits(m, spec, real);
      double val = accuracy_on_rows(logits, real.g->labels, real.val_rows);
      if (val > best_val) {
        best_val = val;
        best = m;
      }
    }
  }

  TrainOutcome out;
  out.model = std::move(best);
  out.best_val_acc = best_val;
  Mat logits = model_logits(out.model, spec, real);
  out.test_acc = accuracy_on_rows(logits, real.g->labels, real.test_rows);
  return out;
}

double evaluate(const TrainedModel& m, const EvalModelSpec& spec,
                const RealSide& real, Split split) {
  if (m.num_classes() != real.g->num_classes)
    throw ValidationError("class count mismatch between training and "
                          "evaluation graphs");
  Mat logits = model_logits(m, spec, real);
  const std::vector<int>& rows = split == Split::train ? real.train_rows
                                 : split == Split::val ? real.val_rows
                                                       : real.test_rows;
  return accuracy_on_rows(logits, real.g->labels, rows);
}

// --------------------------------------------------------------- coreset

Coreset random_coreset(const RealGraph& g, int n_syn, std::uint64_t seed) {
  if (n_syn > g.train_count())
    throw ValidationError("coreset size exceeds training-node count");
  std::vector<int> counts = predefined_class_counts(g, n_syn);
  std::vector<std::vector<int>> rows_of(g.num_classes);
  for (int i = 0; i < g.n; ++i)
    if (g.train_mask[i]) rows_of[g.labels(i)].push_back(i);

  Rng rng(seed);
  Coreset cs;
  for (int c = 0; c < g.num_classes; ++c) {
    if (rows_of[c].empty())
      throw ValidationError("class " + std::to_string(c) +
                            " has no training nodes");
    if (counts[c] > static_cast<int>(rows_of[c].size()))
      throw ValidationError("class " + std::to_string(c) +
                            " has too few training nodes for the coreset");
    std::shuffle(rows_of[c].begin(), rows_of[c].end(), rng);
    for (int k = 0; k < counts[c]; ++k) cs.nodes.push_back(rows_of[c][k]);
  }

  const int m = static_cast<int>(cs.nodes.size());
  cs.x.resize(m, g.dim());
  cs.y = Mat::Zero(m, g.num_classes);
  cs.a = Mat::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    cs.x.row(i) = g.features.row(cs.nodes[i]);
    cs.y(i, g.labels(cs.nodes[i])) = 1.0;
  }
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      double w = g.adjacency.coeff(cs.nodes[i], cs.nodes[j]);
      cs.a(i, j) = cs.a(j, i) = w;
    }
  return cs;
}

TrainingGraph training_graph_from(const SyntheticGraph& syn) {
  ConstructedGraph cg = construct_synthetic(syn);
  TrainingGraph tg;
  tg.a = std::move(cg.a_syn);
  tg.l = std::move(cg.l_syn);
  tg.x = syn.x_syn;
  tg.y = syn.y_syn;
  return tg;
}

TrainingGraph training_graph_from(const Coreset& cs) {
  TrainingGraph tg;
  tg.a = cs.a;
  tg.l = normalized_laplacian_dense(cs.a);
  tg.x = cs.x;
  tg.y = cs.y;
  return tg;
}

// ---------------------------------------------------------------- report

namespace {

std::pair<double, double> mean_std(const std::vector<double>& v) {
  if (v.empty()) return {0.0, 0.0};
  double mean = std::accumulate(v.begin(), v.end(), 0.0) / double(v.size());
  double sq = 0.0;
  for (double x : v) sq += (x - mean) * (x - mean);
  return {mean, std::sqrt(sq / double(v.size()))};
}

}  // namespace

EvalReport cross_architecture_report(const TrainingGraph& tg,
                                     const RealGraph& g,
                                     const std::vector<EvalModelSpec>& specs,
                                     const std::vector<std::uint64_t>& seeds) {
  if (specs.empty()) throw ValidationError("no model specs given");
  if (seeds.empty()) throw ValidationError("no seeds given");

  EvalReport report;
  report.seeds_per_model = static_cast<int>(seeds.size());
  std::vector<double> model_means;
  for (const EvalModelSpec& spec : specs) {
    RealSide real = make_real_side(g, spec);
    std::vector<double> accs;
    for (std::uint64_t seed : seeds) {
      TrainOutcome run = train_model(tg, spec, real, seed);
      accs.push_back(run.test_acc);
      report.runs.push_back({spec.kind, seed, run.best_val_acc, run.test_acc});
    }
    auto [mean, sd] = mean_std(accs);
    report.kinds.push_back(spec.kind);
    report.per_model.emplace_back(mean, sd);
    model_means.push_back(mean);
  }
  auto [avg, sd_models] = mean_std(model_means);
  report.avg = avg;
  report.std_across_models = sd_models;
  return report;
}

}  // namespace gdem
