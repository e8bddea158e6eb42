#pragma once

#include "gdem/common.hpp"

namespace gdem::nn {

/// Adam with per-parameter-group step counter; `weight_decay` is the
/// classic L2 formulation added to the gradient.
struct Adam {
  double lr = 1e-2;
  double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
  double weight_decay = 0.0;
  Mat m, v;
  long t = 0;

  explicit Adam(double lr_, double beta1_ = 0.9, double beta2_ = 0.999,
                double eps_ = 1e-8, double weight_decay_ = 0.0)
      : lr(lr_), beta1(beta1_), beta2(beta2_), eps(eps_),
        weight_decay(weight_decay_) {}

  void step(Mat& param, const Mat& grad) {
    if (m.size() == 0) {
      m = Mat::Zero(param.rows(), param.cols());
      v = Mat::Zero(param.rows(), param.cols());
    }
    Mat g = grad;
    if (weight_decay != 0.0) g += weight_decay * param;
    ++t;
    m = beta1 * m + (1.0 - beta1) * g;
    v = beta2 * v + (1.0 - beta2) * g.cwiseProduct(g);
    double bc1 = 1.0 - std::pow(beta1, double(t));
    double bc2 = 1.0 - std::pow(beta2, double(t));
    param.array() -=
        lr * (m.array() / bc1) / ((v.array() / bc2).sqrt() + eps);
  }
};

inline Mat glorot(int rows, int cols, Rng& rng) {
  double bound = std::sqrt(6.0 / double(rows + cols));
  std::uniform_real_distribution<double> dist(-bound, bound);
  Mat w(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) w(i, j) = dist(rng);
  return w;
}

/// Inverted dropout; identity when rate <= 0.
inline Mat dropout(const Mat& x, double rate, Rng& rng) {
  if (rate <= 0.0) return x;
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  double keep = 1.0 - rate;
  Mat out(x.rows(), x.cols());
  for (int j = 0; j < x.cols(); ++j)
    for (int i = 0; i < x.rows(); ++i)
      out(i, j) = dist(rng) < keep ? x(i, j) / keep : 0.0;
  return out;
}

inline Mat relu(const Mat& x) { return x.cwiseMax(0.0); }

inline Mat relu_backward(const Mat& grad, const Mat& pre_activation) {
  return (pre_activation.array() > 0.0).select(grad, Mat::Zero(grad.rows(), grad.cols()));
}

/// Row-wise softmax cross-entropy against one-hot targets over the rows
/// selected by `rows` (all rows when empty). Returns mean loss; dlogits
/// gets the gradient (zero on unselected rows).
inline double softmax_cross_entropy(const Mat& logits, const Mat& y_onehot,
                                    const std::vector<int>& rows,
                                    Mat* dlogits) {
  const int n = static_cast<int>(logits.rows());
  std::vector<int> idx = rows;
  if (idx.empty()) {
    idx.resize(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
  }
  if (dlogits) *dlogits = Mat::Zero(logits.rows(), logits.cols());
  double loss = 0.0;
  const double inv = 1.0 / double(idx.size());
  for (int i : idx) {
    Vec row = logits.row(i);
    double mx = row.maxCoeff();
    Vec ex = (row.array() - mx).exp();
    double z = ex.sum();
    Vec p = ex / z;
    for (int c = 0; c < logits.cols(); ++c)
      if (y_onehot(i, c) > 0.0)
        loss -= y_onehot(i, c) * (std::log(p(c) + 1e-300));
    if (dlogits) dlogits->row(i) = inv * (p - Vec(y_onehot.row(i))).transpose();
  }
  return loss * inv;
}

inline IVec argmax_rows(const Mat& logits) {
  IVec out(logits.rows());
  for (int i = 0; i < logits.rows(); ++i) {
    int best = 0;
    logits.row(i).maxCoeff(&best);
    out(i) = best;
  }
  return out;
}

}  // namespace gdem::nn
