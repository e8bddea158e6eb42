#include "gdem/diagnostics.hpp"

#include <cmath>

namespace gdem {

double FilterSpec::operator()(double lambda) const {
  switch (kind) {
    case FilterKind::lowpass: return 1.0 - lambda;
    case FilterKind::highpass: return lambda;
    case FilterKind::custom: {
      double acc = 0.0, pow = 1.0;
      for (double c : coeffs) {
        acc += c * pow;
        pow *= lambda;
      }
      return acc;
    }
  }
  return 0.0;
}

DominanceProfile dominance_profile(const SpectralBasis& basis,
                                   const FilterSpec& filter, int t) {
  if (t < 1) throw ValidationError("dominance power t must be >= 1");
  DominanceProfile p;
  p.t = t;
  p.eigenvalues = basis.eigenvalues;
  const int k = basis.k();
  p.coefficients.resize(k);
  Vec mag(k);
  for (int i = 0; i < k; ++i) {
    double g = filter(basis.eigenvalues(i));
    p.coefficients(i) = std::pow(g, 2 * t);
    mag(i) = std::abs(g);
  }
  double peak = mag.maxCoeff();
  if (peak <= 0.0)
    throw ValidationError("filter vanishes on the whole spectrum");
  // Shares from scaled powers, so large t cannot overflow.
  Vec scaled(k);
  for (int i = 0; i < k; ++i) scaled(i) = std::pow(mag(i) / peak, 2 * t);
  p.normalized_share = scaled / scaled.sum();
  return p;
}

// ------------------------------------------------------------ toy matcher

double toy_matching_loss(const Mat& g_real, const Mat& a_syn, const Mat& x_syn,
                         const Mat& y_syn, FilterKind filter, const Mat& w,
                         Mat* da_syn, Mat* dx_syn) {
  if (filter == FilterKind::custom)
    throw ValidationError("toy matcher supports lowpass/highpass only");
  const int n = static_cast<int>(a_syn.rows());
  // Synthetic filter mirrors the real pair: A' low-pass, I - A' high-pass.
  Mat f = filter == FilterKind::lowpass
              ? a_syn
              : Mat(Mat::Identity(n, n) - a_syn);

  Mat b = f * x_syn;                    // N' x d
  Mat e = b * w - y_syn;                // N' x C
  Mat g_syn = b.transpose() * e;        // d x C
  Mat m = g_real - g_syn;
  const double scale = 1.0 / double(m.size());
  double loss = m.squaredNorm() * scale;

  if (da_syn || dx_syn) {
    Mat dg = -2.0 * scale * m;                       // dLoss/dG'
    Mat db = e * dg.transpose() + b * dg * w.transpose();
    if (dx_syn) *dx_syn = f.transpose() * db;
    if (da_syn) {
      Mat df = db * x_syn.transpose();
      *da_syn = filter == FilterKind::lowpass ? df : Mat(-df);
    }
  }
  return loss;
}

ToyResult toy_gradient_matching(const RealGraph& g, FilterKind filter,
                                int n_syn, const ToyOptions& opts) {
  const int d = g.dim();
  SpMat l = normalized_laplacian_sparse(g);
  SpMat f_real;
  if (filter == FilterKind::lowpass) {
    SpMat eye(g.n, g.n);
    eye.setIdentity();
    f_real = eye - l;  // normalized adjacency
  } else {
    f_real = l;
  }
  Mat fx = f_real * g.features;
  Mat y_real = label_matrix(g);
  Mat y_syn = predefine_labels(g, n_syn);
  const int c = g.num_classes;

  Rng rng(opts.seed);

  // Features start as same-class training rows.
  Mat x_syn(n_syn, d);
  {
    std::vector<std::vector<int>> rows_of(c);
    for (int i = 0; i < g.n; ++i)
      if (g.train_mask[i]) rows_of[g.labels(i)].push_back(i);
    std::vector<int> next(c, 0);
    for (int i = 0; i < n_syn; ++i) {
      int cls = 0;
      y_syn.row(i).maxCoeff(&cls);
      if (rows_of[cls].empty())
        throw ValidationError("class " + std::to_string(cls) +
                              " has no training rows");
      std::uniform_int_distribution<int> pick(
          0, static_cast<int>(rows_of[cls].size()) - 1);
      x_syn.row(i) = g.features.row(rows_of[cls][pick(rng)]);
    }
  }

  // Symmetric zero-diagonal latent; sigmoid squashes into [0, 1].
  Mat latent(n_syn, n_syn);
  {
    std::normal_distribution<double> noise(0.0, 0.2);
    latent.setZero();
    for (int i = 0; i < n_syn; ++i)
      for (int j = i + 1; j < n_syn; ++j)
        latent(i, j) = latent(j, i) = -1.0 + noise(rng);
  }
  auto squash = [&](const Mat& s) {
    Mat a = (1.0 / (1.0 + (-s.array()).exp())).matrix();
    a.diagonal().setZero();
    return a;
  };

  std::normal_distribution<double> wdist(0.0, 1.0);
  const double wscale = 1.0 / std::sqrt(double(d));

  ToyResult result;
  result.loss_trace.reserve(opts.steps);
  for (int step = 0; step < opts.steps; ++step) {
    Mat a_syn = squash(latent);
    double loss = 0.0;
    Mat da = Mat::Zero(n_syn, n_syn);
    Mat dx = Mat::Zero(n_syn, d);
    for (int rep = 0; rep < opts.w_draws; ++rep) {
      Mat w(d, c);
      for (int jj = 0; jj < c; ++jj)
        for (int ii = 0; ii < d; ++ii) w(ii, jj) = wdist(rng) * wscale;
      Mat g_real = fx.transpose() * (fx * w - y_real);
      Mat da_one, dx_one;
      loss += toy_matching_loss(g_real, a_syn, x_syn, y_syn, filter, w,
                                &da_one, &dx_one);
      da += da_one;
      dx += dx_one;
    }
    double inv = 1.0 / double(opts.w_draws);
    loss *= inv;
    da *= inv;
    dx *= inv;
    if (!std::isfinite(loss))
      throw NumericalError("toy gradient matching diverged at step " +
                           std::to_string(step));
    result.loss_trace.push_back(loss);

    // Chain through the squash; tied symmetric entries share gradient.
    Mat sig = squash(latent);
    Mat dsig = (sig.array() * (1.0 - sig.array())).matrix();
    Mat dlatent =
        0.5 * (da + da.transpose()).cwiseProduct(dsig);
    dlatent.diagonal().setZero();
    latent -= opts.lr * dlatent;
    x_syn -= opts.lr * dx;
  }

  result.a_syn = squash(latent);
  result.x_syn = std::move(x_syn);
  return result;
}

// ----------------------------------------------------------- tv compare

TvComparison tv_compare(const RealGraph& g, const SyntheticGraph& syn) {
  if (syn.x_syn.cols() != g.dim())
    throw ValidationError("feature dimension mismatch in tv_compare");
  TvComparison out;
  out.real = total_variation(normalized_laplacian_sparse(g), g.features);
  ConstructedGraph cg = construct_synthetic(syn);
  out.synthetic = total_variation(cg.l_syn, syn.x_syn);
  out.delta = out.synthetic.average - out.real.average;
  return out;
}

TvComparison tv_compare(const RealGraph& g, const Mat& a_syn,
                        const Mat& x_syn) {
  if (x_syn.cols() != g.dim())
    throw ValidationError("feature dimension mismatch in tv_compare");
  TvComparison out;
  out.real = total_variation(normalized_laplacian_sparse(g), g.features);
  out.synthetic = total_variation(normalized_laplacian_dense(a_syn), x_syn);
  out.delta = out.synthetic.average - out.real.average;
  return out;
}

// ------------------------------------------------------------- rss check

RssReport rss_check(const SpectralBasis& basis, const SpMat& l_real,
                    const Mat& x_real, const SyntheticGraph& syn) {
  if (x_real.cols() != syn.x_syn.cols())
    throw ValidationError("feature dimension mismatch in rss_check");
  if (basis.k() != syn.k())
    throw ValidationError("basis width mismatch in rss_check");

  const int d = static_cast<int>(x_real.cols());
  const Vec& lam = syn.eigenvalues;
  ConstructedGraph cg = construct_synthetic(syn);

  Mat p = basis.vectors.transpose() * x_real;   // K x d
  Mat q = syn.u_syn.transpose() * syn.x_syn;    // K x d

  RssReport report;
  report.per_column.reserve(d);
  for (int j = 0; j < d; ++j) {
    RssColumn col;
    Vec x = x_real.col(j);
    Vec xs = syn.x_syn.col(j);
    col.real_quad = x.dot(l_real * x);
    col.syn_quad = xs.dot(cg.l_syn * xs);

    double trunc_real = 0.0, trunc_syn = 0.0, weighted_absdiff = 0.0;
    for (int k = 0; k < basis.k(); ++k) {
      double a = p(k, j) * p(k, j);
      double b = q(k, j) * q(k, j);
      trunc_real += lam(k) * a;
      trunc_syn += lam(k) * b;
      weighted_absdiff += lam(k) * std::abs(a - b);
    }
    col.delta_residual = col.syn_quad - trunc_syn;
    col.bound = weighted_absdiff + std::abs(col.delta_residual);
    col.gap = std::abs(col.real_quad - col.syn_quad);
    col.truncated_gap = std::abs(trunc_real - col.syn_quad);
    report.epsilon = std::max(report.epsilon, col.bound);
    report.per_column.push_back(col);
  }
  return report;
}

}  // namespace gdem
