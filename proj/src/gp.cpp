#include "mobo/gp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "mobo/simd/kernels.hpp"

namespace mobo {

namespace {

std::vector<double> log_grid(double lo, double hi, int count) {
  std::vector<double> out(count);
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (int i = 0; i < count; ++i) out[i] = std::exp(a + (b - a) * i / (count - 1));
  return out;
}

}  // namespace

void GpModel::set_data(const std::vector<std::vector<double>>& x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("GP fit: x and y differ in length");
  if (x.size() < 2) throw std::invalid_argument("GP fit: need at least two points");
  n_ = x.size();
  d_ = x.front().size();
  if (d_ == 0) throw std::invalid_argument("GP fit: zero-dimensional inputs");
  x_.clear();
  x_.reserve(n_ * d_);
  for (const auto& row : x) {
    if (row.size() != d_) throw std::invalid_argument("GP fit: inputs have different dimensions");
    x_.insert(x_.end(), row.begin(), row.end());
  }

  double sum = 0.0;
  for (const double v : y) {
    if (!std::isfinite(v)) throw std::invalid_argument("GP fit: non-finite target");
    sum += v;
  }
  y_mean_ = sum / static_cast<double>(n_);
  double ss = 0.0;
  for (const double v : y) ss += (v - y_mean_) * (v - y_mean_);
  y_std_ = std::sqrt(ss / static_cast<double>(n_));
  if (y_std_ < 1e-12 * std::max(1.0, std::abs(y_mean_))) y_std_ = 1.0;
  y_.resize(static_cast<Eigen::Index>(n_));
  for (std::size_t i = 0; i < n_; ++i) y_[static_cast<Eigen::Index>(i)] = (y[i] - y_mean_) / y_std_;

  sqdist_.resize(static_cast<Eigen::Index>(n_), static_cast<Eigen::Index>(n_));
  std::vector<double> row(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    simd::squared_distances(std::span(x_).subspan(i * d_, d_), x_, d_, row);
    for (std::size_t j = 0; j < n_; ++j) sqdist_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = row[j];
  }
  // exact symmetry regardless of summation order
  sqdist_ = (0.5 * (sqdist_ + sqdist_.transpose())).eval();
  sqdist_.diagonal().setZero();
}

bool GpModel::factorize(const GpHyperparameters& hp) {
  const double scale = -0.5 / (hp.lengthscale * hp.lengthscale);
  Eigen::MatrixXd k = hp.signal_variance * (sqdist_.array() * scale).exp().matrix();
  k.diagonal().array() += hp.noise;

  double extra = 0.0;
  while (true) {
    Eigen::MatrixXd kj = k;
    if (extra > 0.0) kj.diagonal().array() += extra;
    chol_.compute(kj);
    if (chol_.info() == Eigen::Success && (chol_.matrixLLT().diagonal().array() > 0.0).all()) break;
    extra = extra == 0.0 ? kMinJitter : extra * 10.0;
    if (extra > kMaxJitter * 1.0000001) return false;
  }

  hyper_ = hp;
  jitter_ = extra;
  alpha_ = chol_.solve(y_);
  const double log_det = 2.0 * chol_.matrixLLT().diagonal().array().log().sum();
  lml_ = -0.5 * y_.dot(alpha_) - 0.5 * log_det - 0.5 * static_cast<double>(n_) * std::log(2.0 * std::numbers::pi);
  return std::isfinite(lml_);
}

GpModel GpModel::fit(const std::vector<std::vector<double>>& x, std::span<const double> y) {
  GpModel model;
  model.set_data(x, y);
  const double root_d = std::sqrt(static_cast<double>(model.d_));
  const auto lengthscales = log_grid(1e-2 * root_d, 1e1 * root_d, kLengthscaleGrid);
  const auto noises = log_grid(1e-6, 1e-1, kNoiseGrid);

  int best = -1;
  double best_lml = -std::numeric_limits<double>::infinity();
  for (const double ell : lengthscales) {
    for (const double noise : noises) {
      const GpHyperparameters hp{1.0, ell, noise};
      GpGridScore score{hp, -std::numeric_limits<double>::infinity(), false};
      if (model.factorize(hp)) {
        score.factorized = true;
        score.log_marginal_likelihood = model.lml_;
        if (model.lml_ > best_lml) {
          best_lml = model.lml_;
          best = static_cast<int>(model.grid_.size());
        }
      }
      model.grid_.push_back(score);
    }
  }
  if (best < 0) throw std::runtime_error("GP fit: no grid point produced a positive-definite kernel matrix");
  model.factorize(model.grid_[static_cast<std::size_t>(best)].hyperparameters);
  return model;
}

GpModel GpModel::fit(const std::vector<std::vector<double>>& x, std::span<const double> y,
                     const GpHyperparameters& hyperparameters) {
  if (!(hyperparameters.signal_variance > 0.0 && hyperparameters.lengthscale > 0.0 && hyperparameters.noise >= 0.0)) {
    throw std::invalid_argument("GP fit: invalid hyperparameters");
  }
  GpModel model;
  model.set_data(x, y);
  if (!model.factorize(hyperparameters)) {
    throw std::runtime_error("GP fit: kernel matrix not positive definite after jitter escalation");
  }
  return model;
}

GpPrediction GpModel::predict(std::span<const double> x) const {
  if (x.size() != d_) throw std::invalid_argument("GP predict: dimension mismatch");
  return predict_many(x).front();
}

std::vector<GpPrediction> GpModel::predict_many(std::span<const double> rows) const {
  if (rows.empty() || rows.size() % d_ != 0) throw std::invalid_argument("GP predict: dimension mismatch");
  const std::size_t m = rows.size() / d_;
  const double scale = -0.5 / (hyper_.lengthscale * hyper_.lengthscale);

  Eigen::MatrixXd kstar(static_cast<Eigen::Index>(n_), static_cast<Eigen::Index>(m));
  std::vector<double> sq(n_);
  for (std::size_t c = 0; c < m; ++c) {
    simd::squared_distances(rows.subspan(c * d_, d_), x_, d_, sq);
    for (std::size_t i = 0; i < n_; ++i) {
      kstar(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = hyper_.signal_variance * std::exp(sq[i] * scale);
    }
  }
  const Eigen::MatrixXd v = chol_.matrixL().solve(kstar);

  std::vector<GpPrediction> out(m);
  for (std::size_t c = 0; c < m; ++c) {
    const auto col = static_cast<Eigen::Index>(c);
    const double mean = simd::dot(std::span<const double>(kstar.col(col).data(), n_),
                                  std::span<const double>(alpha_.data(), n_));
    const double var = hyper_.signal_variance - v.col(col).squaredNorm();
    out[c].mean = mean * y_std_ + y_mean_;
    out[c].variance = std::max(0.0, var) * y_std_ * y_std_;
  }
  return out;
}

}  // namespace mobo
