#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace mobo {

/// Isotropic squared-exponential kernel plus white noise:
///   k(a, b) = signal_variance * exp(-|a - b|^2 / (2 lengthscale^2)) + noise * [a == b]
/// Hyperparameters act on standardised targets.
struct GpHyperparameters {
  double signal_variance = 1.0;
  double lengthscale = 1.0;
  double noise = 1e-6;
};

struct GpPrediction {
  double mean = 0.0;
  double variance = 0.0;
};

struct GpGridScore {
  GpHyperparameters hyperparameters;
  double log_marginal_likelihood = 0.0;
  bool factorized = false;
};

/// Gaussian-process regression on one objective. Immutable after fit.
class GpModel {
 public:
  static constexpr int kLengthscaleGrid = 24;
  static constexpr int kNoiseGrid = 8;
  static constexpr double kMinJitter = 1e-10;
  static constexpr double kMaxJitter = 1e-6;

  /// Standardises y, then picks (lengthscale, noise) maximising the log
  /// marginal likelihood over the log-spaced grid lengthscale in
  /// [1e-2, 1e1] * sqrt(d) (24 points), noise in [1e-6, 1e-1] (8 points);
  /// signal variance fixed at 1. Throws std::invalid_argument on fewer than
  /// two points, ragged inputs, or non-finite targets.
  static GpModel fit(const std::vector<std::vector<double>>& x, std::span<const double> y);

  /// Same, with fixed hyperparameters.
  static GpModel fit(const std::vector<std::vector<double>>& x, std::span<const double> y,
                     const GpHyperparameters& hyperparameters);

  /// Posterior mean and variance of the latent function, de-standardised.
  GpPrediction predict(std::span<const double> x) const;

  /// Batched predict over rows of a row-major (m x d) buffer.
  std::vector<GpPrediction> predict_many(std::span<const double> rows) const;

  const GpHyperparameters& hyperparameters() const { return hyper_; }
  double log_marginal_likelihood() const { return lml_; }
  /// Extra diagonal added beyond the noise term to make the factorisation succeed.
  double jitter() const { return jitter_; }
  double y_mean() const { return y_mean_; }
  double y_std() const { return y_std_; }
  std::size_t size() const { return n_; }
  std::size_t dimension() const { return d_; }
  /// Every grid candidate evaluated by the MLE search (empty for fixed fits).
  const std::vector<GpGridScore>& grid_scores() const { return grid_; }

 private:
  GpModel() = default;

  void set_data(const std::vector<std::vector<double>>& x, std::span<const double> y);
  /// Factorises for `hp`; returns false when no jitter up to kMaxJitter helps.
  bool factorize(const GpHyperparameters& hp);

  std::size_t n_ = 0;
  std::size_t d_ = 0;
  std::vector<double> x_;      // row-major n x d
  Eigen::MatrixXd sqdist_;     // pairwise squared distances
  Eigen::VectorXd y_;          // standardised targets
  double y_mean_ = 0.0;
  double y_std_ = 1.0;

  GpHyperparameters hyper_;
  Eigen::LLT<Eigen::MatrixXd> chol_;
  Eigen::VectorXd alpha_;
  double lml_ = 0.0;
  double jitter_ = 0.0;
  std::vector<GpGridScore> grid_;
};

}  // namespace mobo
