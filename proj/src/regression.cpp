#include "unclab/regression.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "unclab/errors.hpp"
#include "unclab/parallel.hpp"
#include "unclab/student_t.hpp"

namespace unclab {

namespace {

Eigen::BDCSVD<Eigen::MatrixXd> thin_svd(const Eigen::MatrixXd& X) {
  return Eigen::BDCSVD<Eigen::MatrixXd>(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
}

Eigen::Index truncated_rank(const Eigen::VectorXd& singular_values, Eigen::Index n,
                            Eigen::Index p) {
  if (singular_values.size() == 0) return 0;
  const double threshold = svd_rcond_threshold(n, p, singular_values(0));
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < singular_values.size(); ++i) {
    if (singular_values(i) > threshold) ++rank;
  }
  return rank;
}

double residual_sum_of_squares(const Dataset& data, const Eigen::VectorXd& beta) {
  const double rss = (data.y - data.X * beta).squaredNorm();
  // Interpolating fits leave rounding dust of order (eps * ||y||)^2 per
  // entry; clamp it so exact linear data reports exactly zero residuals.
  const double eps = std::numeric_limits<double>::epsilon();
  const double scale = static_cast<double>(std::max(data.n(), data.p())) * eps;
  const double noise_floor = scale * scale * data.y.squaredNorm();
  return rss <= noise_floor ? 0.0 : rss;
}

}  // namespace

Dataset::Dataset(Eigen::MatrixXd design, Eigen::VectorXd response)
    : X(std::move(design)), y(std::move(response)) {
  if (X.rows() < 1 || X.cols() < 1) throw validation_error("Dataset: need n >= 1 and p >= 1");
  if (y.size() != X.rows()) throw validation_error("Dataset: y length must equal row count of X");
  if (!X.allFinite() || !y.allFinite()) throw validation_error("Dataset: entries must be finite");
}

double svd_rcond_threshold(Eigen::Index n, Eigen::Index p, double largest_singular_value) {
  return std::numeric_limits<double>::epsilon() * static_cast<double>(std::max(n, p)) *
         largest_singular_value;
}

LinearFit ols_fit(const Dataset& data) {
  const Eigen::Index n = data.n();
  const Eigen::Index p = data.p();
  if (p > n) {
    throw validation_error("ols_fit: p > n (" + std::to_string(p) + " > " + std::to_string(n) +
                           "); use pinv_fit for overparameterized designs");
  }
  const auto svd = thin_svd(data.X);
  const Eigen::Index rank = truncated_rank(svd.singularValues(), n, p);
  if (rank < p) {
    throw numeric_error("ols_fit: rank-deficient design, rank " + std::to_string(rank) + " < p = " +
                        std::to_string(p));
  }
  LinearFit fit;
  fit.coefficients = svd.solve(data.y);
  fit.estimator = Estimator::ols;
  fit.n = n;
  fit.p = p;
  if (n > p) {
    fit.sigma2_hat = residual_sum_of_squares(data, fit.coefficients) / static_cast<double>(n - p);
  }
  return fit;
}

LinearFit pinv_fit(const Dataset& data) {
  const Eigen::Index n = data.n();
  const Eigen::Index p = data.p();
  const auto svd = thin_svd(data.X);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double threshold = sv.size() > 0 ? svd_rcond_threshold(n, p, sv(0)) : 0.0;

  // beta = V diag(1/s_i) U' y over singular values above the cutoff.
  Eigen::VectorXd uty = svd.matrixU().transpose() * data.y;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    uty(i) = sv(i) > threshold ? uty(i) / sv(i) : 0.0;
  }
  LinearFit fit;
  fit.coefficients = svd.matrixV() * uty;
  fit.estimator = Estimator::pinv;
  fit.n = n;
  fit.p = p;
  return fit;
}

LinearFit ridge_fit(const Dataset& data, double lambda) {
  if (!(lambda > 0.0)) throw validation_error("ridge_fit: lambda must be > 0");
  const Eigen::Index n = data.n();
  const Eigen::Index p = data.p();
  LinearFit fit;
  if (p <= n) {
    Eigen::MatrixXd gram = data.X.transpose() * data.X;
    gram.diagonal().array() += lambda;
    fit.coefficients = gram.ldlt().solve(data.X.transpose() * data.y);
  } else {
    // (X'X + lambda I)^{-1} X' = X' (XX' + lambda I)^{-1}: solve in n dims.
    Eigen::MatrixXd gram = data.X * data.X.transpose();
    gram.diagonal().array() += lambda;
    fit.coefficients = data.X.transpose() * gram.ldlt().solve(data.y);
  }
  fit.estimator = Estimator::ridge;
  fit.ridge_lambda = lambda;
  fit.n = n;
  fit.p = p;
  return fit;
}

double predict(const LinearFit& fit, const Eigen::VectorXd& x0) {
  if (x0.size() != fit.coefficients.size()) {
    throw validation_error("predict: x0 has length " + std::to_string(x0.size()) +
                           ", fit has " + std::to_string(fit.coefficients.size()) +
                           " coefficients");
  }
  return x0.dot(fit.coefficients);
}

PredictionInterval prediction_interval(const LinearFit& fit, const Dataset& data,
                                       const Eigen::VectorXd& x0, double level) {
  if (fit.estimator != Estimator::ols) {
    throw validation_error("prediction_interval: requires an OLS fit");
  }
  if (fit.n <= fit.p || !fit.sigma2_hat.has_value()) {
    throw validation_error("prediction_interval: requires n > p (residual variance estimate)");
  }
  if (!(level > 0.0 && level < 1.0)) {
    throw validation_error("prediction_interval: level must be in (0, 1)");
  }
  const double center = predict(fit, x0);
  const Eigen::MatrixXd gram = data.X.transpose() * data.X;
  const double leverage = x0.dot(gram.ldlt().solve(x0));
  const double sigma_hat = std::sqrt(*fit.sigma2_hat);
  const int df = static_cast<int>(fit.n - fit.p);
  const double alpha = 1.0 - level;
  const double half_width =
      t_quantile(df, 1.0 - 0.5 * alpha) * sigma_hat * std::sqrt(1.0 + leverage);
  return {center, center - half_width, center + half_width, level};
}

double aic(const LinearFit& fit, const Dataset& data) {
  if (fit.estimator != Estimator::ols) throw validation_error("aic: requires an OLS fit");
  const Eigen::Index n = fit.n;
  const Eigen::Index p = fit.p;
  if (p >= n) {
    throw validation_error("aic: undefined for p >= n (no residual degrees of freedom)");
  }
  const double rss = residual_sum_of_squares(data, fit.coefficients);
  const double sigma2_mle = rss / static_cast<double>(n);
  // Gaussian log-likelihood at (beta_hat, sigma2_mle): -n/2 (log(2 pi s2) + 1)
  const double loglik =
      -0.5 * static_cast<double>(n) * (std::log(2.0 * M_PI * sigma2_mle) + 1.0);
  return -2.0 * loglik + 2.0 * static_cast<double>(p + 1);
}

BiasVarianceResult bias_variance_mc(const LinearGaussianDgp& dgp, const Fitter& fitter,
                                    const Eigen::VectorXd& x0, std::size_t n_train,
                                    std::size_t reps, RngStream stream, int threads) {
  if (reps < 100) throw validation_error("bias_variance_mc: reps must be >= 100");
  if (x0.size() != dgp.beta.size()) {
    throw validation_error("bias_variance_mc: x0 length must match dgp.beta length");
  }
  if (!(dgp.sigma2 >= 0.0)) throw validation_error("bias_variance_mc: sigma2 must be >= 0");
  const auto n = static_cast<Eigen::Index>(n_train);
  const auto p = dgp.beta.size();
  const double sigma = std::sqrt(dgp.sigma2);
  const double truth_at_x0 = x0.dot(dgp.beta);

  std::vector<double> y_hat(reps);
  std::vector<double> squared_error_fresh(reps);

  parallel_for_index(reps, threads, [&](std::size_t r) {
    RngStream rep_stream = stream.split(r);
    Eigen::MatrixXd X(n, p);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < p; ++j) X(i, j) = rep_stream.next_normal();
    }
    Eigen::VectorXd y = X * dgp.beta;
    for (Eigen::Index i = 0; i < n; ++i) y(i) += sigma * rep_stream.next_normal();
    const Dataset data(std::move(X), std::move(y));
    LinearFit fit;
    try {
      fit = fitter(data);
    } catch (const std::exception& e) {
      throw numeric_error("bias_variance_mc: fitter failed at replication " + std::to_string(r) +
                          ": " + e.what());
    }
    const double prediction = predict(fit, x0);
    if (!std::isfinite(prediction)) {
      throw numeric_error("bias_variance_mc: non-finite prediction at replication " +
                          std::to_string(r));
    }
    const double y0 = truth_at_x0 + sigma * rep_stream.next_normal();
    y_hat[r] = prediction;
    squared_error_fresh[r] = (y0 - prediction) * (y0 - prediction);
  });

  const McEstimate y_hat_mean = mc_from_values(y_hat);

  // Spread of y_hat around its replication mean, reported with the standard
  // error of the mean of squared deviations (n/(n-1) corrected).
  const auto m = static_cast<double>(reps);
  std::vector<double> sq_dev(reps);
  for (std::size_t r = 0; r < reps; ++r) {
    const double d = y_hat[r] - y_hat_mean.mean;
    sq_dev[r] = d * d * m / (m - 1.0);
  }
  const McEstimate estimation_variance = mc_from_values(sq_dev);

  // Delta-method standard error for (mean y_hat - truth)^2.
  const double bias = y_hat_mean.mean - truth_at_x0;
  const double se_m = y_hat_mean.std_error;
  McEstimate bias_sq;
  bias_sq.mean = bias * bias;
  bias_sq.std_error = std::sqrt(4.0 * bias * bias * se_m * se_m + 2.0 * se_m * se_m * se_m * se_m);
  bias_sq.n_samples = reps;

  BiasVarianceResult result;
  result.aleatoric = dgp.sigma2;
  result.estimation_variance = estimation_variance;
  result.bias_sq = bias_sq;
  result.direct_mse = mc_from_values(squared_error_fresh);
  return result;
}

}  // namespace unclab
