#ifndef UNCLAB_REGRESSION_HPP
#define UNCLAB_REGRESSION_HPP

/**
 * Linear-Gaussian model fitting and uncertainty decomposition.
 *
 * Fits: ordinary least squares, minimum-norm generalized inverse (SVD
 * pseudo-inverse), and ridge. On top of those: t prediction intervals,
 * AIC, and the Monte-Carlo bias/variance/aleatoric split of the mean
 * squared prediction error.
 */

#include <Eigen/Dense>
#include <cstddef>
#include <functional>
#include <optional>

#include "unclab/mc.hpp"
#include "unclab/rng.hpp"

namespace unclab {

struct Dataset {
  Eigen::MatrixXd X;  // n x p, rows are observations
  Eigen::VectorXd y;  // length n

  Dataset(Eigen::MatrixXd design, Eigen::VectorXd response);

  Eigen::Index n() const { return X.rows(); }
  Eigen::Index p() const { return X.cols(); }
};

enum class Estimator { ols, pinv, ridge };

struct LinearFit {
  Eigen::VectorXd coefficients;
  std::optional<double> sigma2_hat;  // RSS/(n-p); only for OLS with n > p
  Estimator estimator = Estimator::ols;
  double ridge_lambda = 0.0;  // meaningful only when estimator == ridge
  Eigen::Index n = 0;
  Eigen::Index p = 0;
};

struct PredictionInterval {
  double center = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double level = 0.0;
};

/// SVD truncation threshold used for rank decisions and the pseudo-inverse:
/// machine epsilon * max(n, p) * largest singular value.
double svd_rcond_threshold(Eigen::Index n, Eigen::Index p, double largest_singular_value);

/// Least squares (X'X)^{-1} X'y. Requires p <= n and a numerically
/// full-column-rank design; otherwise throws with the deficient rank
/// (or a pointer to pinv_fit when p > n).
LinearFit ols_fit(const Dataset& data);

/// Minimum-norm least squares (X'X)^- X'y via SVD with small singular
/// values truncated. Interpolates y exactly when X has full row rank
/// with p > n.
LinearFit pinv_fit(const Dataset& data);

/// Ridge estimate (X'X + lambda I)^{-1} X'y, lambda > 0. Solved through
/// the dual n x n system when p > n.
LinearFit ridge_fit(const Dataset& data, double lambda);

/// x0' beta_hat. Throws on length mismatch.
double predict(const LinearFit& fit, const Eigen::VectorXd& x0);

/// Two-sided t prediction interval for a future observation at x0:
///   x0'b +- t_{n-p,1-alpha/2} * sigma_hat * sqrt(1 + x0'(X'X)^{-1}x0).
/// OLS fits with n > p only.
PredictionInterval prediction_interval(const LinearFit& fit, const Dataset& data,
                                       const Eigen::VectorXd& x0, double level);

/// Akaike information criterion, -2 loglik(beta_hat, sigma2_mle) + 2(p+1),
/// with sigma counted as a parameter and sigma2_mle = RSS/n. OLS only;
/// undefined (throws) for p >= n.
double aic(const LinearFit& fit, const Dataset& data);

/// Data-generating truth for the Monte-Carlo decomposition:
/// features x ~ N(0, I_p) i.i.d., y = x'beta + eps, eps ~ N(0, sigma2).
struct LinearGaussianDgp {
  Eigen::VectorXd beta;
  double sigma2 = 1.0;
};

using Fitter = std::function<LinearFit(const Dataset&)>;

struct BiasVarianceResult {
  double aleatoric = 0.0;           // sigma2, exact
  McEstimate estimation_variance;   // Var over replications of y_hat(x0)
  McEstimate bias_sq;               // (mean y_hat - x0'beta)^2
  McEstimate direct_mse;            // E (y0 - y_hat)^2 on fresh draws
};

/**
 * Monte-Carlo bias-variance decomposition at x0.
 *
 * Each replication draws a fresh training set from the dgp, runs fitter,
 * predicts at x0, and scores a fresh y0. The fitter must return
 * coefficients in the dgp's feature space (a misspecified fitter embeds
 * structural zeros). Fitter failures are rethrown with the replication
 * index. reps >= 100.
 */
BiasVarianceResult bias_variance_mc(const LinearGaussianDgp& dgp, const Fitter& fitter,
                                    const Eigen::VectorXd& x0, std::size_t n_train,
                                    std::size_t reps, RngStream stream, int threads = 1);

}  // namespace unclab

#endif  // UNCLAB_REGRESSION_HPP
