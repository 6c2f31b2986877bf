#ifndef UNCLAB_KL_DESCENT_HPP
#define UNCLAB_KL_DESCENT_HPP

/**
 * Expected Kullback-Leibler divergence between a true linear-Gaussian model
 * and fitted nested submodels as the parameter count p grows past the sample
 * size n, split into
 *
 *   component 1: distance of the best p-term model from the truth
 *                (vanishes once every active covariate is included), and
 *   component 2: distance of the fitted model from the best p-term model
 *                (estimation effect; shows the post-n double-descent dip).
 *
 * The KL is taken over mean functions with the residual standard deviation
 * sigma treated as known and shared by truth and fit, and features are
 * i.i.d. standard normal (identity population covariance), which makes the
 * divergence a scaled squared coefficient distance.
 */

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "unclab/mc.hpp"
#include "unclab/rng.hpp"

namespace unclab {

enum class BetaScheme { decreasing, constant, custom };

enum class KlEstimator { pinv, ridge };

struct SimSetting {
  Eigen::Index n = 100;
  Eigen::Index p_max = 200;
  double sigma = 0.1;
  BetaScheme scheme = BetaScheme::decreasing;
  Eigen::VectorXd custom_beta;  // used only when scheme == custom; length p_max
  KlEstimator estimator = KlEstimator::pinv;
  double ridge_lambda = 0.0;  // <= 0 selects the default sigma^2 / sigma_beta^2
  std::size_t replications = 100;
  std::vector<Eigen::Index> p_grid;  // empty selects 1..p_max
  std::uint64_t base_seed = 0;
};

struct KlCurvePoint {
  Eigen::Index p = 0;
  McEstimate kl_total;
  double comp1 = 0.0;  // deterministic given (beta, p)
  McEstimate comp2;
};

struct KlComponents {
  double total = 0.0;
  double comp1 = 0.0;
  double comp2 = 0.0;
};

/// Coefficient vectors of the two named simulation settings: the first 150
/// entries carry signal (decreasing: 1 - j/150; constant: 1), the rest are 0.
/// Named schemes require p_max >= 150.
Eigen::VectorXd beta_scheme_vector(BetaScheme scheme, Eigen::Index p_max);

/// KL-optimal p-term coefficients under the identity population covariance:
/// the first p entries of the true vector.
Eigen::VectorXd optimal_subset_params(const Eigen::VectorXd& beta_true, Eigen::Index p);

/// Closed-form expected KL of a p-term fit (beta_hat, zero-padded) against
/// the truth, with the component split. All three values are nonnegative and
/// total == comp1 + comp2 exactly.
KlComponents kl_gaussian_linear(const Eigen::VectorXd& beta_true, const Eigen::VectorXd& beta_hat,
                                Eigen::Index p, double sigma);

/// Monte-Carlo oracle for the same expectation: samples x ~ N(0, I_{p_max})
/// and averages the pointwise KL (x'beta - x_{1:p}'beta_hat)^2 / (2 sigma^2).
/// n_draws >= 10^4.
McEstimate mc_kl_oracle(const Eigen::VectorXd& beta_true, const Eigen::VectorXd& beta_hat,
                        Eigen::Index p, double sigma, std::size_t n_draws, RngStream stream);

/// Default ridge penalty for a residual variance sigma^2: lambda =
/// sigma^2 / sigma_beta^2 with prior variance sigma_beta^2 = sqrt(10).
double default_ridge_lambda(double sigma);

/**
 * The double-descent experiment. Per replication r (stream index r of
 * base_seed): draw X (n x p_max, i.i.d. N(0,1)) and y = X beta + eps; for
 * each p in the grid fit on the first p columns — OLS while p < n and the
 * design has full rank, the setting's regularized estimator from p = n
 * onward (or on a rank-deficient design) — and evaluate the closed-form KL.
 * Points aggregate replication means with standard errors, ordered by p.
 */
std::vector<KlCurvePoint> run_double_descent(const SimSetting& setting, int threads = 0);

}  // namespace unclab

#endif  // UNCLAB_KL_DESCENT_HPP
