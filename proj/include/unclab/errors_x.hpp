#ifndef UNCLAB_ERRORS_X_HPP
#define UNCLAB_ERRORS_X_HPP

/**
 * Classical additive-Gaussian measurement error in a feature: the error-free
 * regressor Z is observed only through X = Z + U. Closed forms for the
 * variance inflation of Y given the error-prone x, the naive-slope
 * attenuation factor, and a windowed Monte-Carlo oracle for Var(Y | x ~ x0).
 */

#include <cstddef>

#include "unclab/mc.hpp"
#include "unclab/rng.hpp"

namespace unclab {

/// Z ~ N(mu_z, tau2); X = Z + U with U ~ N(0, omega2) independent;
/// Y | z ~ N(alpha + gamma z, sigma2) with Y independent of X given Z.
struct LinearGaussianMeSpec {
  double mu_z = 0.0;
  double tau2 = 1.0;
  double omega2 = 0.0;
  double alpha = 0.0;
  double gamma = 1.0;
  double sigma2 = 1.0;

  void validate() const;
};

/// Var(Y|z) = sigma2: the aleatoric floor when the error-free feature is
/// available. Constant in z for this family.
double error_free_variance(const LinearGaussianMeSpec& spec);

struct ErrorProneVariance {
  double total = 0.0;          // Var(Y|x)
  double mean_cond_var = 0.0;  // E[Var(Y|Z)|x] = sigma2
  double var_cond_mean = 0.0;  // Var[E(Y|Z)|x] = gamma^2 tau2 omega2/(tau2+omega2)
};

/// Law-of-total-variance split of Var(Y|x) under Gaussian conjugacy:
/// Var(Z|x) = tau2 omega2 / (tau2 + omega2). Requires tau2 + omega2 > 0.
ErrorProneVariance error_prone_variance(const LinearGaussianMeSpec& spec);

struct SlopeAttenuation {
  double true_slope = 0.0;   // gamma
  double naive_slope = 0.0;  // gamma tau2/(tau2+omega2)
  double attenuation = 0.0;  // tau2/(tau2+omega2) in [0, 1]
};

/// Attenuation of the slope when y is regressed on the error-prone x.
SlopeAttenuation naive_slope_attenuation(const LinearGaussianMeSpec& spec);

/// Windowed Monte-Carlo check of Var(Y | x in [x0-h, x0+h]): samples
/// (z, x, y) triples and returns the sample variance of y inside the
/// window (mean) with its standard error. Requires n_draws >= 10^5 and at
/// least 100 draws landing in the window. The estimate carries an O(h)
/// window bias on top of the Monte-Carlo error.
McEstimate mc_errors_x_oracle(const LinearGaussianMeSpec& spec, double x0, double bandwidth,
                              std::size_t n_draws, RngStream stream);

}  // namespace unclab

#endif  // UNCLAB_ERRORS_X_HPP
