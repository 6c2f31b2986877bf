#ifndef UNCLAB_OMITTED_HPP
#define UNCLAB_OMITTED_HPP

/**
 * Exact omitted-variable analysis over a finite-support conditioning
 * variable Z: the marginal (Z-averaged) mean and variance of Y given x,
 * per-z prediction bias, the variance under/over-statement classification,
 * the binary-outcome heterogeneity/bias link, and the two-term marginal
 * effect decomposition behind Simpson's paradox.
 */

#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace unclab {

/// Finite-support conditional model: Z takes values in z_values with
/// probabilities pz_given_x(x); Y given (x, z) has mean mean_y(x, z) and
/// variance var_y(x, z).
struct DiscreteZSpec {
  std::vector<double> z_values;
  std::function<Eigen::VectorXd(double)> pz_given_x;
  std::function<double(double, double)> mean_y;
  std::function<double(double, double)> var_y;
};

/// E(Y|x) = sum_z E(Y|x,z) P(z|x).
double marginal_mean(const DiscreteZSpec& spec, double x);

/// bias(x, z) = E(Y|x,z) - E(Y|x). Unknown z throws.
double ovb_bias(const DiscreteZSpec& spec, double x, double z);

/// Position of the full-model conditional variance at z relative to the
/// marginal variance: "under" when Var(Y|x,z) < Var(Y|x).
enum class VarClass { under, over, equal };

struct OvbZEntry {
  double z = 0.0;
  double weight = 0.0;    // P(z|x)
  double cond_var = 0.0;  // Var(Y|x,z)
  double bias = 0.0;      // E(Y|x,z) - E(Y|x)
  VarClass classification = VarClass::equal;
};

struct OvbReport {
  double marginal_mean = 0.0;
  double marginal_var = 0.0;
  std::vector<OvbZEntry> per_z;
};

/// Law-of-total-variance split of Var(Y|x):
///   Var(Y|x) = E_Z[Var(Y|x,Z)] + E_Z[bias(x,Z)^2].
OvbReport marginal_variance(const DiscreteZSpec& spec, double x);

/// Binary-Y link between variance heterogeneity and bias across two z
/// strata with success probabilities p1, p2. Variances p(1-p) are equal
/// exactly when p1 = p2 or p1 = 1 - p2; the latter with p1 != p2 is the
/// lone case of bias without heterogeneity.
struct BinaryOvbFlags {
  bool variance_heterogeneous = false;
  bool biased = false;
  bool exception_case = false;
};

BinaryOvbFlags binary_ovb_classifier(double p1, double p2);

/// Linear conditional means with a binary Z whose propensity is logistic in
/// x: E(Y|x,z) = beta0 + beta_x x + beta_z z, P(Z=1|x) = logistic(a + b x).
struct SimpsonModel {
  double beta0 = 0.0;
  double beta_x = 0.0;
  double beta_z = 0.0;
  double logit_a = 0.0;
  double logit_b = 0.0;
};

struct MarginalEffectTerms {
  double effect_term = 0.0;        // sum_z dE(Y|x,z)/dx * P(z|x) = beta_x
  double distribution_term = 0.0;  // sum_z E(Y|x,z) * dP(z|x)/dx
  double marginal_effect = 0.0;    // d/dx E(Y|x) = effect + distribution
};

/// Analytic two-term split of the derivative of the marginal mean. The sum
/// equals the finite-difference derivative of marginal_mean; with beta_z
/// large and b opposing beta_x, its sign flips against the per-z effect.
MarginalEffectTerms marginal_effect_terms(const SimpsonModel& model, double x);

/// DiscreteZSpec view of a SimpsonModel with homoscedastic unit variance
/// (variance plays no role in the mean decomposition).
DiscreteZSpec simpson_spec(const SimpsonModel& model);

}  // namespace unclab

#endif  // UNCLAB_OMITTED_HPP
