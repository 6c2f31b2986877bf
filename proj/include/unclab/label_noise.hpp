#ifndef UNCLAB_LABEL_NOISE_HPP
#define UNCLAB_LABEL_NOISE_HPP

/**
 * Error-prone labels: the observed class Y stands in for the true class Z
 * through a row-stochastic error matrix. Everything here is pointwise in x:
 * the spec carries distributions already conditioned on a fixed x.
 *
 * Observed class probabilities mix the truth through the error matrix; the
 * per-class bias splits exactly into false-positive mass minus
 * false-negative mass.
 */

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace unclab {

/// Finite class set with truth distribution pz_given_x over classes and
/// error matrix E(z, y) = P(Y = y | Z = z, x). Validated at construction.
struct NoisyLabelSpec {
  std::vector<std::string> classes;
  Eigen::VectorXd pz_given_x;
  Eigen::MatrixXd error_matrix;

  NoisyLabelSpec(std::vector<std::string> class_labels, Eigen::VectorXd truth_probs,
                 Eigen::MatrixXd errors);

  Eigen::Index class_index(const std::string& label) const;  // throws on unknown label
};

/// P(Y = y | x) = sum_z E(z, y) P(Z = z | x).
Eigen::VectorXd observed_class_probs(const NoisyLabelSpec& spec);

struct LabelBias {
  double bias = 0.0;                 // P(Y = c | x) - P(Z = c | x)
  double false_positive_mass = 0.0;  // sum_{z != c} E(z, c) P(z | x)
  double false_negative_mass = 0.0;  // sum_{y != c} E(c, y) P(c | x)
};

/// Bias of the observed probability of target_class, split into the mass of
/// false positives and false negatives. bias = fp_mass - fn_mass.
LabelBias label_bias(const NoisyLabelSpec& spec, const std::string& target_class);

/// Binary case with equal conditional error probability c for both flips:
/// bias for class 1 = c (1 - 2 p_z1). Zero exactly when c = 0 or the classes
/// are balanced.
double equal_error_bias(double p_z1, double c);

/// Conditional false-positive probability P(Y=1|x,Z=0) required for zero
/// bias given class-1 prevalence p_z1 and false-negative probability
/// P(Y=0|x,Z=1): the false-negative rate scaled by the odds of class 1.
/// Throws when the requirement exceeds 1 (unbiasedness infeasible).
double unbiasedness_minority_error(double p_z1, double false_negative_cond);

struct ClassBiasEntry {
  std::string class_label;
  double bias = 0.0;
  double false_positive_mass = 0.0;
  double false_negative_mass = 0.0;
};

/// label_bias applied to every class. Unbiased overall iff every entry is
/// zero; with k classes those are k-1 independent conditions.
std::vector<ClassBiasEntry> multiclass_bias_report(const NoisyLabelSpec& spec);

}  // namespace unclab

#endif  // UNCLAB_LABEL_NOISE_HPP
