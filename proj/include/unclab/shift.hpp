#ifndef UNCLAB_SHIFT_HPP
#define UNCLAB_SHIFT_HPP

/**
 * Train-vs-deployment transportability over finite-support environments.
 * Each environment factorizes as f(y|x,z) f(z|x) f(x); the model a learner
 * can reach is the induced conditional f(y|x) = sum_z f(y|x,z) f(z|x).
 * The report measures the worst-case total-variation distance between the
 * two induced conditionals and tests three sufficient conditions:
 * identical superpopulations, component-wise equality, and z-conditional
 * independence in both environments (the last does not imply
 * transportability on its own).
 */

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace unclab {

/// Declarative environment tables. Conditional rows sum to 1; all entries
/// nonnegative. f_y_given_xz[i] is the |z| x |y| table at x_i.
struct EnvSpec {
  std::vector<std::string> x_values;
  std::vector<std::string> y_values;
  std::vector<std::string> z_values;
  Eigen::VectorXd f_x;
  Eigen::MatrixXd f_z_given_x;                // |x| x |z|
  std::vector<Eigen::MatrixXd> f_y_given_xz;  // per x: |z| x |y|

  EnvSpec(std::vector<std::string> xs, std::vector<std::string> ys, std::vector<std::string> zs,
          Eigen::VectorXd x_marginal, Eigen::MatrixXd z_given_x,
          std::vector<Eigen::MatrixXd> y_given_xz);

  Eigen::Index x_index(const std::string& x) const;  // throws on unknown x
};

/// f(y|x) = sum_z f(y|x,z) f(z|x).
Eigen::VectorXd induced_conditional(const EnvSpec& env, const std::string& x);

struct TransportReport {
  double max_tv = 0.0;  // max over deploy-supported x of TV between induced conditionals
  bool identical_superpop = false;
  bool componentwise_equal = false;
  bool z_cond_independent_both = false;
  bool transportable = false;              // max_tv <= tolerance
  std::vector<std::string> ood_x;          // deploy-supported x with zero train mass
};

/// Half the L1 distance between two probability vectors.
double total_variation(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

/// Compares the train and deploy environments. Requires identical declared
/// supports (throws listing the offending values otherwise).
TransportReport transportability_report(const EnvSpec& train, const EnvSpec& deploy,
                                        double tolerance = 1e-9);

}  // namespace unclab

#endif  // UNCLAB_SHIFT_HPP
