#ifndef UNCLAB_MISSING_DATA_HPP
#define UNCLAB_MISSING_DATA_HPP

/**
 * Exact missing-data analysis over a finite-support (X, Y) table with a
 * response indicator R. Complete-case analysis learns P(Y|x, R=1), which
 * relates to the population conditional through the bias factor
 * P(R=1|y,x) / P(R=1|x); the factor is identically 1 exactly when
 * missingness is conditionally independent of Y given X.
 *
 * The module is an exact calculator plus a small sampling simulator, not an
 * imputation engine.
 */

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

#include "unclab/mc.hpp"
#include "unclab/rng.hpp"

namespace unclab {

/// Finite joint P(X, Y) with response propensities P(R=1 | y, x), both
/// indexed (x row, y column). Validated at construction; every x with
/// positive mass must have P(R=1|x) > 0 so complete-case conditioning is
/// defined.
struct MissingSpec {
  std::vector<double> x_values;
  std::vector<double> y_values;
  Eigen::MatrixXd joint;     // P(X = x_i, Y = y_j)
  Eigen::MatrixXd response;  // P(R = 1 | y_j, x_i)

  MissingSpec(std::vector<double> xs, std::vector<double> ys, Eigen::MatrixXd joint_table,
              Eigen::MatrixXd response_table);

  Eigen::Index x_index(double x) const;  // throws on unknown x
};

/// P(Y = . | x) from the joint table. Requires P(x) > 0.
Eigen::VectorXd population_conditional(const MissingSpec& spec, double x);

struct CompleteCaseConditional {
  Eigen::VectorXd probs;        // P(Y = . | x, R = 1)
  Eigen::VectorXd bias_factor;  // P(R=1|y,x) / P(R=1|x) per y
};

/// Complete-case conditional and its bias factor at x. Requires P(R=1|x) > 0.
CompleteCaseConditional complete_case_conditional(const MissingSpec& spec, double x);

enum class MechanismClass { MCAR, MAR, MNAR };

/// MCAR: response constant over all (y, x) with positive mass. MAR: constant
/// in y for each x but varying across x (the canonical pattern here: X fully
/// observed, Y subject to missingness). MNAR: anything else.
MechanismClass classify_mechanism(const MissingSpec& spec);

struct StratumEntry {
  int r = 0;              // response stratum (1 observed, 0 missing)
  double weight = 0.0;    // P(R = r | x)
  double cond_mean = 0.0; // E(Y | x, r)
  double cond_var = 0.0;  // Var(Y | x, r)
  double bias = 0.0;      // E(Y | x, r) - E(Y | x)
};

struct VarianceDecomposition {
  double population_var = 0.0;
  std::vector<StratumEntry> per_stratum;  // populated strata only
};

/// Var(Y|x) = sum_r P(r|x) [Var(Y|x,r) + bias(x,r)^2]. Also cross-checks the
/// factored bias identity bias(x,r) = (1 - P(r|x)) (E(Y|x,r) - E(Y|x,R!=r))
/// whenever both strata are populated.
VarianceDecomposition variance_decomposition(const MissingSpec& spec, double x);

struct EfficiencyResult {
  double analytic_fraction = 0.0;  // (1 - rate)^k
  McEstimate simulated_fraction;
};

/// Expected share of complete cases when each of k feature cells is missing
/// independently with the given rate, against a simulated fraction over
/// reps datasets of n units each.
EfficiencyResult complete_case_efficiency(std::size_t k_features, double cell_missing_rate,
                                          std::size_t n, std::size_t reps, RngStream stream);

}  // namespace unclab

#endif  // UNCLAB_MISSING_DATA_HPP
