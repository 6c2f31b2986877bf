#include "unclab/omitted.hpp"

#include <cmath>
#include <string>

#include "unclab/errors.hpp"

namespace unclab {

namespace {

constexpr double kProbTol = 1e-12;

Eigen::VectorXd checked_weights(const DiscreteZSpec& spec, double x) {
  if (spec.z_values.empty()) throw validation_error("omitted: z support must be nonempty");
  const Eigen::VectorXd w = spec.pz_given_x(x);
  if (w.size() != static_cast<Eigen::Index>(spec.z_values.size())) {
    throw validation_error("omitted: pz_given_x length must match z support");
  }
  if ((w.array() < 0.0).any()) throw validation_error("omitted: negative z probability");
  if (std::abs(w.sum() - 1.0) > kProbTol) {
    throw validation_error("omitted: z probabilities must sum to 1");
  }
  return w;
}

double logistic(double t) { return 1.0 / (1.0 + std::exp(-t)); }

}  // namespace

double marginal_mean(const DiscreteZSpec& spec, double x) {
  const Eigen::VectorXd w = checked_weights(spec, x);
  double mean = 0.0;
  for (std::size_t k = 0; k < spec.z_values.size(); ++k) {
    mean += spec.mean_y(x, spec.z_values[k]) * w(static_cast<Eigen::Index>(k));
  }
  return mean;
}

double ovb_bias(const DiscreteZSpec& spec, double x, double z) {
  bool known = false;
  for (const double zv : spec.z_values) {
    if (zv == z) {
      known = true;
      break;
    }
  }
  if (!known) throw validation_error("ovb_bias: z = " + std::to_string(z) + " not in the support");
  return spec.mean_y(x, z) - marginal_mean(spec, x);
}

OvbReport marginal_variance(const DiscreteZSpec& spec, double x) {
  const Eigen::VectorXd w = checked_weights(spec, x);
  OvbReport report;
  report.marginal_mean = marginal_mean(spec, x);

  double expected_var = 0.0;
  double expected_bias_sq = 0.0;
  report.per_z.resize(spec.z_values.size());
  for (std::size_t k = 0; k < spec.z_values.size(); ++k) {
    const double z = spec.z_values[k];
    const double weight = w(static_cast<Eigen::Index>(k));
    const double cond_var = spec.var_y(x, z);
    if (cond_var < 0.0) throw validation_error("omitted: negative conditional variance");
    const double bias = spec.mean_y(x, z) - report.marginal_mean;
    expected_var += weight * cond_var;
    expected_bias_sq += weight * bias * bias;
    report.per_z[k] = {z, weight, cond_var, bias, VarClass::equal};
  }
  report.marginal_var = expected_var + expected_bias_sq;

  const double tol = kProbTol * std::max(1.0, report.marginal_var);
  for (auto& entry : report.per_z) {
    if (entry.cond_var < report.marginal_var - tol) {
      entry.classification = VarClass::under;
    } else if (entry.cond_var > report.marginal_var + tol) {
      entry.classification = VarClass::over;
    }
  }
  return report;
}

BinaryOvbFlags binary_ovb_classifier(double p1, double p2) {
  if (!(p1 >= 0.0 && p1 <= 1.0 && p2 >= 0.0 && p2 <= 1.0)) {
    throw validation_error("binary_ovb_classifier: probabilities must be in [0, 1]");
  }
  constexpr double tol = 1e-12;
  BinaryOvbFlags flags;
  flags.biased = std::abs(p1 - p2) > tol;
  flags.variance_heterogeneous = std::abs(p1 * (1.0 - p1) - p2 * (1.0 - p2)) > tol;
  flags.exception_case = flags.biased && std::abs(p1 - (1.0 - p2)) <= tol;
  return flags;
}

MarginalEffectTerms marginal_effect_terms(const SimpsonModel& model, double x) {
  const double propensity = logistic(model.logit_a + model.logit_b * x);
  const double propensity_slope = model.logit_b * propensity * (1.0 - propensity);
  MarginalEffectTerms terms;
  terms.effect_term = model.beta_x;
  // E(Y|x,1) p' + E(Y|x,0) (-p') collapses to beta_z p'.
  terms.distribution_term = model.beta_z * propensity_slope;
  terms.marginal_effect = terms.effect_term + terms.distribution_term;
  return terms;
}

DiscreteZSpec simpson_spec(const SimpsonModel& model) {
  DiscreteZSpec spec;
  spec.z_values = {0.0, 1.0};
  spec.pz_given_x = [model](double x) {
    const double p1 = logistic(model.logit_a + model.logit_b * x);
    Eigen::VectorXd w(2);
    w << 1.0 - p1, p1;
    return w;
  };
  spec.mean_y = [model](double x, double z) {
    return model.beta0 + model.beta_x * x + model.beta_z * z;
  };
  spec.var_y = [](double, double) { return 1.0; };
  return spec;
}

}  // namespace unclab
