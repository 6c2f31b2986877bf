#include "unclab/missing_data.hpp"

#include <cmath>
#include <string>

#include "unclab/errors.hpp"

namespace unclab {

namespace {
constexpr double kProbTol = 1e-12;
constexpr double kIdentityTol = 1e-10;
}  // namespace

MissingSpec::MissingSpec(std::vector<double> xs, std::vector<double> ys,
                         Eigen::MatrixXd joint_table, Eigen::MatrixXd response_table)
    : x_values(std::move(xs)),
      y_values(std::move(ys)),
      joint(std::move(joint_table)),
      response(std::move(response_table)) {
  const auto nx = static_cast<Eigen::Index>(x_values.size());
  const auto ny = static_cast<Eigen::Index>(y_values.size());
  if (nx < 1 || ny < 1) throw validation_error("missing: supports must be nonempty");
  if (joint.rows() != nx || joint.cols() != ny) {
    throw validation_error("missing: joint table must be |x| x |y|");
  }
  if (response.rows() != nx || response.cols() != ny) {
    throw validation_error("missing: response table must be |x| x |y|");
  }
  if ((joint.array() < 0.0).any()) throw validation_error("missing: negative joint probability");
  if (std::abs(joint.sum() - 1.0) > kProbTol) {
    throw validation_error("missing: joint table must sum to 1");
  }
  if ((response.array() < 0.0).any() || (response.array() > 1.0).any()) {
    throw validation_error("missing: response probabilities must be in [0, 1]");
  }
  for (Eigen::Index i = 0; i < nx; ++i) {
    const double px = joint.row(i).sum();
    if (px <= 0.0) continue;
    const double p_respond = joint.row(i).cwiseProduct(response.row(i)).sum() / px;
    if (p_respond <= 0.0) {
      throw validation_error("missing: P(R=1|x) = 0 at x = " + std::to_string(x_values[i]) +
                             "; complete-case conditioning undefined");
    }
  }
}

Eigen::Index MissingSpec::x_index(double x) const {
  for (std::size_t i = 0; i < x_values.size(); ++i) {
    if (x_values[i] == x) return static_cast<Eigen::Index>(i);
  }
  throw validation_error("missing: unknown x value " + std::to_string(x));
}

Eigen::VectorXd population_conditional(const MissingSpec& spec, double x) {
  const Eigen::Index i = spec.x_index(x);
  const double px = spec.joint.row(i).sum();
  if (px <= 0.0) {
    throw validation_error("missing: P(x) = 0 at x = " + std::to_string(x));
  }
  return spec.joint.row(i).transpose() / px;
}

CompleteCaseConditional complete_case_conditional(const MissingSpec& spec, double x) {
  const Eigen::Index i = spec.x_index(x);
  const Eigen::VectorXd population = population_conditional(spec, x);
  const double p_respond = population.dot(spec.response.row(i).transpose());
  if (p_respond <= 0.0) {
    throw validation_error("missing: P(R=1|x) = 0 at x = " + std::to_string(x));
  }
  CompleteCaseConditional out;
  out.bias_factor = spec.response.row(i).transpose() / p_respond;
  out.probs = out.bias_factor.cwiseProduct(population);
  return out;
}

MechanismClass classify_mechanism(const MissingSpec& spec) {
  const Eigen::Index nx = spec.joint.rows();
  const Eigen::Index ny = spec.joint.cols();

  bool constant_in_y_per_x = true;
  bool constant_overall = true;
  double reference = -1.0;
  for (Eigen::Index i = 0; i < nx; ++i) {
    double row_reference = -1.0;
    for (Eigen::Index j = 0; j < ny; ++j) {
      if (spec.joint(i, j) <= 0.0) continue;
      const double r = spec.response(i, j);
      if (row_reference < 0.0) row_reference = r;
      if (std::abs(r - row_reference) > kProbTol) constant_in_y_per_x = false;
      if (reference < 0.0) reference = r;
      if (std::abs(r - reference) > kProbTol) constant_overall = false;
    }
  }
  if (constant_overall) return MechanismClass::MCAR;
  if (constant_in_y_per_x) return MechanismClass::MAR;
  return MechanismClass::MNAR;
}

VarianceDecomposition variance_decomposition(const MissingSpec& spec, double x) {
  const Eigen::Index i = spec.x_index(x);
  const Eigen::VectorXd population = population_conditional(spec, x);
  const Eigen::Index ny = population.size();

  Eigen::Map<const Eigen::VectorXd> ys(spec.y_values.data(), ny);
  const double population_mean = population.dot(ys);

  VarianceDecomposition out;
  {
    double acc = 0.0;
    for (Eigen::Index j = 0; j < ny; ++j) {
      const double d = ys(j) - population_mean;
      acc += population(j) * d * d;
    }
    out.population_var = acc;
  }

  struct Stratum {
    double weight;
    double mean;
    double var;
  };
  Stratum strata[2];
  bool populated[2] = {false, false};
  for (const int r : {1, 0}) {
    Eigen::VectorXd mass(ny);
    for (Eigen::Index j = 0; j < ny; ++j) {
      const double respond = spec.response(i, j);
      mass(j) = population(j) * (r == 1 ? respond : 1.0 - respond);
    }
    const double weight = mass.sum();
    if (weight <= 0.0) continue;
    const Eigen::VectorXd cond = mass / weight;
    const double mean = cond.dot(ys);
    double var = 0.0;
    for (Eigen::Index j = 0; j < ny; ++j) {
      const double d = ys(j) - mean;
      var += cond(j) * d * d;
    }
    strata[r] = {weight, mean, var};
    populated[r] = true;
  }

  for (const int r : {1, 0}) {
    if (!populated[r]) continue;
    StratumEntry entry;
    entry.r = r;
    entry.weight = strata[r].weight;
    entry.cond_mean = strata[r].mean;
    entry.cond_var = strata[r].var;
    entry.bias = populated[0] && populated[1] ? strata[r].mean - population_mean : 0.0;
    out.per_stratum.push_back(entry);
  }

  if (populated[0] && populated[1]) {
    // Cross-check the factored form of the stratum bias.
    for (const auto& entry : out.per_stratum) {
      const int other = 1 - entry.r;
      const double factored = (1.0 - entry.weight) * (entry.cond_mean - strata[other].mean);
      if (std::abs(entry.bias - factored) > kIdentityTol * std::max(1.0, std::abs(entry.bias))) {
        throw numeric_error("missing: stratum bias identity violated at x = " +
                            std::to_string(x));
      }
    }
  }
  return out;
}

EfficiencyResult complete_case_efficiency(std::size_t k_features, double cell_missing_rate,
                                          std::size_t n, std::size_t reps, RngStream stream) {
  if (!(cell_missing_rate >= 0.0 && cell_missing_rate < 1.0)) {
    throw validation_error("complete_case_efficiency: rate must be in [0, 1)");
  }
  if (k_features < 1 || n < 1 || reps < 2) {
    throw validation_error("complete_case_efficiency: need k >= 1, n >= 1, reps >= 2");
  }
  EfficiencyResult out;
  out.analytic_fraction = std::pow(1.0 - cell_missing_rate, static_cast<double>(k_features));
  out.simulated_fraction = mc_estimate(
      [](double fraction) { return fraction; },
      [&](RngStream& s) {
        std::size_t complete = 0;
        for (std::size_t unit = 0; unit < n; ++unit) {
          bool all_present = true;
          for (std::size_t cell = 0; cell < k_features; ++cell) {
            if (s.next_uniform() < cell_missing_rate) all_present = false;
          }
          if (all_present) ++complete;
        }
        return static_cast<double>(complete) / static_cast<double>(n);
      },
      reps, stream);
  return out;
}

}  // namespace unclab
