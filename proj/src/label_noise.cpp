#include "unclab/label_noise.hpp"

#include <cmath>

#include "unclab/errors.hpp"

namespace unclab {

namespace {
constexpr double kProbTol = 1e-12;
}

NoisyLabelSpec::NoisyLabelSpec(std::vector<std::string> class_labels, Eigen::VectorXd truth_probs,
                               Eigen::MatrixXd errors)
    : classes(std::move(class_labels)),
      pz_given_x(std::move(truth_probs)),
      error_matrix(std::move(errors)) {
  const auto k = static_cast<Eigen::Index>(classes.size());
  if (k < 2) throw validation_error("label-noise: need at least 2 classes");
  if (pz_given_x.size() != k) {
    throw validation_error("label-noise: pz_given_x length must equal the class count");
  }
  if (error_matrix.rows() != k || error_matrix.cols() != k) {
    throw validation_error("label-noise: error matrix must be k x k");
  }
  if ((pz_given_x.array() < 0.0).any()) {
    throw validation_error("label-noise: negative class probability");
  }
  if (std::abs(pz_given_x.sum() - 1.0) > kProbTol) {
    throw validation_error("label-noise: pz_given_x must sum to 1");
  }
  for (Eigen::Index z = 0; z < k; ++z) {
    if ((error_matrix.row(z).array() < 0.0).any()) {
      throw validation_error("label-noise: negative entry in error matrix row '" + classes[z] +
                             "'");
    }
    if (std::abs(error_matrix.row(z).sum() - 1.0) > kProbTol) {
      throw validation_error("label-noise: error matrix row '" + classes[static_cast<std::size_t>(z)] +
                             "' must sum to 1");
    }
  }
}

Eigen::Index NoisyLabelSpec::class_index(const std::string& label) const {
  for (std::size_t i = 0; i < classes.size(); ++i) {
    if (classes[i] == label) return static_cast<Eigen::Index>(i);
  }
  throw validation_error("label-noise: unknown class '" + label + "'");
}

Eigen::VectorXd observed_class_probs(const NoisyLabelSpec& spec) {
  return spec.error_matrix.transpose() * spec.pz_given_x;
}

LabelBias label_bias(const NoisyLabelSpec& spec, const std::string& target_class) {
  const Eigen::Index c = spec.class_index(target_class);
  const Eigen::Index k = spec.pz_given_x.size();
  LabelBias out;
  for (Eigen::Index z = 0; z < k; ++z) {
    if (z == c) continue;
    out.false_positive_mass += spec.error_matrix(z, c) * spec.pz_given_x(z);
  }
  out.false_negative_mass = (1.0 - spec.error_matrix(c, c)) * spec.pz_given_x(c);
  out.bias = out.false_positive_mass - out.false_negative_mass;
  return out;
}

double equal_error_bias(double p_z1, double c) {
  if (!(p_z1 >= 0.0 && p_z1 <= 1.0)) {
    throw validation_error("equal_error_bias: p_z1 must be in [0, 1]");
  }
  if (!(c >= 0.0 && c <= 1.0)) throw validation_error("equal_error_bias: c must be in [0, 1]");
  return c * (1.0 - 2.0 * p_z1);
}

double unbiasedness_minority_error(double p_z1, double false_negative_cond) {
  if (!(p_z1 > 0.0 && p_z1 < 1.0)) {
    throw validation_error("unbiasedness_minority_error: p_z1 must be in (0, 1)");
  }
  if (!(false_negative_cond >= 0.0 && false_negative_cond <= 1.0)) {
    throw validation_error("unbiasedness_minority_error: error probability must be in [0, 1]");
  }
  const double required = false_negative_cond * p_z1 / (1.0 - p_z1);
  if (required > 1.0) {
    throw validation_error(
        "unbiasedness_minority_error: unbiasedness infeasible; required false-positive "
        "probability " +
        std::to_string(required) + " exceeds 1");
  }
  return required;
}

std::vector<ClassBiasEntry> multiclass_bias_report(const NoisyLabelSpec& spec) {
  std::vector<ClassBiasEntry> report;
  report.reserve(spec.classes.size());
  for (const auto& label : spec.classes) {
    const LabelBias b = label_bias(spec, label);
    report.push_back({label, b.bias, b.false_positive_mass, b.false_negative_mass});
  }
  return report;
}

}  // namespace unclab
