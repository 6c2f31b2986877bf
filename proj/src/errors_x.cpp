#include "unclab/errors_x.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "unclab/errors.hpp"

namespace unclab {

void LinearGaussianMeSpec::validate() const {
  if (tau2 < 0.0 || omega2 < 0.0 || sigma2 < 0.0) {
    throw validation_error("errors-x: tau2, omega2, sigma2 must be >= 0");
  }
}

double error_free_variance(const LinearGaussianMeSpec& spec) {
  spec.validate();
  return spec.sigma2;
}

ErrorProneVariance error_prone_variance(const LinearGaussianMeSpec& spec) {
  spec.validate();
  if (spec.tau2 + spec.omega2 <= 0.0) {
    throw validation_error("errors-x: tau2 + omega2 must be > 0 (degenerate conditioning on x)");
  }
  const double var_z_given_x = spec.tau2 * spec.omega2 / (spec.tau2 + spec.omega2);
  ErrorProneVariance out;
  out.mean_cond_var = spec.sigma2;
  out.var_cond_mean = spec.gamma * spec.gamma * var_z_given_x;
  out.total = out.mean_cond_var + out.var_cond_mean;
  return out;
}

SlopeAttenuation naive_slope_attenuation(const LinearGaussianMeSpec& spec) {
  spec.validate();
  if (spec.tau2 + spec.omega2 <= 0.0) {
    throw validation_error("errors-x: tau2 + omega2 must be > 0 (degenerate conditioning on x)");
  }
  SlopeAttenuation out;
  out.true_slope = spec.gamma;
  out.attenuation = spec.tau2 / (spec.tau2 + spec.omega2);
  out.naive_slope = spec.gamma * out.attenuation;
  return out;
}

McEstimate mc_errors_x_oracle(const LinearGaussianMeSpec& spec, double x0, double bandwidth,
                              std::size_t n_draws, RngStream stream) {
  spec.validate();
  if (!(bandwidth > 0.0)) throw validation_error("mc_errors_x_oracle: bandwidth must be > 0");
  if (n_draws < 100000) throw validation_error("mc_errors_x_oracle: n_draws must be >= 10^5");

  const double tau = std::sqrt(spec.tau2);
  const double omega = std::sqrt(spec.omega2);
  const double sigma = std::sqrt(spec.sigma2);

  std::vector<double> window_y;
  window_y.reserve(1024);
  for (std::size_t i = 0; i < n_draws; ++i) {
    const double z = spec.mu_z + tau * stream.next_normal();
    const double x = z + omega * stream.next_normal();
    const double y = spec.alpha + spec.gamma * z + sigma * stream.next_normal();
    if (std::abs(x - x0) <= bandwidth) window_y.push_back(y);
  }
  if (window_y.size() < 100) {
    throw numeric_error("mc_errors_x_oracle: only " + std::to_string(window_y.size()) +
                        " draws fell in the window; increase bandwidth or n_draws");
  }

  const auto m = static_cast<double>(window_y.size());
  CompensatedSum sum;
  for (const double y : window_y) sum.add(y);
  const double mean = sum.value() / m;

  CompensatedSum sq, quart;
  for (const double y : window_y) {
    const double d = y - mean;
    sq.add(d * d);
    quart.add(d * d * d * d);
  }
  const double sample_var = sq.value() / (m - 1.0);
  const double fourth_moment = quart.value() / m;
  // SE of the sample variance via the delta method: sqrt((m4 - s^4)/m).
  const double var_of_var = std::max(fourth_moment - sample_var * sample_var, 0.0) / m;
  return {sample_var, std::sqrt(var_of_var), window_y.size()};
}

}  // namespace unclab
