#ifndef UNCLAB_MC_HPP
#define UNCLAB_MC_HPP

/**
 * Monte-Carlo estimation utilities: the universal (mean, standard error,
 * sample count) return contract and a generic estimator loop.
 *
 * All means use Neumaier-compensated summation; the experiment curves
 * aggregate sums at the 10^6 scale and plain accumulation would leak
 * rounding into the reproducibility contract.
 */

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "unclab/errors.hpp"
#include "unclab/rng.hpp"

namespace unclab {

/// Compensated (Kahan-Neumaier) running sum.
class CompensatedSum {
 public:
  void add(double value) {
    const double t = sum_ + value;
    if (std::abs(sum_) >= std::abs(value)) {
      compensation_ += (sum_ - t) + value;
    } else {
      compensation_ += (value - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

/// Monte-Carlo estimate: mean, standard error of the mean, sample count.
struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n_samples = 0;
};

/// McEstimate from already-computed evaluations (two-pass, compensated).
inline McEstimate mc_from_values(const std::vector<double>& values) {
  if (values.size() < 2) throw validation_error("mc_from_values: need at least 2 samples");
  const auto n = static_cast<double>(values.size());
  CompensatedSum sum;
  for (double v : values) sum.add(v);
  const double mean = sum.value() / n;
  CompensatedSum sq;
  for (double v : values) {
    const double d = v - mean;
    sq.add(d * d);
  }
  const double sample_var = sq.value() / (n - 1.0);
  return {mean, std::sqrt(std::max(sample_var, 0.0) / n), values.size()};
}

/**
 * Generic Monte-Carlo mean estimator.
 *
 * `sample(stream)` produces a draw, `evaluate(draw)` scores it. Pure in the
 * stream argument. A non-finite evaluation aborts with the draw index.
 */
template <typename Evaluator, typename Sampler>
McEstimate mc_estimate(Evaluator&& evaluate, Sampler&& sample, std::size_t n, RngStream stream) {
  if (n < 2) throw validation_error("mc_estimate: n must be >= 2");
  std::vector<double> values(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double v = evaluate(sample(stream));
    if (!std::isfinite(v)) {
      throw numeric_error("mc_estimate: evaluator returned a non-finite value at draw " +
                          std::to_string(i));
    }
    values[i] = v;
  }
  return mc_from_values(values);
}

}  // namespace unclab

#endif  // UNCLAB_MC_HPP
