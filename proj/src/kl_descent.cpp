#include "unclab/kl_descent.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "unclab/errors.hpp"
#include "unclab/parallel.hpp"
#include "unclab/regression.hpp"

namespace unclab {

namespace {

constexpr Eigen::Index kActiveCovariates = 150;

void validate_setting(const SimSetting& setting) {
  if (setting.n < 1) throw validation_error("kl-descent: n must be >= 1");
  if (setting.p_max < 1) throw validation_error("kl-descent: p_max must be >= 1");
  if (!(setting.sigma > 0.0)) throw validation_error("kl-descent: sigma must be > 0");
  if (setting.replications < 2) throw validation_error("kl-descent: replications must be >= 2");
  if (setting.scheme == BetaScheme::custom &&
      setting.custom_beta.size() != setting.p_max) {
    throw validation_error("kl-descent: custom beta must have length p_max");
  }
  const auto& grid = setting.p_grid;
  if (!grid.empty()) {
    Eigen::Index prev = 0;
    for (const Eigen::Index p : grid) {
      if (p <= prev) throw validation_error("kl-descent: p_grid must be strictly increasing");
      if (p > setting.p_max) throw validation_error("kl-descent: p_grid entries must be <= p_max");
      prev = p;
    }
  }
}

Eigen::VectorXd resolve_beta(const SimSetting& setting) {
  if (setting.scheme == BetaScheme::custom) return setting.custom_beta;
  return beta_scheme_vector(setting.scheme, setting.p_max);
}

std::vector<Eigen::Index> resolve_grid(const SimSetting& setting) {
  if (!setting.p_grid.empty()) return setting.p_grid;
  std::vector<Eigen::Index> grid(static_cast<std::size_t>(setting.p_max));
  for (Eigen::Index p = 1; p <= setting.p_max; ++p) grid[static_cast<std::size_t>(p - 1)] = p;
  return grid;
}

}  // namespace

Eigen::VectorXd beta_scheme_vector(BetaScheme scheme, Eigen::Index p_max) {
  if (scheme == BetaScheme::custom) {
    throw validation_error("beta_scheme_vector: custom scheme carries its own vector");
  }
  if (p_max < kActiveCovariates) {
    throw validation_error("beta_scheme_vector: named schemes require p_max >= 150, got " +
                           std::to_string(p_max));
  }
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p_max);
  for (Eigen::Index j = 1; j <= kActiveCovariates; ++j) {
    beta(j - 1) = scheme == BetaScheme::decreasing
                      ? 1.0 - static_cast<double>(j) / static_cast<double>(kActiveCovariates)
                      : 1.0;
  }
  return beta;
}

Eigen::VectorXd optimal_subset_params(const Eigen::VectorXd& beta_true, Eigen::Index p) {
  if (p > beta_true.size()) {
    throw validation_error("optimal_subset_params: p exceeds the true coefficient length");
  }
  return beta_true.head(p);
}

KlComponents kl_gaussian_linear(const Eigen::VectorXd& beta_true, const Eigen::VectorXd& beta_hat,
                                Eigen::Index p, double sigma) {
  if (!(sigma > 0.0)) throw validation_error("kl_gaussian_linear: sigma must be > 0");
  if (p < 0 || p > beta_true.size()) {
    throw validation_error("kl_gaussian_linear: p must be in [0, p_max]");
  }
  if (beta_hat.size() != p) {
    throw validation_error("kl_gaussian_linear: beta_hat must have length p");
  }
  const double inv_two_sigma2 = 1.0 / (2.0 * sigma * sigma);
  // comp1: mass of the truncated coefficients; comp2: distance of the fit
  // from the optimal p-term subset. total = comp1 + comp2 exactly.
  KlComponents out;
  out.comp1 = beta_true.tail(beta_true.size() - p).squaredNorm() * inv_two_sigma2;
  out.comp2 = (beta_true.head(p) - beta_hat).squaredNorm() * inv_two_sigma2;
  out.total = out.comp1 + out.comp2;
  return out;
}

McEstimate mc_kl_oracle(const Eigen::VectorXd& beta_true, const Eigen::VectorXd& beta_hat,
                        Eigen::Index p, double sigma, std::size_t n_draws, RngStream stream) {
  if (n_draws < 10000) throw validation_error("mc_kl_oracle: n_draws must be >= 10^4");
  if (!(sigma > 0.0)) throw validation_error("mc_kl_oracle: sigma must be > 0");
  if (p < 0 || p > beta_true.size() || beta_hat.size() != p) {
    throw validation_error("mc_kl_oracle: beta_hat must have length p <= p_max");
  }
  const Eigen::Index p_max = beta_true.size();
  const double inv_two_sigma2 = 1.0 / (2.0 * sigma * sigma);
  // Pointwise KL of two equal-variance Gaussians at a random feature vector.
  Eigen::VectorXd diff = -beta_true;
  diff.head(p) += beta_hat;
  return mc_estimate(
      [&](const Eigen::VectorXd& x) {
        const double gap = x.dot(diff);
        return gap * gap * inv_two_sigma2;
      },
      [p_max](RngStream& s) {
        Eigen::VectorXd x(p_max);
        for (Eigen::Index j = 0; j < p_max; ++j) x(j) = s.next_normal();
        return x;
      },
      n_draws, stream);
}

double default_ridge_lambda(double sigma) {
  const double sigma_beta2 = std::sqrt(10.0);
  return sigma * sigma / sigma_beta2;
}

std::vector<KlCurvePoint> run_double_descent(const SimSetting& setting, int threads) {
  validate_setting(setting);
  const Eigen::VectorXd beta = resolve_beta(setting);
  const std::vector<Eigen::Index> grid = resolve_grid(setting);
  const std::size_t reps = setting.replications;
  const std::size_t n_points = grid.size();
  const double lambda = setting.ridge_lambda > 0.0 ? setting.ridge_lambda
                                                   : default_ridge_lambda(setting.sigma);

  // comp2 per (replication, p); comp1 is deterministic in p.
  std::vector<std::vector<double>> comp2(n_points, std::vector<double>(reps));

  parallel_for_index(reps, threads, [&](std::size_t r) {
    RngStream rep_stream(setting.base_seed, static_cast<std::uint64_t>(r));
    Eigen::MatrixXd X(setting.n, setting.p_max);
    for (Eigen::Index i = 0; i < setting.n; ++i) {
      for (Eigen::Index j = 0; j < setting.p_max; ++j) X(i, j) = rep_stream.next_normal();
    }
    Eigen::VectorXd y = X * beta;
    for (Eigen::Index i = 0; i < setting.n; ++i) y(i) += setting.sigma * rep_stream.next_normal();

    for (std::size_t k = 0; k < n_points; ++k) {
      const Eigen::Index p = grid[k];
      const Dataset sub(X.leftCols(p), y);
      LinearFit fit;
      try {
        if (p < setting.n) {
          try {
            fit = ols_fit(sub);
          } catch (const numeric_error&) {
            // Rank-deficient below n: fall through to the regularized path.
            fit = setting.estimator == KlEstimator::pinv ? pinv_fit(sub) : ridge_fit(sub, lambda);
          }
        } else {
          fit = setting.estimator == KlEstimator::pinv ? pinv_fit(sub) : ridge_fit(sub, lambda);
        }
      } catch (const std::exception& e) {
        throw numeric_error("kl-descent: fit failed at replication " + std::to_string(r) +
                            ", p = " + std::to_string(p) + ": " + e.what());
      }
      const KlComponents kl = kl_gaussian_linear(beta, fit.coefficients, p, setting.sigma);
      if (!std::isfinite(kl.total)) {
        throw numeric_error("kl-descent: non-finite KL at replication " + std::to_string(r) +
                            ", p = " + std::to_string(p));
      }
      comp2[k][r] = kl.comp2;
    }
  });

  std::vector<KlCurvePoint> curve(n_points);
  for (std::size_t k = 0; k < n_points; ++k) {
    const Eigen::Index p = grid[k];
    KlCurvePoint& point = curve[k];
    point.p = p;
    point.comp1 = beta.tail(beta.size() - p).squaredNorm() / (2.0 * setting.sigma * setting.sigma);
    point.comp2 = mc_from_values(comp2[k]);
    // total_r = comp1 + comp2_r identically, so the aggregate splits exactly.
    point.kl_total.mean = point.comp1 + point.comp2.mean;
    point.kl_total.std_error = point.comp2.std_error;
    point.kl_total.n_samples = point.comp2.n_samples;
  }
  return curve;
}

}  // namespace unclab
