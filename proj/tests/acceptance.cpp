// Acceptance suite: end-to-end checks of the headline results, one printed
// pass/fail line per criterion. Exits nonzero if any criterion fails.
//
// "Exact" criteria are asserted at 1e-15 (the rounding of the decimal inputs
// themselves) or bitwise where the arithmetic is exact; statistical criteria
// carry their stated Monte-Carlo tolerances and seeds are fixed.

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "unclab/errors_x.hpp"
#include "unclab/experiments.hpp"
#include "unclab/kl_descent.hpp"
#include "unclab/label_noise.hpp"
#include "unclab/missing_data.hpp"
#include "unclab/omitted.hpp"
#include "unclab/regression.hpp"
#include "unclab/rng.hpp"
#include "unclab/shift.hpp"

using namespace unclab;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CriterionResult {
  bool pass = false;
  std::string detail;
};

double elapsed_seconds(const std::chrono::steady_clock::time_point& start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

Eigen::MatrixXd gaussian_matrix(RngStream& stream, Eigen::Index rows, Eigen::Index cols) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = stream.next_normal();
  }
  return m;
}

Eigen::VectorXd gaussian_vector(RngStream& stream, Eigen::Index n) {
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = stream.next_normal();
  return v;
}

// ------------------------------------------------------------ criteria 1, 2

std::vector<KlCurvePoint> descent_curve(BetaScheme scheme, KlEstimator estimator) {
  SimSetting setting;
  setting.n = 100;
  setting.p_max = 200;
  setting.sigma = 0.1;
  setting.scheme = scheme;
  setting.estimator = estimator;
  setting.replications = 100;
  setting.base_seed = 20250811;
  return run_double_descent(setting, 0);
}

bool dip_after_n(const std::vector<KlCurvePoint>& curve, double* peak, double* dip) {
  *peak = curve[99].kl_total.mean;  // p = 100
  *dip = std::numeric_limits<double>::infinity();
  for (std::size_t k = 100; k < 120; ++k) {  // p in [101, 120]
    *dip = std::min(*dip, curve[k].kl_total.mean);
  }
  return *dip < *peak;
}

CriterionResult criterion1_double_descent() {
  const auto start = std::chrono::steady_clock::now();
  CriterionResult result;
  result.pass = true;
  std::ostringstream detail;
  for (const BetaScheme scheme : {BetaScheme::decreasing, BetaScheme::constant}) {
    const auto curve = descent_curve(scheme, KlEstimator::pinv);
    // (i) component 1 vanishes exactly once every active covariate is in
    for (std::size_t k = 149; k < curve.size(); ++k) {
      if (curve[k].comp1 != 0.0) result.pass = false;
    }
    // (ii) component 2 strictly increases up to the sample size
    const std::size_t checkpoints[] = {19, 39, 59, 79, 99};  // p = 20,...,100
    for (std::size_t i = 1; i < 5; ++i) {
      if (!(curve[checkpoints[i]].comp2.mean > curve[checkpoints[i - 1]].comp2.mean)) {
        result.pass = false;
      }
    }
    // (iii) a dip follows the interpolation peak
    double peak = 0.0, dip = 0.0;
    if (!dip_after_n(curve, &peak, &dip)) result.pass = false;
    detail << (scheme == BetaScheme::decreasing ? "(a)" : "(b)") << " peak " << peak << " dip "
           << dip << "; ";
  }
  const double seconds = elapsed_seconds(start);
  if (seconds >= 300.0) result.pass = false;
  detail << seconds << " s";
  result.detail = detail.str();
  return result;
}

CriterionResult criterion2_ridge_variant() {
  CriterionResult result;
  result.pass = true;
  std::ostringstream detail;
  for (const BetaScheme scheme : {BetaScheme::decreasing, BetaScheme::constant}) {
    const auto curve = descent_curve(scheme, KlEstimator::ridge);
    double peak = 0.0, dip = 0.0;
    if (!dip_after_n(curve, &peak, &dip)) result.pass = false;
    detail << (scheme == BetaScheme::decreasing ? "(a)" : "(b)") << " peak " << peak << " dip "
           << dip << "; ";
  }
  result.detail = detail.str();
  return result;
}

// ---------------------------------------------------------------- criterion 3

CriterionResult criterion3_interval_coverage() {
  const auto start = std::chrono::steady_clock::now();
  Eigen::VectorXd beta(2);
  beta << 1.0, 2.0;
  const double sigma = 1.0;
  Eigen::VectorXd x0(2);
  x0 << 1.0, 5.0;
  const int reps = 10000;
  int covered = 0;
  for (int r = 0; r < reps; ++r) {
    RngStream stream = RngStream(31415, 0).split(static_cast<std::uint64_t>(r));
    Eigen::MatrixXd X(20, 2);
    for (Eigen::Index i = 0; i < 20; ++i) {
      X(i, 0) = 1.0;
      X(i, 1) = 10.0 * static_cast<double>(i) / 19.0;
    }
    Eigen::VectorXd y = X * beta + sigma * gaussian_vector(stream, 20);
    const Dataset data(X, y);
    const PredictionInterval interval = prediction_interval(ols_fit(data), data, x0, 0.90);
    const double fresh = x0.dot(beta) + sigma * stream.next_normal();
    if (fresh >= interval.lower && fresh <= interval.upper) ++covered;
  }
  const double coverage = covered / static_cast<double>(reps);
  const double seconds = elapsed_seconds(start);
  CriterionResult result;
  result.pass = coverage >= 0.88 && coverage <= 0.92 && seconds < 30.0;
  std::ostringstream detail;
  detail << "coverage " << coverage << ", " << seconds << " s";
  result.detail = detail.str();
  return result;
}

// ---------------------------------------------------------------- criterion 4

bool identity_within_3se(const BiasVarianceResult& r, double* gap, double* bound) {
  const double sum = r.aleatoric + r.estimation_variance.mean + r.bias_sq.mean;
  *gap = std::abs(sum - r.direct_mse.mean);
  *bound = 3.0 * std::sqrt(r.estimation_variance.std_error * r.estimation_variance.std_error +
                           r.bias_sq.std_error * r.bias_sq.std_error +
                           r.direct_mse.std_error * r.direct_mse.std_error);
  return *gap < *bound;
}

CriterionResult criterion4_bias_variance_identity() {
  LinearGaussianDgp dgp;
  dgp.beta = Eigen::VectorXd(3);
  dgp.beta << 1.0, -1.0, 0.8;
  dgp.sigma2 = 0.25;
  Eigen::VectorXd x0(3);
  x0 << 1.0, 1.0, 1.5;

  const Fitter well_specified = [](const Dataset& d) { return ols_fit(d); };
  const Fitter omit_last = [](const Dataset& d) {
    LinearFit fit = ols_fit(Dataset(d.X.leftCols(d.p() - 1), d.y));
    Eigen::VectorXd full = Eigen::VectorXd::Zero(d.p());
    full.head(d.p() - 1) = fit.coefficients;
    fit.coefficients = full;
    fit.p = d.p();
    return fit;
  };

  CriterionResult result;
  result.pass = true;
  std::ostringstream detail;
  int which = 0;
  for (const Fitter& fitter : {well_specified, omit_last}) {
    const BiasVarianceResult r =
        bias_variance_mc(dgp, fitter, x0, 60, 2000, RngStream(2718, static_cast<std::uint64_t>(which)), 0);
    double gap = 0.0, bound = 0.0;
    if (!identity_within_3se(r, &gap, &bound)) result.pass = false;
    detail << (which == 0 ? "ols" : "omit") << " gap " << gap << " < " << bound << "; ";
    ++which;
  }
  result.detail = detail.str();
  return result;
}

// ---------------------------------------------------------------- criterion 5

CriterionResult criterion5_pinv_prior_equivalence() {
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    RngStream stream = RngStream(1618, 5).split(static_cast<std::uint64_t>(trial));
    const auto n = static_cast<Eigen::Index>(3 + (stream.next_u64() % 10));
    const auto p = n + 1 + static_cast<Eigen::Index>(stream.next_u64() % 20);
    const Eigen::MatrixXd X = gaussian_matrix(stream, n, p);
    const Eigen::VectorXd y = gaussian_vector(stream, n);

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(X, Eigen::ComputeFullV);
    const Eigen::MatrixXd null_basis = svd.matrixV().rightCols(p - n);
    const Eigen::MatrixXd penalized = X.transpose() * X + null_basis * null_basis.transpose();
    const Eigen::VectorXd prior_route = penalized.llt().solve(X.transpose() * y);
    const Eigen::VectorXd pinv_route = pinv_fit(Dataset(X, y)).coefficients;
    worst = std::max(worst, (pinv_route - prior_route).cwiseAbs().maxCoeff());
  }
  CriterionResult result;
  result.pass = worst < 1e-8;
  std::ostringstream detail;
  detail << "max deviation " << worst;
  result.detail = detail.str();
  return result;
}

// ---------------------------------------------------------------- criterion 6

CriterionResult criterion6_omitted_variables() {
  CriterionResult result;
  result.pass = true;
  std::ostringstream detail;

  DiscreteZSpec spec;
  spec.z_values = {0.0, 1.0};
  Eigen::VectorXd weights(2);
  weights << 0.5, 0.5;
  spec.pz_given_x = [weights](double) { return weights; };
  spec.mean_y = [](double, double z) { return z; };
  spec.var_y = [](double, double z) { return z == 0.0 ? 0.1 : 0.2; };
  const OvbReport report = marginal_variance(spec, 0.0);
  if (std::abs(report.marginal_var - 0.4) > 1e-15) result.pass = false;
  detail << "marginal var " << report.marginal_var << "; ";

  double worst_identity = 0.0;
  RngStream fuzz(1401, 6);
  for (int trial = 0; trial < 1000; ++trial) {
    RngStream local = fuzz.split(static_cast<std::uint64_t>(trial));
    const Eigen::Index k = 2 + static_cast<Eigen::Index>(local.next_u64() % 6);
    Eigen::VectorXd w(k), means(k), vars(k);
    for (Eigen::Index i = 0; i < k; ++i) {
      w(i) = 0.05 + local.next_uniform();
      means(i) = 2.0 * local.next_normal();
      vars(i) = 0.05 + local.next_uniform();
    }
    w /= w.sum();
    DiscreteZSpec random_spec;
    random_spec.z_values.resize(static_cast<std::size_t>(k));
    for (Eigen::Index i = 0; i < k; ++i) {
      random_spec.z_values[static_cast<std::size_t>(i)] = static_cast<double>(i);
    }
    random_spec.pz_given_x = [w](double) { return w; };
    random_spec.mean_y = [means](double, double z) { return means(static_cast<Eigen::Index>(z)); };
    random_spec.var_y = [vars](double, double z) { return vars(static_cast<Eigen::Index>(z)); };
    const OvbReport fuzz_report = marginal_variance(random_spec, 0.0);
    double second_moment = 0.0;
    for (Eigen::Index i = 0; i < k; ++i) {
      second_moment += w(i) * (vars(i) + means(i) * means(i));
    }
    const double direct = second_moment - fuzz_report.marginal_mean * fuzz_report.marginal_mean;
    worst_identity = std::max(worst_identity, std::abs(direct - fuzz_report.marginal_var));
  }
  if (worst_identity >= 1e-10) result.pass = false;
  detail << "total-variance identity " << worst_identity << "; ";

  const SimpsonModel model{0.0, 1.0, 10.0, 0.0, -5.0};
  const MarginalEffectTerms terms = marginal_effect_terms(model, 0.0);
  if (std::abs(terms.marginal_effect - (-11.5)) > 1e-15) result.pass = false;
  if (terms.effect_term != 1.0) result.pass = false;
  const DiscreteZSpec simpson = simpson_spec(model);
  const double step = 1e-5;
  const double fd = (marginal_mean(simpson, step) - marginal_mean(simpson, -step)) / (2.0 * step);
  if (std::abs(terms.marginal_effect - fd) > 1e-6) result.pass = false;
  detail << "simpson effect " << terms.marginal_effect << " (fd gap "
         << std::abs(terms.marginal_effect - fd) << ")";
  result.detail = detail.str();
  return result;
}

// ---------------------------------------------------------------- criterion 7

CriterionResult criterion7_label_noise() {
  CriterionResult result;
  result.pass = true;
  std::ostringstream detail;

  Eigen::VectorXd pz(2);
  pz << 0.2, 0.8;
  Eigen::MatrixXd errors(2, 2);
  errors << 0.9, 0.1, 0.1, 0.9;
  const NoisyLabelSpec spec({"0", "1"}, pz, errors);
  const Eigen::VectorXd observed = observed_class_probs(spec);
  const LabelBias bias = label_bias(spec, "1");
  if (std::abs(observed(1) - 0.74) > 1e-15) result.pass = false;
  if (std::abs(bias.bias - (-0.06)) > 1e-15) result.pass = false;
  detail << "P(Y=1) " << observed(1) << " bias " << bias.bias << "; ";

  const double required = unbiasedness_minority_error(0.8, 0.10);
  if (std::abs(required - 0.40) > 1e-15) result.pass = false;
  detail << "minority requirement " << required << "; ";

  bool grid_ok = true;
  for (int i = 0; i <= 100; ++i) {
    const double p = i / 100.0;
    for (const double c : {0.05, 0.5, 1.0}) {
      const double b = equal_error_bias(p, c);
      if (i == 50 && b != 0.0) grid_ok = false;
      if (i != 50 && b == 0.0) grid_ok = false;
    }
  }
  if (!grid_ok) result.pass = false;
  detail << "balance grid " << (grid_ok ? "ok" : "violated");
  result.detail = detail.str();
  return result;
}

// ---------------------------------------------------------------- criterion 8

CriterionResult criterion8_missing_data() {
  CriterionResult result;
  result.pass = true;
  std::ostringstream detail;

  {
    Eigen::MatrixXd joint(2, 2);
    joint.setConstant(0.25);  // dyadic masses keep the arithmetic exact
    Eigen::MatrixXd response(2, 2);
    response.setConstant(0.7);
    const MissingSpec mcar({0.0, 1.0}, {0.0, 1.0}, joint, response);
    double worst = 0.0;
    for (const double x : {0.0, 1.0}) {
      const CompleteCaseConditional cc = complete_case_conditional(mcar, x);
      worst = std::max(worst, (cc.bias_factor.array() - 1.0).abs().maxCoeff());
    }
    if (worst != 0.0) result.pass = false;
    detail << "MCAR factor gap " << worst << "; ";
  }
  {
    Eigen::MatrixXd joint(1, 2);
    joint << 0.5, 0.5;
    Eigen::MatrixXd response(1, 2);
    response << 0.8, 0.4;
    const MissingSpec toy({0.0}, {0.0, 1.0}, joint, response);
    const CompleteCaseConditional cc = complete_case_conditional(toy, 0.0);
    const double enumerated = (0.5 * 0.4) / (0.5 * 0.8 + 0.5 * 0.4);
    if (std::abs(cc.probs(1) - 1.0 / 3.0) > 1e-12) result.pass = false;
    if (std::abs(cc.probs(1) - enumerated) > 1e-12) result.pass = false;
    detail << "MNAR toy P(Y=1|R=1) " << cc.probs(1) << "; ";
  }
  {
    const std::pair<std::size_t, double> cases[] = {{5, 0.02}, {10, 0.05}, {20, 0.1}};
    int idx = 0;
    for (const auto& [k, rate] : cases) {
      const EfficiencyResult eff = complete_case_efficiency(
          k, rate, 2000, 400, RngStream(808, static_cast<std::uint64_t>(idx++)));
      const double gap = std::abs(eff.simulated_fraction.mean - eff.analytic_fraction);
      if (gap >= 3.0 * eff.simulated_fraction.std_error) result.pass = false;
      detail << "(k=" << k << ") gap " << gap << "; ";
    }
  }
  result.detail = detail.str();
  return result;
}

// ---------------------------------------------------------------- criterion 9

CriterionResult criterion9_errors_in_x() {
  CriterionResult result;
  result.pass = true;
  std::ostringstream detail;

  LinearGaussianMeSpec spec;
  spec.tau2 = 1.0;
  spec.omega2 = 1.0;
  spec.gamma = 1.0;
  spec.sigma2 = 0.1;
  const ErrorProneVariance prone = error_prone_variance(spec);
  const McEstimate window = mc_errors_x_oracle(spec, 0.0, 0.01, 1000000, RngStream(606, 9));
  const double gap = std::abs(window.mean - prone.total);
  const double bound = 3.0 * window.std_error + 0.02;  // stated window-bias allowance
  if (gap >= bound) result.pass = false;
  detail << "variance gap " << gap << " < " << bound << " (n in window " << window.n_samples
         << "); ";

  LinearGaussianMeSpec slope_spec = spec;
  slope_spec.gamma = 2.0;
  const SlopeAttenuation closed = naive_slope_attenuation(slope_spec);
  RngStream stream(607, 9);
  const std::size_t n = 1000000;
  std::vector<double> xs(n), ys(n);
  double sum_x = 0.0, sum_y = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double z = stream.next_normal();
    const double x = z + stream.next_normal();
    const double y = slope_spec.gamma * z + std::sqrt(slope_spec.sigma2) * stream.next_normal();
    xs[i] = x;
    ys[i] = y;
    sum_x += x;
    sum_y += y;
  }
  const double mean_x = sum_x / static_cast<double>(n);
  const double mean_y = sum_y / static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mean_x) * (xs[i] - mean_x);
    sxy += (xs[i] - mean_x) * (ys[i] - mean_y);
  }
  const double slope_hat = sxy / sxx;
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ys[i] - mean_y - slope_hat * (xs[i] - mean_x);
    rss += r * r;
  }
  const double slope_se = std::sqrt(rss / static_cast<double>(n - 2) / sxx);
  const double slope_gap = std::abs(slope_hat - closed.naive_slope);
  if (slope_gap >= 3.0 * slope_se) result.pass = false;
  detail << "slope gap " << slope_gap << " < " << 3.0 * slope_se;
  result.detail = detail.str();
  return result;
}

// --------------------------------------------------------------- criterion 10

Eigen::VectorXd random_prob_vector(RngStream& stream, Eigen::Index k) {
  Eigen::VectorXd v(k);
  for (Eigen::Index i = 0; i < k; ++i) v(i) = 0.05 + stream.next_uniform();
  return v / v.sum();
}

EnvSpec random_env(RngStream& stream, const std::vector<std::string>& xs,
                   const std::vector<std::string>& ys, const std::vector<std::string>& zs) {
  const auto nx = static_cast<Eigen::Index>(xs.size());
  const auto ny = static_cast<Eigen::Index>(ys.size());
  const auto nz = static_cast<Eigen::Index>(zs.size());
  Eigen::MatrixXd f_z_given_x(nx, nz);
  std::vector<Eigen::MatrixXd> tables;
  for (Eigen::Index i = 0; i < nx; ++i) {
    f_z_given_x.row(i) = random_prob_vector(stream, nz).transpose();
    Eigen::MatrixXd table(nz, ny);
    for (Eigen::Index zi = 0; zi < nz; ++zi) {
      table.row(zi) = random_prob_vector(stream, ny).transpose();
    }
    tables.push_back(std::move(table));
  }
  return EnvSpec(xs, ys, zs, random_prob_vector(stream, nx), f_z_given_x, std::move(tables));
}

CriterionResult criterion10_shift() {
  CriterionResult result;
  result.pass = true;
  std::ostringstream detail;

  const std::vector<std::string> xs{"a", "b"}, ys{"0", "1"}, zs{"u", "v"};
  RngStream stream(505, 10);
  int chain_violations = 0;
  for (int trial = 0; trial < 500; ++trial) {
    RngStream local = stream.split(static_cast<std::uint64_t>(trial));
    const EnvSpec train = random_env(local, xs, ys, zs);
    const int mode = static_cast<int>(local.next_u64() % 3);
    const EnvSpec deploy = mode == 0 ? train
                           : mode == 1
                               ? EnvSpec(xs, ys, zs, random_prob_vector(local, 2),
                                         train.f_z_given_x, train.f_y_given_xz)
                               : random_env(local, xs, ys, zs);
    const TransportReport report = transportability_report(train, deploy, 1e-9);
    if (report.identical_superpop && !report.componentwise_equal) ++chain_violations;
    if (report.componentwise_equal && !report.transportable) ++chain_violations;
  }
  if (chain_violations != 0) result.pass = false;
  detail << "chain violations " << chain_violations << "/500; ";

  // independence of Z in both environments without transportability
  {
    Eigen::VectorXd f_x(1);
    f_x << 1.0;
    Eigen::MatrixXd f_z_given_x(1, 2);
    f_z_given_x << 0.5, 0.5;
    Eigen::MatrixXd train_table(2, 2);
    train_table << 0.7, 0.3, 0.7, 0.3;
    Eigen::MatrixXd deploy_table(2, 2);
    deploy_table << 0.3, 0.7, 0.3, 0.7;
    const EnvSpec train({"x0"}, ys, zs, f_x, f_z_given_x, {train_table});
    const EnvSpec deploy({"x0"}, ys, zs, f_x, f_z_given_x, {deploy_table});
    const TransportReport report = transportability_report(train, deploy, 1e-9);
    if (!(report.z_cond_independent_both && !report.transportable)) result.pass = false;
    detail << "counterexample tv " << report.max_tv << "; ";
  }

  // the 0.2 -> 0.8 mixture shift
  {
    Eigen::VectorXd f_x(1);
    f_x << 1.0;
    Eigen::MatrixXd table(2, 2);
    table << 1.0, 0.0, 0.0, 1.0;
    Eigen::MatrixXd train_z(1, 2), deploy_z(1, 2);
    train_z << 0.8, 0.2;
    deploy_z << 0.2, 0.8;
    const EnvSpec train({"x0"}, ys, zs, f_x, train_z, {table});
    const EnvSpec deploy({"x0"}, ys, zs, f_x, deploy_z, {table});
    const TransportReport report = transportability_report(train, deploy, 1e-9);
    if (std::abs(report.max_tv - 0.6) > 1e-15) result.pass = false;
    detail << "mixture tv " << report.max_tv;
  }
  result.detail = detail.str();
  return result;
}

// --------------------------------------------------------------- criterion 11

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

json determinism_config(const std::string& experiment, const fs::path& out_dir) {
  json config;
  config["experiment"] = experiment;
  config["seed"] = 1234;
  config["plot"] = true;
  config["output_dir"] = out_dir.string();
  if (experiment == "kl-descent") {
    config["params"] = {{"settings", json::array({"decreasing", "constant"})},
                        {"estimator", "pinv"},
                        {"n", 20},
                        {"p_max", 160},
                        {"sigma", 0.1},
                        {"replications", 4},
                        {"p_grid", json::array({5, 15, 25, 150, 160})}};
  } else if (experiment == "predict-interval") {
    config["params"] = {{"n", 20}, {"beta", json::array({1.0, 2.0})}, {"sigma", 1.0},
                        {"level", 0.9}, {"x_min", 0.0}, {"x_max", 10.0}};
  } else if (experiment == "bias-variance") {
    config["params"] = {{"beta", json::array({1.0, -1.0})}, {"sigma2", 0.25},
                        {"x0", json::array({1.0, 1.0})}, {"n_train", 25}, {"reps", 150},
                        {"fitter", "ols"}};
  } else if (experiment == "omitted") {
    config["params"] = {{"x", 0.0}, {"z_values", json::array({0.0, 1.0})},
                        {"pz", json::array({0.5, 0.5})}, {"mean_y", json::array({0.0, 1.0})},
                        {"var_y", json::array({0.1, 0.2})},
                        {"marginal_effect",
                         {{"beta_x", 1.0}, {"beta_z", 10.0}, {"logit_b", -5.0}}}};
  } else if (experiment == "errors-x") {
    config["params"] = {{"tau2", 1.0}, {"omega2", 1.0}, {"gamma", 1.0}, {"sigma2", 0.1},
                        {"oracle", {{"x0", 0.0}, {"bandwidth", 0.05}, {"n_draws", 200000}}}};
  } else if (experiment == "label-noise") {
    config["params"] = {{"classes", json::array({"0", "1"})}, {"pz", json::array({0.2, 0.8})},
                        {"error_matrix",
                         json::array({json::array({0.9, 0.1}), json::array({0.1, 0.9})})}};
  } else if (experiment == "missing") {
    config["params"] = {{"x_values", json::array({0.0})}, {"y_values", json::array({0.0, 1.0})},
                        {"joint", json::array({json::array({0.5, 0.5})})},
                        {"response", json::array({json::array({0.8, 0.4})})},
                        {"efficiency", {{"k", 10}, {"rate", 0.05}, {"n", 500}, {"reps", 100}}}};
  } else if (experiment == "shift") {
    json table = json::array({json::array({1.0, 0.0}), json::array({0.0, 1.0})});
    config["params"] = {{"x_values", json::array({"x0"})},
                        {"y_values", json::array({"y0", "y1"})},
                        {"z_values", json::array({"z0", "z1"})},
                        {"train",
                         {{"f_x", json::array({1.0})},
                          {"f_z_given_x", json::array({json::array({0.8, 0.2})})},
                          {"f_y_given_xz", json::array({table})}}},
                        {"deploy",
                         {{"f_x", json::array({1.0})},
                          {"f_z_given_x", json::array({json::array({0.2, 0.8})})},
                          {"f_y_given_xz", json::array({table})}}}};
  }
  return config;
}

CriterionResult criterion11_determinism() {
  CriterionResult result;
  result.pass = true;
  std::ostringstream detail;
  const fs::path root = fs::temp_directory_path() / "unclab_acceptance_determinism";
  fs::remove_all(root);
  fs::create_directories(root);

  const char* experiments[] = {"kl-descent", "predict-interval", "bias-variance", "omitted",
                               "errors-x",   "label-noise",      "missing",       "shift"};
  for (const char* experiment : experiments) {
    const fs::path out = root / experiment;
    const fs::path config_path = root / (std::string(experiment) + ".json");
    {
      std::ofstream config_out(config_path);
      config_out << determinism_config(experiment, out).dump(2);
    }
    RunOptions first;
    first.threads_override = 1;
    if (run_experiment(config_path, first) != kExitOk) {
      result.pass = false;
      detail << experiment << " run failed; ";
      continue;
    }
    std::vector<std::pair<fs::path, std::string>> snapshot;
    for (const auto& entry : fs::directory_iterator(out)) {
      snapshot.emplace_back(entry.path(), slurp(entry.path()));
    }
    RunOptions second;
    second.threads_override = 3;
    if (run_experiment(config_path, second) != kExitOk) {
      result.pass = false;
      detail << experiment << " rerun failed; ";
      continue;
    }
    bool identical = true;
    for (const auto& [path, bytes] : snapshot) {
      if (slurp(path) != bytes) identical = false;
    }
    if (!identical) {
      result.pass = false;
      detail << experiment << " drifted; ";
    }
  }
  if (result.pass) detail << "8 experiments byte-identical across reruns and thread counts";
  fs::remove_all(root);
  result.detail = detail.str();
  return result;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<CriterionResult()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "double descent, generalized inverse (settings a+b)", criterion1_double_descent},
      {2, "double descent, ridge variant", criterion2_ridge_variant},
      {3, "90% prediction-interval coverage", criterion3_interval_coverage},
      {4, "bias-variance decomposition identity", criterion4_bias_variance_identity},
      {5, "generalized inverse equals null-space prior", criterion5_pinv_prior_equivalence},
      {6, "omitted variables: worked example, identity, Simpson", criterion6_omitted_variables},
      {7, "label noise: worked table, minority requirement, balance", criterion7_label_noise},
      {8, "missing data: MCAR, MNAR toy, efficiency", criterion8_missing_data},
      {9, "errors in x: windowed oracle and attenuation", criterion9_errors_in_x},
      {10, "shift: implication chain, counterexample, mixture TV", criterion10_shift},
      {11, "CLI determinism across reruns and thread counts", criterion11_determinism},
  };

  int failures = 0;
  for (const auto& criterion : criteria) {
    CriterionResult result;
    try {
      result = criterion.run();
    } catch (const std::exception& e) {
      result.pass = false;
      result.detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] criterion %2d: %s (%s)\n", result.pass ? "PASS" : "FAIL", criterion.id,
                criterion.name, result.detail.c_str());
    std::fflush(stdout);
    if (!result.pass) ++failures;
  }
  if (failures == 0) {
    std::printf("acceptance: all %zu criteria passed\n", criteria.size());
  } else {
    std::printf("acceptance: %d criterion(s) failed\n", failures);
  }
  return failures == 0 ? 0 : 1;
}
