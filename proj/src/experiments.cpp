#include "unclab/experiments.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <vector>

#include "unclab/csv.hpp"
#include "unclab/errors.hpp"
#include "unclab/errors_x.hpp"
#include "unclab/kl_descent.hpp"
#include "unclab/label_noise.hpp"
#include "unclab/missing_data.hpp"
#include "unclab/omitted.hpp"
#include "unclab/regression.hpp"
#include "unclab/shift.hpp"
#include "unclab/svg.hpp"

namespace unclab {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

// ---------------------------------------------------------------- config

const json& require_field(const json& obj, const std::string& key, const std::string& context) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw validation_error("config: missing field '" + key + "' in " + context);
  }
  return obj.at(key);
}

double require_number(const json& obj, const std::string& key, const std::string& context) {
  const json& v = require_field(obj, key, context);
  if (!v.is_number()) throw validation_error("config: field '" + key + "' in " + context +
                                             " must be a number");
  return v.get<double>();
}

double number_or(const json& obj, const std::string& key, double fallback) {
  if (!obj.is_object() || !obj.contains(key)) return fallback;
  if (!obj.at(key).is_number()) throw validation_error("config: field '" + key + "' must be a number");
  return obj.at(key).get<double>();
}

std::int64_t require_integer(const json& obj, const std::string& key, const std::string& context) {
  const json& v = require_field(obj, key, context);
  if (!v.is_number_integer()) {
    throw validation_error("config: field '" + key + "' in " + context + " must be an integer");
  }
  return v.get<std::int64_t>();
}

std::int64_t integer_or(const json& obj, const std::string& key, std::int64_t fallback) {
  if (!obj.is_object() || !obj.contains(key)) return fallback;
  if (!obj.at(key).is_number_integer()) {
    throw validation_error("config: field '" + key + "' must be an integer");
  }
  return obj.at(key).get<std::int64_t>();
}

std::string require_string(const json& obj, const std::string& key, const std::string& context) {
  const json& v = require_field(obj, key, context);
  if (!v.is_string()) throw validation_error("config: field '" + key + "' in " + context +
                                             " must be a string");
  return v.get<std::string>();
}

Eigen::VectorXd require_vector(const json& obj, const std::string& key,
                               const std::string& context) {
  const json& v = require_field(obj, key, context);
  if (!v.is_array() || v.empty()) {
    throw validation_error("config: field '" + key + "' in " + context +
                           " must be a nonempty array of numbers");
  }
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) {
      throw validation_error("config: '" + key + "[" + std::to_string(i) + "]' in " + context +
                             " must be a number");
    }
    out(static_cast<Eigen::Index>(i)) = v[i].get<double>();
  }
  return out;
}

Eigen::MatrixXd require_matrix(const json& obj, const std::string& key,
                               const std::string& context) {
  const json& v = require_field(obj, key, context);
  if (!v.is_array() || v.empty() || !v[0].is_array()) {
    throw validation_error("config: field '" + key + "' in " + context +
                           " must be an array of number rows");
  }
  const auto rows = static_cast<Eigen::Index>(v.size());
  const auto cols = static_cast<Eigen::Index>(v[0].size());
  Eigen::MatrixXd out(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& row = v[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw validation_error("config: row " + std::to_string(i) + " of '" + key + "' in " +
                             context + " has inconsistent length");
    }
    for (Eigen::Index j = 0; j < cols; ++j) {
      const json& cell = row[static_cast<std::size_t>(j)];
      if (!cell.is_number()) {
        throw validation_error("config: '" + key + "[" + std::to_string(i) + "][" +
                               std::to_string(j) + "]' in " + context + " must be a number");
      }
      out(i, j) = cell.get<double>();
    }
  }
  return out;
}

std::vector<std::string> string_list(const json& v, const std::string& context) {
  std::vector<std::string> out;
  for (const auto& item : v) {
    if (item.is_string()) {
      out.push_back(item.get<std::string>());
    } else if (item.is_number()) {
      out.push_back(format_double(item.get<double>()));
    } else {
      throw validation_error("config: entries of " + context + " must be strings or numbers");
    }
  }
  return out;
}

// ---------------------------------------------------------------- context

struct RunContext {
  json config;
  std::string experiment;
  std::uint64_t seed = 0;
  fs::path out_dir;
  bool plot = false;
  int threads = 0;
  ArtifactStage stage;
  std::vector<std::string> summaries;

  void add_csv(const std::string& basename, const CsvBuilder& csv, const json& extra_metadata) {
    stage.stage(out_dir / (basename + ".csv"), csv.str());
    json meta;
    meta["tool"] = "unclab";
    meta["version"] = kToolVersion;
    meta["seed"] = seed;
    meta["experiment"] = experiment;
    meta["config"] = config;
    if (!extra_metadata.is_null()) meta["extra"] = extra_metadata;
    stage.stage(out_dir / (basename + ".meta.json"), meta.dump(2) + "\n");
  }

  void add_svg(const std::string& basename, const std::vector<SvgPanel>& panels) {
    if (!plot) return;
    stage.stage(out_dir / (basename + ".svg"), render_line_chart(panels));
  }

  void summarize(const std::string& line) { summaries.push_back(line); }
};

std::string mc_cell(const McEstimate& est, bool se) {
  return format_double(se ? est.std_error : est.mean);
}

// ---------------------------------------------------------------- kl-descent

BetaScheme parse_scheme(const std::string& name) {
  if (name == "decreasing") return BetaScheme::decreasing;
  if (name == "constant") return BetaScheme::constant;
  if (name == "custom") return BetaScheme::custom;
  throw validation_error("config: unknown beta scheme '" + name + "'");
}

std::vector<Eigen::Index> parse_p_grid(const json& params, Eigen::Index p_max) {
  if (!params.contains("p_grid")) return {};
  const json& g = params.at("p_grid");
  std::vector<Eigen::Index> grid;
  if (g.is_array()) {
    for (const auto& v : g) {
      if (!v.is_number_integer()) throw validation_error("config: p_grid entries must be integers");
      grid.push_back(v.get<Eigen::Index>());
    }
  } else if (g.is_object()) {
    const auto start = require_integer(g, "start", "p_grid");
    const auto stop = require_integer(g, "stop", "p_grid");
    const auto step = integer_or(g, "step", 1);
    if (step < 1) throw validation_error("config: p_grid.step must be >= 1");
    for (auto p = start; p <= stop; p += step) grid.push_back(static_cast<Eigen::Index>(p));
  } else {
    throw validation_error("config: p_grid must be an array or {start, stop, step}");
  }
  (void)p_max;
  return grid;
}

void run_kl_descent(const json& params, RunContext& ctx) {
  std::vector<std::string> setting_names;
  if (params.contains("settings")) {
    const json& s = params.at("settings");
    if (s.is_string()) {
      setting_names.push_back(s.get<std::string>());
    } else if (s.is_array()) {
      for (const auto& item : s) setting_names.push_back(item.get<std::string>());
    } else {
      throw validation_error("config: 'settings' must be a string or array of strings");
    }
  } else {
    setting_names = {"decreasing"};
  }
  const std::string estimator_name =
      params.contains("estimator") ? require_string(params, "estimator", "params") : "pinv";
  if (estimator_name != "pinv" && estimator_name != "ridge") {
    throw validation_error("config: estimator must be 'pinv' or 'ridge'");
  }

  SimSetting base;
  base.n = static_cast<Eigen::Index>(integer_or(params, "n", 100));
  base.p_max = static_cast<Eigen::Index>(integer_or(params, "p_max", 200));
  base.sigma = number_or(params, "sigma", 0.1);
  base.estimator = estimator_name == "pinv" ? KlEstimator::pinv : KlEstimator::ridge;
  base.ridge_lambda = number_or(params, "ridge_lambda", 0.0);
  base.replications = static_cast<std::size_t>(integer_or(params, "replications", 100));
  base.p_grid = parse_p_grid(params, base.p_max);
  base.base_seed = ctx.seed;

  CsvBuilder csv({"setting", "estimator", "p", "kl_total_mean", "kl_total_se", "comp1",
                  "comp2_mean", "comp2_se", "replications", "seed"});
  SvgPanel total_panel{"expected KL divergence", "p", "KL", {}};
  SvgPanel comp1_panel{"component 1 (model gap)", "p", "KL", {}};
  SvgPanel comp2_panel{"component 2 (estimation gap)", "p", "KL", {}};

  for (const auto& name : setting_names) {
    SimSetting setting = base;
    setting.scheme = parse_scheme(name);
    if (setting.scheme == BetaScheme::custom) {
      setting.custom_beta = require_vector(params, "beta", "params (custom scheme)");
    }
    const auto curve = run_double_descent(setting, ctx.threads);

    SvgSeries total_series{name, {}, {}, {}, false};
    SvgSeries comp1_series{name, {}, {}, {}, false};
    SvgSeries comp2_series{name, {}, {}, {}, false};
    for (const auto& point : curve) {
      csv.add_row({name, estimator_name, std::to_string(point.p), mc_cell(point.kl_total, false),
                   mc_cell(point.kl_total, true), format_double(point.comp1),
                   mc_cell(point.comp2, false), mc_cell(point.comp2, true),
                   std::to_string(setting.replications), std::to_string(ctx.seed)});
      const auto p = static_cast<double>(point.p);
      total_series.x.push_back(p);
      total_series.y.push_back(point.kl_total.mean);
      total_series.y_err.push_back(point.kl_total.std_error);
      comp1_series.x.push_back(p);
      comp1_series.y.push_back(point.comp1);
      comp2_series.x.push_back(p);
      comp2_series.y.push_back(point.comp2.mean);
      comp2_series.y_err.push_back(point.comp2.std_error);
    }
    total_panel.series.push_back(std::move(total_series));
    comp1_panel.series.push_back(std::move(comp1_series));
    comp2_panel.series.push_back(std::move(comp2_series));
  }

  json extra;
  extra["regularized_from_p"] = base.n;  // estimator switch point
  ctx.add_csv("kl_descent", csv, extra);
  ctx.add_svg("kl_descent", {total_panel, comp1_panel, comp2_panel});
  ctx.summarize("kl-descent: " + std::to_string(setting_names.size()) + " setting(s), estimator " +
                estimator_name + ", " + std::to_string(base.replications) + " replications");
}

// ---------------------------------------------------------------- predict-interval

void run_predict_interval(const json& params, RunContext& ctx) {
  const auto n = static_cast<Eigen::Index>(integer_or(params, "n", 20));
  const Eigen::VectorXd beta = require_vector(params, "beta", "params");
  if (beta.size() != 2) {
    throw validation_error("config: predict-interval expects beta = [intercept, slope]");
  }
  const double sigma = require_number(params, "sigma", "params");
  const double level = number_or(params, "level", 0.9);
  const double x_min = number_or(params, "x_min", 0.0);
  const double x_max = number_or(params, "x_max", 10.0);
  if (n < 3) throw validation_error("config: predict-interval needs n >= 3");
  if (!(x_max > x_min)) throw validation_error("config: need x_max > x_min");

  RngStream stream(ctx.seed, 0);
  Eigen::MatrixXd X(n, 2);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double x = x_min + (x_max - x_min) * static_cast<double>(i) / static_cast<double>(n - 1);
    X(i, 0) = 1.0;
    X(i, 1) = x;
    y(i) = beta(0) + beta(1) * x + sigma * stream.next_normal();
  }
  const Dataset data(X, y);
  const LinearFit fit = ols_fit(data);

  CsvBuilder csv({"x", "y_obs", "fit", "lower", "upper", "level"});
  SvgSeries band{"fit with interval", {}, {}, {}, false};
  SvgSeries observed{"observed", {}, {}, {}, true};
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::VectorXd x0(2);
    x0 << 1.0, X(i, 1);
    const PredictionInterval interval = prediction_interval(fit, data, x0, level);
    csv.add_row({format_double(X(i, 1)), format_double(y(i)), format_double(interval.center),
                 format_double(interval.lower), format_double(interval.upper),
                 format_double(level)});
    band.x.push_back(X(i, 1));
    band.y.push_back(interval.center);
    band.y_err.push_back(interval.upper - interval.center);
    observed.x.push_back(X(i, 1));
    observed.y.push_back(y(i));
  }

  ctx.add_csv("predict_interval", csv, json());
  ctx.add_svg("predict_interval",
              {SvgPanel{"prediction interval", "x", "y", {band, observed}}});
  ctx.summarize("predict-interval: n = " + std::to_string(n) + ", level " + format_double(level));
}

// ---------------------------------------------------------------- bias-variance

Fitter parse_fitter(const json& params) {
  if (!params.contains("fitter")) return [](const Dataset& d) { return ols_fit(d); };
  const json& f = params.at("fitter");
  if (f.is_string()) {
    const std::string name = f.get<std::string>();
    if (name == "ols") return [](const Dataset& d) { return ols_fit(d); };
    if (name == "zero") {
      return [](const Dataset& d) {
        LinearFit fit;
        fit.coefficients = Eigen::VectorXd::Zero(d.p());
        fit.estimator = Estimator::pinv;
        fit.n = d.n();
        fit.p = d.p();
        return fit;
      };
    }
    throw validation_error("config: unknown fitter '" + name + "'");
  }
  if (f.is_object() && f.contains("omit")) {
    const auto omit = static_cast<Eigen::Index>(require_integer(f, "omit", "fitter"));
    return [omit](const Dataset& d) {
      if (omit < 0 || omit >= d.p()) {
        throw validation_error("fitter: omit index out of range");
      }
      Eigen::MatrixXd reduced(d.n(), d.p() - 1);
      Eigen::Index k = 0;
      for (Eigen::Index j = 0; j < d.p(); ++j) {
        if (j != omit) reduced.col(k++) = d.X.col(j);
      }
      LinearFit fit = ols_fit(Dataset(reduced, d.y));
      Eigen::VectorXd full = Eigen::VectorXd::Zero(d.p());
      k = 0;
      for (Eigen::Index j = 0; j < d.p(); ++j) {
        if (j != omit) full(j) = fit.coefficients(k++);
      }
      fit.coefficients = std::move(full);
      fit.p = d.p();
      return fit;
    };
  }
  throw validation_error("config: fitter must be 'ols', 'zero', or {\"omit\": index}");
}

void run_bias_variance(const json& params, RunContext& ctx) {
  LinearGaussianDgp dgp;
  dgp.beta = require_vector(params, "beta", "params");
  dgp.sigma2 = require_number(params, "sigma2", "params");
  const Eigen::VectorXd x0 = require_vector(params, "x0", "params");
  const auto n_train = static_cast<std::size_t>(integer_or(params, "n_train", 50));
  const auto reps = static_cast<std::size_t>(integer_or(params, "reps", 2000));
  const Fitter fitter = parse_fitter(params);

  const BiasVarianceResult result =
      bias_variance_mc(dgp, fitter, x0, n_train, reps, RngStream(ctx.seed, 0), ctx.threads);

  CsvBuilder csv({"component", "mean", "std_error", "n_samples"});
  csv.add_row({"aleatoric", format_double(result.aleatoric), "", ""});
  csv.add_row({"estimation_variance", mc_cell(result.estimation_variance, false),
               mc_cell(result.estimation_variance, true),
               std::to_string(result.estimation_variance.n_samples)});
  csv.add_row({"bias_sq", mc_cell(result.bias_sq, false), mc_cell(result.bias_sq, true),
               std::to_string(result.bias_sq.n_samples)});
  csv.add_row({"direct_mse", mc_cell(result.direct_mse, false), mc_cell(result.direct_mse, true),
               std::to_string(result.direct_mse.n_samples)});
  ctx.add_csv("bias_variance", csv, json());
  ctx.summarize("bias-variance: " + std::to_string(reps) + " replications at n_train = " +
                std::to_string(n_train));
}

// ---------------------------------------------------------------- omitted

const char* var_class_name(VarClass c) {
  switch (c) {
    case VarClass::under: return "under";
    case VarClass::over: return "over";
    default: return "equal";
  }
}

void run_omitted(const json& params, RunContext& ctx) {
  const double x = number_or(params, "x", 0.0);
  const Eigen::VectorXd z_values_vec = require_vector(params, "z_values", "params");
  const Eigen::VectorXd pz = require_vector(params, "pz", "params");
  const Eigen::VectorXd means = require_vector(params, "mean_y", "params");
  const Eigen::VectorXd vars = require_vector(params, "var_y", "params");
  const auto k = z_values_vec.size();
  if (pz.size() != k || means.size() != k || vars.size() != k) {
    throw validation_error("config: z_values, pz, mean_y, var_y must have equal length");
  }

  DiscreteZSpec spec;
  spec.z_values.assign(z_values_vec.data(), z_values_vec.data() + k);
  spec.pz_given_x = [pz](double) { return pz; };
  spec.mean_y = [spec_z = spec.z_values, means](double, double z) {
    for (std::size_t i = 0; i < spec_z.size(); ++i) {
      if (spec_z[i] == z) return means(static_cast<Eigen::Index>(i));
    }
    throw validation_error("omitted: unknown z");
  };
  spec.var_y = [spec_z = spec.z_values, vars](double, double z) {
    for (std::size_t i = 0; i < spec_z.size(); ++i) {
      if (spec_z[i] == z) return vars(static_cast<Eigen::Index>(i));
    }
    throw validation_error("omitted: unknown z");
  };

  const OvbReport report = marginal_variance(spec, x);
  CsvBuilder csv({"x", "z", "weight", "cond_var", "bias", "classification", "marginal_mean",
                  "marginal_var"});
  for (const auto& entry : report.per_z) {
    csv.add_row({format_double(x), format_double(entry.z), format_double(entry.weight),
                 format_double(entry.cond_var), format_double(entry.bias),
                 var_class_name(entry.classification), format_double(report.marginal_mean),
                 format_double(report.marginal_var)});
  }
  ctx.add_csv("omitted", csv, json());
  ctx.summarize("omitted: " + std::to_string(report.per_z.size()) + " z strata at x = " +
                format_double(x));

  if (params.contains("marginal_effect")) {
    const json& me = params.at("marginal_effect");
    SimpsonModel model;
    model.beta0 = number_or(me, "beta0", 0.0);
    model.beta_x = require_number(me, "beta_x", "marginal_effect");
    model.beta_z = require_number(me, "beta_z", "marginal_effect");
    model.logit_a = number_or(me, "logit_a", 0.0);
    model.logit_b = require_number(me, "logit_b", "marginal_effect");
    const double at_x = number_or(me, "x", 0.0);
    const MarginalEffectTerms terms = marginal_effect_terms(model, at_x);
    CsvBuilder effect_csv({"x", "effect_term", "distribution_term", "marginal_effect"});
    effect_csv.add_row({format_double(at_x), format_double(terms.effect_term),
                        format_double(terms.distribution_term),
                        format_double(terms.marginal_effect)});
    ctx.add_csv("omitted_marginal_effect", effect_csv, json());
  }
}

// ---------------------------------------------------------------- errors-x

void run_errors_x(const json& params, RunContext& ctx) {
  LinearGaussianMeSpec spec;
  spec.mu_z = number_or(params, "mu_z", 0.0);
  spec.tau2 = require_number(params, "tau2", "params");
  spec.omega2 = require_number(params, "omega2", "params");
  spec.alpha = number_or(params, "alpha", 0.0);
  spec.gamma = require_number(params, "gamma", "params");
  spec.sigma2 = require_number(params, "sigma2", "params");

  const double floor_var = error_free_variance(spec);
  const ErrorProneVariance prone = error_prone_variance(spec);
  const SlopeAttenuation slope = naive_slope_attenuation(spec);

  CsvBuilder csv({"quantity", "value", "std_error", "n_samples"});
  csv.add_row({"error_free_variance", format_double(floor_var), "", ""});
  csv.add_row({"error_prone_total", format_double(prone.total), "", ""});
  csv.add_row({"mean_cond_var", format_double(prone.mean_cond_var), "", ""});
  csv.add_row({"var_cond_mean", format_double(prone.var_cond_mean), "", ""});
  csv.add_row({"true_slope", format_double(slope.true_slope), "", ""});
  csv.add_row({"naive_slope", format_double(slope.naive_slope), "", ""});
  csv.add_row({"attenuation", format_double(slope.attenuation), "", ""});

  if (params.contains("oracle")) {
    const json& o = params.at("oracle");
    const double x0 = number_or(o, "x0", spec.mu_z);
    const double bandwidth = require_number(o, "bandwidth", "oracle");
    const auto n_draws = static_cast<std::size_t>(integer_or(o, "n_draws", 1000000));
    const McEstimate window = mc_errors_x_oracle(spec, x0, bandwidth, n_draws, RngStream(ctx.seed, 0));
    csv.add_row({"mc_window_variance", mc_cell(window, false), mc_cell(window, true),
                 std::to_string(window.n_samples)});
  }

  ctx.add_csv("errors_x", csv, json());
  ctx.summarize("errors-x: error-prone variance " + format_double(prone.total) +
                ", attenuation " + format_double(slope.attenuation));
}

// ---------------------------------------------------------------- label-noise

void run_label_noise(const json& params, RunContext& ctx) {
  const json& classes_json = require_field(params, "classes", "params");
  const std::vector<std::string> classes = string_list(classes_json, "'classes'");
  const Eigen::VectorXd pz = require_vector(params, "pz", "params");
  const Eigen::MatrixXd error_matrix = require_matrix(params, "error_matrix", "params");

  const NoisyLabelSpec spec(classes, pz, error_matrix);
  const Eigen::VectorXd observed = observed_class_probs(spec);
  const auto report = multiclass_bias_report(spec);

  CsvBuilder csv({"class", "p_true", "p_observed", "bias", "false_positive_mass",
                  "false_negative_mass"});
  for (std::size_t i = 0; i < report.size(); ++i) {
    csv.add_row({report[i].class_label, format_double(pz(static_cast<Eigen::Index>(i))),
                 format_double(observed(static_cast<Eigen::Index>(i))),
                 format_double(report[i].bias), format_double(report[i].false_positive_mass),
                 format_double(report[i].false_negative_mass)});
  }
  ctx.add_csv("label_noise", csv, json());
  ctx.summarize("label-noise: " + std::to_string(classes.size()) + " classes");
}

// ---------------------------------------------------------------- missing

void run_missing(const json& params, RunContext& ctx) {
  const Eigen::VectorXd xs = require_vector(params, "x_values", "params");
  const Eigen::VectorXd ys = require_vector(params, "y_values", "params");
  const Eigen::MatrixXd joint = require_matrix(params, "joint", "params");
  const Eigen::MatrixXd response = require_matrix(params, "response", "params");

  const MissingSpec spec(std::vector<double>(xs.data(), xs.data() + xs.size()),
                         std::vector<double>(ys.data(), ys.data() + ys.size()), joint, response);
  const MechanismClass mechanism = classify_mechanism(spec);
  const char* mechanism_name = mechanism == MechanismClass::MCAR   ? "MCAR"
                               : mechanism == MechanismClass::MAR ? "MAR"
                                                                  : "MNAR";

  CsvBuilder csv({"x", "y", "population_prob", "complete_case_prob", "bias_factor", "mechanism"});
  CsvBuilder strata_csv({"x", "r", "weight", "cond_mean", "cond_var", "bias", "population_var"});
  for (const double x : spec.x_values) {
    const Eigen::Index i = spec.x_index(x);
    if (spec.joint.row(i).sum() <= 0.0) continue;
    const Eigen::VectorXd population = population_conditional(spec, x);
    const CompleteCaseConditional cc = complete_case_conditional(spec, x);
    for (Eigen::Index j = 0; j < population.size(); ++j) {
      csv.add_row({format_double(x), format_double(spec.y_values[static_cast<std::size_t>(j)]),
                   format_double(population(j)), format_double(cc.probs(j)),
                   format_double(cc.bias_factor(j)), mechanism_name});
    }
    const VarianceDecomposition decomposition = variance_decomposition(spec, x);
    for (const auto& stratum : decomposition.per_stratum) {
      strata_csv.add_row({format_double(x), std::to_string(stratum.r),
                          format_double(stratum.weight), format_double(stratum.cond_mean),
                          format_double(stratum.cond_var), format_double(stratum.bias),
                          format_double(decomposition.population_var)});
    }
  }
  json extra;
  extra["mechanism"] = mechanism_name;
  ctx.add_csv("missing", csv, extra);
  ctx.add_csv("missing_strata", strata_csv, extra);

  if (params.contains("efficiency")) {
    const json& e = params.at("efficiency");
    const auto k = static_cast<std::size_t>(require_integer(e, "k", "efficiency"));
    const double rate = require_number(e, "rate", "efficiency");
    const auto n = static_cast<std::size_t>(integer_or(e, "n", 1000));
    const auto reps = static_cast<std::size_t>(integer_or(e, "reps", 200));
    const EfficiencyResult eff = complete_case_efficiency(k, rate, n, reps, RngStream(ctx.seed, 1));
    CsvBuilder eff_csv({"k", "rate", "analytic_fraction", "simulated_mean", "simulated_se",
                        "reps"});
    eff_csv.add_row({std::to_string(k), format_double(rate), format_double(eff.analytic_fraction),
                     mc_cell(eff.simulated_fraction, false), mc_cell(eff.simulated_fraction, true),
                     std::to_string(reps)});
    ctx.add_csv("missing_efficiency", eff_csv, json());
  }

  ctx.summarize(std::string("missing: mechanism ") + mechanism_name);
}

// ---------------------------------------------------------------- shift

EnvSpec parse_env(const json& params, const json& env_json, const std::string& name) {
  const std::vector<std::string> xs = string_list(require_field(params, "x_values", "params"),
                                                  "'x_values'");
  const std::vector<std::string> ys = string_list(require_field(params, "y_values", "params"),
                                                  "'y_values'");
  const std::vector<std::string> zs = string_list(require_field(params, "z_values", "params"),
                                                  "'z_values'");
  const Eigen::VectorXd f_x = require_vector(env_json, "f_x", name);
  const Eigen::MatrixXd f_z_given_x = require_matrix(env_json, "f_z_given_x", name);
  const json& tables = require_field(env_json, "f_y_given_xz", name);
  if (!tables.is_array() || tables.size() != xs.size()) {
    throw validation_error("config: " + name + ".f_y_given_xz must have one table per x");
  }
  std::vector<Eigen::MatrixXd> y_given_xz;
  for (std::size_t i = 0; i < tables.size(); ++i) {
    json wrapper;
    wrapper["table"] = tables[i];
    y_given_xz.push_back(require_matrix(wrapper, "table", name + ".f_y_given_xz[" +
                                                              std::to_string(i) + "]"));
  }
  return EnvSpec(xs, ys, zs, f_x, f_z_given_x, y_given_xz);
}

void run_shift(const json& params, RunContext& ctx) {
  const EnvSpec train = parse_env(params, require_field(params, "train", "params"), "train");
  const EnvSpec deploy = parse_env(params, require_field(params, "deploy", "params"), "deploy");
  const double tolerance = number_or(params, "tolerance", 1e-9);

  const TransportReport report = transportability_report(train, deploy, tolerance);

  CsvBuilder csv({"x", "y", "train_prob", "deploy_prob", "tv_x"});
  for (const auto& x : train.x_values) {
    const Eigen::VectorXd train_cond = induced_conditional(train, x);
    const Eigen::VectorXd deploy_cond = induced_conditional(deploy, x);
    const double tv = total_variation(train_cond, deploy_cond);
    for (std::size_t j = 0; j < train.y_values.size(); ++j) {
      const auto jj = static_cast<Eigen::Index>(j);
      csv.add_row({x, train.y_values[j], format_double(train_cond(jj)),
                   format_double(deploy_cond(jj)), format_double(tv)});
    }
  }
  json extra;
  extra["max_tv"] = report.max_tv;
  extra["identical_superpop"] = report.identical_superpop;
  extra["componentwise_equal"] = report.componentwise_equal;
  extra["z_cond_independent_both"] = report.z_cond_independent_both;
  extra["transportable"] = report.transportable;
  extra["ood_x"] = report.ood_x;
  ctx.add_csv("shift", csv, extra);
  ctx.summarize("shift: max TV " + format_double(report.max_tv) +
                (report.transportable ? ", transportable" : ", not transportable"));
}

// ---------------------------------------------------------------- dispatch

void dispatch(RunContext& ctx) {
  const json& params = require_field(ctx.config, "params", "config");
  if (ctx.experiment == "kl-descent") {
    run_kl_descent(params, ctx);
  } else if (ctx.experiment == "predict-interval") {
    run_predict_interval(params, ctx);
  } else if (ctx.experiment == "bias-variance") {
    run_bias_variance(params, ctx);
  } else if (ctx.experiment == "omitted") {
    run_omitted(params, ctx);
  } else if (ctx.experiment == "errors-x") {
    run_errors_x(params, ctx);
  } else if (ctx.experiment == "label-noise") {
    run_label_noise(params, ctx);
  } else if (ctx.experiment == "missing") {
    run_missing(params, ctx);
  } else if (ctx.experiment == "shift") {
    run_shift(params, ctx);
  } else {
    throw validation_error("config: unknown experiment '" + ctx.experiment + "'");
  }
}

}  // namespace

int run_experiment(const std::filesystem::path& config_path, const RunOptions& options) {
  try {
    std::ifstream in(config_path);
    if (!in) {
      std::cerr << "error: cannot open config file " << config_path << "\n";
      return kExitIo;
    }
    json config;
    try {
      config = json::parse(in);
    } catch (const json::parse_error& e) {
      std::cerr << "config parse error in " << config_path << ": " << e.what() << "\n";
      return kExitConfig;
    }

    RunContext ctx;
    ctx.config = config;
    ctx.experiment = require_string(config, "experiment", "config");
    if (options.seed_override) {
      ctx.seed = *options.seed_override;
    } else {
      const json& seed = require_field(config, "seed", "config");
      if (!seed.is_number_integer()) {
        throw validation_error("config: 'seed' must be an integer");
      }
      ctx.seed = seed.get<std::uint64_t>();
    }
    ctx.out_dir = options.out_override
                      ? fs::path(*options.out_override)
                      : fs::path(config.value("output_dir", std::string(".")));
    ctx.plot = options.force_plot || config.value("plot", false);
    ctx.threads = options.threads_override ? *options.threads_override
                                           : static_cast<int>(integer_or(config, "threads", 0));
    // Echo the effective values so the sidecar reproduces the run.
    ctx.config["seed"] = ctx.seed;
    ctx.config["plot"] = ctx.plot;

    dispatch(ctx);
    ctx.stage.commit();
    for (const auto& line : ctx.summaries) std::cerr << line << "\n";
    return kExitOk;
  } catch (const validation_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const numeric_error& e) {
    std::cerr << "numerical error [" << config_path.string() << "]: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const io_error& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
}

}  // namespace unclab
