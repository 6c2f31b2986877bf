#include "unclab/shift.hpp"

#include <cmath>

#include "unclab/errors.hpp"

namespace unclab {

namespace {

constexpr double kProbTol = 1e-12;

void check_prob_row(const Eigen::VectorXd& row, const std::string& what) {
  if ((row.array() < 0.0).any()) throw validation_error("shift: negative probability in " + what);
  if (std::abs(row.sum() - 1.0) > kProbTol) {
    throw validation_error("shift: " + what + " must sum to 1");
  }
}

std::string join(const std::vector<std::string>& values) {
  std::string out;
  for (const auto& v : values) {
    if (!out.empty()) out += ", ";
    out += v;
  }
  return out;
}

}  // namespace

EnvSpec::EnvSpec(std::vector<std::string> xs, std::vector<std::string> ys,
                 std::vector<std::string> zs, Eigen::VectorXd x_marginal,
                 Eigen::MatrixXd z_given_x, std::vector<Eigen::MatrixXd> y_given_xz)
    : x_values(std::move(xs)),
      y_values(std::move(ys)),
      z_values(std::move(zs)),
      f_x(std::move(x_marginal)),
      f_z_given_x(std::move(z_given_x)),
      f_y_given_xz(std::move(y_given_xz)) {
  const auto nx = static_cast<Eigen::Index>(x_values.size());
  const auto ny = static_cast<Eigen::Index>(y_values.size());
  const auto nz = static_cast<Eigen::Index>(z_values.size());
  if (nx < 1 || ny < 1 || nz < 1) throw validation_error("shift: supports must be nonempty");
  if (f_x.size() != nx) throw validation_error("shift: f_x length must equal |x|");
  check_prob_row(f_x, "f_x");
  if (f_z_given_x.rows() != nx || f_z_given_x.cols() != nz) {
    throw validation_error("shift: f_z_given_x must be |x| x |z|");
  }
  for (Eigen::Index i = 0; i < nx; ++i) {
    check_prob_row(f_z_given_x.row(i).transpose(), "f_z_given_x row '" + x_values[i] + "'");
  }
  if (f_y_given_xz.size() != static_cast<std::size_t>(nx)) {
    throw validation_error("shift: f_y_given_xz must have one table per x");
  }
  for (Eigen::Index i = 0; i < nx; ++i) {
    const auto& table = f_y_given_xz[static_cast<std::size_t>(i)];
    if (table.rows() != nz || table.cols() != ny) {
      throw validation_error("shift: f_y_given_xz table at '" + x_values[i] +
                             "' must be |z| x |y|");
    }
    for (Eigen::Index zi = 0; zi < nz; ++zi) {
      check_prob_row(table.row(zi).transpose(),
                     "f_y_given_xz row ('" + x_values[i] + "', '" + z_values[zi] + "')");
    }
  }
}

Eigen::Index EnvSpec::x_index(const std::string& x) const {
  for (std::size_t i = 0; i < x_values.size(); ++i) {
    if (x_values[i] == x) return static_cast<Eigen::Index>(i);
  }
  throw validation_error("shift: unknown x value '" + x + "'");
}

Eigen::VectorXd induced_conditional(const EnvSpec& env, const std::string& x) {
  const Eigen::Index i = env.x_index(x);
  return env.f_y_given_xz[static_cast<std::size_t>(i)].transpose() *
         env.f_z_given_x.row(i).transpose();
}

double total_variation(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() != b.size()) throw validation_error("total_variation: length mismatch");
  return 0.5 * (a - b).cwiseAbs().sum();
}

TransportReport transportability_report(const EnvSpec& train, const EnvSpec& deploy,
                                        double tolerance) {
  if (train.x_values != deploy.x_values || train.y_values != deploy.y_values ||
      train.z_values != deploy.z_values) {
    std::vector<std::string> offending;
    for (const auto& x : deploy.x_values) {
      bool found = false;
      for (const auto& tx : train.x_values) {
        if (tx == x) found = true;
      }
      if (!found) offending.push_back(x);
    }
    throw validation_error("shift: environments must declare identical supports" +
                           (offending.empty() ? std::string()
                                              : "; deploy-only x values: " + join(offending)));
  }

  const auto nx = static_cast<Eigen::Index>(train.x_values.size());
  const auto nz = static_cast<Eigen::Index>(train.z_values.size());
  TransportReport report;

  bool components_equal = (train.f_z_given_x - deploy.f_z_given_x).cwiseAbs().maxCoeff() <=
                          tolerance;
  for (Eigen::Index i = 0; i < nx && components_equal; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    if ((train.f_y_given_xz[idx] - deploy.f_y_given_xz[idx]).cwiseAbs().maxCoeff() > tolerance) {
      components_equal = false;
    }
  }
  report.componentwise_equal = components_equal;
  report.identical_superpop =
      components_equal && (train.f_x - deploy.f_x).cwiseAbs().maxCoeff() <= tolerance;

  bool z_independent = true;
  for (const EnvSpec* env : {&train, &deploy}) {
    for (Eigen::Index i = 0; i < nx && z_independent; ++i) {
      const auto& table = env->f_y_given_xz[static_cast<std::size_t>(i)];
      for (Eigen::Index zi = 1; zi < nz && z_independent; ++zi) {
        if ((table.row(zi) - table.row(0)).cwiseAbs().maxCoeff() > tolerance) {
          z_independent = false;
        }
      }
    }
  }
  report.z_cond_independent_both = z_independent;

  for (Eigen::Index i = 0; i < nx; ++i) {
    if (deploy.f_x(i) <= 0.0) continue;
    const std::string& x = train.x_values[static_cast<std::size_t>(i)];
    if (train.f_x(i) <= 0.0) report.ood_x.push_back(x);
    const double tv = total_variation(induced_conditional(train, x), induced_conditional(deploy, x));
    if (tv > report.max_tv) report.max_tv = tv;
  }
  report.transportable = report.max_tv <= tolerance;
  return report;
}

}  // namespace unclab
