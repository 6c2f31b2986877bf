#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "support/test_support.hpp"
#include "unclab/errors.hpp"
#include "unclab/missing_data.hpp"

using namespace unclab;
using unclab::testing::random_prob_vector;

namespace {

/// One-x MNAR toy: Y in {0,1} with P(Y=1|x) = 0.5, response 0.8 when y = 0
/// and 0.4 when y = 1.
MissingSpec mnar_toy() {
  Eigen::MatrixXd joint(1, 2);
  joint << 0.5, 0.5;
  Eigen::MatrixXd response(1, 2);
  response << 0.8, 0.4;
  return MissingSpec({0.0}, {0.0, 1.0}, joint, response);
}

MissingSpec random_missing_spec(RngStream& stream, Eigen::Index nx, Eigen::Index ny) {
  Eigen::MatrixXd joint(nx, ny);
  for (Eigen::Index i = 0; i < nx; ++i) {
    joint.row(i) = random_prob_vector(stream, ny).transpose();
  }
  joint /= joint.sum();
  Eigen::MatrixXd response(nx, ny);
  for (Eigen::Index i = 0; i < nx; ++i) {
    for (Eigen::Index j = 0; j < ny; ++j) response(i, j) = 0.1 + 0.85 * stream.next_uniform();
  }
  std::vector<double> xs(static_cast<std::size_t>(nx)), ys(static_cast<std::size_t>(ny));
  for (Eigen::Index i = 0; i < nx; ++i) xs[static_cast<std::size_t>(i)] = static_cast<double>(i);
  for (Eigen::Index j = 0; j < ny; ++j) ys[static_cast<std::size_t>(j)] = static_cast<double>(j);
  return MissingSpec(xs, ys, joint, response);
}

}  // namespace

TEST_CASE("population conditional: uniform joint, enumeration, zero-mass error") {
  Eigen::MatrixXd joint(2, 3);
  joint.setConstant(1.0 / 6.0);
  Eigen::MatrixXd response(2, 3);
  response.setConstant(0.5);
  const MissingSpec spec({0.0, 1.0}, {0.0, 1.0, 2.0}, joint, response);
  const Eigen::VectorXd conditional = population_conditional(spec, 1.0);
  for (Eigen::Index j = 0; j < 3; ++j) {
    CHECK(conditional(j) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  }
  CHECK_THROWS_AS(population_conditional(spec, 7.0), validation_error);
}

TEST_CASE("MCAR: complete case equals population, bias factor is one") {
  Eigen::MatrixXd joint(1, 2);
  joint << 0.3, 0.7;
  Eigen::MatrixXd response(1, 2);
  response.setConstant(0.7);
  const MissingSpec spec({0.0}, {0.0, 1.0}, joint, response);
  const CompleteCaseConditional cc = complete_case_conditional(spec, 0.0);
  const Eigen::VectorXd population = population_conditional(spec, 0.0);
  CHECK((cc.bias_factor.array() - 1.0).abs().maxCoeff() < 1e-14);
  CHECK((cc.probs - population).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(classify_mechanism(spec) == MechanismClass::MCAR);
}

TEST_CASE("MNAR toy: bias factor 2/3 and complete-case P(Y=1) = 1/3") {
  const MissingSpec spec = mnar_toy();
  const CompleteCaseConditional cc = complete_case_conditional(spec, 0.0);
  CHECK(cc.bias_factor(1) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(cc.bias_factor(0) == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
  CHECK(cc.probs(1) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(cc.probs(0) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(std::abs(cc.probs.sum() - 1.0) < 1e-12);
  CHECK(classify_mechanism(spec) == MechanismClass::MNAR);

  // full-table enumeration oracle over the four (y, r) cells
  double mass_y1_r1 = 0.5 * 0.4;
  double mass_r1 = 0.5 * 0.8 + 0.5 * 0.4;
  CHECK(cc.probs(1) == doctest::Approx(mass_y1_r1 / mass_r1).epsilon(1e-14));
}

TEST_CASE("response depending on x only keeps the bias factor at one") {
  Eigen::MatrixXd joint(2, 2);
  joint << 0.2, 0.3, 0.1, 0.4;
  Eigen::MatrixXd response(2, 2);
  response << 0.9, 0.9, 0.2, 0.2;  // varies in x, constant in y
  const MissingSpec spec({0.0, 1.0}, {0.0, 1.0}, joint, response);
  for (const double x : {0.0, 1.0}) {
    const CompleteCaseConditional cc = complete_case_conditional(spec, x);
    CHECK((cc.bias_factor.array() - 1.0).abs().maxCoeff() < 1e-12);
  }
  CHECK(classify_mechanism(spec) == MechanismClass::MAR);
}

TEST_CASE("variance decomposition reconstructs the MNAR toy") {
  const VarianceDecomposition decomposition = variance_decomposition(mnar_toy(), 0.0);
  CHECK(decomposition.population_var == doctest::Approx(0.25).epsilon(1e-12));
  REQUIRE(decomposition.per_stratum.size() == 2);

  const auto& respondents = decomposition.per_stratum[0];
  CHECK(respondents.r == 1);
  CHECK(respondents.weight == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(respondents.cond_mean == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(respondents.bias == doctest::Approx(1.0 / 3.0 - 0.5).epsilon(1e-12));

  const auto& nonrespondents = decomposition.per_stratum[1];
  CHECK(nonrespondents.r == 0);
  CHECK(nonrespondents.weight == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(nonrespondents.cond_mean == doctest::Approx(0.75).epsilon(1e-12));

  double reconstructed = 0.0;
  for (const auto& stratum : decomposition.per_stratum) {
    reconstructed += stratum.weight * (stratum.cond_var + stratum.bias * stratum.bias);
  }
  CHECK(std::abs(reconstructed - decomposition.population_var) < 1e-12);
}

TEST_CASE("scaling all response probabilities leaves the respondent view unchanged") {
  // The factor P(R=1|y,x)/P(R=1|x) cancels a common scale, so the bias
  // factor, the complete-case conditional, and the respondent-stratum bias
  // are invariant. (The nonrespondent stratum recomposes and is not.)
  const MissingSpec base = mnar_toy();
  Eigen::MatrixXd scaled_response = base.response * 0.35;
  const MissingSpec scaled({0.0}, {0.0, 1.0}, base.joint, scaled_response);
  const CompleteCaseConditional a = complete_case_conditional(base, 0.0);
  const CompleteCaseConditional b = complete_case_conditional(scaled, 0.0);
  CHECK((a.bias_factor - b.bias_factor).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((a.probs - b.probs).cwiseAbs().maxCoeff() < 1e-12);
  const VarianceDecomposition da = variance_decomposition(base, 0.0);
  const VarianceDecomposition db = variance_decomposition(scaled, 0.0);
  REQUIRE(da.per_stratum[0].r == 1);
  REQUIRE(db.per_stratum[0].r == 1);
  CHECK(da.per_stratum[0].bias == doctest::Approx(db.per_stratum[0].bias).epsilon(1e-12));
  CHECK(da.per_stratum[0].cond_var == doctest::Approx(db.per_stratum[0].cond_var).epsilon(1e-12));
}

TEST_CASE("single-stratum x: lone stratum with zero bias") {
  Eigen::MatrixXd joint(1, 2);
  joint << 0.5, 0.5;
  Eigen::MatrixXd response(1, 2);
  response.setConstant(1.0);  // everyone responds
  const MissingSpec spec({0.0}, {0.0, 1.0}, joint, response);
  const VarianceDecomposition decomposition = variance_decomposition(spec, 0.0);
  REQUIRE(decomposition.per_stratum.size() == 1);
  CHECK(decomposition.per_stratum[0].r == 1);
  CHECK(decomposition.per_stratum[0].bias == 0.0);
  CHECK(decomposition.per_stratum[0].cond_var ==
        doctest::Approx(decomposition.population_var).epsilon(1e-12));
}

TEST_CASE("fuzzed spec identities") {
  RngStream stream(91, 0);
  for (int trial = 0; trial < 1000; ++trial) {
    RngStream local = stream.split(static_cast<std::uint64_t>(trial));
    const Eigen::Index nx = 1 + static_cast<Eigen::Index>(local.next_u64() % 3);
    const Eigen::Index ny = 2 + static_cast<Eigen::Index>(local.next_u64() % 4);
    const MissingSpec spec = random_missing_spec(local, nx, ny);

    for (Eigen::Index i = 0; i < nx; ++i) {
      const double x = spec.x_values[static_cast<std::size_t>(i)];
      const Eigen::VectorXd population = population_conditional(spec, x);
      const CompleteCaseConditional cc = complete_case_conditional(spec, x);

      // bias-factor identity
      CHECK((cc.probs - cc.bias_factor.cwiseProduct(population)).cwiseAbs().maxCoeff() < 1e-12);
      CHECK(std::abs(cc.probs.sum() - 1.0) < 1e-12);

      // mixture identity: population = sum_r P(y|x,r) P(r|x), enumerated
      Eigen::VectorXd mass_r1 = population.cwiseProduct(spec.response.row(i).transpose());
      Eigen::VectorXd mass_r0 = population - mass_r1;
      CHECK((mass_r1 + mass_r0 - population).cwiseAbs().maxCoeff() < 1e-12);
      const double w1 = mass_r1.sum();
      if (w1 > 0.0 && w1 < 1.0) {
        const Eigen::VectorXd mixture = mass_r1 + mass_r0;  // already weighted
        CHECK((mixture - population).cwiseAbs().maxCoeff() < 1e-12);

        // equivalence: bias factor identically 1 <=> strata conditionals equal
        const bool factor_is_one = (cc.bias_factor.array() - 1.0).abs().maxCoeff() < 1e-10;
        const Eigen::VectorXd cond_r1 = mass_r1 / w1;
        const Eigen::VectorXd cond_r0 = mass_r0 / (1.0 - w1);
        const bool strata_equal = (cond_r1 - cond_r0).cwiseAbs().maxCoeff() < 1e-10;
        CHECK(factor_is_one == strata_equal);
      }

      // law of total variance across strata
      const VarianceDecomposition decomposition = variance_decomposition(spec, x);
      double reconstructed = 0.0;
      for (const auto& stratum : decomposition.per_stratum) {
        reconstructed += stratum.weight * (stratum.cond_var + stratum.bias * stratum.bias);
      }
      CHECK(std::abs(reconstructed - decomposition.population_var) < 1e-10);
    }
  }
}

TEST_CASE("complete-case efficiency: analytic fraction and simulation agree") {
  const EfficiencyResult zero_rate = complete_case_efficiency(10, 0.0, 200, 50, RngStream(92, 0));
  CHECK(zero_rate.analytic_fraction == 1.0);
  CHECK(zero_rate.simulated_fraction.mean == 1.0);

  const EfficiencyResult typical = complete_case_efficiency(10, 0.05, 500, 200, RngStream(92, 1));
  CHECK(typical.analytic_fraction == doctest::Approx(std::pow(0.95, 10)).epsilon(1e-14));
  CHECK(std::abs(typical.simulated_fraction.mean - typical.analytic_fraction) <
        3.0 * typical.simulated_fraction.std_error);

  double previous = 1.1;
  for (const std::size_t k : {1, 5, 10, 20, 40}) {
    const double fraction = complete_case_efficiency(k, 0.1, 10, 2, RngStream(92, 2)).analytic_fraction;
    CHECK(fraction < previous);
    previous = fraction;
  }

  CHECK_THROWS_AS(complete_case_efficiency(10, 1.0, 100, 50, RngStream(92, 3)), validation_error);
}

TEST_CASE("spec validation: undefined complete-case conditioning is rejected") {
  Eigen::MatrixXd joint(1, 2);
  joint << 0.5, 0.5;
  Eigen::MatrixXd response(1, 2);
  response.setConstant(0.0);  // nobody responds
  CHECK_THROWS_AS(MissingSpec({0.0}, {0.0, 1.0}, joint, response), validation_error);

  Eigen::MatrixXd bad_joint(1, 2);
  bad_joint << 0.6, 0.6;  // sums to 1.2
  Eigen::MatrixXd ok_response(1, 2);
  ok_response.setConstant(0.5);
  CHECK_THROWS_AS(MissingSpec({0.0}, {0.0, 1.0}, bad_joint, ok_response), validation_error);
}
