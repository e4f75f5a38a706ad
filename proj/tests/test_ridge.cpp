#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "bvg/random.hpp"
#include "bvg/ridge.hpp"

using namespace bvg;

namespace {

Dataset line_data(double slope, Eigen::Index n) {
  Dataset data;
  data.features.resize(n, 1);
  data.labels.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double x = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(n - 1);
    data.features(i, 0) = x;
    data.labels(i) = slope * x;
  }
  data.column_names = {"x"};
  return data;
}

std::filesystem::path write_temp_csv(const std::string& name,
                                     const std::string& body) {
  const auto dir = std::filesystem::temp_directory_path() / "bvg_csv_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / name;
  std::ofstream out(path, std::ios::binary);
  out << body;
  return path;
}

}  // namespace

TEST_CASE("fit_ridge: interpolation, shrinkage, residual oracle") {
  const Dataset data = line_data(2.0, 50);
  const RidgeModel ols = fit_ridge(data, 0.0);
  CHECK(ols.weights(0) == doctest::Approx(2.0).epsilon(1e-10));

  const RidgeModel heavy = fit_ridge(data, 1e9);
  CHECK(std::fabs(heavy.weights(0)) < 1e-6);

  // random SPD case: the normal-equations residual stays tiny
  RandomStream stream(8);
  Dataset rnd;
  rnd.features.resize(40, 5);
  rnd.labels.resize(40);
  for (Eigen::Index i = 0; i < 40; ++i) {
    for (Eigen::Index j = 0; j < 5; ++j) {
      rnd.features(i, j) = 2.0 * stream.next_uniform() - 1.0;
    }
    rnd.labels(i) = 2.0 * stream.next_uniform() - 1.0;
  }
  const double lambda = 0.37;
  const RidgeModel model = fit_ridge(rnd, lambda);
  const double n = 40.0;
  const Eigen::MatrixXd gram = rnd.features.transpose() * rnd.features / n;
  const Eigen::VectorXd rhs = rnd.features.transpose() * rnd.labels / n;
  Eigen::MatrixXd lhs = gram;
  lhs.diagonal().array() += lambda;
  CHECK((lhs * model.weights - rhs).norm() <= 1e-8 * rhs.norm());
}

TEST_CASE("fit_ridge: singular Gram at lambda = 0 raises; lambda > 0 works") {
  Dataset dup;
  dup.features.resize(6, 2);
  dup.labels.resize(6);
  for (Eigen::Index i = 0; i < 6; ++i) {
    dup.features(i, 0) = static_cast<double>(i);
    dup.features(i, 1) = 2.0 * static_cast<double>(i);  // collinear
    dup.labels(i) = static_cast<double>(i);
  }
  CHECK_THROWS_AS(fit_ridge(dup, 0.0), SingularSystemError);
  CHECK_NOTHROW(fit_ridge(dup, 0.1));
  CHECK_THROWS_AS(fit_ridge(dup, -1.0), std::invalid_argument);
}

TEST_CASE("ridge solution path is continuous in lambda") {
  const Dataset data = synth_data(200, 4, Eigen::VectorXd::Ones(4), 0.3, 42);
  for (double lambda : {0.01, 0.5, 5.0}) {
    const Eigen::VectorXd w = fit_ridge(data, lambda).weights;
    const Eigen::VectorXd w_eps = fit_ridge(data, lambda + 1e-6).weights;
    CHECK((w - w_eps).norm() < 1e-5);
  }
}

TEST_CASE("predict") {
  RidgeModel zero{Eigen::VectorXd::Zero(3), 0.0};
  CHECK(predict(zero, Eigen::Vector3d(1.0, 2.0, 3.0)) == 0.0);

  RidgeModel basis{Eigen::VectorXd::Unit(3, 1), 0.0};
  CHECK(predict(basis, Eigen::Vector3d(1.0, 2.0, 3.0)) == 2.0);

  const RidgeModel line = fit_ridge(line_data(2.0, 50), 0.0);
  Eigen::VectorXd x(1);
  x << 3.0;
  CHECK(predict(line, x) == doctest::Approx(6.0).epsilon(1e-9));
  CHECK_THROWS_AS(predict(line, Eigen::Vector3d(1, 2, 3)), std::invalid_argument);
}

TEST_CASE("synth_data: noiseless labels, determinism, OLS recovery") {
  Eigen::VectorXd w0(3);
  w0 << 1.0, -2.0, 0.5;
  const Dataset clean = synth_data(100, 3, w0, 0.0, 7);
  CHECK((clean.labels - clean.features * w0).norm() == 0.0);
  CHECK(clean.features.cwiseAbs().maxCoeff() < 1.0);

  const Dataset again = synth_data(100, 3, w0, 0.0, 7);
  CHECK(clean.features == again.features);
  CHECK(clean.labels == again.labels);

  const double noise = 0.2;
  const Dataset noisy = synth_data(10000, 3, w0, noise, 11);
  const RidgeModel fit = fit_ridge(noisy, 0.0);
  // features are U[-1,1] (variance 1/3); per-coordinate standard error of the
  // OLS estimate is about noise / sqrt(n/3)
  const double se = noise / std::sqrt(10000.0 / 3.0);
  for (Eigen::Index j = 0; j < 3; ++j) {
    CHECK(std::fabs(fit.weights(j) - w0(j)) < 4.0 * se);
  }
}

TEST_CASE("asymptotic_bias_variance: scalar identity case and monotone trends") {
  const Eigen::MatrixXd gram = Eigen::MatrixXd::Identity(1, 1);
  const Eigen::VectorXd e1 = Eigen::VectorXd::Ones(1);
  for (double lambda : {0.0, 0.3, 1.0, 10.0}) {
    const auto [bias, variance] =
        asymptotic_bias_variance(gram, e1, e1, 1.0, lambda);
    CHECK(bias == doctest::Approx(lambda / (1.0 + lambda)).epsilon(1e-12));
    CHECK(variance ==
          doctest::Approx(1.0 / ((1.0 + lambda) * (1.0 + lambda))).epsilon(1e-12));
  }

  // matrix path: monotone in lambda for a random SPD gram
  RandomStream stream(13);
  Eigen::MatrixXd m(3, 3);
  for (Eigen::Index i = 0; i < 3; ++i) {
    for (Eigen::Index j = 0; j < 3; ++j) m(i, j) = stream.next_uniform();
  }
  const Eigen::MatrixXd spd =
      m * m.transpose() + 0.5 * Eigen::MatrixXd::Identity(3, 3);
  Eigen::VectorXd w0(3), x(3);
  w0 << 1.0, 0.5, -0.25;
  x << 0.3, -0.2, 0.8;
  double prev_bias = -1.0;
  double prev_var = 1e300;
  for (double lambda = 0.0; lambda <= 20.0; lambda += 0.5) {
    const auto [bias, variance] =
        asymptotic_bias_variance(spd, w0, x, 1.3, lambda);
    if (lambda == 0.0) CHECK(bias == 0.0);
    CHECK(std::fabs(bias) >= std::fabs(prev_bias) - 1e-12);
    CHECK(variance <= prev_var + 1e-12);
    prev_bias = bias;
    prev_var = variance;
  }
}

TEST_CASE("load_csv: well-formed, missing column, bad cells") {
  const auto good = write_temp_csv("good.csv",
                                   "a,b,target\n1,2,3\n4,5,6\n7,8,9\n");
  const Dataset data = load_csv(good, "target");
  CHECK(data.n() == 3);
  CHECK(data.p() == 2);
  CHECK(data.labels(1) == 6.0);
  CHECK(data.features(2, 1) == 8.0);
  CHECK(data.column_names == std::vector<std::string>{"a", "b"});

  CHECK_THROWS_WITH_AS(load_csv(good, "price"), doctest::Contains("price"),
                       CsvError);

  const auto na = write_temp_csv("na.csv", "a,target\n1,2\nNA,4\n");
  CHECK_THROWS_WITH_AS(load_csv(na, "target"),
                       doctest::Contains("row 2, column 'a'"), CsvError);

  const auto missing = write_temp_csv("missing.csv", "a,b,target\n1,,3\n");
  CHECK_THROWS_WITH_AS(load_csv(missing, "target"),
                       doctest::Contains("row 1"), CsvError);

  CHECK_THROWS_AS(load_csv("/nonexistent/file.csv", "y"), CsvError);
}

TEST_CASE("standardize: posts, idempotence, constant column") {
  const Dataset data = synth_data(500, 3, Eigen::Vector3d(1.0, 2.0, 3.0), 0.5, 3);
  const StandardizeResult st = standardize(data);
  CHECK(std::fabs(st.data.labels.mean()) < 1e-12);
  const double label_sd = std::sqrt(st.data.labels.array().square().mean() -
                                    std::pow(st.data.labels.mean(), 2));
  CHECK(label_sd == doctest::Approx(1.0).epsilon(1e-12));
  for (Eigen::Index j = 0; j < 3; ++j) {
    CHECK(std::fabs(st.data.features.col(j).mean()) < 1e-12);
  }

  const StandardizeResult twice = standardize(st.data);
  CHECK((twice.data.features - st.data.features).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((twice.data.labels - st.data.labels).cwiseAbs().maxCoeff() < 1e-12);

  Dataset constant = data;
  constant.features.col(1).setConstant(4.0);
  constant.column_names = {"x0", "flat", "x2"};
  CHECK_THROWS_WITH_AS(standardize(constant), doctest::Contains("flat"),
                       ZeroVarianceError);
}

TEST_CASE("tournament: identical training rows give equal totals") {
  // every row identical: both halves induce the same model, so every test
  // point ties and split-expected payoffs are equal
  Dataset same;
  same.features = Eigen::MatrixXd::Ones(40, 1);
  same.labels = Eigen::VectorXd::Ones(40);
  TournamentSpec spec;
  spec.lambda_grid = {1.0};
  spec.repetitions = 3;
  spec.seed = 5;
  const PayoffMatrix m = run_tournament(same, spec);
  CHECK(m.player1.rows() == 1);
  CHECK(m.player1(0, 0) == m.player2(0, 0));
  CHECK(m.player1(0, 0) > 0.0);
}

TEST_CASE("tournament: all-zero labels stay finite") {
  Dataset zeros = synth_data(60, 2, Eigen::Vector2d(0.0, 0.0), 0.0, 2);
  TournamentSpec spec;
  spec.lambda_grid = {0.0, 1.0};
  spec.repetitions = 2;
  spec.seed = 9;
  const PayoffMatrix m = run_tournament(zeros, spec);
  CHECK(m.player1.allFinite());
  CHECK(m.player2.allFinite());
}

TEST_CASE("tournament: deterministic and thread-count independent") {
  const Dataset data = synth_data(300, 3, Eigen::Vector3d(1.0, -1.0, 0.5), 0.4, 21);
  TournamentSpec spec;
  spec.lambda_grid = {0.0, 0.1, 1.0, 10.0};
  spec.repetitions = 4;
  spec.seed = 77;
  const PayoffMatrix a = run_tournament(data, spec, 1);
  const PayoffMatrix b = run_tournament(data, spec, 2);
  CHECK(a.player1 == b.player1);
  CHECK(a.player2 == b.player2);
}

TEST_CASE("tournament: insufficient rows raise") {
  const Dataset tiny = synth_data(8, 4, Eigen::VectorXd::Ones(4), 0.1, 1);
  TournamentSpec spec;
  spec.lambda_grid = {1.0};
  spec.repetitions = 1;
  CHECK_THROWS_AS(run_tournament(tiny, spec), InsufficientRowsError);
  TournamentSpec bad = spec;
  bad.lambda_grid = {};
  CHECK_THROWS_AS(run_tournament(tiny, bad), std::invalid_argument);
}

TEST_CASE("tournament: desk-scale monotone trend and opponent-bias gain") {
  Eigen::VectorXd w0(4);
  w0 << 1.5, -1.0, 0.75, 0.5;
  const Dataset raw = synth_data(600, 4, w0, 0.5, 33);
  const Dataset data = standardize(raw).data;
  TournamentSpec spec;
  spec.lambda_grid = {0.0, 0.03, 0.1, 0.3, 1.0, 3.0, 10.0};
  spec.repetitions = 10;
  spec.seed = 101;
  const PayoffMatrix m = run_tournament(data, spec, 2);
  CHECK(own_lambda_monotone_fraction(m, 1) >= 0.9);
  CHECK(own_lambda_monotone_fraction(m, 2) >= 0.9);
  // the low-lambda advantage is larger against a heavily shrunk opponent
  CHECK(low_bias_gain(m, 1, m.lambda_grid.size() - 1) > low_bias_gain(m, 1, 0));
}
