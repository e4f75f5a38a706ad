#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "bvg/game.hpp"

namespace bvg {

class CsvError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SingularSystemError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InsufficientRowsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ZeroVarianceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Dataset {
  Eigen::MatrixXd features;  // n x p
  Eigen::VectorXd labels;    // n
  std::vector<std::string> column_names;  // feature names; may be empty

  Eigen::Index n() const { return features.rows(); }
  Eigen::Index p() const { return features.cols(); }
};

// Checks n >= p >= 1 and that every entry is finite.
void validate_dataset(const Dataset& data);

struct RidgeModel {
  Eigen::VectorXd weights;
  double lambda = 0.0;
};

// Closed-form ridge fit: w = (Gram + lambda I)^-1 (X^T y / n) with
// Gram = X^T X / n, solved by Cholesky with a pivoted-QR fallback. Throws
// SingularSystemError when lambda = 0 and the Gram matrix is rank-deficient.
RidgeModel fit_ridge(const Dataset& train, double lambda);

double predict(const RidgeModel& model, const Eigen::VectorXd& x);

// y = w0^T x + e with features uniform on [-1, 1] and e ~ N(0, noise_sd^2);
// deterministic given the seed.
Dataset synth_data(Eigen::Index n, Eigen::Index p, const Eigen::VectorXd& w0,
                   double noise_sd, std::uint64_t seed);

// Asymptotic error moments of the ridge prediction at feature vector x:
//   bias(lambda) = lambda * x^T (Gram + lambda I)^-1 w0
//   V(lambda)    = sigma2 * x^T (Gram + lambda I)^-1 Gram (Gram + lambda I)^-1 x
std::pair<double, double> asymptotic_bias_variance(const Eigen::MatrixXd& gram,
                                                   const Eigen::VectorXd& w0,
                                                   const Eigen::VectorXd& x,
                                                   double sigma2,
                                                   double lambda);

// Headered numeric CSV. The target column becomes labels and is removed from
// the features. Any missing or non-numeric cell raises CsvError naming the
// row (and column where known).
Dataset load_csv(const std::filesystem::path& path, const std::string& target);

struct StandardizeResult {
  Dataset data;
  Eigen::VectorXd feature_means;
  Eigen::VectorXd feature_sds;
  double label_mean = 0.0;
  double label_sd = 1.0;
};

// Z-scores every feature column and the label (population standard
// deviation). Throws ZeroVarianceError naming the first constant column.
StandardizeResult standardize(const Dataset& data);

struct TournamentSpec {
  std::vector<double> lambda_grid;  // nonnegative, strictly increasing
  double test_fraction = 0.1;
  int repetitions = 100;
  double reward = 1.0;
  std::uint64_t seed = 0;
};

struct PayoffMatrix {
  std::vector<double> lambda_grid;
  // Summed utilities indexed (lambda_1 row, lambda_2 column).
  Eigen::MatrixXd player1;
  Eigen::MatrixXd player2;
  int repetitions = 0;
  std::uint64_t seed = 0;
};

// Per repetition: hold out test_fraction of rows, split the remainder into
// two disjoint random halves, fit one ridge per grid lambda per player, and
// for every (lambda_1, lambda_2) play one round per test point (errors are
// prediction - label, smaller |error| wins reward - error^2, split-expected
// ties). Totals are accumulated over repetitions in repetition order, so the
// result is deterministic given the seed and independent of thread count.
PayoffMatrix run_tournament(const Dataset& data, const TournamentSpec& spec,
                            int threads = 1);

// Fraction of adjacent own-lambda comparisons that are nonincreasing for the
// given player (1 or 2), across all opponent columns.
double own_lambda_monotone_fraction(const PayoffMatrix& matrix, int player);

// Utility gain of playing the smallest grid lambda instead of the largest,
// with the opponent fixed at opponent_index.
double low_bias_gain(const PayoffMatrix& matrix, int player,
                     std::size_t opponent_index);

}  // namespace bvg
