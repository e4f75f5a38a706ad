#include "bvg/ridge.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "bvg/parallel.hpp"
#include "bvg/random.hpp"

namespace bvg {
namespace {

// AS 241 lives in distributions.cpp; the noise generator goes through the
// family quantile so every sampled number in the project comes from one
// inverse-CDF path.
double normal_draw(RandomStream& stream) {
  return inverse_cdf(Family::normal, stream.next_uniform());
}

Eigen::VectorXd solve_spd(const Eigen::MatrixXd& lhs, const Eigen::VectorXd& rhs,
                          double lambda) {
  Eigen::LLT<Eigen::MatrixXd> llt(lhs);
  if (llt.info() == Eigen::Success) {
    return llt.solve(rhs);
  }
  // lambda = 0 with a semidefinite Gram matrix lands here.
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(lhs);
  const Eigen::VectorXd w = qr.solve(rhs);
  const double residual = (lhs * w - rhs).norm();
  if (!w.allFinite() || residual > 1e-8 * std::max(1.0, rhs.norm())) {
    std::ostringstream msg;
    msg << "singular normal equations (lambda = " << lambda
        << "): Gram matrix is rank-deficient";
    throw SingularSystemError(msg.str());
  }
  return w;
}

struct SplitIndices {
  std::vector<Eigen::Index> test;
  std::vector<Eigen::Index> half1;
  std::vector<Eigen::Index> half2;
};

SplitIndices split_rows(Eigen::Index n, double test_fraction,
                        RandomStream& stream) {
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[stream.next_below(i)]);
  }
  const auto n_test = static_cast<std::size_t>(
      std::llround(test_fraction * static_cast<double>(n)));
  const std::size_t remainder = order.size() - n_test;
  const std::size_t half = remainder / 2;  // odd leftover row sits out
  SplitIndices split;
  split.test.assign(order.begin(), order.begin() + n_test);
  split.half1.assign(order.begin() + n_test, order.begin() + n_test + half);
  split.half2.assign(order.begin() + n_test + half,
                     order.begin() + n_test + 2 * half);
  return split;
}

Dataset take_rows(const Dataset& data, const std::vector<Eigen::Index>& rows) {
  Dataset out;
  out.features.resize(static_cast<Eigen::Index>(rows.size()), data.p());
  out.labels.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.features.row(static_cast<Eigen::Index>(i)) = data.features.row(rows[i]);
    out.labels(static_cast<Eigen::Index>(i)) = data.labels(rows[i]);
  }
  out.column_names = data.column_names;
  return out;
}

}  // namespace

void validate_dataset(const Dataset& data) {
  if (data.p() < 1 || data.n() < data.p()) {
    throw std::invalid_argument("Dataset: requires n >= p >= 1");
  }
  if (data.labels.size() != data.n()) {
    throw std::invalid_argument("Dataset: labels/features row mismatch");
  }
  if (!data.features.allFinite() || !data.labels.allFinite()) {
    throw std::invalid_argument("Dataset: non-finite entries");
  }
}

RidgeModel fit_ridge(const Dataset& train, double lambda) {
  validate_dataset(train);
  if (!(lambda >= 0.0)) {
    throw std::invalid_argument("fit_ridge: lambda must be >= 0");
  }
  const double n = static_cast<double>(train.n());
  const Eigen::MatrixXd gram =
      train.features.transpose() * train.features / n;
  const Eigen::VectorXd rhs = train.features.transpose() * train.labels / n;
  Eigen::MatrixXd lhs = gram;
  lhs.diagonal().array() += lambda;
  return RidgeModel{solve_spd(lhs, rhs, lambda), lambda};
}

double predict(const RidgeModel& model, const Eigen::VectorXd& x) {
  if (x.size() != model.weights.size()) {
    throw std::invalid_argument("predict: feature dimension mismatch");
  }
  return model.weights.dot(x);
}

Dataset synth_data(Eigen::Index n, Eigen::Index p, const Eigen::VectorXd& w0,
                   double noise_sd, std::uint64_t seed) {
  if (n < 1 || p < 1 || w0.size() != p) {
    throw std::invalid_argument("synth_data: bad dimensions");
  }
  if (!(noise_sd >= 0.0)) {
    throw std::invalid_argument("synth_data: noise_sd must be >= 0");
  }
  RandomStream stream(seed);
  Dataset data;
  data.features.resize(n, p);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) {
      data.features(i, j) = 2.0 * stream.next_uniform() - 1.0;
    }
  }
  data.labels = data.features * w0;
  if (noise_sd > 0.0) {
    for (Eigen::Index i = 0; i < n; ++i) {
      data.labels(i) += noise_sd * normal_draw(stream);
    }
  }
  data.column_names.reserve(static_cast<std::size_t>(p));
  for (Eigen::Index j = 0; j < p; ++j) {
    data.column_names.push_back("x" + std::to_string(j));
  }
  return data;
}

std::pair<double, double> asymptotic_bias_variance(const Eigen::MatrixXd& gram,
                                                   const Eigen::VectorXd& w0,
                                                   const Eigen::VectorXd& x,
                                                   double sigma2,
                                                   double lambda) {
  if (gram.rows() != gram.cols() || gram.rows() != w0.size() ||
      x.size() != w0.size()) {
    throw std::invalid_argument("asymptotic_bias_variance: dimension mismatch");
  }
  Eigen::MatrixXd lhs = gram;
  lhs.diagonal().array() += lambda;
  const Eigen::VectorXd reg_w0 = solve_spd(lhs, w0, lambda);
  const Eigen::VectorXd reg_x = solve_spd(lhs, x, lambda);
  const double bias = lambda * x.dot(reg_w0);
  const double variance = sigma2 * reg_x.dot(gram * reg_x);
  return {bias, variance};
}

Dataset load_csv(const std::filesystem::path& path, const std::string& target) {
  std::ifstream in(path);
  if (!in) {
    throw CsvError("cannot open CSV file: " + path.string());
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw CsvError("empty CSV file: " + path.string());
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();

  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) header.push_back(cell);
  }
  if (header.empty()) {
    throw CsvError("CSV header has no columns: " + path.string());
  }
  const auto target_it = std::find(header.begin(), header.end(), target);
  if (target_it == header.end()) {
    throw CsvError("missing target column '" + target + "' in " +
                   path.string());
  }
  const std::size_t target_idx =
      static_cast<std::size_t>(target_it - header.begin());

  std::vector<std::vector<double>> feature_rows;
  std::vector<double> labels;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;  // 1-based data row index
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> values;
    values.reserve(header.size());
    std::size_t start = 0;
    std::size_t col = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      const std::string cell = line.substr(
          start, comma == std::string::npos ? std::string::npos : comma - start);
      if (col >= header.size()) {
        throw CsvError("row " + std::to_string(row) + ": too many cells");
      }
      std::size_t consumed = 0;
      double value = 0.0;
      bool ok = !cell.empty();
      if (ok) {
        try {
          value = std::stod(cell, &consumed);
        } catch (const std::exception&) {
          ok = false;
        }
      }
      if (!ok || consumed != cell.size() || !std::isfinite(value)) {
        throw CsvError("row " + std::to_string(row) + ", column '" +
                       header[col] + "': non-numeric or missing cell '" + cell +
                       "'");
      }
      values.push_back(value);
      ++col;
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (values.size() != header.size()) {
      throw CsvError("row " + std::to_string(row) + ": expected " +
                     std::to_string(header.size()) + " cells, got " +
                     std::to_string(values.size()));
    }
    labels.push_back(values[target_idx]);
    values.erase(values.begin() + static_cast<std::ptrdiff_t>(target_idx));
    feature_rows.push_back(std::move(values));
  }
  if (feature_rows.empty()) {
    throw CsvError("CSV has no data rows: " + path.string());
  }

  Dataset data;
  const auto n = static_cast<Eigen::Index>(feature_rows.size());
  const auto p = static_cast<Eigen::Index>(header.size() - 1);
  data.features.resize(n, p);
  data.labels.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) {
      data.features(i, j) = feature_rows[static_cast<std::size_t>(i)]
                                        [static_cast<std::size_t>(j)];
    }
    data.labels(i) = labels[static_cast<std::size_t>(i)];
  }
  data.column_names = header;
  data.column_names.erase(data.column_names.begin() +
                          static_cast<std::ptrdiff_t>(target_idx));
  validate_dataset(data);
  return data;
}

StandardizeResult standardize(const Dataset& data) {
  validate_dataset(data);
  const double n = static_cast<double>(data.n());
  StandardizeResult result;
  result.feature_means = data.features.colwise().mean().transpose();
  result.feature_sds.resize(data.p());
  for (Eigen::Index j = 0; j < data.p(); ++j) {
    const double var =
        (data.features.col(j).array() - result.feature_means(j)).square().sum() /
        n;
    result.feature_sds(j) = std::sqrt(var);
    if (!(result.feature_sds(j) > 0.0)) {
      const std::string name =
          data.column_names.empty() ? "column " + std::to_string(j)
                                    : data.column_names[static_cast<std::size_t>(j)];
      throw ZeroVarianceError("zero-variance feature column: " + name);
    }
  }
  result.label_mean = data.labels.mean();
  const double label_var =
      (data.labels.array() - result.label_mean).square().sum() / n;
  result.label_sd = std::sqrt(label_var);
  if (!(result.label_sd > 0.0)) {
    throw ZeroVarianceError("zero-variance label column");
  }
  result.data.features.resize(data.n(), data.p());
  for (Eigen::Index j = 0; j < data.p(); ++j) {
    result.data.features.col(j) =
        (data.features.col(j).array() - result.feature_means(j)) /
        result.feature_sds(j);
  }
  result.data.labels =
      (data.labels.array() - result.label_mean) / result.label_sd;
  result.data.column_names = data.column_names;
  return result;
}

PayoffMatrix run_tournament(const Dataset& data, const TournamentSpec& spec,
                            int threads) {
  validate_dataset(data);
  if (spec.lambda_grid.empty()) {
    throw std::invalid_argument("tournament: lambda grid is empty");
  }
  if (!std::is_sorted(spec.lambda_grid.begin(), spec.lambda_grid.end()) ||
      spec.lambda_grid.front() < 0.0) {
    throw std::invalid_argument(
        "tournament: lambda grid must be nonnegative and increasing");
  }
  if (spec.repetitions < 1) {
    throw std::invalid_argument("tournament: repetitions must be >= 1");
  }
  if (!(spec.test_fraction > 0.0 && spec.test_fraction < 1.0)) {
    throw std::invalid_argument("tournament: test_fraction must be in (0, 1)");
  }

  const auto n_test = static_cast<Eigen::Index>(
      std::llround(spec.test_fraction * static_cast<double>(data.n())));
  const Eigen::Index half = (data.n() - n_test) / 2;
  if (n_test < 1 || half < data.p()) {
    throw InsufficientRowsError(
        "tournament: dataset too small to hold out " +
        std::to_string(n_test) + " test rows and fit on halves of " +
        std::to_string(half) + " rows with p = " + std::to_string(data.p()));
  }

  const auto g = static_cast<Eigen::Index>(spec.lambda_grid.size());
  GameConfig config;
  config.reward = spec.reward;
  config.tie_rule = TieRule::split_expected;
  config.comparison = ErrorComparison::magnitude;

  std::vector<Eigen::MatrixXd> totals1(
      static_cast<std::size_t>(spec.repetitions));
  std::vector<Eigen::MatrixXd> totals2(
      static_cast<std::size_t>(spec.repetitions));

  parallel_for(static_cast<std::size_t>(spec.repetitions), threads,
               [&](std::size_t rep) {
    RandomStream stream(spec.seed, rep);
    const SplitIndices split = split_rows(data.n(), spec.test_fraction, stream);
    const Dataset train1 = take_rows(data, split.half1);
    const Dataset train2 = take_rows(data, split.half2);
    const Dataset test = take_rows(data, split.test);

    // errors[k] = per-test-point prediction errors of model with grid lambda k
    const auto n_pts = test.n();
    Eigen::MatrixXd err1(g, n_pts), err2(g, n_pts);
    for (Eigen::Index k = 0; k < g; ++k) {
      const RidgeModel m1 = fit_ridge(train1, spec.lambda_grid[static_cast<std::size_t>(k)]);
      const RidgeModel m2 = fit_ridge(train2, spec.lambda_grid[static_cast<std::size_t>(k)]);
      err1.row(k) = (test.features * m1.weights - test.labels).transpose();
      err2.row(k) = (test.features * m2.weights - test.labels).transpose();
    }

    Eigen::MatrixXd sum1 = Eigen::MatrixXd::Zero(g, g);
    Eigen::MatrixXd sum2 = Eigen::MatrixXd::Zero(g, g);
    RandomStream tie_stream = stream;  // unused under split-expected ties
    for (Eigen::Index k1 = 0; k1 < g; ++k1) {
      for (Eigen::Index k2 = 0; k2 < g; ++k2) {
        double u1 = 0.0, u2 = 0.0;
        for (Eigen::Index t = 0; t < n_pts; ++t) {
          const RoundOutcome outcome =
              round_payoffs(err1(k1, t), err2(k2, t), config, tie_stream);
          u1 += outcome.payoffs[0];
          u2 += outcome.payoffs[1];
        }
        sum1(k1, k2) = u1;
        sum2(k1, k2) = u2;
      }
    }
    totals1[rep] = sum1;
    totals2[rep] = sum2;
  });

  PayoffMatrix matrix;
  matrix.lambda_grid = spec.lambda_grid;
  matrix.repetitions = spec.repetitions;
  matrix.seed = spec.seed;
  matrix.player1 = Eigen::MatrixXd::Zero(g, g);
  matrix.player2 = Eigen::MatrixXd::Zero(g, g);
  for (int rep = 0; rep < spec.repetitions; ++rep) {
    matrix.player1 += totals1[static_cast<std::size_t>(rep)];
    matrix.player2 += totals2[static_cast<std::size_t>(rep)];
  }
  return matrix;
}

double own_lambda_monotone_fraction(const PayoffMatrix& matrix, int player) {
  if (player != 1 && player != 2) {
    throw std::invalid_argument("player must be 1 or 2");
  }
  const Eigen::MatrixXd& totals =
      player == 1 ? matrix.player1 : matrix.player2;
  const Eigen::Index g = totals.rows();
  if (g < 2) return 1.0;
  std::size_t ok = 0, all = 0;
  for (Eigen::Index opp = 0; opp < g; ++opp) {
    for (Eigen::Index k = 0; k + 1 < g; ++k) {
      const double cur = player == 1 ? totals(k, opp) : totals(opp, k);
      const double nxt = player == 1 ? totals(k + 1, opp) : totals(opp, k + 1);
      ok += nxt <= cur ? 1 : 0;
      ++all;
    }
  }
  return static_cast<double>(ok) / static_cast<double>(all);
}

double low_bias_gain(const PayoffMatrix& matrix, int player,
                     std::size_t opponent_index) {
  const Eigen::MatrixXd& totals =
      player == 1 ? matrix.player1 : matrix.player2;
  const auto opp = static_cast<Eigen::Index>(opponent_index);
  const Eigen::Index last = totals.rows() - 1;
  if (player == 1) return totals(0, opp) - totals(last, opp);
  return totals(opp, 0) - totals(opp, last);
}

}  // namespace bvg
