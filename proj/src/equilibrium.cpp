#include "bvg/equilibrium.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "bvg/analytic_normal.hpp"
#include "bvg/parallel.hpp"

namespace bvg {
namespace {

std::string format_param(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

bool analytic_path_applies(const FrontierGrid& grid) {
  return grid.family == Family::normal && grid.config.reward == 1.0 &&
         grid.config.comparison == ErrorComparison::magnitude;
}

std::vector<double> expected_column(const FrontierGrid& grid, double mu_j,
                                    const QuadratureSpec& quad, int threads) {
  const Strategy opponent = FrontierStrategy(grid.family, mu_j);
  std::vector<double> utilities(grid.mus.size());
  parallel_for(grid.mus.size(), threads, [&](std::size_t k) {
    const Strategy self = FrontierStrategy(grid.family, grid.mus[k]);
    utilities[k] = expected_utility(self, opponent, grid.config, quad);
  });
  return utilities;
}

// Index of the maximal value; entries within kArgmaxTieTolerance of the
// maximum tie, and the smallest index among them wins.
std::size_t argmax_with_ties(const std::vector<double>& values) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < values.size(); ++k) {
    if (values[k] > values[best]) best = k;
  }
  for (std::size_t k = 0; k < best; ++k) {
    if (values[k] >= values[best] - kArgmaxTieTolerance) return k;
  }
  return best;
}

}  // namespace

FrontierGrid make_frontier_grid(Family family, double step,
                                const GameConfig& config) {
  if (!(step > 0.0 && step < 1.0)) {
    throw std::invalid_argument("make_frontier_grid: step must be in (0, 1)");
  }
  FrontierGrid grid;
  grid.family = family;
  grid.config = config;
  for (int k = 0;; ++k) {
    const double mu = k * step;
    if (mu >= 1.0 - 1e-12) break;
    grid.mus.push_back(mu);
  }
  return grid;
}

UtilityCurve expost_curve(const FrontierGrid& grid, double a,
                          const QuadratureSpec& quad, int threads) {
  if (!(a >= 0.0)) {
    throw std::invalid_argument("expost_curve: requires a >= 0");
  }
  UtilityCurve curve;
  curve.kind = CurveKind::expost;
  curve.family = grid.family;
  curve.opponent_param = a;
  curve.reward = grid.config.reward;
  curve.points.resize(grid.mus.size());
  const bool analytic = analytic_path_applies(grid);
  parallel_for(grid.mus.size(), threads, [&](std::size_t k) {
    const double mu = grid.mus[k];
    const double u =
        analytic ? expost_utility_normal(mu, a)
                 : expost_utility(FrontierStrategy(grid.family, mu), a,
                                  grid.config, quad);
    curve.points[k] = {mu, u};
  });
  return curve;
}

UtilityCurve expected_curve(const FrontierGrid& grid, double mu_j,
                            const QuadratureSpec& quad, int threads) {
  if (!(mu_j >= 0.0 && mu_j <= 1.0)) {
    throw std::invalid_argument("expected_curve: requires mu_j in [0, 1]");
  }
  UtilityCurve curve;
  curve.kind = CurveKind::expected;
  curve.family = grid.family;
  curve.opponent_param = mu_j;
  curve.reward = grid.config.reward;
  const std::vector<double> utilities =
      expected_column(grid, mu_j, quad, threads);
  curve.points.resize(grid.mus.size());
  for (std::size_t k = 0; k < grid.mus.size(); ++k) {
    curve.points[k] = {grid.mus[k], utilities[k]};
  }
  return curve;
}

double best_response(const FrontierGrid& grid, double mu_j,
                     const QuadratureSpec& quad, int threads) {
  if (grid.mus.empty()) {
    throw std::invalid_argument("best_response: empty grid");
  }
  const std::vector<double> utilities =
      expected_column(grid, mu_j, quad, threads);
  return grid.mus[argmax_with_ties(utilities)];
}

PNEResult find_pne(const FrontierGrid& grid, const QuadratureSpec& quad,
                   int threads) {
  const std::size_t n = grid.mus.size();
  if (n == 0) throw std::invalid_argument("find_pne: empty grid");

  // Full utility table; cell (i, j) is the payoff of playing mus[i] against
  // mus[j]. Cells are independent, so the whole table parallelizes.
  std::vector<double> table(n * n);
  parallel_for(n * n, threads, [&](std::size_t cell) {
    const std::size_t i = cell / n;
    const std::size_t j = cell % n;
    const Strategy self = FrontierStrategy(grid.family, grid.mus[i]);
    const Strategy opponent = FrontierStrategy(grid.family, grid.mus[j]);
    table[cell] = expected_utility(self, opponent, grid.config, quad);
  });

  std::vector<std::size_t> br(n);
  std::vector<double> column(n);
  PNEResult result;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) column[i] = table[i * n + j];
    br[j] = argmax_with_ties(column);
    result.best_response_table.emplace_back(grid.mus[j], grid.mus[br[j]]);
  }
  for (std::size_t q = 0; q < n; ++q) {
    const std::size_t p = br[q];
    if (br[p] == q) result.equilibria.emplace_back(grid.mus[p], grid.mus[q]);
  }
  return result;
}

std::string curve_filename(const UtilityCurve& curve) {
  std::string name = "curve_";
  name += family_name(curve.family);
  name += curve.kind == CurveKind::expost ? "_expost_a" : "_expected_mu";
  name += format_param(curve.opponent_param);
  name += "_R";
  name += format_param(curve.reward);
  name += ".csv";
  return name;
}

void write_curve_csv(const UtilityCurve& curve,
                     const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  out << "mu_i,utility\n";
  for (const auto& [mu, utility] : curve.points) {
    out << format_full(mu) << ',' << format_full(utility) << '\n';
  }
}

nlohmann::ordered_json curve_to_json(const UtilityCurve& curve) {
  nlohmann::ordered_json j;
  j["family"] = family_name(curve.family);
  j["kind"] = curve.kind == CurveKind::expost ? "expost" : "expected";
  j[curve.kind == CurveKind::expost ? "a" : "mu_j"] = curve.opponent_param;
  j["reward"] = curve.reward;
  auto& pts = j["points"] = nlohmann::ordered_json::array();
  for (const auto& [mu, utility] : curve.points) {
    pts.push_back({{"mu_i", mu}, {"utility", utility}});
  }
  return j;
}

nlohmann::ordered_json pne_to_json(const FrontierGrid& grid, const PNEResult& result) {
  nlohmann::ordered_json j;
  j["family"] = family_name(grid.family);
  j["reward"] = grid.config.reward;
  j["grid_size"] = grid.mus.size();
  auto& eq = j["equilibria"] = nlohmann::ordered_json::array();
  for (const auto& [mu1, mu2] : result.equilibria) eq.push_back({mu1, mu2});
  auto& br = j["best_response"] = nlohmann::ordered_json::array();
  for (const auto& [mu_j, mu_star] : result.best_response_table) {
    br.push_back({{"mu_j", mu_j}, {"mu_star", mu_star}});
  }
  return j;
}

}  // namespace bvg
