#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "bvg/equilibrium.hpp"

using namespace bvg;

namespace {

const QuadratureSpec kQuad;

bool nonincreasing(const UtilityCurve& curve, double slack) {
  for (std::size_t k = 0; k + 1 < curve.points.size(); ++k) {
    if (curve.points[k + 1].second > curve.points[k].second + slack) {
      return false;
    }
  }
  return true;
}

FrontierGrid coarse_grid(Family family, double reward = 1.0) {
  GameConfig config;
  config.reward = reward;
  return make_frontier_grid(family, 0.05, config);
}

}  // namespace

TEST_CASE("make_frontier_grid excludes mu = 1") {
  const FrontierGrid grid = make_frontier_grid(Family::normal, 0.01, {});
  CHECK(grid.mus.size() == 100);
  CHECK(grid.mus.front() == 0.0);
  CHECK(grid.mus.back() < 1.0);
  CHECK(std::is_sorted(grid.mus.begin(), grid.mus.end()));
  CHECK_THROWS_AS(make_frontier_grid(Family::normal, 0.0, {}), std::invalid_argument);
}

TEST_CASE("expost curves: normal analytic path, shapes") {
  const FrontierGrid grid = coarse_grid(Family::normal);
  const UtilityCurve zero = expost_curve(grid, 0.0, kQuad, 2);
  for (const auto& [mu, u] : zero.points) CHECK(u == 0.0);

  const UtilityCurve at1 = expost_curve(grid, 1.0, kQuad, 2);
  CHECK(nonincreasing(at1, 1e-9));
  const UtilityCurve laplace = expost_curve(coarse_grid(Family::laplace), 1.0, kQuad, 2);
  CHECK(nonincreasing(laplace, 1e-7));
}

TEST_CASE("analytic and quadrature expost paths agree") {
  GameConfig config;
  FrontierGrid grid = make_frontier_grid(Family::normal, 0.1, config);
  const UtilityCurve analytic = expost_curve(grid, 1.3, kQuad, 2);
  // force the quadrature path by using the signed comparison flag (payoffs
  // are unchanged for symmetric integrands; only the dispatch differs)
  grid.config.comparison = ErrorComparison::signed_value;
  const UtilityCurve quad = expost_curve(grid, 1.3, kQuad, 2);
  for (std::size_t k = 0; k < analytic.points.size(); ++k) {
    CHECK(analytic.points[k].second ==
          doctest::Approx(quad.points[k].second).epsilon(1e-9));
  }
}

TEST_CASE("expected curves: logistic and normal reward variants nonincreasing") {
  const UtilityCurve logistic =
      expected_curve(coarse_grid(Family::logistic), 0.5, kQuad, 2);
  CHECK(nonincreasing(logistic, 1e-7));
  for (double reward : {0.5, 5.0}) {
    CAPTURE(reward);
    const UtilityCurve curve =
        expected_curve(coarse_grid(Family::normal, reward), 0.5, kQuad, 2);
    CHECK(nonincreasing(curve, 1e-7));
  }
}

TEST_CASE("uniform expected curve has an interior maximizer against mu_j = 0") {
  const UtilityCurve curve =
      expected_curve(coarse_grid(Family::uniform), 0.0, kQuad, 2);
  const auto best = std::max_element(
      curve.points.begin(), curve.points.end(),
      [](const auto& a, const auto& b) { return a.second < b.second; });
  CHECK(best->first > 0.02);
  CHECK(best->second > curve.points.front().second + 1e-6);
}

TEST_CASE("best_response: normal and logistic prefer zero bias") {
  CHECK(best_response(coarse_grid(Family::normal), 0.5, kQuad, 2) == 0.0);
  CHECK(best_response(coarse_grid(Family::logistic), 0.25, kQuad, 2) == 0.0);
  CHECK(best_response(coarse_grid(Family::logistic), 0.75, kQuad, 2) == 0.0);
}

TEST_CASE("best_response argmax is invariant under positive rescaling") {
  const FrontierGrid grid = coarse_grid(Family::uniform);
  const UtilityCurve curve = expected_curve(grid, 0.3, kQuad, 2);
  std::vector<double> values, scaled;
  for (const auto& [mu, u] : curve.points) {
    values.push_back(u);
    scaled.push_back(3.7 * u);
  }
  const auto argmax = [](const std::vector<double>& v) {
    return std::max_element(v.begin(), v.end()) - v.begin();
  };
  CHECK(argmax(values) == argmax(scaled));
}

TEST_CASE("find_pne: logistic has exactly the zero-bias equilibrium") {
  const PNEResult result = find_pne(coarse_grid(Family::logistic), kQuad, 2);
  REQUIRE(result.equilibria.size() == 1);
  CHECK(result.equilibria[0].first == 0.0);
  CHECK(result.equilibria[0].second == 0.0);
  for (const auto& [mu_j, mu_star] : result.best_response_table) {
    CHECK(mu_star == 0.0);
  }
}

TEST_CASE("find_pne: normal contains (0,0); uniform has a biased symmetric PNE") {
  const PNEResult normal = find_pne(coarse_grid(Family::normal), kQuad, 2);
  const bool has_origin =
      std::any_of(normal.equilibria.begin(), normal.equilibria.end(),
                  [](const auto& e) { return e.first == 0.0 && e.second == 0.0; });
  CHECK(has_origin);

  const PNEResult uniform = find_pne(coarse_grid(Family::uniform), kQuad, 2);
  const bool has_biased_symmetric = std::any_of(
      uniform.equilibria.begin(), uniform.equilibria.end(),
      [](const auto& e) { return e.first == e.second && e.first > 0.0; });
  CHECK(has_biased_symmetric);
}

TEST_CASE("uniform PNE survives halving the grid step") {
  const FrontierGrid grid = coarse_grid(Family::uniform);
  const PNEResult result = find_pne(grid, kQuad, 2);
  REQUIRE_FALSE(result.equilibria.empty());
  const FrontierGrid refined = make_frontier_grid(Family::uniform, 0.025, grid.config);
  for (const auto& [mu1, mu2] : result.equilibria) {
    const double br1 = best_response(refined, mu2, kQuad, 2);
    const double br2 = best_response(refined, mu1, kQuad, 2);
    CHECK(std::fabs(br1 - mu1) <= 0.025 + 1e-12);
    CHECK(std::fabs(br2 - mu2) <= 0.025 + 1e-12);
  }
}

TEST_CASE("curve export: filename scheme, CSV shape, JSON") {
  const FrontierGrid grid = make_frontier_grid(Family::normal, 0.25, {});
  const UtilityCurve curve = expost_curve(grid, 0.5, kQuad, 1);
  CHECK(curve_filename(curve) == "curve_normal_expost_a0.5_R1.csv");

  const auto dir = std::filesystem::temp_directory_path() / "bvg_curve_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / curve_filename(curve);
  write_curve_csv(curve, path);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "mu_i,utility");
  std::size_t rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  CHECK(rows == curve.points.size());

  const auto j = curve_to_json(curve);
  CHECK(j["family"] == "normal");
  CHECK(j["kind"] == "expost");
  CHECK(j["points"].size() == curve.points.size());
  std::filesystem::remove_all(dir);
}

TEST_CASE("near-flatness observation is reported, not asserted") {
  // The normal expost curve drops by only a few percent over mu in [0, 0.5];
  // record the measured drop so the value lands in test logs.
  const FrontierGrid grid = make_frontier_grid(Family::normal, 0.05, {});
  const UtilityCurve curve = expost_curve(grid, 1.0, kQuad, 1);
  const double at0 = curve.points.front().second;
  double at_half = at0;
  for (const auto& [mu, u] : curve.points) {
    if (mu <= 0.5) at_half = u;
  }
  const double drop = at0 - at_half;
  MESSAGE("normal expost a=1: u(0)=" << at0 << " drop over [0,0.5]=" << drop);
  CHECK(drop >= 0.0);
  CHECK(drop < 0.5 * std::fabs(at0));
}
