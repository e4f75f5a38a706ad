#pragma once

#include <filesystem>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "bvg/engine.hpp"

namespace bvg {

// Discretized frontier mu^2 + sigma^2 = 1 for one family. mu = 1 (the
// degenerate point mass) is excluded from generated grids.
struct FrontierGrid {
  Family family = Family::normal;
  std::vector<double> mus;  // strictly increasing, within [0, 1]
  GameConfig config;
};

// Grid {0, step, 2*step, ...} over [0, 1).
FrontierGrid make_frontier_grid(Family family, double step,
                                const GameConfig& config);

enum class CurveKind { expost, expected };

// A sampled utility curve over the frontier grid: for expost curves the
// opponent parameter is the fixed realization a; for expected curves it is
// the opponent's frontier bias mu_j.
struct UtilityCurve {
  CurveKind kind = CurveKind::expost;
  Family family = Family::normal;
  double opponent_param = 0.0;
  double reward = 1.0;
  std::vector<std::pair<double, double>> points;  // (mu_i, utility)
};

// Ex post utility at every grid mu. Normal frontier curves with reward 1 and
// magnitude comparison use the closed form; everything else goes through
// quadrature.
UtilityCurve expost_curve(const FrontierGrid& grid, double a,
                          const QuadratureSpec& quad, int threads = 1);

// Expected utility of each grid mu_i against the frontier strategy mu_j.
UtilityCurve expected_curve(const FrontierGrid& grid, double mu_j,
                            const QuadratureSpec& quad, int threads = 1);

// Utilities within this distance of the column maximum count as ties, broken
// toward smaller mu. Matches the default quadrature rel_tol: differences
// below integration resolution are not meaningful.
inline constexpr double kArgmaxTieTolerance = 1e-9;

// Grid mu maximizing expected utility against frontier mu_j.
double best_response(const FrontierGrid& grid, double mu_j,
                     const QuadratureSpec& quad, int threads = 1);

struct PNEResult {
  // Symmetric-class grid pairs (mu_1, mu_2) that are mutual best responses.
  std::vector<std::pair<double, double>> equilibria;
  // (mu_j, mu_i*) for every grid mu_j.
  std::vector<std::pair<double, double>> best_response_table;
};

// Builds the full best-response table, then scans for mutual best responses.
PNEResult find_pne(const FrontierGrid& grid, const QuadratureSpec& quad,
                   int threads = 1);

// --- export -----------------------------------------------------------------

// curve_<family>_<expost|expected>_<a|mu><param>_R<reward>.csv
std::string curve_filename(const UtilityCurve& curve);

// CSV with header "mu_i,utility"; values printed with 17 significant digits.
void write_curve_csv(const UtilityCurve& curve,
                     const std::filesystem::path& path);

nlohmann::ordered_json curve_to_json(const UtilityCurve& curve);
nlohmann::ordered_json pne_to_json(const FrontierGrid& grid,
                                   const PNEResult& result);

}  // namespace bvg
