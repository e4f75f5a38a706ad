#pragma once

#include <array>
#include <cstdint>

#include "bvg/distributions.hpp"
#include "bvg/game.hpp"
#include "bvg/quadrature.hpp"

namespace bvg {

// Ex post utility of `strategy` against a fixed opponent realization a:
// adaptive quadrature of (reward - x^2) * strategy_pdf(x) over the win region
// x in (-|a|, |a|), clipped to the strategy's support. Point masses are
// evaluated exactly (win iff |mu| < |a|; an exact tie splits the payoff).
double expost_utility(const Strategy& strategy, double a,
                      const GameConfig& config, const QuadratureSpec& quad);

// Expected utility of strategy_i against strategy_j: outer quadrature of
// expost_utility(strategy_i, |a|) over a ~ strategy_j, truncated at
// mu_j +/- outer_truncation * sigma_j for unbounded families.
double expected_utility(const Strategy& strategy_i, const Strategy& strategy_j,
                        const GameConfig& config, const QuadratureSpec& quad);

struct SimulationResult {
  std::array<double, 2> mean_payoffs = {0.0, 0.0};
  std::array<double, 2> std_errors = {0.0, 0.0};
  std::uint64_t rounds = 0;
  std::uint64_t seed = 0;
};

// Monte Carlo play of `rounds` independent rounds. Rounds are processed in
// fixed-size blocks, each with a substream derived from (seed, block index),
// and block sums are reduced in index order, so the result is bit-identical
// for any thread count. threads <= 0 uses all hardware threads.
SimulationResult simulate(const Strategy& strategy_1,
                          const Strategy& strategy_2, const GameConfig& config,
                          std::uint64_t rounds, std::uint64_t seed,
                          int threads = 0);

}  // namespace bvg
