#include "bvg/engine.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "bvg/parallel.hpp"

namespace bvg {
namespace {

double point_mass_expost(double mu, double a, double reward) {
  const double am = std::fabs(mu);
  if (am < a) return reward - mu * mu;
  if (am == a) return 0.5 * (reward - mu * mu);  // split-expected tie
  return 0.0;
}

}  // namespace

double expost_utility(const Strategy& strategy, double a,
                      const GameConfig& config, const QuadratureSpec& quad) {
  const double t = std::fabs(a);
  if (strategy.is_point_mass()) {
    return point_mass_expost(strategy.mu(), t, config.reward);
  }
  auto [supp_lo, supp_hi] = strategy_support(strategy);
  const double lo = std::max(-t, supp_lo);
  const double hi = std::min(t, supp_hi);
  if (lo >= hi) return 0.0;
  const double reward = config.reward;
  auto integrand = [&strategy, reward](double x) {
    return (reward - x * x) * strategy_pdf(strategy, x);
  };
  // Split at 0 and at the density's center kink so no panel straddles them.
  const double breaks[] = {0.0, strategy.mu()};
  return adaptive_integrate(integrand, lo, hi, quad, breaks);
}

double expected_utility(const Strategy& strategy_i, const Strategy& strategy_j,
                        const GameConfig& config, const QuadratureSpec& quad) {
  if (strategy_j.is_point_mass()) {
    return expost_utility(strategy_i, strategy_j.mu(), config, quad);
  }
  auto [supp_lo, supp_hi] = strategy_support(strategy_j);
  const double lo = std::max(
      supp_lo, strategy_j.mu() - quad.outer_truncation * strategy_j.sigma());
  const double hi = std::min(
      supp_hi, strategy_j.mu() + quad.outer_truncation * strategy_j.sigma());

  // The inner integral is evaluated well below the outer tolerance so its
  // noise does not stall the outer error estimate.
  QuadratureSpec inner = quad;
  inner.abs_tol = quad.abs_tol * 1e-2;
  inner.rel_tol = quad.rel_tol * 1e-2;

  auto integrand = [&](double a) {
    return expost_utility(strategy_i, a, config, inner) *
           strategy_pdf(strategy_j, a);
  };

  // Kinks of the outer integrand: a = 0 (|a|), the opponent density's center,
  // and the points where the win window edge crosses the boundary of
  // strategy_i's support (or its atom, for a point mass).
  std::vector<double> breaks = {0.0, strategy_j.mu()};
  if (strategy_i.is_point_mass()) {
    const double am = std::fabs(strategy_i.mu());
    breaks.insert(breaks.end(), {am, -am});
  } else {
    auto [ilo, ihi] = strategy_support(strategy_i);
    if (std::isfinite(ilo)) breaks.insert(breaks.end(), {std::fabs(ilo), -std::fabs(ilo)});
    if (std::isfinite(ihi)) breaks.insert(breaks.end(), {std::fabs(ihi), -std::fabs(ihi)});
  }
  return adaptive_integrate(integrand, lo, hi, quad, breaks);
}

SimulationResult simulate(const Strategy& strategy_1,
                          const Strategy& strategy_2, const GameConfig& config,
                          std::uint64_t rounds, std::uint64_t seed,
                          int threads) {
  if (rounds == 0) {
    throw std::invalid_argument("simulate: rounds must be >= 1");
  }
  constexpr std::uint64_t kBlock = 1 << 16;
  const std::uint64_t blocks = (rounds + kBlock - 1) / kBlock;

  struct BlockSums {
    double s1 = 0.0, s2 = 0.0, sq1 = 0.0, sq2 = 0.0;
  };
  std::vector<BlockSums> sums(blocks);

  parallel_for(blocks, threads, [&](std::size_t b) {
    RandomStream stream(seed, b);
    const std::uint64_t begin = b * kBlock;
    const std::uint64_t end = std::min(rounds, begin + kBlock);
    BlockSums acc;
    for (std::uint64_t r = begin; r < end; ++r) {
      const double a1 = sample_one(strategy_1, stream);
      const double a2 = sample_one(strategy_2, stream);
      const RoundOutcome outcome = round_payoffs(a1, a2, config, stream);
      acc.s1 += outcome.payoffs[0];
      acc.s2 += outcome.payoffs[1];
      acc.sq1 += outcome.payoffs[0] * outcome.payoffs[0];
      acc.sq2 += outcome.payoffs[1] * outcome.payoffs[1];
    }
    sums[b] = acc;
  });

  BlockSums total;
  for (const BlockSums& b : sums) {
    total.s1 += b.s1;
    total.s2 += b.s2;
    total.sq1 += b.sq1;
    total.sq2 += b.sq2;
  }

  SimulationResult result;
  result.rounds = rounds;
  result.seed = seed;
  const double n = static_cast<double>(rounds);
  result.mean_payoffs = {total.s1 / n, total.s2 / n};
  const double var1 = std::max(0.0, total.sq1 / n - result.mean_payoffs[0] * result.mean_payoffs[0]);
  const double var2 = std::max(0.0, total.sq2 / n - result.mean_payoffs[1] * result.mean_payoffs[1]);
  result.std_errors = {std::sqrt(var1 / n), std::sqrt(var2 / n)};
  return result;
}

}  // namespace bvg
