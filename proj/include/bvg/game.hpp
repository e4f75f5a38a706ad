#pragma once

#include <array>

#include <nlohmann/json_fwd.hpp>

#include "bvg/distributions.hpp"
#include "bvg/random.hpp"

namespace bvg {

enum class TieRule { random_half, split_expected };

// How realized errors are compared to decide the winner. The payoff formulas
// integrate over |error|, so magnitude is the default; the signed rule keeps
// the literal "smaller value wins" reading available for exploration.
enum class ErrorComparison { magnitude, signed_value };

struct GameConfig {
  double reward = 1.0;  // winner payoff is reward - error^2
  TieRule tie_rule = TieRule::split_expected;
  bool frontier_constraint = true;  // restrict strategies to mu^2 + sigma^2 = 1
  ErrorComparison comparison = ErrorComparison::magnitude;
};

// JSON document form: {"reward":1.0,"tie_rule":"split-expected","frontier":true}
// plus an optional "comparison" key ("magnitude"|"signed").
void to_json(nlohmann::json& j, const GameConfig& config);
void from_json(const nlohmann::json& j, GameConfig& config);

enum class RoundWinner { tie = 0, player1 = 1, player2 = 2 };

struct RoundOutcome {
  double a1 = 0.0;
  double a2 = 0.0;
  RoundWinner winner = RoundWinner::tie;
  std::array<double, 2> payoffs = {0.0, 0.0};
};

// Plays one round on realized errors (a1, a2). The better (smaller-key)
// realization wins reward - a_winner^2, the loser gets 0. Exact ties follow
// config.tie_rule; only random_half consumes the stream, and only on a tie.
RoundOutcome round_payoffs(double a1, double a2, const GameConfig& config,
                           RandomStream& stream);

// Expected utility of a single player drawing from the strategy, with
// benefit 1: returns 1 - mu^2 - sigma^2.
double one_player_utility(const Strategy& strategy);

// Individual rationality: mu^2 + sigma^2 <= 1, with a small slack so that
// frontier strategies whose sigma was derived in floating point qualify.
bool is_ir(const Strategy& strategy);

inline constexpr double kIrSlack = 1e-12;

}  // namespace bvg
