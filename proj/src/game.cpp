#include "bvg/game.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

namespace bvg {
namespace {

const char* tie_rule_name(TieRule rule) {
  return rule == TieRule::random_half ? "random-half" : "split-expected";
}

TieRule tie_rule_from_name(const std::string& name) {
  if (name == "random-half") return TieRule::random_half;
  if (name == "split-expected") return TieRule::split_expected;
  throw std::invalid_argument(
      "unknown tie_rule '" + name + "'; valid: random-half split-expected");
}

const char* comparison_name(ErrorComparison c) {
  return c == ErrorComparison::magnitude ? "magnitude" : "signed";
}

ErrorComparison comparison_from_name(const std::string& name) {
  if (name == "magnitude") return ErrorComparison::magnitude;
  if (name == "signed") return ErrorComparison::signed_value;
  throw std::invalid_argument("unknown comparison '" + name +
                              "'; valid: magnitude signed");
}

}  // namespace

void to_json(nlohmann::json& j, const GameConfig& config) {
  j = nlohmann::json{{"reward", config.reward},
                     {"tie_rule", tie_rule_name(config.tie_rule)},
                     {"frontier", config.frontier_constraint},
                     {"comparison", comparison_name(config.comparison)}};
}

void from_json(const nlohmann::json& j, GameConfig& config) {
  config.reward = j.at("reward").get<double>();
  if (!(config.reward > 0.0)) {
    throw std::invalid_argument("GameConfig: reward must be > 0");
  }
  config.tie_rule = tie_rule_from_name(j.at("tie_rule").get<std::string>());
  config.frontier_constraint = j.at("frontier").get<bool>();
  config.comparison =
      j.contains("comparison")
          ? comparison_from_name(j.at("comparison").get<std::string>())
          : ErrorComparison::magnitude;
}

RoundOutcome round_payoffs(double a1, double a2, const GameConfig& config,
                           RandomStream& stream) {
  RoundOutcome out;
  out.a1 = a1;
  out.a2 = a2;
  const bool magnitude = config.comparison == ErrorComparison::magnitude;
  const double k1 = magnitude ? std::fabs(a1) : a1;
  const double k2 = magnitude ? std::fabs(a2) : a2;
  if (k1 < k2) {
    out.winner = RoundWinner::player1;
    out.payoffs = {config.reward - a1 * a1, 0.0};
  } else if (k2 < k1) {
    out.winner = RoundWinner::player2;
    out.payoffs = {0.0, config.reward - a2 * a2};
  } else if (config.tie_rule == TieRule::split_expected) {
    out.winner = RoundWinner::tie;
    out.payoffs = {0.5 * (config.reward - a1 * a1),
                   0.5 * (config.reward - a2 * a2)};
  } else {
    if (stream.next_uniform() < 0.5) {
      out.winner = RoundWinner::player1;
      out.payoffs = {config.reward - a1 * a1, 0.0};
    } else {
      out.winner = RoundWinner::player2;
      out.payoffs = {0.0, config.reward - a2 * a2};
    }
  }
  return out;
}

double one_player_utility(const Strategy& strategy) {
  return 1.0 - strategy.error();
}

bool is_ir(const Strategy& strategy) {
  return strategy.error() <= 1.0 + kIrSlack;
}

}  // namespace bvg
