#pragma once

#include <array>
#include <string>
#include <unordered_map>
#include <vector>

#include "offfsp/game.hpp"

namespace offfsp {

using ActionDist = std::vector<double>;

// Table from infostate key to a probability vector over the legal actions of
// that infostate.
struct BehaviorPolicy {
  std::unordered_map<std::string, ActionDist> table;

  bool contains(const std::string& key) const { return table.count(key) > 0; }
};

// One policy per decision-making player.
using StrategyProfile = std::array<BehaviorPolicy, 2>;

// What to do when a policy has no entry for a reachable infostate.
enum class Fallback { kUniform, kStrict };

// Probabilities at `key` with `num_actions` legal actions. Uniform fallback
// fills gaps; strict mode throws std::out_of_range.
ActionDist action_probabilities(const BehaviorPolicy& policy,
                                const std::string& key, int num_actions,
                                Fallback fallback = Fallback::kUniform);

BehaviorPolicy uniform_policy();  // empty table; uniform via fallback

// Product of one player's own action probabilities along an own-action
// prefix. Chance and opponent contributions are excluded by construction.
double realization_plan(
    const BehaviorPolicy& policy,
    const std::vector<std::pair<std::string, Action>>& own_prefix,
    Fallback fallback = Fallback::kUniform);

// Realization-weighted action probabilities x(s) * pi(a|s), keyed by
// infostate. This is the quantity the average-policy store maintains and the
// opponent-reweighting numerator consumes.
using SequenceForm = std::unordered_map<std::string, std::vector<double>>;

// x(s) for every infostate of `player` in the full game tree (including
// infostates the policy never reaches, with value 0).
std::unordered_map<std::string, double> compute_realization_plans(
    const Game& game, const BehaviorPolicy& policy, Player player,
    Fallback fallback = Fallback::kUniform);

// x(s) * pi(a|s) for every (infostate, action) of `player`.
SequenceForm sequence_form_values(const Game& game,
                                  const BehaviorPolicy& policy, Player player,
                                  Fallback fallback = Fallback::kUniform);

// Number of legal actions at every infostate of `player`.
std::unordered_map<std::string, int> enumerate_infostates(const Game& game,
                                                          Player player);

void validate_policy(const BehaviorPolicy& policy, double tol = 1e-9);

}  // namespace offfsp
