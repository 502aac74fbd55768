#include "offfsp/policy.hpp"

#include <cmath>
#include <stdexcept>

namespace offfsp {

ActionDist action_probabilities(const BehaviorPolicy& policy,
                                const std::string& key, int num_actions,
                                Fallback fallback) {
  auto it = policy.table.find(key);
  if (it == policy.table.end()) {
    if (fallback == Fallback::kStrict) {
      throw std::out_of_range("policy has no entry for infostate '" + key +
                              "'");
    }
    return ActionDist(num_actions, 1.0 / num_actions);
  }
  if (static_cast<int>(it->second.size()) != num_actions) {
    throw std::invalid_argument("policy entry for '" + key + "' has " +
                                std::to_string(it->second.size()) +
                                " probabilities, expected " +
                                std::to_string(num_actions));
  }
  return it->second;
}

BehaviorPolicy uniform_policy() { return BehaviorPolicy{}; }

double realization_plan(
    const BehaviorPolicy& policy,
    const std::vector<std::pair<std::string, Action>>& own_prefix,
    Fallback fallback) {
  double x = 1.0;
  for (const auto& [key, action] : own_prefix) {
    auto it = policy.table.find(key);
    if (it == policy.table.end()) {
      if (fallback == Fallback::kStrict) {
        throw std::out_of_range("policy has no entry for infostate '" + key +
                                "'");
      }
      // Uniform fallback needs the action count; the prefix does not carry
      // it, so callers that rely on fallback should use
      // compute_realization_plans instead. A bare prefix lookup treats the
      // gap as probability unknown -> refuse.
      throw std::out_of_range(
          "realization_plan: infostate '" + key +
          "' missing from policy; use compute_realization_plans for "
          "fallback-aware plans");
    }
    if (action < 0 || action >= static_cast<int>(it->second.size())) {
      throw std::invalid_argument("realization_plan: action out of range at '" +
                                  key + "'");
    }
    x *= it->second[action];
  }
  return x;
}

namespace {

// DFS accumulating the player's own realization product per infostate. The
// same infostate reached by different histories has the same own prefix
// (perfect recall), so the value is well defined; asserted cheaply here.
void realization_walk(const State& state, const BehaviorPolicy& policy,
                      Player player, Fallback fallback, double own_reach,
                      std::unordered_map<std::string, double>& x,
                      SequenceForm* seq) {
  if (state.is_terminal()) return;
  const auto actions = state.legal_actions();
  const Player acting = state.current_player();
  if (acting == player) {
    const std::string key = state.infostate_key(player);
    auto [it, inserted] = x.emplace(key, own_reach);
    if (!inserted && std::abs(it->second - own_reach) > 1e-12) {
      throw std::logic_error("perfect recall violated at infostate '" + key +
                             "'");
    }
    const ActionDist probs = action_probabilities(
        policy, key, static_cast<int>(actions.size()), fallback);
    if (seq) {
      auto& row = (*seq)[key];
      if (row.empty()) {
        for (double p : probs) row.push_back(own_reach * p);
      }
    }
    for (Action a : actions) {
      realization_walk(*child(state, a), policy, player, fallback,
                       own_reach * probs[a], x, seq);
    }
  } else {
    for (Action a : actions) {
      realization_walk(*child(state, a), policy, player, fallback, own_reach,
                       x, seq);
    }
  }
}

}  // namespace

std::unordered_map<std::string, double> compute_realization_plans(
    const Game& game, const BehaviorPolicy& policy, Player player,
    Fallback fallback) {
  std::unordered_map<std::string, double> x;
  realization_walk(*game.new_initial_state(), policy, player, fallback, 1.0, x,
                   nullptr);
  return x;
}

SequenceForm sequence_form_values(const Game& game,
                                  const BehaviorPolicy& policy, Player player,
                                  Fallback fallback) {
  std::unordered_map<std::string, double> x;
  SequenceForm seq;
  realization_walk(*game.new_initial_state(), policy, player, fallback, 1.0, x,
                   &seq);
  return seq;
}

namespace {

void infostate_walk(const State& state, Player player,
                    std::unordered_map<std::string, int>& out) {
  if (state.is_terminal()) return;
  const auto actions = state.legal_actions();
  if (state.current_player() == player) {
    out.emplace(state.infostate_key(player),
                static_cast<int>(actions.size()));
  }
  for (Action a : actions) infostate_walk(*child(state, a), player, out);
}

}  // namespace

std::unordered_map<std::string, int> enumerate_infostates(const Game& game,
                                                          Player player) {
  std::unordered_map<std::string, int> out;
  infostate_walk(*game.new_initial_state(), player, out);
  return out;
}

void validate_policy(const BehaviorPolicy& policy, double tol) {
  for (const auto& [key, probs] : policy.table) {
    double sum = 0.0;
    for (double p : probs) {
      if (p < 0.0 || !std::isfinite(p)) {
        throw std::invalid_argument("negative or non-finite probability at '" +
                                    key + "'");
      }
      sum += p;
    }
    if (std::abs(sum - 1.0) > tol) {
      throw std::invalid_argument("probabilities at '" + key +
                                  "' sum to " + std::to_string(sum));
    }
  }
}

}  // namespace offfsp
