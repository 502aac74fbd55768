#include "offfsp/exact_solver.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "offfsp/off_fsp.hpp"

namespace offfsp {

namespace {

void expected_value_walk(const State& state, const StrategyProfile& profile,
                         Fallback fallback, double reach,
                         std::array<double, 2>& acc) {
  if (reach == 0.0) return;
  if (state.is_terminal()) {
    const auto r = state.returns();
    acc[0] += reach * r[0];
    acc[1] += reach * r[1];
    return;
  }
  const auto actions = state.legal_actions();
  const Player acting = state.current_player();
  if (acting == kChancePlayer) {
    const auto probs = state.chance_probabilities();
    for (Action a : actions) {
      expected_value_walk(*child(state, a), profile, fallback,
                          reach * probs[a], acc);
    }
    return;
  }
  const ActionDist probs =
      action_probabilities(profile[acting], state.infostate_key(acting),
                           static_cast<int>(actions.size()), fallback);
  for (Action a : actions) {
    expected_value_walk(*child(state, a), profile, fallback, reach * probs[a],
                        acc);
  }
}

}  // namespace

std::array<double, 2> expected_value(const Game& game,
                                     const StrategyProfile& profile,
                                     Fallback fallback) {
  std::array<double, 2> acc{0.0, 0.0};
  expected_value_walk(*game.new_initial_state(), profile, fallback, 1.0, acc);
  return acc;
}

namespace {

// Per responder infostate: counterfactual reach-weighted action values.
// `values` accumulates terminal contributions during the tree pass and child
// infostate values during the bottom-up pass. Perfect recall gives every
// infostate a unique own-action predecessor.
struct InfoSetAgg {
  int num_actions = 0;
  int depth = 0;
  std::string parent_key;
  int parent_action = -1;
  std::vector<double> values;
};

struct BrContext {
  const BehaviorPolicy* opponent;
  Player responder;
  Fallback fallback;
  std::unordered_map<std::string, InfoSetAgg> infosets;
  double root_value = 0.0;  // terminals with no responder decision on path
};

void br_walk(const State& state, BrContext& ctx, double cf_reach,
             const std::string& parent_key, int parent_action, int depth) {
  if (state.is_terminal()) {
    const double v = cf_reach * state.returns()[ctx.responder];
    if (parent_action < 0) {
      ctx.root_value += v;
    } else {
      ctx.infosets.at(parent_key).values[parent_action] += v;
    }
    return;
  }
  const auto actions = state.legal_actions();
  const Player acting = state.current_player();
  if (acting == ctx.responder) {
    const std::string key = state.infostate_key(acting);
    auto [it, inserted] = ctx.infosets.try_emplace(key);
    InfoSetAgg& node = it->second;
    if (inserted) {
      node.num_actions = static_cast<int>(actions.size());
      node.depth = depth;
      node.parent_key = parent_key;
      node.parent_action = parent_action;
      node.values.assign(actions.size(), 0.0);
    } else if (node.parent_key != parent_key ||
               node.parent_action != parent_action) {
      throw std::logic_error("perfect recall violated at infostate '" + key +
                             "'");
    }
    for (Action a : actions) {
      br_walk(*child(state, a), ctx, cf_reach, key, a, depth + 1);
    }
    return;
  }
  std::vector<double> probs;
  if (acting == kChancePlayer) {
    probs = state.chance_probabilities();
  } else {
    probs = action_probabilities(*ctx.opponent, state.infostate_key(acting),
                                 static_cast<int>(actions.size()),
                                 ctx.fallback);
  }
  for (Action a : actions) {
    // Zero-probability branches are still walked so the best-response policy
    // covers every responder infostate.
    br_walk(*child(state, a), ctx, cf_reach * probs[a], parent_key,
            parent_action, depth);
  }
}

}  // namespace

BestResponseResult best_response(const Game& game,
                                 const BehaviorPolicy& opponent,
                                 Player responder, Fallback fallback) {
  BrContext ctx;
  ctx.opponent = &opponent;
  ctx.responder = responder;
  ctx.fallback = fallback;
  br_walk(*game.new_initial_state(), ctx, 1.0, "", -1, 0);

  std::vector<const std::string*> order;
  order.reserve(ctx.infosets.size());
  for (const auto& [key, node] : ctx.infosets) order.push_back(&key);
  std::sort(order.begin(), order.end(),
            [&](const std::string* a, const std::string* b) {
              return ctx.infosets.at(*a).depth > ctx.infosets.at(*b).depth;
            });

  BestResponseResult result;
  result.responder = responder;
  for (const std::string* key : order) {
    InfoSetAgg& node = ctx.infosets.at(*key);
    int best = 0;
    for (int a = 1; a < node.num_actions; ++a) {
      if (node.values[a] > node.values[best]) best = a;
    }
    ActionDist pure(node.num_actions, 0.0);
    pure[best] = 1.0;
    result.policy.table.emplace(*key, std::move(pure));
    const double value = node.values[best];
    if (node.parent_action < 0) {
      ctx.root_value += value;
    } else {
      ctx.infosets.at(node.parent_key).values[node.parent_action] += value;
    }
  }
  result.value = ctx.root_value;
  return result;
}

NashConvReport nash_conv(const Game& game, const StrategyProfile& profile,
                         Fallback fallback) {
  const auto ev = expected_value(game, profile, fallback);
  NashConvReport report;
  for (Player p = 0; p < 2; ++p) {
    const auto br = best_response(game, profile[1 - p], p, fallback);
    report.per_player_gain[p] = br.value - ev[p];
  }
  report.total = report.per_player_gain[0] + report.per_player_gain[1];
  return report;
}

std::vector<FpCheckpoint> fp_solve(const Game& game, int iterations,
                                   int checkpoint_every) {
  if (iterations < 1) throw std::invalid_argument("fp_solve: iterations >= 1");
  if (checkpoint_every < 1) {
    throw std::invalid_argument("fp_solve: checkpoint_every >= 1");
  }
  AveragePolicyStore store;
  std::vector<FpCheckpoint> checkpoints;
  for (int k = 1; k <= iterations; ++k) {
    const StrategyProfile average = behavior_from_store(store);
    std::array<BehaviorPolicy, 2> responses;
    for (Player p = 0; p < 2; ++p) {
      responses[p] = best_response(game, average[1 - p], p).policy;
    }
    for (Player p = 0; p < 2; ++p) {
      update_average_policy(game, store, p, responses[p], k);
    }
    if (k % checkpoint_every == 0 || k == iterations) {
      checkpoints.push_back({k, behavior_from_store(store)});
    }
  }
  return checkpoints;
}

MonteCarloValue monte_carlo_value(const Game& game,
                                  const StrategyProfile& profile, int episodes,
                                  std::uint64_t seed) {
  if (episodes < 1) throw std::invalid_argument("episodes >= 1");
  std::mt19937_64 rng(seed);
  double sum = 0.0, sum_sq = 0.0, sum1 = 0.0;
  for (int e = 0; e < episodes; ++e) {
    auto state = game.new_initial_state();
    while (!state->is_terminal()) {
      const auto actions = state->legal_actions();
      const Player acting = state->current_player();
      std::vector<double> probs;
      if (acting == kChancePlayer) {
        probs = state->chance_probabilities();
      } else {
        probs = action_probabilities(profile[acting],
                                     state->infostate_key(acting),
                                     static_cast<int>(actions.size()));
      }
      std::discrete_distribution<int> dist(probs.begin(), probs.end());
      state->apply_action(actions[dist(rng)]);
    }
    const auto r = state->returns();
    sum += r[0];
    sum1 += r[1];
    sum_sq += r[0] * r[0];
  }
  MonteCarloValue out;
  out.mean = {sum / episodes, sum1 / episodes};
  const double var =
      std::max(0.0, sum_sq / episodes - out.mean[0] * out.mean[0]);
  out.std_error = std::sqrt(var / episodes);
  return out;
}

}  // namespace offfsp
