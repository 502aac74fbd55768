#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "offfsp/game.hpp"
#include "offfsp/policy.hpp"

namespace offfsp {

struct BestResponseResult {
  BehaviorPolicy policy;  // pure best response, defined on every infostate
  double value = 0.0;     // responder's expected payoff vs the opponent
  Player responder = 0;
};

struct NashConvReport {
  double total = 0.0;
  std::array<double, 2> per_player_gain{0.0, 0.0};
};

// Exact expectation by full-tree traversal; payoffs sum to 0.
std::array<double, 2> expected_value(const Game& game,
                                     const StrategyProfile& profile,
                                     Fallback fallback = Fallback::kUniform);

// Single tree pass aggregating counterfactual reach-weighted action values
// per responder infostate, argmax per infostate, ties to the lowest action id.
BestResponseResult best_response(const Game& game,
                                 const BehaviorPolicy& opponent,
                                 Player responder,
                                 Fallback fallback = Fallback::kUniform);

NashConvReport nash_conv(const Game& game, const StrategyProfile& profile,
                         Fallback fallback = Fallback::kUniform);

struct FpCheckpoint {
  int iteration = 0;
  StrategyProfile profile;
};

// Exact fictitious play: best responses to the running average profile mixed
// with alpha_k = 1/k. Returns the average profile at every multiple of
// checkpoint_every plus the final iteration.
std::vector<FpCheckpoint> fp_solve(const Game& game, int iterations,
                                   int checkpoint_every = 1);

// Monte-Carlo estimate of expected_value from sampled episodes; returns the
// per-player mean and the standard error of player 0's mean.
struct MonteCarloValue {
  std::array<double, 2> mean{0.0, 0.0};
  double std_error = 0.0;
};
MonteCarloValue monte_carlo_value(const Game& game,
                                  const StrategyProfile& profile,
                                  int episodes, std::uint64_t seed);

}  // namespace offfsp
