#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "offfsp/dataset.hpp"
#include "offfsp/policy.hpp"

namespace offfsp {

// A player dataset annotated with per-tuple opponent importance weights.
// Weights are stored flat in tuple order; `base` is shared, never copied.
class WeightedPlayerDataset {
 public:
  WeightedPlayerDataset(const PlayerDataset& base, std::vector<double> weights);

  const PlayerDataset& base() const { return *base_; }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<const PlayerTuple*>& tuples() const { return tuples_; }
  double total_weight() const { return total_weight_; }

  // i.i.d. draws with replacement, probability w / sum(w) each (cumulative
  // table + binary search). Throws std::runtime_error when sum(w) == 0: the
  // target opponent is entirely off the dataset's support.
  std::vector<const PlayerTuple*> resample_batch(int batch_size,
                                                 std::mt19937_64& rng) const;

  void dump_weights_csv(const std::string& path) const;

 private:
  const PlayerDataset* base_;
  std::vector<const PlayerTuple*> tuples_;
  std::vector<double> weights_;
  std::vector<double> cumulative_;
  double total_weight_ = 0.0;
};

// The Theorem-1 weight for one tuple: the cumulative product, over the
// opponent decision events of `trajectory` up to the tuple's anchored state,
// of target probability / empirical behavior probability. Chance events
// cancel and contribute 1. The numerator is read as the opponent's stored
// sequence-form value x(s) * pi(a|s) at the anchored (state, action).
double opponent_ratio(const ExtensiveTrajectory& trajectory,
                      const PlayerTuple& tuple,
                      const SequenceForm& target_opponent,
                      const BehaviorPolicy& empirical_opponent, Player owner,
                      double weight_cap =
                          std::numeric_limits<double>::infinity());

// GenerateData: annotates the projection of d_E for `player` with weights
// that emulate play against the opponent described by `target_opponent`.
WeightedPlayerDataset generate_data(const GameDataset& d_E,
                                    const PlayerDataset& projection,
                                    Player player,
                                    const SequenceForm& target_opponent,
                                    const BehaviorPolicy& empirical_opponent,
                                    double weight_cap =
                                        std::numeric_limits<double>::infinity());

}  // namespace offfsp
