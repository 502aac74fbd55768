#include "offfsp/reweight.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

namespace offfsp {

WeightedPlayerDataset::WeightedPlayerDataset(const PlayerDataset& base,
                                             std::vector<double> weights)
    : base_(&base), weights_(std::move(weights)) {
  tuples_.reserve(weights_.size());
  for (const auto& traj : base.trajectories) {
    for (const auto& tuple : traj) tuples_.push_back(&tuple);
  }
  if (tuples_.size() != weights_.size()) {
    throw std::invalid_argument("weight count does not match tuple count");
  }
  cumulative_.reserve(weights_.size());
  double running = 0.0;
  for (double w : weights_) {
    if (w < 0.0) throw std::invalid_argument("negative tuple weight");
    running += w;
    cumulative_.push_back(running);
  }
  total_weight_ = running;
}

std::vector<const PlayerTuple*> WeightedPlayerDataset::resample_batch(
    int batch_size, std::mt19937_64& rng) const {
  if (batch_size < 1) throw std::invalid_argument("batch_size >= 1");
  if (total_weight_ <= 0.0) {
    throw std::runtime_error(
        "degenerate dataset: all weights zero (target opponent is off the "
        "dataset's support)");
  }
  std::vector<const PlayerTuple*> batch;
  batch.reserve(batch_size);
  std::uniform_real_distribution<double> u(0.0, total_weight_);
  for (int i = 0; i < batch_size; ++i) {
    const auto it =
        std::upper_bound(cumulative_.begin(), cumulative_.end(), u(rng));
    const std::size_t idx = std::min<std::size_t>(
        it - cumulative_.begin(), cumulative_.size() - 1);
    batch.push_back(tuples_[idx]);
  }
  return batch;
}

void WeightedPlayerDataset::dump_weights_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << "trajectory,tuple,weight\n";
  std::size_t flat = 0;
  for (std::size_t t = 0; t < base_->trajectories.size(); ++t) {
    for (std::size_t j = 0; j < base_->trajectories[t].size(); ++j, ++flat) {
      out << t << ',' << j << ',' << weights_[flat] << '\n';
    }
  }
}

double opponent_ratio(const ExtensiveTrajectory& trajectory,
                      const PlayerTuple& tuple,
                      const SequenceForm& target_opponent,
                      const BehaviorPolicy& empirical_opponent, Player owner,
                      double weight_cap) {
  if (tuple.anchor_event < 0) return 1.0;  // no opponent decision in scope
  const Player opponent = 1 - owner;

  // Denominator: the empirical opponent's realization along this trajectory,
  // x_b(s_j) * pi_b(a_j | s_j), accumulated event by event. Chance events
  // cancel between numerator and denominator and contribute nothing.
  double denominator = 1.0;
  const TrajectoryEvent* anchored = nullptr;
  for (int e = 0; e <= tuple.anchor_event; ++e) {
    const auto& event = trajectory.events[e];
    if (event.actor != opponent) continue;
    const auto it = empirical_opponent.table.find(event.state_key);
    if (it == empirical_opponent.table.end() ||
        it->second[event.action] <= 0.0) {
      throw std::logic_error(
          "empirical behavior policy assigns zero probability to an observed "
          "action at '" + event.state_key + "'");
    }
    denominator *= it->second[event.action];
    anchored = &event;
  }
  if (anchored == nullptr) return 1.0;

  // Numerator read directly from the opponent's stored sequence form:
  // stored(s_j, a_j) = x(s_j) * pi(a_j | s_j).
  const auto it = target_opponent.find(anchored->state_key);
  const double numerator =
      it == target_opponent.end() ? 0.0 : it->second[anchored->action];
  return std::min(numerator / denominator, weight_cap);
}

WeightedPlayerDataset generate_data(const GameDataset& d_E,
                                    const PlayerDataset& projection,
                                    Player player,
                                    const SequenceForm& target_opponent,
                                    const BehaviorPolicy& empirical_opponent,
                                    double weight_cap) {
  if (projection.owner != player) {
    throw std::invalid_argument("projection owner does not match player");
  }
  if (projection.trajectories.size() != d_E.trajectories.size()) {
    throw std::invalid_argument("projection does not match source dataset");
  }
  std::vector<double> weights;
  weights.reserve(projection.num_tuples());
  for (std::size_t t = 0; t < projection.trajectories.size(); ++t) {
    for (const auto& tuple : projection.trajectories[t]) {
      weights.push_back(opponent_ratio(d_E.trajectories[t], tuple,
                                       target_opponent, empirical_opponent,
                                       player, weight_cap));
    }
  }
  return WeightedPlayerDataset(projection, std::move(weights));
}

}  // namespace offfsp
