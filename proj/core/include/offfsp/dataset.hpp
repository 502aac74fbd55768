#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "offfsp/game.hpp"
#include "offfsp/policy.hpp"

namespace offfsp {

// One recorded event of an episode: a decision by a player or a chance
// outcome. Decision events carry the acting player's infostate key so the
// per-player projection and the empirical policy need no replay.
struct TrajectoryEvent {
  Player actor = 0;  // kChancePlayer for chance events
  Action action = 0;
  std::string state_key;   // decision events only
  int num_actions = 0;     // decision events only
  double chance_prob = 0;  // chance events only
};

struct ExtensiveTrajectory {
  std::vector<TrajectoryEvent> events;
  std::array<double, 2> returns{0.0, 0.0};
};

struct GameDataset {
  std::string game_name;
  std::vector<std::pair<std::string, int>> game_params;
  std::string recipe;
  std::uint64_t seed = 0;
  std::vector<ExtensiveTrajectory> trajectories;
};

// One decision tuple of a player's projected trajectory. `anchor_event` is
// the index (into the source trajectory's events) of the last opponent
// decision before the player's next state: for the final tuple this is the
// last opponent decision in the whole episode, so the importance weight
// covers every opponent action that influenced the terminal payoff.
struct PlayerTuple {
  std::string state_key;
  Action action = 0;
  int num_actions = 0;
  double reward = 0.0;
  bool terminal = false;      // next state is the absorbing terminal
  std::string next_key;       // empty when terminal
  int num_next_actions = 0;   // 0 when terminal
  int anchor_event = -1;      // -1: no opponent decision in scope
  int source_trajectory = -1;
};

struct PlayerDataset {
  Player owner = 0;
  std::vector<std::vector<PlayerTuple>> trajectories;  // parallel to source

  std::size_t num_tuples() const;
};

struct CoverageReport {
  double terminal_coverage = 0.0;
  double infostate_action_coverage = 0.0;
  std::size_t covered_terminals = 0;
  std::size_t total_terminals = 0;
  std::size_t covered_state_actions = 0;
  std::size_t total_state_actions = 0;
};

// Records one episode played by `profile` (chance sampled by rng).
ExtensiveTrajectory play_episode(const Game& game,
                                 const StrategyProfile& profile,
                                 std::uint64_t episode_seed,
                                 Fallback fallback = Fallback::kUniform);

// n i.i.d. episodes; reproducible given seed. Episode i uses a seed derived
// from (seed, i), so sampling order is irrelevant.
GameDataset sample_dataset(const Game& game, const StrategyProfile& profile,
                           int n_trajectories, std::uint64_t seed);

// Each episode is played entirely by the expert profile with probability
// expert_ratio, otherwise by random_profile.
GameDataset sample_mix_dataset(const Game& game, const StrategyProfile& expert,
                               const StrategyProfile& random_profile,
                               double expert_ratio, int n_trajectories,
                               std::uint64_t seed);

// Each seat's policy is drawn uniformly from the population, independently
// per seat and per episode.
GameDataset sample_population_dataset(const Game& game,
                                      const std::vector<StrategyProfile>& population,
                                      int n_trajectories, std::uint64_t seed);

// Deterministic exact-proportion datasets replicating the RPS example joint
// densities (largest-remainder rounding of expected counts; 1000 episodes).
GameDataset make_rps_d1();
GameDataset make_rps_d2();

// Exact-proportion dataset for an arbitrary game: every terminal history
// appears with count proportional to its probability under `profile`.
// Choosing n as a multiple of the common denominator of the terminal
// probabilities gives a real-equivalence dataset.
GameDataset make_exact_proportion_dataset(const Game& game,
                                          const StrategyProfile& profile,
                                          int n_trajectories,
                                          Fallback fallback = Fallback::kUniform);

// The projection to one player's perspective: the owner's decision events in
// order, with intermediate rewards 0 and the episode return on the final
// tuple.
PlayerDataset project(const GameDataset& d, Player player);

// Counting estimator count(s,a)/count(s) over all decision events.
StrategyProfile empirical_behavior_policy(const GameDataset& d);

CoverageReport coverage_report(const Game& game, const GameDataset& d);

// JSON Lines persistence: a one-line header object then one trajectory per
// line. Loading replays every trajectory through the named game, validating
// actions and recorded returns.
void save(const GameDataset& d, const std::string& path);
GameDataset load(const std::string& path);
void save(const GameDataset& d, std::ostream& out);
GameDataset load(std::istream& in, const std::string& source_name = "<stream>");

void write_coverage_csv(const CoverageReport& report, const std::string& path);

}  // namespace offfsp
