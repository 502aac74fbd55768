#include "offfsp/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace offfsp {

namespace {

// Splittable per-episode seed: sampling is reproducible and order-independent.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::size_t PlayerDataset::num_tuples() const {
  std::size_t n = 0;
  for (const auto& t : trajectories) n += t.size();
  return n;
}

ExtensiveTrajectory play_episode(const Game& game,
                                 const StrategyProfile& profile,
                                 std::uint64_t episode_seed,
                                 Fallback fallback) {
  std::mt19937_64 rng(episode_seed);
  ExtensiveTrajectory traj;
  auto state = game.new_initial_state();
  while (!state->is_terminal()) {
    const auto actions = state->legal_actions();
    const Player acting = state->current_player();
    TrajectoryEvent event;
    event.actor = acting;
    std::vector<double> probs;
    if (acting == kChancePlayer) {
      probs = state->chance_probabilities();
    } else {
      event.state_key = state->infostate_key(acting);
      event.num_actions = static_cast<int>(actions.size());
      probs = action_probabilities(profile[acting], event.state_key,
                                   event.num_actions, fallback);
    }
    std::discrete_distribution<int> dist(probs.begin(), probs.end());
    const int pick = dist(rng);
    event.action = actions[pick];
    if (acting == kChancePlayer) event.chance_prob = probs[pick];
    state->apply_action(actions[pick]);
    traj.events.push_back(std::move(event));
  }
  traj.returns = state->returns();
  return traj;
}

GameDataset sample_dataset(const Game& game, const StrategyProfile& profile,
                           int n_trajectories, std::uint64_t seed) {
  if (n_trajectories < 1) {
    throw std::invalid_argument("sample_dataset: n_trajectories >= 1");
  }
  GameDataset d;
  d.game_name = game.name();
  d.game_params = game.params();
  d.recipe = "sampled";
  d.seed = seed;
  d.trajectories.reserve(n_trajectories);
  for (int i = 0; i < n_trajectories; ++i) {
    d.trajectories.push_back(play_episode(game, profile, mix_seed(seed, i)));
  }
  return d;
}

GameDataset sample_mix_dataset(const Game& game, const StrategyProfile& expert,
                               const StrategyProfile& random_profile,
                               double expert_ratio, int n_trajectories,
                               std::uint64_t seed) {
  if (expert_ratio < 0.0 || expert_ratio > 1.0) {
    throw std::invalid_argument("sample_mix_dataset: ratio in [0, 1]");
  }
  GameDataset d;
  d.game_name = game.name();
  d.game_params = game.params();
  d.recipe = "mix:" + std::to_string(expert_ratio);
  d.seed = seed;
  d.trajectories.reserve(n_trajectories);
  for (int i = 0; i < n_trajectories; ++i) {
    const std::uint64_t episode_seed = mix_seed(seed, i);
    std::mt19937_64 pick(mix_seed(episode_seed, 0));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const auto& profile = u(pick) < expert_ratio ? expert : random_profile;
    d.trajectories.push_back(
        play_episode(game, profile, mix_seed(episode_seed, 1)));
  }
  return d;
}

GameDataset sample_population_dataset(
    const Game& game, const std::vector<StrategyProfile>& population,
    int n_trajectories, std::uint64_t seed) {
  if (population.empty()) {
    throw std::invalid_argument("sample_population_dataset: empty population");
  }
  GameDataset d;
  d.game_name = game.name();
  d.game_params = game.params();
  d.recipe = "population:" + std::to_string(population.size());
  d.seed = seed;
  d.trajectories.reserve(n_trajectories);
  for (int i = 0; i < n_trajectories; ++i) {
    const std::uint64_t episode_seed = mix_seed(seed, i);
    std::mt19937_64 pick(mix_seed(episode_seed, 0));
    std::uniform_int_distribution<std::size_t> u(0, population.size() - 1);
    // Each seat draws its policy independently: unpaired opponents.
    StrategyProfile seats{population[u(pick)][0], population[u(pick)][1]};
    d.trajectories.push_back(
        play_episode(game, seats, mix_seed(episode_seed, 1)));
  }
  return d;
}

namespace {

void enumerate_terminals(const State& state, const StrategyProfile& profile,
                         Fallback fallback, double prob,
                         std::vector<Action>& actions_so_far,
                         std::vector<std::pair<std::vector<Action>, double>>& out) {
  if (state.is_terminal()) {
    out.emplace_back(actions_so_far, prob);
    return;
  }
  const auto actions = state.legal_actions();
  const Player acting = state.current_player();
  std::vector<double> probs;
  if (acting == kChancePlayer) {
    probs = state.chance_probabilities();
  } else {
    probs = action_probabilities(profile[acting], state.infostate_key(acting),
                                 static_cast<int>(actions.size()), fallback);
  }
  for (Action a : actions) {
    actions_so_far.push_back(a);
    enumerate_terminals(*child(state, a), profile, fallback, prob * probs[a],
                        actions_so_far, out);
    actions_so_far.pop_back();
  }
}

ExtensiveTrajectory replay(const Game& game, const std::vector<Action>& actions,
                           const std::array<double, 2>* expected_returns) {
  ExtensiveTrajectory traj;
  auto state = game.new_initial_state();
  for (Action a : actions) {
    if (state->is_terminal()) {
      throw std::runtime_error("trajectory continues past a terminal state");
    }
    const auto legal = state->legal_actions();
    if (a < 0 || a >= static_cast<int>(legal.size())) {
      throw std::runtime_error("trajectory action " + std::to_string(a) +
                               " out of range");
    }
    TrajectoryEvent event;
    event.actor = state->current_player();
    event.action = a;
    if (event.actor == kChancePlayer) {
      event.chance_prob = state->chance_probabilities()[a];
    } else {
      event.state_key = state->infostate_key(event.actor);
      event.num_actions = static_cast<int>(legal.size());
    }
    state->apply_action(legal[a]);
    traj.events.push_back(std::move(event));
  }
  if (!state->is_terminal()) {
    throw std::runtime_error("trajectory ends before a terminal state");
  }
  traj.returns = state->returns();
  if (expected_returns) {
    for (int p = 0; p < 2; ++p) {
      if (std::abs(traj.returns[p] - (*expected_returns)[p]) > 1e-9) {
        throw std::runtime_error(
            "recorded returns do not match replay: expected " +
            std::to_string((*expected_returns)[p]) + ", replayed " +
            std::to_string(traj.returns[p]));
      }
    }
  }
  return traj;
}

}  // namespace

GameDataset make_exact_proportion_dataset(const Game& game,
                                          const StrategyProfile& profile,
                                          int n_trajectories,
                                          Fallback fallback) {
  std::vector<std::pair<std::vector<Action>, double>> terminals;
  std::vector<Action> scratch;
  enumerate_terminals(*game.new_initial_state(), profile, fallback, 1.0,
                      scratch, terminals);

  // Largest-remainder rounding of expected counts.
  std::vector<int> counts(terminals.size());
  std::vector<std::pair<double, std::size_t>> remainders;
  long long assigned = 0;
  for (std::size_t i = 0; i < terminals.size(); ++i) {
    const double expected = terminals[i].second * n_trajectories;
    counts[i] = static_cast<int>(std::floor(expected + 1e-9));
    assigned += counts[i];
    remainders.emplace_back(expected - counts[i], i);
  }
  std::sort(remainders.begin(), remainders.end(),
            [](const auto& a, const auto& b) {
              if (a.first != b.first) return a.first > b.first;
              return a.second < b.second;
            });
  for (std::size_t j = 0; assigned < n_trajectories; ++j, ++assigned) {
    ++counts[remainders[j % remainders.size()].second];
  }

  GameDataset d;
  d.game_name = game.name();
  d.game_params = game.params();
  d.recipe = "exact_proportion";
  d.seed = 0;
  d.trajectories.reserve(n_trajectories);
  for (std::size_t i = 0; i < terminals.size(); ++i) {
    if (counts[i] == 0) continue;
    const ExtensiveTrajectory traj = replay(game, terminals[i].first, nullptr);
    for (int c = 0; c < counts[i]; ++c) d.trajectories.push_back(traj);
  }
  return d;
}

GameDataset make_rps_d1() {
  const auto game = make_game("rps");
  BehaviorPolicy p;
  p.table["rps:p0"] = {0.6, 0.2, 0.2};
  BehaviorPolicy q;
  q.table["rps:p1"] = {0.6, 0.2, 0.2};
  auto d = make_exact_proportion_dataset(*game, {p, q}, 1000);
  d.recipe = "d1";
  return d;
}

GameDataset make_rps_d2() {
  // Joint counts out of 1000 episodes, rows player 0 (R, P, S), columns
  // player 1 (R, P, S, Rock2). The only covered Rock2 cell is
  // (Scissors, Rock2); (Rock, Rock2) and (Paper, Rock2) are absent.
  static constexpr int kCounts[3][4] = {
      {200, 100, 50, 0},
      {100, 100, 100, 0},
      {100, 100, 100, 50},
  };
  const auto game = make_game("rps_asym");
  GameDataset d;
  d.game_name = game->name();
  d.recipe = "d2";
  d.seed = 0;
  for (int a0 = 0; a0 < 3; ++a0) {
    for (int a1 = 0; a1 < 4; ++a1) {
      if (kCounts[a0][a1] == 0) continue;
      const ExtensiveTrajectory traj = replay(*game, {a0, a1}, nullptr);
      for (int c = 0; c < kCounts[a0][a1]; ++c) d.trajectories.push_back(traj);
    }
  }
  return d;
}

PlayerDataset project(const GameDataset& d, Player player) {
  if (player != 0 && player != 1) {
    throw std::invalid_argument("project: player must be 0 or 1");
  }
  PlayerDataset out;
  out.owner = player;
  out.trajectories.reserve(d.trajectories.size());
  for (std::size_t t = 0; t < d.trajectories.size(); ++t) {
    const auto& traj = d.trajectories[t];
    std::vector<int> own;
    int last_opp = -1;
    std::vector<int> last_opp_before(traj.events.size() + 1, -1);
    for (std::size_t e = 0; e < traj.events.size(); ++e) {
      last_opp_before[e] = last_opp;
      if (traj.events[e].actor == 1 - player) last_opp = static_cast<int>(e);
      if (traj.events[e].actor == player) own.push_back(static_cast<int>(e));
    }
    last_opp_before[traj.events.size()] = last_opp;

    std::vector<PlayerTuple> tuples;
    tuples.reserve(own.size());
    for (std::size_t j = 0; j < own.size(); ++j) {
      const auto& e = traj.events[own[j]];
      PlayerTuple tuple;
      tuple.state_key = e.state_key;
      tuple.action = e.action;
      tuple.num_actions = e.num_actions;
      tuple.source_trajectory = static_cast<int>(t);
      if (j + 1 < own.size()) {
        const auto& next = traj.events[own[j + 1]];
        tuple.next_key = next.state_key;
        tuple.num_next_actions = next.num_actions;
        tuple.anchor_event = last_opp_before[own[j + 1]];
      } else {
        tuple.terminal = true;
        tuple.reward = traj.returns[player];
        // Terminal anchor: the last opponent decision of the whole episode,
        // so the weight covers every opponent action behind the payoff.
        tuple.anchor_event = last_opp;
      }
      tuples.push_back(std::move(tuple));
    }
    out.trajectories.push_back(std::move(tuples));
  }
  return out;
}

StrategyProfile empirical_behavior_policy(const GameDataset& d) {
  std::array<std::unordered_map<std::string, std::vector<double>>, 2> counts;
  for (const auto& traj : d.trajectories) {
    for (const auto& e : traj.events) {
      if (e.actor == kChancePlayer) continue;
      auto& row = counts[e.actor][e.state_key];
      if (row.empty()) row.assign(e.num_actions, 0.0);
      row[e.action] += 1.0;
    }
  }
  StrategyProfile profile;
  for (Player p = 0; p < 2; ++p) {
    for (auto& [key, row] : counts[p]) {
      const double total = std::accumulate(row.begin(), row.end(), 0.0);
      for (double& c : row) c /= total;
      profile[p].table.emplace(key, std::move(row));
    }
  }
  return profile;
}

namespace {

void coverage_walk(const State& state, std::vector<Action>& actions_so_far,
                   std::set<std::vector<Action>>& terminals,
                   std::set<std::pair<std::string, Action>>& state_actions) {
  if (state.is_terminal()) {
    terminals.insert(actions_so_far);
    return;
  }
  const auto actions = state.legal_actions();
  const Player acting = state.current_player();
  for (Action a : actions) {
    if (acting != kChancePlayer) {
      state_actions.emplace(state.infostate_key(acting), a);
    }
    actions_so_far.push_back(a);
    coverage_walk(*child(state, a), actions_so_far, terminals, state_actions);
    actions_so_far.pop_back();
  }
}

}  // namespace

CoverageReport coverage_report(const Game& game, const GameDataset& d) {
  std::set<std::vector<Action>> all_terminals;
  std::set<std::pair<std::string, Action>> all_state_actions;
  std::vector<Action> scratch;
  coverage_walk(*game.new_initial_state(), scratch, all_terminals,
                all_state_actions);

  std::set<std::vector<Action>> seen_terminals;
  std::set<std::pair<std::string, Action>> seen_state_actions;
  for (const auto& traj : d.trajectories) {
    std::vector<Action> actions;
    actions.reserve(traj.events.size());
    for (const auto& e : traj.events) {
      if (e.actor != kChancePlayer) {
        seen_state_actions.emplace(e.state_key, e.action);
      }
      actions.push_back(e.action);
    }
    seen_terminals.insert(std::move(actions));
  }

  CoverageReport report;
  report.total_terminals = all_terminals.size();
  report.covered_terminals = seen_terminals.size();
  report.total_state_actions = all_state_actions.size();
  report.covered_state_actions = seen_state_actions.size();
  report.terminal_coverage =
      all_terminals.empty()
          ? 0.0
          : static_cast<double>(seen_terminals.size()) / all_terminals.size();
  report.infostate_action_coverage =
      all_state_actions.empty()
          ? 0.0
          : static_cast<double>(seen_state_actions.size()) /
                all_state_actions.size();
  return report;
}

void save(const GameDataset& d, std::ostream& out) {
  nlohmann::json header;
  header["format"] = 1;
  header["game"] = d.game_name;
  header["params"] = nlohmann::json::object();
  for (const auto& [k, v] : d.game_params) header["params"][k] = v;
  header["seed"] = d.seed;
  header["recipe"] = d.recipe;
  header["n"] = d.trajectories.size();
  out << header.dump() << '\n';
  for (const auto& traj : d.trajectories) {
    nlohmann::json line;
    auto& actions = line["a"] = nlohmann::json::array();
    for (const auto& e : traj.events) actions.push_back(e.action);
    line["r"] = {traj.returns[0], traj.returns[1]};
    out << line.dump() << '\n';
  }
}

void save(const GameDataset& d, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  save(d, out);
}

GameDataset load(std::istream& in, const std::string& source_name) {
  std::string line;
  int line_no = 0;
  auto parse_line = [&](const std::string& text) {
    try {
      return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& err) {
      throw std::runtime_error(source_name + ":" + std::to_string(line_no) +
                               ": " + err.what());
    }
  };

  if (!std::getline(in, line)) {
    throw std::runtime_error(source_name + ": empty dataset file");
  }
  ++line_no;
  const nlohmann::json header = parse_line(line);
  if (!header.contains("format") || header["format"] != 1) {
    throw std::runtime_error(source_name + ":1: unsupported dataset format");
  }
  GameDataset d;
  d.game_name = header.at("game").get<std::string>();
  for (const auto& [k, v] : header.at("params").items()) {
    d.game_params.emplace_back(k, v.get<int>());
  }
  d.seed = header.value("seed", 0ULL);
  d.recipe = header.value("recipe", "");
  const std::size_t expected_n = header.value("n", 0ULL);

  const auto game = make_game(d.game_name, d.game_params);
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const nlohmann::json entry = parse_line(line);
    try {
      const std::vector<Action> actions =
          entry.at("a").get<std::vector<Action>>();
      const std::array<double, 2> returns{entry.at("r")[0].get<double>(),
                                          entry.at("r")[1].get<double>()};
      d.trajectories.push_back(replay(*game, actions, &returns));
    } catch (const std::exception& err) {
      throw std::runtime_error(source_name + ":" + std::to_string(line_no) +
                               ": " + err.what());
    }
  }
  if (expected_n != 0 && d.trajectories.size() != expected_n) {
    throw std::runtime_error(source_name + ": header announces " +
                             std::to_string(expected_n) + " trajectories, " +
                             "found " + std::to_string(d.trajectories.size()));
  }
  return d;
}

GameDataset load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return load(in, path);
}

void write_coverage_csv(const CoverageReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << "metric,value\n";
  out << "terminal_coverage," << report.terminal_coverage << '\n';
  out << "infostate_action_coverage," << report.infostate_action_coverage
      << '\n';
  out << "covered_terminals," << report.covered_terminals << '\n';
  out << "total_terminals," << report.total_terminals << '\n';
  out << "covered_state_actions," << report.covered_state_actions << '\n';
  out << "total_state_actions," << report.total_state_actions << '\n';
}

}  // namespace offfsp
