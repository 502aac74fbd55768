#include "offfsp/game.hpp"

#include <sstream>
#include <stdexcept>

#include "games_internal.hpp"

namespace offfsp {

std::vector<double> State::chance_probabilities() const {
  throw std::logic_error("chance_probabilities called at a non-chance node");
}

void State::check_non_terminal() const {
  if (is_terminal()) {
    throw std::logic_error("operation requires a non-terminal state");
  }
}

void State::check_legal(Action action, const std::string& where) const {
  const auto legal = legal_actions();
  if (action < 0 || action >= static_cast<int>(legal.size())) {
    std::ostringstream msg;
    msg << "illegal action " << action << " at " << where << " ("
        << legal.size() << " legal actions)";
    throw std::invalid_argument(msg.str());
  }
}

std::unique_ptr<State> child(const State& state, Action action) {
  auto next = state.clone();
  next->apply_action(action);
  return next;
}

namespace {

int param_or(const std::vector<std::pair<std::string, int>>& params,
             const std::string& key, int fallback) {
  for (const auto& [k, v] : params) {
    if (k == key) return v;
  }
  return fallback;
}

void check_known_keys(const std::string& game,
                      const std::vector<std::pair<std::string, int>>& params,
                      const std::vector<std::string>& known) {
  for (const auto& [k, v] : params) {
    bool ok = false;
    for (const auto& name : known) ok = ok || name == k;
    if (!ok) {
      throw std::invalid_argument("unknown parameter '" + k + "' for game '" +
                                  game + "'");
    }
  }
}

}  // namespace

GamePtr make_game(const std::string& name,
                  const std::vector<std::pair<std::string, int>>& params) {
  if (name == "rps") {
    check_known_keys(name, params, {});
    return make_rps_game(/*asymmetric=*/false);
  }
  if (name == "rps_asym") {
    check_known_keys(name, params, {});
    return make_rps_game(/*asymmetric=*/true);
  }
  if (name == "kuhn") {
    check_known_keys(name, params, {});
    return make_kuhn_game();
  }
  if (name == "large_kuhn") {
    check_known_keys(name, params, {"ante", "raise_window"});
    return make_large_kuhn_game(param_or(params, "ante", 5),
                                param_or(params, "raise_window", 8));
  }
  if (name == "leduc") {
    check_known_keys(name, params, {});
    return make_leduc_game();
  }
  if (name == "oshi_zumo") {
    check_known_keys(name, params, {"coins", "board", "horizon"});
    return make_oshi_zumo_game(param_or(params, "coins", 4),
                               param_or(params, "board", 3),
                               param_or(params, "horizon", 6));
  }
  throw std::invalid_argument(
      "unknown game '" + name +
      "'; supported: rps, rps_asym, kuhn, large_kuhn, leduc, oshi_zumo");
}

}  // namespace offfsp
