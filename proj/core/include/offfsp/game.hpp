#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace offfsp {

// Decision-making players are 0 and 1; chance nodes act as kChancePlayer.
using Player = int;
inline constexpr Player kChancePlayer = -1;
inline constexpr int kNumPlayers = 2;

// An action is an index into the legal action list of the state where it is
// applied. The per-game ordering of legal actions is fixed and documented in
// each game's header.
using Action = int;

class Game;

// Full history of one game. States are cheap to clone; apply_action mutates,
// callers that need the predecessor clone first.
class State {
 public:
  virtual ~State() = default;

  virtual bool is_terminal() const = 0;

  // Acting identity at a non-terminal state. Throws std::logic_error at
  // terminal states.
  virtual Player current_player() const = 0;

  // Non-empty ordered list of legal actions, as indices 0..n-1. Throws at
  // terminal states. At chance nodes this lists the chance outcomes.
  virtual std::vector<Action> legal_actions() const = 0;

  // Outcome probabilities at a chance node, aligned with legal_actions().
  virtual std::vector<double> chance_probabilities() const;

  virtual void apply_action(Action action) = 0;

  // Per-player returns at a terminal state; they sum to zero.
  virtual std::array<double, 2> returns() const = 0;

  // Canonical information-state key for a decision-making player. Stable
  // across runs and serialization-safe.
  virtual std::string infostate_key(Player player) const = 0;

  virtual std::unique_ptr<State> clone() const = 0;

  // Sequence of actions applied so far, including chance outcomes. Two states
  // with equal histories in the same game are identical.
  const std::vector<Action>& history() const { return history_; }

 protected:
  void record_action(Action a) { history_.push_back(a); }
  void check_non_terminal() const;
  void check_legal(Action action, const std::string& where) const;

 private:
  std::vector<Action> history_;
};

std::unique_ptr<State> child(const State& state, Action action);

class Game {
 public:
  virtual ~Game() = default;
  virtual std::string name() const = 0;
  virtual std::unique_ptr<State> new_initial_state() const = 0;
  // Game parameters as flat key -> integer pairs (empty for parameterless
  // games); round-trips through dataset headers.
  virtual std::vector<std::pair<std::string, int>> params() const { return {}; }
};

using GamePtr = std::shared_ptr<const Game>;

// Factory for the supported games. Names: rps, rps_asym, kuhn, large_kuhn,
// leduc, oshi_zumo. Unknown names throw std::invalid_argument listing the
// supported set. Omitted params take the per-game defaults.
GamePtr make_game(const std::string& name,
                  const std::vector<std::pair<std::string, int>>& params = {});

}  // namespace offfsp
