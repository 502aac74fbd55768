// Rock-Paper-Scissors, sequentialized: player 0 acts, then player 1 acts
// without observing player 0's move. The asymmetric variant gives player 1 a
// fourth action, Rock2, with the same payoff as Rock.
//
// Action ordering: 0 = Rock, 1 = Paper, 2 = Scissors, 3 = Rock2 (player 1,
// asymmetric variant only).

#include <stdexcept>

#include "games_internal.hpp"

namespace offfsp {
namespace {

// +1 if a0 beats a1 from player 0's perspective. Rock2 (3) plays as Rock.
int rps_outcome(int a0, int a1) {
  if (a1 == 3) a1 = 0;
  if (a0 == a1) return 0;
  // Rock beats Scissors, Scissors beats Paper, Paper beats Rock.
  return ((a0 + 2) % 3 == a1) ? 1 : -1;
}

class RpsState : public State {
 public:
  explicit RpsState(bool asymmetric) : asymmetric_(asymmetric) {}

  bool is_terminal() const override { return history().size() == 2; }

  Player current_player() const override {
    check_non_terminal();
    return static_cast<Player>(history().size());
  }

  std::vector<Action> legal_actions() const override {
    check_non_terminal();
    const int n = (asymmetric_ && history().size() == 1) ? 4 : 3;
    std::vector<Action> actions(n);
    for (int i = 0; i < n; ++i) actions[i] = i;
    return actions;
  }

  void apply_action(Action action) override {
    check_legal(action, infostate_key(current_player()));
    record_action(action);
  }

  std::array<double, 2> returns() const override {
    if (!is_terminal()) throw std::logic_error("returns at non-terminal state");
    const double r0 = rps_outcome(history()[0], history()[1]);
    return {r0, -r0};
  }

  std::string infostate_key(Player player) const override {
    // Neither player observes anything before acting.
    return (asymmetric_ ? "rps_asym:p" : "rps:p") + std::to_string(player);
  }

  std::unique_ptr<State> clone() const override {
    return std::make_unique<RpsState>(*this);
  }

 private:
  bool asymmetric_;
};

class RpsGame : public Game {
 public:
  explicit RpsGame(bool asymmetric) : asymmetric_(asymmetric) {}
  std::string name() const override { return asymmetric_ ? "rps_asym" : "rps"; }
  std::unique_ptr<State> new_initial_state() const override {
    return std::make_unique<RpsState>(asymmetric_);
  }

 private:
  bool asymmetric_;
};

}  // namespace

GamePtr make_rps_game(bool asymmetric) {
  return std::make_shared<RpsGame>(asymmetric);
}

}  // namespace offfsp
