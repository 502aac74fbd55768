// Large Kuhn Poker: Kuhn's 3-card deal with an initial pot (ante) of 5 per
// player and four actions: 0 = Fold, 1 = Check, 2 = Call, 3 = Raise (raise
// adds 1 chip on top of the call amount). Raising is legal only in the first
// `raise_window` betting plies. Fold and Call are legal only when facing a
// raise; Check only when not. Terminal on fold, call, or check-check.

#include <stdexcept>

#include "games_internal.hpp"

namespace offfsp {
namespace {

constexpr char kCardNames[] = {'J', 'Q', 'K'};
constexpr char kActionNames[] = {'f', 'k', 'c', 'r'};

class LargeKuhnState : public State {
 public:
  LargeKuhnState(int ante, int raise_window)
      : ante_(ante), raise_window_(raise_window) {
    commit_[0] = commit_[1] = ante;
  }

  bool is_terminal() const override { return terminal_; }

  Player current_player() const override {
    check_non_terminal();
    if (history().size() < 2) return kChancePlayer;
    return static_cast<Player>(history().size() % 2);
  }

  std::vector<Action> legal_actions() const override {
    check_non_terminal();
    const auto& h = history();
    if (h.size() == 0) return {0, 1, 2};
    if (h.size() == 1) return {0, 1};  // indices into the remaining cards
    std::vector<Action> indices(moves().size());
    for (std::size_t i = 0; i < indices.size(); ++i) indices[i] = i;
    return indices;
  }

  std::vector<double> chance_probabilities() const override {
    if (history().size() >= 2) {
      throw std::logic_error("chance_probabilities at a decision node");
    }
    const int n = history().empty() ? 3 : 2;
    return std::vector<double>(n, 1.0 / n);
  }

  void apply_action(Action action) override {
    const auto& h = history();
    if (h.size() < 2) {
      check_legal(action, "large_kuhn chance");
      if (h.size() == 1) {
        std::vector<Action> remaining;
        for (Action c = 0; c < 3; ++c) {
          if (c != h[0]) remaining.push_back(c);
        }
        record_action(remaining[action]);
      } else {
        record_action(action);
      }
      return;
    }
    const Player p = current_player();
    check_legal(action, infostate_key(p));
    const Action move = moves()[action];
    betting_.push_back(kActionNames[move]);
    switch (move) {
      case 0:  // Fold: opponent takes this player's commitment
        terminal_ = true;
        fold_loser_ = p;
        break;
      case 1:  // Check; a check can only follow nothing or another check
        if (betting_.size() >= 2) terminal_ = true;  // check-check showdown
        break;
      case 2:  // Call
        commit_[p] = commit_[1 - p];
        facing_raise_ = false;
        terminal_ = true;
        break;
      case 3:  // Raise: match then add 1
        commit_[p] = commit_[1 - p] + 1;
        facing_raise_ = true;
        break;
    }
    record_action(action);
  }

  std::array<double, 2> returns() const override {
    if (!terminal_) throw std::logic_error("returns at non-terminal state");
    const auto& h = history();
    double r0;
    if (fold_loser_ >= 0) {
      r0 = fold_loser_ == 0 ? -commit_[0] : commit_[1];
    } else {
      // Equal commitments at showdown; the winner takes the loser's stake.
      r0 = h[0] > h[1] ? commit_[1] : -commit_[0];
    }
    return {r0, -r0};
  }

  std::string infostate_key(Player player) const override {
    std::string key = "large_kuhn:p" + std::to_string(player) + ":";
    key += kCardNames[history()[player]];
    key += ':';
    key += betting_;
    return key;
  }

  std::unique_ptr<State> clone() const override {
    return std::make_unique<LargeKuhnState>(*this);
  }

 private:
  int plies() const { return static_cast<int>(betting_.size()); }

  // Semantic moves at the current decision, in the documented order:
  // facing a raise: Fold, Call (, Raise); otherwise: Check (, Raise).
  std::vector<Action> moves() const {
    std::vector<Action> m =
        facing_raise_ ? std::vector<Action>{0, 2} : std::vector<Action>{1};
    if (plies() < raise_window_) m.push_back(3);
    return m;
  }

  int ante_;
  int raise_window_;
  std::array<int, 2> commit_{0, 0};
  std::string betting_;
  bool facing_raise_ = false;
  bool terminal_ = false;
  int fold_loser_ = -1;
};

class LargeKuhnGame : public Game {
 public:
  LargeKuhnGame(int ante, int raise_window)
      : ante_(ante), raise_window_(raise_window) {
    if (ante < 1 || raise_window < 0) {
      throw std::invalid_argument("large_kuhn: ante >= 1, raise_window >= 0");
    }
  }
  std::string name() const override { return "large_kuhn"; }
  std::unique_ptr<State> new_initial_state() const override {
    return std::make_unique<LargeKuhnState>(ante_, raise_window_);
  }
  std::vector<std::pair<std::string, int>> params() const override {
    return {{"ante", ante_}, {"raise_window", raise_window_}};
  }

 private:
  int ante_;
  int raise_window_;
};

}  // namespace

GamePtr make_large_kuhn_game(int ante, int raise_window) {
  return std::make_shared<LargeKuhnGame>(ante, raise_window);
}

}  // namespace offfsp
