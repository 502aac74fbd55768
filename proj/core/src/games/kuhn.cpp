// Kuhn Poker: 3 cards (J=0, Q=1, K=2), one card each, ante 1.
// Betting actions: 0 = pass (check, or fold facing a bet), 1 = bet (bet 1,
// or call facing a bet). Chance deals player 0's card then player 1's.

#include <stdexcept>

#include "games_internal.hpp"

namespace offfsp {
namespace {

constexpr char kCardNames[] = {'J', 'Q', 'K'};

class KuhnState : public State {
 public:
  bool is_terminal() const override {
    const auto& h = history();
    if (h.size() < 4) return false;
    // Betting history starts at index 2: pp, pbp, pbb, bp, bb.
    const std::size_t n = h.size() - 2;
    if (n == 2) return h[2] == 1 || h[3] == h[2];  // bet answered or pass-pass
    return n == 3;
  }

  Player current_player() const override {
    check_non_terminal();
    const auto& h = history();
    if (h.size() < 2) return kChancePlayer;
    return static_cast<Player>(h.size() % 2);
  }

  std::vector<Action> legal_actions() const override {
    check_non_terminal();
    const auto& h = history();
    if (h.size() == 0) return {0, 1, 2};
    if (h.size() == 1) return {0, 1};  // indices into the remaining cards
    return {0, 1};
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
    const std::string where =
        h.size() < 2 ? "kuhn chance" : infostate_key(current_player());
    check_legal(action, where);
    if (h.size() == 1) {
      // The deal action indexes the remaining cards; record the actual card
      // so history()[0..1] are the dealt cards.
      std::vector<Action> remaining;
      for (Action c = 0; c < 3; ++c) {
        if (c != h[0]) remaining.push_back(c);
      }
      record_action(remaining[action]);
    } else {
      record_action(action);
    }
  }

  std::array<double, 2> returns() const override {
    if (!is_terminal()) throw std::logic_error("returns at non-terminal state");
    const auto& h = history();
    const int c0 = h[0], c1 = h[1];
    const std::size_t n = h.size() - 2;
    const double win = c0 > c1 ? 1.0 : -1.0;  // showdown sign for player 0
    double r0;
    if (n == 2 && h[2] == 0 && h[3] == 0) {
      r0 = win;  // check-check, ante only
    } else if (n == 2 && h[2] == 1 && h[3] == 1) {
      r0 = 2 * win;  // bet-call
    } else if (n == 2 && h[2] == 1 && h[3] == 0) {
      r0 = 1;  // player 1 folds
    } else if (h[3] == 1 && h[4] == 1) {
      r0 = 2 * win;  // check-bet-call
    } else {
      r0 = -1;  // check-bet-fold
    }
    return {r0, -r0};
  }

  std::string infostate_key(Player player) const override {
    const auto& h = history();
    std::string key = "kuhn:p" + std::to_string(player) + ":";
    key += kCardNames[h[player]];
    key += ':';
    for (std::size_t i = 2; i < h.size(); ++i) key += h[i] == 0 ? 'p' : 'b';
    return key;
  }

  std::unique_ptr<State> clone() const override {
    return std::make_unique<KuhnState>(*this);
  }
};

class KuhnGame : public Game {
 public:
  std::string name() const override { return "kuhn"; }
  std::unique_ptr<State> new_initial_state() const override {
    return std::make_unique<KuhnState>();
  }
};

}  // namespace

GamePtr make_kuhn_game() { return std::make_shared<KuhnGame>(); }

}  // namespace offfsp
