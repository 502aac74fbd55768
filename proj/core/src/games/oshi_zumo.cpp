// Oshi-Zumo coin-bidding board game. The wrestler starts at the center of a
// board with positions -board..+board. Each round both players secretly bid
// 0..coins-remaining (sequentialized: player 0 bids first, player 1 bids
// without observing it; bids become public when the round resolves). Both
// bids are paid. The higher bid pushes the wrestler one step toward the
// opponent's edge (player 0 pushes toward +board); ties leave it in place.
// The game ends when the wrestler is pushed past an edge or after `horizon`
// rounds; the winner is the side the wrestler is on (0 at the center).
//
// Action ordering: action id b bids b coins.

#include <stdexcept>

#include "games_internal.hpp"

namespace offfsp {
namespace {

class OshiZumoState : public State {
 public:
  OshiZumoState(int coins, int board, int horizon)
      : board_(board), horizon_(horizon) {
    coins_[0] = coins_[1] = coins;
  }

  bool is_terminal() const override {
    return position_ > board_ || position_ < -board_ || round_ >= horizon_;
  }

  Player current_player() const override {
    check_non_terminal();
    return pending_bid_ < 0 ? 0 : 1;
  }

  std::vector<Action> legal_actions() const override {
    check_non_terminal();
    const Player p = current_player();
    std::vector<Action> bids(coins_[p] + 1);
    for (int b = 0; b <= coins_[p]; ++b) bids[b] = b;
    return bids;
  }

  void apply_action(Action action) override {
    const Player p = current_player();
    check_legal(action, infostate_key(p));
    if (p == 0) {
      pending_bid_ = action;
    } else {
      resolve_round(pending_bid_, action);
      pending_bid_ = -1;
    }
    record_action(action);
  }

  std::array<double, 2> returns() const override {
    if (!is_terminal()) throw std::logic_error("returns at non-terminal state");
    double r0 = 0.0;
    if (position_ > 0) r0 = 1.0;
    if (position_ < 0) r0 = -1.0;
    return {r0, -r0};
  }

  std::string infostate_key(Player player) const override {
    // Resolved bids are public; the pending bid of the current round is not.
    std::string key = "oz:p" + std::to_string(player) + ":";
    const auto& h = history();
    const std::size_t resolved = (h.size() / 2) * 2;
    for (std::size_t i = 0; i < resolved; i += 2) {
      key += std::to_string(h[i]) + "." + std::to_string(h[i + 1]) + "|";
    }
    return key;
  }

  std::unique_ptr<State> clone() const override {
    return std::make_unique<OshiZumoState>(*this);
  }

 private:
  void resolve_round(int bid0, int bid1) {
    coins_[0] -= bid0;
    coins_[1] -= bid1;
    if (bid0 > bid1) ++position_;
    if (bid1 > bid0) --position_;
    ++round_;
  }

  int board_;
  int horizon_;
  std::array<int, 2> coins_{0, 0};
  int position_ = 0;
  int round_ = 0;
  int pending_bid_ = -1;
};

class OshiZumoGame : public Game {
 public:
  OshiZumoGame(int coins, int board, int horizon)
      : coins_(coins), board_(board), horizon_(horizon) {
    if (coins < 0 || board < 1 || horizon < 1) {
      throw std::invalid_argument(
          "oshi_zumo: coins >= 0, board >= 1, horizon >= 1");
    }
  }
  std::string name() const override { return "oshi_zumo"; }
  std::unique_ptr<State> new_initial_state() const override {
    return std::make_unique<OshiZumoState>(coins_, board_, horizon_);
  }
  std::vector<std::pair<std::string, int>> params() const override {
    return {{"coins", coins_}, {"board", board_}, {"horizon", horizon_}};
  }

 private:
  int coins_;
  int board_;
  int horizon_;
};

}  // namespace

GamePtr make_oshi_zumo_game(int coins, int board, int horizon) {
  return std::make_shared<OshiZumoGame>(coins, board, horizon);
}

}  // namespace offfsp
