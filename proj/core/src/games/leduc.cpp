// Leduc Poker, standard research variant: 6-card deck (ranks J=0, Q=1, K=2,
// two suits), ante 1, two betting rounds with a public card dealt between
// them. Bet size 2 in round 1 and 4 in round 2, at most 2 raises per round.
// Actions: 0 = Fold, 1 = Call (checks when there is nothing to call),
// 2 = Raise. Fold is legal only when facing a raise.
//
// Cards are encoded 0..5; rank = card / 2. Infostate keys use the rank and
// the public betting history, so the two suits of a rank share infostates.

#include <stdexcept>

#include "games_internal.hpp"

namespace offfsp {
namespace {

constexpr int kDeckSize = 6;
constexpr int kMaxRaises = 2;
constexpr char kActionNames[] = {'f', 'c', 'r'};

int rank(int card) { return card / 2; }

class LeducState : public State {
 public:
  bool is_terminal() const override { return terminal_; }

  Player current_player() const override {
    check_non_terminal();
    if (num_dealt() < cards_needed()) return kChancePlayer;
    return to_act_;
  }

  std::vector<Action> legal_actions() const override {
    check_non_terminal();
    if (num_dealt() < cards_needed()) {
      std::vector<Action> deals(remaining_cards().size());
      for (std::size_t i = 0; i < deals.size(); ++i) deals[i] = i;
      return deals;
    }
    std::vector<Action> indices(moves().size());
    for (std::size_t i = 0; i < indices.size(); ++i) indices[i] = i;
    return indices;
  }

  std::vector<double> chance_probabilities() const override {
    if (num_dealt() >= cards_needed()) {
      throw std::logic_error("chance_probabilities at a decision node");
    }
    const auto rem = remaining_cards();
    return std::vector<double>(rem.size(), 1.0 / rem.size());
  }

  void apply_action(Action action) override {
    if (num_dealt() < cards_needed()) {
      check_legal(action, "leduc chance");
      const int card = remaining_cards()[action];
      if (num_dealt() < 2) {
        cards_[num_dealt()] = card;
      } else {
        board_ = card;
      }
      ++num_dealt_;
      record_action(action);
      return;
    }
    const Player p = to_act_;
    check_legal(action, infostate_key(p));
    const Action move = moves()[action];
    betting_ += kActionNames[move];
    switch (move) {
      case 0:  // Fold
        terminal_ = true;
        fold_loser_ = p;
        break;
      case 1:  // Call / check
        commit_[p] += to_call_;
        to_call_ = 0;
        if (round_action_count_ >= 1) {
          end_round();
        } else {
          to_act_ = 1 - p;
          ++round_action_count_;
        }
        break;
      case 2:  // Raise
        commit_[p] += to_call_ + bet_size();
        to_call_ = bet_size();
        ++raises_;
        to_act_ = 1 - p;
        ++round_action_count_;
        break;
    }
    record_action(action);
  }

  std::array<double, 2> returns() const override {
    if (!terminal_) throw std::logic_error("returns at non-terminal state");
    double r0;
    if (fold_loser_ >= 0) {
      r0 = fold_loser_ == 0 ? -commit_[0] : commit_[1];
    } else {
      const int cmp = showdown_winner();
      r0 = cmp == 0 ? 0.0 : (cmp > 0 ? commit_[1] : -commit_[0]);
    }
    return {static_cast<double>(r0), static_cast<double>(-r0)};
  }

  std::string infostate_key(Player player) const override {
    std::string key = "leduc:p" + std::to_string(player) + ":";
    key += static_cast<char>('0' + rank(cards_[player]));
    key += ":b";
    if (board_ >= 0) key += static_cast<char>('0' + rank(board_));
    key += ':';
    key += betting_;
    return key;
  }

  std::unique_ptr<State> clone() const override {
    return std::make_unique<LeducState>(*this);
  }

 private:
  int num_dealt() const { return num_dealt_; }
  int cards_needed() const { return round_ == 0 ? 2 : 3; }
  int bet_size() const { return round_ == 0 ? 2 : 4; }

  // Semantic moves at the current decision, in the documented order:
  // facing a raise: Fold, Call (, Raise); otherwise: Call/check (, Raise).
  std::vector<Action> moves() const {
    std::vector<Action> m;
    if (to_call_ > 0) m.push_back(0);
    m.push_back(1);
    if (raises_ < kMaxRaises) m.push_back(2);
    return m;
  }

  std::vector<int> remaining_cards() const {
    std::vector<int> rem;
    for (int c = 0; c < kDeckSize; ++c) {
      bool used = false;
      for (int i = 0; i < num_dealt_ && i < 2; ++i) used = used || cards_[i] == c;
      if (!used) rem.push_back(c);
    }
    return rem;
  }

  void end_round() {
    if (round_ == 0) {
      round_ = 1;
      betting_ += '|';
      raises_ = 0;
      round_action_count_ = 0;
      to_act_ = 0;
    } else {
      terminal_ = true;
    }
  }

  // >0: player 0 wins, <0: player 1 wins, 0: split.
  int showdown_winner() const {
    const int r0 = rank(cards_[0]), r1 = rank(cards_[1]), rb = rank(board_);
    if (r0 == rb && r1 != rb) return 1;
    if (r1 == rb && r0 != rb) return -1;
    if (r0 == r1) return 0;
    return r0 > r1 ? 1 : -1;
  }

  std::array<int, 2> cards_{-1, -1};
  int board_ = -1;
  int num_dealt_ = 0;
  int round_ = 0;
  int raises_ = 0;
  int round_action_count_ = 0;
  int to_call_ = 0;
  std::array<int, 2> commit_{1, 1};  // antes
  Player to_act_ = 0;
  std::string betting_;
  bool terminal_ = false;
  int fold_loser_ = -1;
};

class LeducGame : public Game {
 public:
  std::string name() const override { return "leduc"; }
  std::unique_ptr<State> new_initial_state() const override {
    return std::make_unique<LeducState>();
  }
};

}  // namespace

GamePtr make_leduc_game() { return std::make_shared<LeducGame>(); }

}  // namespace offfsp
