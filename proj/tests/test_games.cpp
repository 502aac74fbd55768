#include <doctest.h>

#include <functional>
#include <set>

#include "offfsp/game.hpp"

using namespace offfsp;

namespace {

struct TreeStats {
  int terminals = 0;
  int decision_nodes = 0;
  double chance_weighted_return0 = 0.0;
};

void walk(const State& state, double chance_prob, TreeStats* stats) {
  if (state.is_terminal()) {
    const auto r = state.returns();
    CHECK(r[0] + r[1] == doctest::Approx(0.0).epsilon(1e-12));
    ++stats->terminals;
    stats->chance_weighted_return0 += chance_prob * r[0];
    return;
  }
  const auto actions = state.legal_actions();
  REQUIRE(!actions.empty());
  // Actions are always indices into the current legal move list.
  for (std::size_t i = 0; i < actions.size(); ++i) {
    CHECK(actions[i] == static_cast<Action>(i));
  }
  const Player acting = state.current_player();
  if (acting == kChancePlayer) {
    const auto probs = state.chance_probabilities();
    REQUIRE(probs.size() == actions.size());
    double sum = 0.0;
    for (double p : probs) sum += p;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    for (Action a : actions) {
      walk(*child(state, a), chance_prob * probs[a], stats);
    }
  } else {
    ++stats->decision_nodes;
    for (Action a : actions) walk(*child(state, a), chance_prob, stats);
  }
}

TreeStats full_tree(const Game& game) {
  TreeStats stats;
  walk(*game.new_initial_state(), 1.0, &stats);
  return stats;
}

}  // namespace

TEST_CASE("rps tree shape and payoffs") {
  const auto game = make_game("rps");
  const auto stats = full_tree(*game);
  CHECK(stats.terminals == 9);

  // Rock(0) beats Scissors(2), Scissors beats Paper(1), Paper beats Rock.
  auto play = [&](Action a0, Action a1) {
    auto s = game->new_initial_state();
    s->apply_action(a0);
    s->apply_action(a1);
    return s->returns()[0];
  };
  CHECK(play(0, 2) == 1.0);
  CHECK(play(2, 1) == 1.0);
  CHECK(play(1, 0) == 1.0);
  CHECK(play(0, 1) == -1.0);
  CHECK(play(1, 1) == 0.0);
}

TEST_CASE("asymmetric rps: Rock2 plays as Rock") {
  const auto game = make_game("rps_asym");
  auto s = game->new_initial_state();
  s->apply_action(0);
  CHECK(s->legal_actions().size() == 4);
  s->apply_action(3);  // Rock2 vs Rock: tie
  CHECK(s->returns()[0] == 0.0);

  auto t = game->new_initial_state();
  t->apply_action(2);  // Scissors
  t->apply_action(3);  // Rock2 wins
  CHECK(t->returns()[0] == -1.0);
  CHECK(full_tree(*game).terminals == 12);
}

TEST_CASE("kuhn tree and showdown returns") {
  const auto game = make_game("kuhn");
  const auto stats = full_tree(*game);
  CHECK(stats.terminals == 30);  // 6 deals x 5 betting lines
  // Uniform-chance game value contribution is not meaningful here; returns
  // for specific lines are. Deal J to p0, K to p1 (second deal indexes the
  // remaining {J, K} after removing J -> K is index 1).
  auto line = [&](std::vector<Action> actions) {
    auto s = game->new_initial_state();
    for (Action a : actions) s->apply_action(a);
    return s;
  };
  CHECK(line({0, 1, 0, 1, 1})->returns()[0] == -2.0);  // J vs K, check-bet-call
  CHECK(line({0, 1, 0, 1, 0})->returns()[0] == -1.0);  // check-bet-fold
  CHECK(line({0, 1, 1, 0})->returns()[0] == 1.0);      // bet, p1 folds
  CHECK(line({2, 0, 1, 1})->returns()[0] == 2.0);      // K vs J, bet-call
  CHECK(line({0, 0, 0, 0})->returns()[0] == -1.0);     // J vs Q showdown

  // Infostate hides the opponent card: p1 holds Q and faces a bet in both
  // lines, so the key must not depend on whether p0 drew J or K.
  CHECK(line({0, 0, 1})->infostate_key(1) == line({2, 1, 1})->infostate_key(1));
}

TEST_CASE("large kuhn betting mechanics") {
  const auto game = make_game("large_kuhn", {{"ante", 5}, {"raise_window", 8}});
  auto s = game->new_initial_state();
  s->apply_action(0);  // J to p0
  s->apply_action(1);  // K to p1
  // p0 not facing a raise: moves are Check, Raise -> indices {0, 1}.
  CHECK(s->legal_actions().size() == 2);
  s->apply_action(1);  // raise (commit 6)
  // p1 facing a raise: Fold, Call, Raise.
  CHECK(s->legal_actions().size() == 3);
  s->apply_action(2);  // re-raise (commit 7)
  s->apply_action(1);  // call
  CHECK(s->is_terminal());
  CHECK(s->returns()[0] == -7.0);  // J loses the showdown

  // Check-check is an immediate showdown at the ante.
  auto t = game->new_initial_state();
  t->apply_action(2);  // K to p0
  t->apply_action(0);  // J to p1
  t->apply_action(0);  // check
  t->apply_action(0);  // check
  CHECK(t->is_terminal());
  CHECK(t->returns()[0] == 5.0);

  // Raise window: after 8 plies the raise option disappears.
  auto u = game->new_initial_state();
  u->apply_action(0);
  u->apply_action(1);
  for (int i = 0; i < 8; ++i) {
    const auto actions = u->legal_actions();
    u->apply_action(actions.back());  // raise is always last when legal
  }
  // 8 raises consumed the window; facing a raise only fold/call remain.
  CHECK(u->legal_actions().size() == 2);
  const auto stats = full_tree(*game);
  CHECK(stats.terminals > 30);
}

TEST_CASE("leduc rounds, raise cap, and showdown") {
  const auto game = make_game("leduc");
  CHECK(full_tree(*game).terminals == 5520);

  auto s = game->new_initial_state();
  s->apply_action(0);  // J-spade to p0
  s->apply_action(0);  // J-heart to p1 (index into remaining cards)
  CHECK(s->current_player() == 0);
  s->apply_action(1);  // raise (indices: 0 = call/check, 1 = raise)
  s->apply_action(2);  // re-raise
  CHECK(s->legal_actions().size() == 2);  // raise cap: fold or call only
  s->apply_action(1);  // call -> round 2 deals the board
  CHECK(s->current_player() == kChancePlayer);
  s->apply_action(0);  // board
  s->apply_action(0);  // check
  s->apply_action(0);  // check
  CHECK(s->is_terminal());
  CHECK(s->returns()[0] == 0.0);  // identical ranks split

  // Pair beats a higher rank.
  auto t = game->new_initial_state();
  t->apply_action(0);  // J to p0
  t->apply_action(3);  // K to p1 (remaining: Jh Qs Qh Ks Kh -> index 3 = Ks)
  t->apply_action(0);
  t->apply_action(0);  // check-check round 1
  t->apply_action(0);  // board = Jh: pairs p0
  t->apply_action(0);
  t->apply_action(0);
  CHECK(t->returns()[0] == 1.0);  // antes only
}

TEST_CASE("oshi-zumo bidding and board movement") {
  const auto game =
      make_game("oshi_zumo", {{"coins", 4}, {"board", 3}, {"horizon", 6}});
  auto s = game->new_initial_state();
  // Bids are simultaneous: p1 must not observe p0's pending bid.
  CHECK(s->current_player() == 0);
  const auto key_before = s->infostate_key(1);
  s->apply_action(2);
  CHECK(s->infostate_key(1) == key_before);
  s->apply_action(1);  // p0 outbids: wrestler moves toward p1
  CHECK(s->current_player() == 0);
  // Coins spent are gone: p0 has 2 left, bids 0..2 legal.
  CHECK(s->legal_actions().size() == 3);
  const auto stats = full_tree(*game);
  CHECK(stats.terminals > 0);
  CHECK(stats.chance_weighted_return0 == doctest::Approx(0.0));  // symmetric
}

TEST_CASE("factory validates names and params") {
  CHECK_THROWS_AS(make_game("chess"), std::invalid_argument);
  CHECK_THROWS_AS(make_game("kuhn", {{"ante", 2}}), std::invalid_argument);
  CHECK_THROWS_AS(make_game("large_kuhn", {{"ante", 0}}),
                  std::invalid_argument);
  const auto g = make_game("large_kuhn", {{"ante", 5}, {"raise_window", 8}});
  CHECK(g->params() ==
        std::vector<std::pair<std::string, int>>{{"ante", 5},
                                                 {"raise_window", 8}});
}

TEST_CASE("illegal actions and misuse throw") {
  const auto game = make_game("rps");
  auto s = game->new_initial_state();
  CHECK_THROWS_AS(s->apply_action(3), std::invalid_argument);
  CHECK_THROWS_AS(s->returns(), std::logic_error);
  CHECK_THROWS_AS(s->chance_probabilities(), std::logic_error);
  s->apply_action(0);
  s->apply_action(0);
  CHECK_THROWS_AS(s->legal_actions(), std::logic_error);
}
