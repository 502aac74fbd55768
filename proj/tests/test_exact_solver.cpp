#include <doctest.h>

#include <random>

#include "offfsp/exact_solver.hpp"

using namespace offfsp;

namespace {

// Random behavior policy over every infostate of both players.
StrategyProfile random_profile(const Game& game, std::mt19937_64& rng) {
  StrategyProfile profile;
  std::uniform_real_distribution<double> u(0.01, 1.0);
  for (Player p = 0; p < 2; ++p) {
    for (const auto& [key, n] : enumerate_infostates(game, p)) {
      ActionDist dist(n);
      double sum = 0.0;
      for (double& v : dist) sum += v = u(rng);
      for (double& v : dist) v /= sum;
      profile[p].table.emplace(key, std::move(dist));
    }
  }
  return profile;
}

}  // namespace

TEST_CASE("kuhn uniform profile anchors") {
  // Values from an independent enumeration of the Kuhn tree.
  const auto game = make_game("kuhn");
  const StrategyProfile uniform;
  CHECK(expected_value(*game, uniform)[0] == doctest::Approx(0.125));
  CHECK(best_response(*game, uniform[1], 0).value == doctest::Approx(0.5));
  CHECK(best_response(*game, uniform[0], 1).value ==
        doctest::Approx(5.0 / 12.0));
  const auto nc = nash_conv(*game, uniform);
  CHECK(nc.total == doctest::Approx(11.0 / 12.0));
  CHECK(nc.per_player_gain[0] == doctest::Approx(0.375));   // 1/2 - 1/8
  CHECK(nc.per_player_gain[1] == doctest::Approx(13.0 / 24.0));
}

TEST_CASE("leduc uniform expected value") {
  // -5/64 from an independent enumeration.
  const auto game = make_game("leduc");
  CHECK(expected_value(*game, StrategyProfile{})[0] ==
        doctest::Approx(-5.0 / 64.0));
}

TEST_CASE("rps best response and nash_conv anchors") {
  const auto game = make_game("rps");
  BehaviorPolicy skewed;
  skewed.table["rps:p1"] = {0.6, 0.2, 0.2};
  const auto br = best_response(*game, skewed, 0);
  // Paper beats the Rock-heavy opponent: 0.6 - 0.2 = 0.4.
  CHECK(br.value == doctest::Approx(0.4));
  CHECK(br.policy.table.at("rps:p0") == ActionDist{0.0, 1.0, 0.0});

  StrategyProfile both;
  both[0].table["rps:p0"] = {0.6, 0.2, 0.2};
  both[1].table["rps:p1"] = {0.6, 0.2, 0.2};
  CHECK(nash_conv(*game, both).total == doctest::Approx(0.8));
  CHECK(nash_conv(*game, StrategyProfile{}).total == doctest::Approx(0.0));
}

TEST_CASE("best response covers zero-reach infostates") {
  // The responder's policy must be defined even where the opponent's play
  // makes an infostate unreachable for them.
  const auto game = make_game("kuhn");
  BehaviorPolicy never_bets;
  for (const auto& [key, n] : enumerate_infostates(*game, 1)) {
    ActionDist d(n, 0.0);
    d[0] = 1.0;
    never_bets.table.emplace(key, d);
  }
  const auto br = best_response(*game, never_bets, 0);
  CHECK(br.policy.table.size() == 6);
  for (const auto& [key, dist] : br.policy.table) {
    double sum = 0.0;
    for (double p : dist) sum += p;
    CHECK(sum == doctest::Approx(1.0));
  }
}

TEST_CASE("nash_conv is non-negative on random profiles") {
  std::mt19937_64 rng(42);
  for (const char* name : {"rps", "rps_asym", "kuhn", "leduc"}) {
    const auto game = make_game(name);
    for (int i = 0; i < 25; ++i) {
      const auto report = nash_conv(*game, random_profile(*game, rng));
      CHECK(report.total >= -1e-12);
      CHECK(report.per_player_gain[0] >= -1e-12);
      CHECK(report.per_player_gain[1] >= -1e-12);
    }
  }
}

TEST_CASE("fp_solve converges on rps and kuhn") {
  const auto rps = make_game("rps");
  const auto checkpoints = fp_solve(*rps, 500, 100);
  REQUIRE(checkpoints.size() == 5);
  CHECK(checkpoints.back().iteration == 500);
  const auto& final_profile = checkpoints.back().profile;
  for (const auto& key : {"rps:p0", "rps:p1"}) {
    const auto& dist = final_profile[key[5] - '0'].table.at(key);
    for (double p : dist) CHECK(p == doctest::Approx(1.0 / 3).epsilon(0.15));
  }
  CHECK(nash_conv(*rps, final_profile).total < 0.1);

  const auto kuhn = make_game("kuhn");
  const auto kcp = fp_solve(*kuhn, 1000, 1000);
  CHECK(nash_conv(*kuhn, kcp.back().profile).total < 0.05);
  // Game value of Kuhn poker is -1/18 for the first player.
  CHECK(expected_value(*kuhn, kcp.back().profile)[0] ==
        doctest::Approx(-1.0 / 18).epsilon(0.05));
}

TEST_CASE("monte carlo value agrees with the exact expectation") {
  const auto game = make_game("kuhn");
  std::mt19937_64 rng(7);
  const auto profile = random_profile(*game, rng);
  const auto exact = expected_value(*game, profile);
  const auto mc = monte_carlo_value(*game, profile, 20000, 11);
  CHECK(std::abs(mc.mean[0] - exact[0]) < 4 * mc.std_error);
  CHECK(mc.mean[0] + mc.mean[1] == doctest::Approx(0.0));
}
