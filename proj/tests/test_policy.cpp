#include <doctest.h>

#include "offfsp/policy.hpp"

using namespace offfsp;

TEST_CASE("action_probabilities fallback modes") {
  BehaviorPolicy policy;
  policy.table["kuhn:p0:J:"] = {0.7, 0.3};
  const auto known = action_probabilities(policy, "kuhn:p0:J:", 2);
  CHECK(known[0] == 0.7);

  const auto uniform = action_probabilities(policy, "kuhn:p0:Q:", 2);
  CHECK(uniform[0] == 0.5);
  CHECK_THROWS_AS(
      action_probabilities(policy, "kuhn:p0:Q:", 2, Fallback::kStrict),
      std::out_of_range);
  // A stored row of the wrong arity is a policy bug, not a gap to paper over.
  CHECK_THROWS_AS(action_probabilities(policy, "kuhn:p0:J:", 3),
                  std::invalid_argument);
}

TEST_CASE("enumerate_infostates on kuhn") {
  const auto game = make_game("kuhn");
  const auto p0 = enumerate_infostates(*game, 0);
  const auto p1 = enumerate_infostates(*game, 1);
  // 3 cards x betting contexts {"", "pb"} and {"p", "b"} respectively.
  CHECK(p0.size() == 6);
  CHECK(p1.size() == 6);
  CHECK(p0.at("kuhn:p0:K:pb") == 2);
  CHECK(p1.at("kuhn:p1:J:b") == 2);
}

TEST_CASE("realization plans multiply own actions only") {
  const auto game = make_game("kuhn");
  BehaviorPolicy p0;
  p0.table["kuhn:p0:J:"] = {0.8, 0.2};     // mostly check
  p0.table["kuhn:p0:J:pb"] = {0.5, 0.5};

  const auto x = compute_realization_plans(*game, p0, 0);
  // Root decision: x = 1 regardless of chance or the opponent.
  CHECK(x.at("kuhn:p0:J:") == doctest::Approx(1.0));
  // Second decision reachable only after our own check (0.8); the opponent's
  // bet probability must not appear.
  CHECK(x.at("kuhn:p0:J:pb") == doctest::Approx(0.8));
  // Unlisted infostates fall back to uniform.
  CHECK(x.at("kuhn:p0:K:pb") == doctest::Approx(0.5));

  const auto sf = sequence_form_values(*game, p0, 0);
  CHECK(sf.at("kuhn:p0:J:pb")[1] == doctest::Approx(0.8 * 0.5));
  CHECK(sf.at("kuhn:p0:J:")[0] == doctest::Approx(0.8));
}

TEST_CASE("realization_plan over an explicit own prefix") {
  BehaviorPolicy p;
  p.table["a"] = {0.25, 0.75};
  p.table["b"] = {0.5, 0.5};
  CHECK(realization_plan(p, {{"a", 1}, {"b", 0}}) == doctest::Approx(0.375));
  CHECK(realization_plan(p, {}) == 1.0);
}

TEST_CASE("validate_policy rejects malformed tables") {
  BehaviorPolicy ok;
  ok.table["s"] = {0.5, 0.5};
  CHECK_NOTHROW(validate_policy(ok));

  BehaviorPolicy bad_sum;
  bad_sum.table["s"] = {0.5, 0.4};
  CHECK_THROWS_AS(validate_policy(bad_sum), std::invalid_argument);

  BehaviorPolicy negative;
  negative.table["s"] = {1.5, -0.5};
  CHECK_THROWS_AS(validate_policy(negative), std::invalid_argument);
}
