#include <doctest.h>

#include "offfsp/exact_solver.hpp"
#include "offfsp/off_fsp.hpp"

using namespace offfsp;

TEST_CASE("lambda_mix formula and edge cases") {
  CHECK(lambda_mix(0.5, 1.0, 1.0) == doctest::Approx(0.5));
  CHECK(lambda_mix(0.25, 1.0, 1.0) == doctest::Approx(0.25));
  CHECK(lambda_mix(0.5, 0.3, 0.0) == 0.0);   // BR never reaches s
  CHECK(lambda_mix(1.0, 0.7, 0.2) == 1.0);   // first iteration replaces all
  CHECK(lambda_mix(0.25, 0.0, 0.0) == 0.25); // unreachable: defined as alpha
  CHECK(lambda_mix(0.5, 0.2, 0.6) == doctest::Approx(0.6 / 0.8));
}

TEST_CASE("average policy store mixes in sequence form") {
  const auto game = make_game("rps");
  AveragePolicyStore store;
  BehaviorPolicy expert;
  expert.table["rps:p0"] = {0.6, 0.2, 0.2};
  // k = 1 wipes whatever was there.
  store.values[0]["rps:p0"] = {1.0, 0.0, 0.0};
  update_average_policy(*game, store, 0, expert, 1);
  CHECK(store.values[0].at("rps:p0")[0] == doctest::Approx(0.6));

  BehaviorPolicy paper;
  paper.table["rps:p0"] = {0.0, 1.0, 0.0};
  update_average_policy(*game, store, 0, paper, 2);
  const auto& row = store.values[0].at("rps:p0");
  CHECK(row[0] == doctest::Approx(0.3));
  CHECK(row[1] == doctest::Approx(0.6));
  CHECK(row[2] == doctest::Approx(0.1));

  const auto profile = behavior_from_store(store);
  CHECK(profile[0].table.at("rps:p0")[1] == doctest::Approx(0.6));
}

TEST_CASE("store rows stay consistent on kuhn") {
  const auto game = make_game("kuhn");
  AveragePolicyStore store;
  BehaviorPolicy b1, b2;
  b1.table["kuhn:p0:J:"] = {0.9, 0.1};
  b2.table["kuhn:p0:J:"] = {0.2, 0.8};
  b2.table["kuhn:p0:J:pb"] = {1.0, 0.0};
  update_average_policy(*game, store, 0, b1, 1);
  update_average_policy(*game, store, 0, b2, 2);
  // Root-level infostates carry x = 1: rows sum to 1.
  for (const char* key : {"kuhn:p0:J:", "kuhn:p0:Q:", "kuhn:p0:K:"}) {
    const auto& row = store.values[0].at(key);
    CHECK(row[0] + row[1] == doctest::Approx(1.0));
  }
  // Deeper rows sum to the average realization of reaching them.
  const auto& deep = store.values[0].at("kuhn:p0:J:pb");
  CHECK(deep[0] + deep[1] == doctest::Approx(0.5 * 0.9 + 0.5 * 0.2));
}

TEST_CASE("realization equivalence of the sequence-form mixture") {
  // The store after K updates must reproduce, for every own-action sequence,
  // the 1/k-weighted mixture of the constituents' realization probabilities.
  const auto game = make_game("kuhn");
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<BehaviorPolicy> betas;
  for (int k = 0; k < 3; ++k) {
    BehaviorPolicy beta;
    for (Player p = 0; p < 2; ++p) {
      for (const auto& [key, n] : enumerate_infostates(*game, p)) {
        if (p != 0) continue;
        ActionDist dist(n);
        double sum = 0.0;
        for (double& v : dist) sum += v = u(rng);
        for (double& v : dist) v /= sum;
        beta.table.emplace(key, std::move(dist));
      }
    }
    betas.push_back(std::move(beta));
  }
  AveragePolicyStore store;
  for (int k = 1; k <= 3; ++k) {
    update_average_policy(*game, store, 0, betas[k - 1], k);
  }
  const auto mixture = behavior_from_store(store);
  const auto mixed_sf = sequence_form_values(*game, mixture[0], 0);
  for (const auto& [key, row] : mixed_sf) {
    for (std::size_t a = 0; a < row.size(); ++a) {
      double expected = 0.0;
      for (const auto& beta : betas) {
        expected += sequence_form_values(*game, beta, 0).at(key)[a] / 3.0;
      }
      CHECK(row[a] == doctest::Approx(expected).epsilon(1e-9));
    }
  }
}

TEST_CASE("checkpoint_collection keeps multiples plus the last") {
  PolicyCollection collection;
  const int K = 200;
  for (int p = 0; p < 2; ++p) {
    collection.responses[p].resize(K);
    for (int k = 1; k <= K; ++k) collection.responses[p][k - 1].iteration = k;
    collection.weights[p].assign(K + 1, 1.0 / K);
    collection.weights[p][0] = 0.0;  // the initial policy
  }
  const auto thin = checkpoint_collection(collection, 25);
  CHECK(thin.responses[0].size() == 8);  // 25, 50, ..., 200
  CHECK(thin.responses[0].back().iteration == 200);
  double sum = 0.0;
  for (double w : thin.weights[0]) {
    CHECK(w >= 0.0);
    sum += w;
  }
  CHECK(sum == doctest::Approx(1.0));

  const auto identity = checkpoint_collection(collection, 1);
  CHECK(identity.responses[0].size() == 200);
}

TEST_CASE("run_off_fsp single iteration bookkeeping") {
  const auto game = make_game("rps");
  const auto d = make_rps_d1();
  LearnerConfig cfg;
  cfg.algorithm = Algorithm::kQLearning;
  cfg.steps = 500;
  cfg.learning_rate = 5e-3;
  const auto result = run_off_fsp(*game, d, 1, cfg, 1, 42);

  REQUIRE(result.report.iterations.size() == 1);
  const auto& rec = result.report.iterations[0];
  CHECK(rec.nashconv >= 0.0);
  // The first best responses answer the empirical policy (0.6, 0.2, 0.2):
  // exact value 0.4 for each player.
  CHECK(rec.br_value[0] == doctest::Approx(0.4).epsilon(0.05));
  CHECK(rec.br_value[1] == doctest::Approx(0.4).epsilon(0.05));
  CHECK(result.collection.responses[0].size() == 1);
  CHECK(result.store.iteration == 1);
  // alpha_1 = 1: the store is exactly the first BR.
  const auto profile = behavior_from_store(result.store);
  CHECK(profile[0].table.at("rps:p0")[1] == doctest::Approx(1.0));

  // Phase timings are all measured.
  CHECK(result.report.total_learn_ms > 0.0);
  CHECK(result.report.total_reweight_ms >= 0.0);
  CHECK(result.report.total_eval_ms > 0.0);
}

TEST_CASE("run_off_fsp improves over the empirical policy on d1") {
  const auto game = make_game("rps");
  const auto d = make_rps_d1();
  LearnerConfig cfg;  // default CQL
  const auto result = run_off_fsp(*game, d, 60, cfg, 60, 7);
  const auto final_nc = evaluate_aggregate(result.store, *game).total;
  CHECK(final_nc < 0.8);  // the BC/empirical anchor
  const auto first = result.report.iterations.front();
  const auto last = result.report.iterations.back();
  CHECK(last.nashconv >= 0.0);
  CHECK(last.nashconv < 0.8);
}

TEST_CASE("run_off_fsp is deterministic in (dataset, seed)") {
  const auto game = make_game("rps");
  const auto d = make_rps_d1();
  LearnerConfig cfg;
  cfg.steps = 32;
  const auto a = run_off_fsp(*game, d, 10, cfg, 5, 123);
  const auto b = run_off_fsp(*game, d, 10, cfg, 5, 123);
  for (std::size_t i = 0; i < a.report.iterations.size(); ++i) {
    CHECK(a.report.iterations[i].nashconv == b.report.iterations[i].nashconv);
    CHECK(a.report.iterations[i].br_value[0] ==
          b.report.iterations[i].br_value[0]);
  }
  for (Player p = 0; p < 2; ++p) {
    for (const auto& [key, row] : a.store.values[p]) {
      const auto& other = b.store.values[p].at(key);
      for (std::size_t i = 0; i < row.size(); ++i) CHECK(row[i] == other[i]);
    }
  }
}

TEST_CASE("run_off_fsp validates its inputs") {
  const auto rps = make_game("rps");
  const auto kuhn_data =
      sample_dataset(*make_game("kuhn"), StrategyProfile{}, 5, 1);
  LearnerConfig cfg;
  CHECK_THROWS_AS(run_off_fsp(*rps, kuhn_data, 1, cfg, 1, 0),
                  std::invalid_argument);
}
