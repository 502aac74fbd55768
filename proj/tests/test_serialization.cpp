#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <string>

#include "offfsp/serialization.hpp"

using namespace offfsp;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name) : path("/tmp/offfsp_" + name) {}
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("policy round trip preserves values and game name") {
  BehaviorPolicy policy;
  policy.table["kuhn:p0:J:"] = {0.8, 0.2};
  policy.table["kuhn:p0:J:pb"] = {1.0, 0.0};
  TempFile f("policy.json");
  save_policy(policy, "kuhn", f.path);

  std::string game;
  const auto loaded = load_policy(f.path, &game);
  CHECK(game == "kuhn");
  REQUIRE(loaded.table.size() == 2);
  CHECK(loaded.table.at("kuhn:p0:J:") == ActionDist{0.8, 0.2});
  CHECK(loaded.table.at("kuhn:p0:J:pb") == ActionDist{1.0, 0.0});
}

TEST_CASE("profile round trip keeps both seats separate") {
  StrategyProfile profile;
  profile[0].table["rps:p0"] = {0.6, 0.2, 0.2};
  profile[1].table["rps:p1"] = {0.0, 1.0, 0.0};
  TempFile f("profile.json");
  save_profile(profile, "rps", f.path);

  const auto loaded = load_profile(f.path);
  CHECK(loaded[0].table.at("rps:p0")[0] == doctest::Approx(0.6));
  CHECK(loaded[1].table.at("rps:p1")[1] == doctest::Approx(1.0));
  CHECK(loaded[0].table.count("rps:p1") == 0);
}

TEST_CASE("store round trip keeps unnormalized sequence-form entries") {
  AveragePolicyStore store;
  store.iteration = 7;
  store.values[0]["kuhn:p0:J:pb"] = {0.35, 0.15};  // sums to 0.5, not 1
  store.values[1]["kuhn:p1:Q:b"] = {0.1, 0.4};
  TempFile f("store.json");
  save_store(store, "kuhn", f.path);

  std::string game;
  const auto loaded = load_store(f.path, &game);
  CHECK(game == "kuhn");
  CHECK(loaded.iteration == 7);
  CHECK(loaded.values[0].at("kuhn:p0:J:pb")[0] == 0.35);
  CHECK(loaded.values[1].at("kuhn:p1:Q:b")[1] == 0.4);
}

TEST_CASE("loaders reject wrong envelopes and missing files") {
  BehaviorPolicy policy;
  policy.table["rps:p0"] = {1.0, 0.0, 0.0};
  TempFile f("envelope.json");
  save_policy(policy, "rps", f.path);
  // A policy file is not a profile or a store.
  CHECK_THROWS_AS(load_profile(f.path), std::runtime_error);
  CHECK_THROWS_AS(load_store(f.path), std::runtime_error);
  CHECK_THROWS_AS(load_policy("/tmp/offfsp_does_not_exist.json"),
                  std::runtime_error);

  TempFile bad("bad.json");
  std::ofstream(bad.path) << "{not json";
  CHECK_THROWS_AS(load_policy(bad.path), std::runtime_error);
}
