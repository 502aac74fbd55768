#include "offfsp/serialization.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace offfsp {

namespace {

using nlohmann::json;

json table_to_json(const std::unordered_map<std::string, std::vector<double>>&
                       table) {
  json j = json::object();
  for (const auto& [key, row] : table) j[key] = row;
  return j;
}

void table_from_json(const json& j,
                     std::unordered_map<std::string, std::vector<double>>&
                         table) {
  for (const auto& [key, row] : j.items()) {
    table.emplace(key, row.get<std::vector<double>>());
  }
}

void write_file(const json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << j.dump(2) << '\n';
}

json read_file(const std::string& path, const std::string& expected_format) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
  if (!j.is_object() || j.value("format", "") != expected_format) {
    throw std::runtime_error(path + ": expected a '" + expected_format +
                             "' file");
  }
  return j;
}

}  // namespace

void save_policy(const BehaviorPolicy& policy, const std::string& game_name,
                 const std::string& path) {
  json j{{"format", "offfsp-policy-v1"},
         {"game", game_name},
         {"table", table_to_json(policy.table)}};
  write_file(j, path);
}

BehaviorPolicy load_policy(const std::string& path, std::string* game_name) {
  const json j = read_file(path, "offfsp-policy-v1");
  if (game_name) *game_name = j.value("game", "");
  BehaviorPolicy policy;
  table_from_json(j.at("table"), policy.table);
  return policy;
}

void save_profile(const StrategyProfile& profile, const std::string& game_name,
                  const std::string& path) {
  json j{{"format", "offfsp-profile-v1"},
         {"game", game_name},
         {"players",
          json::array({table_to_json(profile[0].table),
                       table_to_json(profile[1].table)})}};
  write_file(j, path);
}

StrategyProfile load_profile(const std::string& path, std::string* game_name) {
  const json j = read_file(path, "offfsp-profile-v1");
  if (game_name) *game_name = j.value("game", "");
  const auto& players = j.at("players");
  if (!players.is_array() || players.size() != 2) {
    throw std::runtime_error(path + ": 'players' must hold two tables");
  }
  StrategyProfile profile;
  for (int p = 0; p < 2; ++p) table_from_json(players[p], profile[p].table);
  return profile;
}

void save_store(const AveragePolicyStore& store, const std::string& game_name,
                const std::string& path) {
  json j{{"format", "offfsp-store-v1"},
         {"game", game_name},
         {"iteration", store.iteration},
         {"values",
          json::array({table_to_json(store.values[0]),
                       table_to_json(store.values[1])})}};
  write_file(j, path);
}

AveragePolicyStore load_store(const std::string& path,
                              std::string* game_name) {
  const json j = read_file(path, "offfsp-store-v1");
  if (game_name) *game_name = j.value("game", "");
  const auto& values = j.at("values");
  if (!values.is_array() || values.size() != 2) {
    throw std::runtime_error(path + ": 'values' must hold two tables");
  }
  AveragePolicyStore store;
  store.iteration = j.value("iteration", 0);
  for (int p = 0; p < 2; ++p) table_from_json(values[p], store.values[p]);
  return store;
}

}  // namespace offfsp
