#pragma once

#include <string>

#include "offfsp/off_fsp.hpp"
#include "offfsp/policy.hpp"

namespace offfsp {

// JSON map from infostate key to probability vector, wrapped in a versioned
// envelope carrying the game name.
void save_policy(const BehaviorPolicy& policy, const std::string& game_name,
                 const std::string& path);
BehaviorPolicy load_policy(const std::string& path,
                           std::string* game_name = nullptr);

void save_profile(const StrategyProfile& profile, const std::string& game_name,
                  const std::string& path);
StrategyProfile load_profile(const std::string& path,
                             std::string* game_name = nullptr);

void save_store(const AveragePolicyStore& store, const std::string& game_name,
                const std::string& path);
AveragePolicyStore load_store(const std::string& path,
                              std::string* game_name = nullptr);

}  // namespace offfsp
