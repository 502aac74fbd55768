// Experiment CLI: dataset recipes, Off-FSP runs, exact evaluation, and tidy
// CSV/JSON artifacts. Exit codes: 0 success, 1 validation error, 2 runtime
// error.

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "offfsp/dataset.hpp"
#include "offfsp/exact_solver.hpp"
#include "offfsp/off_fsp.hpp"
#include "offfsp/offline_rl.hpp"
#include "offfsp/reweight.hpp"
#include "offfsp/serialization.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

void check_keys(const json& j, const std::set<std::string>& allowed,
                const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) {
      std::string known;
      for (const auto& k : allowed) known += (known.empty() ? "" : ", ") + k;
      throw ConfigError(where + ": unknown key '" + key + "' (known: " + known +
                        ")");
    }
  }
}

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  if (!j.is_object()) throw ConfigError(path + ": config must be an object");
  return j;
}

std::vector<std::pair<std::string, int>> parse_params(
    const std::vector<std::string>& kvs) {
  std::vector<std::pair<std::string, int>> params;
  for (const auto& kv : kvs) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("--param expects key=value, got '" + kv + "'");
    }
    try {
      params.emplace_back(kv.substr(0, eq), std::stoi(kv.substr(eq + 1)));
    } catch (const std::exception&) {
      throw ConfigError("--param value in '" + kv + "' is not an integer");
    }
  }
  return params;
}

std::vector<std::pair<std::string, int>> params_from_json(const json& j) {
  std::vector<std::pair<std::string, int>> params;
  for (const auto& [key, value] : j.items()) {
    if (!value.is_number_integer()) {
      throw ConfigError("params." + key + " must be an integer");
    }
    params.emplace_back(key, value.get<int>());
  }
  return params;
}

offfsp::LearnerConfig learner_from_json(const json& j) {
  check_keys(j, {"algorithm", "learning_rate", "batch_size", "steps",
                 "target_update_every", "discount", "cql_alpha",
                 "bcq_threshold", "crr_beta", "crr_ratio_bound", "weight_cap"},
             "learner");
  offfsp::LearnerConfig cfg;
  if (j.contains("algorithm")) {
    cfg.algorithm = offfsp::algorithm_from_string(j["algorithm"]);
  }
  cfg.learning_rate = j.value("learning_rate", cfg.learning_rate);
  cfg.batch_size = j.value("batch_size", cfg.batch_size);
  cfg.steps = j.value("steps", cfg.steps);
  cfg.target_update_every =
      j.value("target_update_every", cfg.target_update_every);
  cfg.discount = j.value("discount", cfg.discount);
  cfg.cql_alpha = j.value("cql_alpha", cfg.cql_alpha);
  cfg.bcq_threshold = j.value("bcq_threshold", cfg.bcq_threshold);
  cfg.crr_beta = j.value("crr_beta", cfg.crr_beta);
  cfg.crr_ratio_bound = j.value("crr_ratio_bound", cfg.crr_ratio_bound);
  cfg.weight_cap = j.value("weight_cap", cfg.weight_cap);
  cfg.validate();
  return cfg;
}

void ensure_parent_dir(const std::string& path) {
  const fs::path parent = fs::path(path).parent_path();
  if (!parent.empty()) fs::create_directories(parent);
}

// ---------------------------------------------------------------------------
// gen-expert

struct GenExpertOpts {
  std::string game;
  std::vector<std::string> params;
  int iterations = 0;
  int every = 1;
  std::string out;
};

void cmd_gen_expert(const GenExpertOpts& o) {
  if (o.iterations < 1) throw ConfigError("--iterations must be >= 1");
  if (o.every < 1) throw ConfigError("--every must be >= 1");
  const auto game = offfsp::make_game(o.game, parse_params(o.params));
  fs::create_directories(o.out);
  const auto checkpoints = offfsp::fp_solve(*game, o.iterations, o.every);
  std::ofstream curve(fs::path(o.out) / "nashconv_curve.csv");
  if (!curve) throw std::runtime_error("cannot write to '" + o.out + "'");
  curve << "iteration,nashconv\n";
  double final_nashconv = 0.0;
  for (const auto& cp : checkpoints) {
    const auto report = offfsp::nash_conv(*game, cp.profile);
    curve << cp.iteration << ',' << report.total << '\n';
    final_nashconv = report.total;
    const fs::path path =
        fs::path(o.out) / ("expert_" + std::to_string(cp.iteration) + ".json");
    offfsp::save_profile(cp.profile, game->name(), path.string());
  }
  std::cout << "wrote " << checkpoints.size() << " checkpoints to " << o.out
            << "\nfinal nashconv: " << final_nashconv << "\n";
}

// ---------------------------------------------------------------------------
// sample

struct SampleOpts {
  std::string config;
  std::string game;
  std::vector<std::string> params;
  std::string recipe;
  int n_trajectories = -1;
  std::int64_t seed = -1;
  std::string out;
  std::string expert;      // profile file for mix recipes
  std::string expert_dir;  // checkpoint directory for population recipes
};

offfsp::StrategyProfile load_expert_profile(const std::string& path,
                                            const std::string& game_name) {
  if (path.empty()) {
    throw std::runtime_error(
        "this recipe needs an expert profile; pass --expert or set 'expert' "
        "in the config (generate one with gen-expert)");
  }
  std::string stored_game;
  auto profile = offfsp::load_profile(path, &stored_game);
  if (stored_game != game_name) {
    throw std::runtime_error("expert profile '" + path + "' is for game '" +
                             stored_game + "', not '" + game_name + "'");
  }
  return profile;
}

void cmd_sample(const SampleOpts& opts) {
  SampleOpts o = opts;
  if (!o.config.empty()) {
    const json j = load_config(o.config);
    check_keys(j,
               {"game", "params", "recipe", "n_trajectories", "seed", "out",
                "expert", "expert_dir"},
               o.config);
    if (o.game.empty()) o.game = j.value("game", "");
    if (o.params.empty() && j.contains("params")) {
      for (const auto& [k, v] : params_from_json(j["params"])) {
        o.params.push_back(k + "=" + std::to_string(v));
      }
    }
    if (o.recipe.empty()) o.recipe = j.value("recipe", "");
    if (o.n_trajectories < 0) o.n_trajectories = j.value("n_trajectories", -1);
    if (o.seed < 0) o.seed = j.value("seed", 0);
    if (o.out.empty()) o.out = j.value("out", "");
    if (o.expert.empty()) o.expert = j.value("expert", "");
    if (o.expert_dir.empty()) o.expert_dir = j.value("expert_dir", "");
  }
  if (o.game.empty()) throw ConfigError("sample: missing game");
  if (o.recipe.empty()) throw ConfigError("sample: missing recipe");
  if (o.out.empty()) throw ConfigError("sample: missing output path");
  if (o.seed < 0) o.seed = 0;
  const auto game = offfsp::make_game(o.game, parse_params(o.params));
  const auto seed = static_cast<std::uint64_t>(o.seed);

  offfsp::GameDataset d;
  if (o.recipe == "d1") {
    if (o.game != "rps") throw ConfigError("recipe 'd1' is defined for rps");
    d = offfsp::make_rps_d1();
  } else if (o.recipe == "d2") {
    if (o.game != "rps_asym") {
      throw ConfigError("recipe 'd2' is defined for rps_asym");
    }
    d = offfsp::make_rps_d2();
  } else if (o.recipe.rfind("mix:", 0) == 0) {
    double ratio;
    try {
      ratio = std::stod(o.recipe.substr(4));
    } catch (const std::exception&) {
      throw ConfigError("mix recipe expects mix:<ratio>");
    }
    if (ratio < 0.0 || ratio > 1.0) throw ConfigError("mix ratio in [0, 1]");
    if (o.n_trajectories < 1) throw ConfigError("sample: missing n_trajectories");
    offfsp::StrategyProfile expert;  // uniform unless the ratio needs it
    if (ratio > 0.0) expert = load_expert_profile(o.expert, o.game);
    d = offfsp::sample_mix_dataset(*game, expert, offfsp::StrategyProfile{},
                                   ratio, o.n_trajectories, seed);
  } else if (o.recipe.rfind("population:", 0) == 0) {
    if (o.n_trajectories < 1) throw ConfigError("sample: missing n_trajectories");
    if (o.expert_dir.empty()) {
      throw ConfigError(
          "population recipes need --expert-dir (a gen-expert output "
          "directory)");
    }
    std::vector<offfsp::StrategyProfile> population;
    std::stringstream list(o.recipe.substr(11));
    std::string item;
    while (std::getline(list, item, ',')) {
      const fs::path path =
          fs::path(o.expert_dir) / ("expert_" + item + ".json");
      if (!fs::exists(path)) {
        throw std::runtime_error("missing expert checkpoint '" +
                                 path.string() +
                                 "' (generate it with gen-expert)");
      }
      population.push_back(load_expert_profile(path.string(), o.game));
    }
    if (population.empty()) {
      throw ConfigError("population recipe expects population:<k1,k2,...>");
    }
    d = offfsp::sample_population_dataset(*game, population, o.n_trajectories,
                                          seed);
  } else if (o.recipe.rfind("file:", 0) == 0) {
    d = offfsp::load(o.recipe.substr(5));
  } else {
    throw ConfigError("unknown recipe '" + o.recipe +
                      "' (d1 | d2 | mix:<ratio> | population:<k,...> | "
                      "file:<path>)");
  }

  ensure_parent_dir(o.out);
  offfsp::save(d, o.out);
  const auto coverage = offfsp::coverage_report(*game, d);
  offfsp::write_coverage_csv(coverage, o.out + ".coverage.csv");
  std::cout << "wrote " << d.trajectories.size() << " trajectories to " << o.out
            << "\nterminal coverage: " << coverage.terminal_coverage
            << "  infostate-action coverage: "
            << coverage.infostate_action_coverage << "\n";
}

// ---------------------------------------------------------------------------
// run

struct RunOpts {
  std::vector<std::string> configs;
  std::int64_t seed = -1;
  int iterations = -1;
  std::string algorithm;
  std::string dataset;
  std::string out;
  int jobs = 1;
};

int run_single(const RunOpts& o, const std::string& config_path) {
  const json j = load_config(config_path);
  check_keys(j,
             {"game", "params", "dataset", "iterations", "eval_every",
              "learner", "baselines", "seed", "out"},
             config_path);
  const std::string game_name = j.value("game", "");
  if (game_name.empty()) throw ConfigError(config_path + ": missing game");
  const std::string dataset_path =
      !o.dataset.empty() ? o.dataset : j.value("dataset", "");
  if (dataset_path.empty()) throw ConfigError(config_path + ": missing dataset");
  const std::string out = !o.out.empty() ? o.out : j.value("out", "");
  if (out.empty()) throw ConfigError(config_path + ": missing out");
  const int K = o.iterations >= 0 ? o.iterations : j.value("iterations", -1);
  if (K < 0) throw ConfigError(config_path + ": missing iterations");
  const int eval_every = j.value("eval_every", 10);
  const auto seed = static_cast<std::uint64_t>(
      o.seed >= 0 ? o.seed : j.value("seed", 0));
  offfsp::LearnerConfig cfg = learner_from_json(j.value("learner", json::object()));
  if (!o.algorithm.empty()) {
    cfg.algorithm = offfsp::algorithm_from_string(o.algorithm);
  }

  const offfsp::GameDataset d = offfsp::load(dataset_path);
  if (d.game_name != game_name) {
    throw ConfigError("config names game '" + game_name + "' but dataset '" +
                      dataset_path + "' holds '" + d.game_name + "'");
  }
  const auto game = offfsp::make_game(d.game_name, d.game_params);
  if (j.contains("params")) {
    const auto wanted = params_from_json(j["params"]);
    if (wanted != game->params()) {
      throw ConfigError("config params do not match the dataset's game params");
    }
  }

  fs::create_directories(out);
  const auto result = offfsp::run_off_fsp(*game, d, K, cfg, eval_every, seed);
  offfsp::write_run_report_csv(result.report,
                               (fs::path(out) / "report.csv").string());
  offfsp::save_store(result.store, game->name(),
                     (fs::path(out) / "store.json").string());
  const auto avg = offfsp::behavior_from_store(result.store);
  offfsp::save_profile(avg, game->name(),
                       (fs::path(out) / "avg_profile.json").string());
  const auto final_report = offfsp::nash_conv(*game, avg);

  // Baselines: learners on the identity-weighted dataset (no self-play).
  std::ofstream baselines(fs::path(out) / "baselines.csv");
  baselines << "baseline,nashconv,gain_p0,gain_p1\n";
  for (const auto& name : j.value("baselines", std::vector<std::string>{})) {
    offfsp::LearnerConfig bcfg = cfg;
    bcfg.algorithm = offfsp::algorithm_from_string(name);
    offfsp::StrategyProfile profile;
    for (offfsp::Player p = 0; p < 2; ++p) {
      const auto projection = offfsp::project(d, p);
      offfsp::WeightedPlayerDataset wd(
          projection, std::vector<double>(projection.num_tuples(), 1.0));
      std::mt19937_64 rng(seed + 0x9e3779b9u * (p + 1));
      profile[p] =
          offfsp::learn_best_response(wd, std::nullopt, bcfg, rng).policy.policy;
    }
    const auto report = offfsp::nash_conv(*game, profile);
    baselines << name << ',' << report.total << ','
              << report.per_player_gain[0] << ',' << report.per_player_gain[1]
              << '\n';
    offfsp::save_profile(profile, game->name(),
                         (fs::path(out) / ("baseline_" + name + ".json"))
                             .string());
  }

  json final_json{{"nashconv", final_report.total},
                  {"gain_p0", final_report.per_player_gain[0]},
                  {"gain_p1", final_report.per_player_gain[1]},
                  {"iterations", K},
                  {"seed", seed}};
  std::ofstream(fs::path(out) / "final.json") << final_json.dump(2) << '\n';
  std::cout << config_path << ": final nashconv " << final_report.total
            << "\n";
  return 0;
}

int cmd_run(const RunOpts& o, const std::string& self) {
  if (o.configs.empty()) throw ConfigError("run: at least one --config");
  if (o.jobs < 1) throw ConfigError("--jobs must be >= 1");
  if (o.configs.size() == 1) return run_single(o, o.configs[0]);

  // Grid fan-out: each config runs in its own process.
  std::atomic<int> next{0};
  std::atomic<int> worst{0};
  std::vector<std::thread> workers;
  const int n_workers =
      std::min<int>(o.jobs, static_cast<int>(o.configs.size()));
  for (int w = 0; w < n_workers; ++w) {
    workers.emplace_back([&] {
      for (int i = next++; i < static_cast<int>(o.configs.size());
           i = next++) {
        const std::string cmd =
            "'" + self + "' run --config '" + o.configs[i] + "'";
        const int status = std::system(cmd.c_str());
        const int code = status < 0 ? 2 : WEXITSTATUS(status);
        int cur = worst.load();
        while (code > cur && !worst.compare_exchange_weak(cur, code)) {
        }
      }
    });
  }
  for (auto& t : workers) t.join();
  return worst.load();
}

// ---------------------------------------------------------------------------
// eval

struct EvalOpts {
  std::string game;
  std::vector<std::string> params;
  std::string policy;
  std::string profile;
  std::string store;
  std::string out;
};

void cmd_eval(const EvalOpts& o) {
  const int given = !o.policy.empty() + !o.profile.empty() + !o.store.empty();
  if (given != 1) {
    throw ConfigError("eval: exactly one of --policy, --profile, --store");
  }
  const auto game = offfsp::make_game(o.game, parse_params(o.params));
  offfsp::StrategyProfile profile;
  std::string stored_game;
  if (!o.policy.empty()) {
    // A single table may hold both seats: keys are player-tagged.
    const auto policy = offfsp::load_policy(o.policy, &stored_game);
    profile = {policy, policy};
  } else if (!o.profile.empty()) {
    profile = offfsp::load_profile(o.profile, &stored_game);
  } else {
    profile =
        offfsp::behavior_from_store(offfsp::load_store(o.store, &stored_game));
  }
  if (!stored_game.empty() && stored_game != game->name()) {
    throw ConfigError("file is for game '" + stored_game + "', not '" +
                      game->name() + "'");
  }
  const auto report = offfsp::nash_conv(*game, profile);
  std::cout << "nashconv: " << report.total
            << "\nbr gain p0: " << report.per_player_gain[0]
            << "\nbr gain p1: " << report.per_player_gain[1] << "\n";
  if (!o.out.empty()) {
    ensure_parent_dir(o.out);
    std::ofstream csv(o.out);
    csv << "nashconv,gain_p0,gain_p1\n"
        << report.total << ',' << report.per_player_gain[0] << ','
        << report.per_player_gain[1] << '\n';
  }
}

// ---------------------------------------------------------------------------
// inspect

void cmd_inspect(const std::string& dataset_path) {
  const offfsp::GameDataset d = offfsp::load(dataset_path);
  std::size_t events = 0;
  std::array<double, 2> mean_return{0.0, 0.0};
  for (const auto& t : d.trajectories) {
    events += t.events.size();
    mean_return[0] += t.returns[0];
    mean_return[1] += t.returns[1];
  }
  const double n = static_cast<double>(d.trajectories.size());
  std::cout << "game: " << d.game_name;
  for (const auto& [k, v] : d.game_params) std::cout << ' ' << k << '=' << v;
  std::cout << "\nrecipe: " << d.recipe << "\nseed: " << d.seed
            << "\ntrajectories: " << d.trajectories.size()
            << "\nmean events/trajectory: " << (n > 0 ? events / n : 0.0)
            << "\nmean return p0: " << (n > 0 ? mean_return[0] / n : 0.0)
            << "\n";
  const auto game = offfsp::make_game(d.game_name, d.game_params);
  const auto coverage = offfsp::coverage_report(*game, d);
  std::cout << "terminal coverage: " << coverage.covered_terminals << '/'
            << coverage.total_terminals
            << "\ninfostate-action coverage: "
            << coverage.covered_state_actions << '/'
            << coverage.total_state_actions << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Off-FSP: offline fictitious self-play for two-player "
               "zero-sum extensive-form games"};
  app.require_subcommand(1);

  GenExpertOpts gen;
  auto* gen_cmd = app.add_subcommand(
      "gen-expert", "Solve a game with exact fictitious play; write "
                    "checkpoint profiles and a NashConv curve");
  gen_cmd->add_option("--game", gen.game, "Game name")->required();
  gen_cmd->add_option("--param", gen.params, "Game parameter key=value");
  gen_cmd->add_option("--iterations", gen.iterations, "Iterations")->required();
  gen_cmd->add_option("--every", gen.every, "Checkpoint interval");
  gen_cmd->add_option("--out", gen.out, "Output directory")->required();

  SampleOpts sample;
  auto* sample_cmd =
      app.add_subcommand("sample", "Materialize a dataset recipe");
  sample_cmd->add_option("--config", sample.config, "JSON config file");
  sample_cmd->add_option("--game", sample.game, "Game name");
  sample_cmd->add_option("--param", sample.params, "Game parameter key=value");
  sample_cmd->add_option("--recipe", sample.recipe,
                         "d1 | d2 | mix:<ratio> | population:<k,...> | "
                         "file:<path>");
  sample_cmd->add_option("--n", sample.n_trajectories, "Trajectory count");
  sample_cmd->add_option("--seed", sample.seed, "RNG seed");
  sample_cmd->add_option("--out", sample.out, "Output dataset path (.jsonl)");
  sample_cmd->add_option("--expert", sample.expert,
                         "Expert profile file (mix recipes)");
  sample_cmd->add_option("--expert-dir", sample.expert_dir,
                         "gen-expert output directory (population recipes)");

  RunOpts run;
  auto* run_cmd = app.add_subcommand("run", "Run Off-FSP from a config");
  run_cmd->add_option("--config", run.configs, "JSON config file(s)")
      ->required();
  run_cmd->add_option("--seed", run.seed, "Override config seed");
  run_cmd->add_option("--iterations", run.iterations,
                      "Override config iterations");
  run_cmd->add_option("--algorithm", run.algorithm,
                      "Override learner algorithm");
  run_cmd->add_option("--dataset", run.dataset, "Override dataset path");
  run_cmd->add_option("--out", run.out, "Override output directory");
  run_cmd->add_option("--jobs", run.jobs,
                      "Worker processes for multi-config grids");

  EvalOpts eval;
  auto* eval_cmd =
      app.add_subcommand("eval", "Exact NashConv of a serialized policy");
  eval_cmd->add_option("--game", eval.game, "Game name")->required();
  eval_cmd->add_option("--param", eval.params, "Game parameter key=value");
  eval_cmd->add_option("--policy", eval.policy, "Policy file (both seats)");
  eval_cmd->add_option("--profile", eval.profile, "Profile file");
  eval_cmd->add_option("--store", eval.store, "Average-policy store file");
  eval_cmd->add_option("--out", eval.out, "Optional CSV output");

  std::string inspect_path;
  auto* inspect_cmd = app.add_subcommand("inspect", "Dataset statistics");
  inspect_cmd->add_option("--dataset", inspect_path, "Dataset file")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*gen_cmd) cmd_gen_expert(gen);
    if (*sample_cmd) cmd_sample(sample);
    if (*run_cmd) return cmd_run(run, argv[0]);
    if (*eval_cmd) cmd_eval(eval);
    if (*inspect_cmd) cmd_inspect(inspect_path);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
