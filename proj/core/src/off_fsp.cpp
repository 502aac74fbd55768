#include "offfsp/off_fsp.hpp"

#include <chrono>
#include <fstream>
#include <stdexcept>

#include "offfsp/reweight.hpp"

namespace offfsp {

namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - since)
      .count();
}

}  // namespace

double lambda_mix(double alpha_k, double x_prev, double x_br) {
  const double denom = (1.0 - alpha_k) * x_prev + alpha_k * x_br;
  if (denom <= 0.0) return alpha_k;  // unreachable state: any mix is valid
  return alpha_k * x_br / denom;
}

void update_average_policy(const Game& game, AveragePolicyStore& store,
                           Player player, const BehaviorPolicy& beta, int k) {
  if (k < 1) throw std::invalid_argument("update_average_policy: k >= 1");
  // The mixture's sequence form is the convex combination of the two sequence
  // forms, so the sample-level update is linear in this representation.
  const double keep = static_cast<double>(k - 1) / k;
  const double add = 1.0 / k;
  auto& values = store.values[player];
  for (auto& [key, row] : values) {
    for (double& v : row) v *= keep;
  }
  const SequenceForm x_beta = sequence_form_values(game, beta, player);
  for (const auto& [key, row] : x_beta) {
    auto& stored = values[key];
    if (stored.empty()) stored.assign(row.size(), 0.0);
    for (std::size_t a = 0; a < row.size(); ++a) stored[a] += add * row[a];
  }
  store.iteration = k;
}

StrategyProfile behavior_from_store(const AveragePolicyStore& store) {
  StrategyProfile profile;
  for (Player p = 0; p < 2; ++p) {
    for (const auto& [key, row] : store.values[p]) {
      double total = 0.0;
      for (double v : row) total += v;
      if (total <= 0.0) continue;  // unreachable: uniform fallback downstream
      ActionDist dist(row.size());
      for (std::size_t a = 0; a < row.size(); ++a) dist[a] = row[a] / total;
      profile[p].table.emplace(key, std::move(dist));
    }
  }
  return profile;
}

NashConvReport evaluate_aggregate(const AveragePolicyStore& store,
                                  const Game& game) {
  return nash_conv(game, behavior_from_store(store));
}

PolicyCollection checkpoint_collection(const PolicyCollection& collection,
                                       int every) {
  if (every < 1) throw std::invalid_argument("checkpoint_collection: every >= 1");
  PolicyCollection out;
  out.initial = collection.initial;
  for (Player p = 0; p < 2; ++p) {
    const auto& responses = collection.responses[p];
    const int n = static_cast<int>(responses.size());
    double kept_mass = 0.0;
    std::vector<int> kept;
    for (int i = 0; i < n; ++i) {
      const int k = i + 1;
      if (k % every == 0 || k == n) {
        kept.push_back(i);
        kept_mass += collection.weights[p][i + 1];  // weights[0] is initial
      }
    }
    out.weights[p].push_back(collection.weights[p][0]);
    const double initial_mass = collection.weights[p][0];
    const double scale =
        kept_mass > 0.0 ? (1.0 - initial_mass) / kept_mass : 0.0;
    for (int i : kept) {
      out.responses[p].push_back(responses[i]);
      out.weights[p].push_back(collection.weights[p][i + 1] * scale);
    }
  }
  return out;
}

OffFspResult run_off_fsp(const Game& game, const GameDataset& d_E, int K,
                         const LearnerConfig& cfg, int eval_every,
                         std::uint64_t seed) {
  if (K < 0) throw std::invalid_argument("run_off_fsp: K >= 0");
  cfg.validate();
  if (game.name() != d_E.game_name) {
    throw std::invalid_argument("dataset was sampled from game '" +
                                d_E.game_name + "', not '" + game.name() + "'");
  }

  OffFspResult result;
  const StrategyProfile empirical = empirical_behavior_policy(d_E);
  std::array<PlayerDataset, 2> projections{project(d_E, 0), project(d_E, 1)};
  result.collection.initial = empirical;
  for (Player p = 0; p < 2; ++p) {
    result.store.values[p] = sequence_form_values(game, empirical[p], p);
  }

  std::array<std::mt19937_64, 2> rngs{std::mt19937_64(mix_seed(seed, 0)),
                                      std::mt19937_64(mix_seed(seed, 1))};
  std::array<std::optional<QTable>, 2> warm;

  for (int k = 1; k <= K; ++k) {
    IterationRecord rec;
    rec.iteration = k;
    // Both players reweight against and respond to the (k-1)-iteration store.
    const std::array<SequenceForm, 2> prev = result.store.values;
    const StrategyProfile prev_behavior = behavior_from_store(result.store);

    std::array<LearnedPolicy, 2> betas;
    for (Player p = 0; p < 2; ++p) {
      auto t0 = std::chrono::steady_clock::now();
      const WeightedPlayerDataset wd =
          generate_data(d_E, projections[p], p, prev[1 - p], empirical[1 - p],
                        cfg.weight_cap);
      rec.t_reweight_ms += elapsed_ms(t0);

      t0 = std::chrono::steady_clock::now();
      BestResponseLearnResult learned =
          learn_best_response(wd, warm[p], cfg, rngs[p]);
      warm[p] = std::move(learned.qtable);
      learned.policy.iteration = k;
      betas[p] = std::move(learned.policy);
      rec.t_learn_ms += elapsed_ms(t0);
    }

    auto t0 = std::chrono::steady_clock::now();
    for (Player p = 0; p < 2; ++p) {
      StrategyProfile vs = prev_behavior;
      vs[p] = betas[p].policy;
      rec.br_value[p] = expected_value(game, vs)[p];
      update_average_policy(game, result.store, p, betas[p].policy, k);
      result.collection.responses[p].push_back(std::move(betas[p]));
    }
    if (eval_every > 0 && (k % eval_every == 0 || k == K)) {
      rec.nashconv = evaluate_aggregate(result.store, game).total;
    }
    rec.t_eval_ms = elapsed_ms(t0);

    result.report.total_reweight_ms += rec.t_reweight_ms;
    result.report.total_learn_ms += rec.t_learn_ms;
    result.report.total_eval_ms += rec.t_eval_ms;
    result.report.iterations.push_back(std::move(rec));
  }

  // alpha_k = 1/k wipes the initial policy at k = 1 and leaves each best
  // response with weight 1/K.
  for (Player p = 0; p < 2; ++p) {
    auto& w = result.collection.weights[p];
    w.push_back(K == 0 ? 1.0 : 0.0);
    for (int k = 1; k <= K; ++k) w.push_back(1.0 / K);
  }
  return result;
}

void write_run_report_csv(const RunReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << "iteration,nashconv,br_value_p0,br_value_p1,"
         "t_reweight_ms,t_learn_ms,t_eval_ms\n";
  for (const auto& rec : report.iterations) {
    out << rec.iteration << ',';
    if (rec.nashconv >= 0.0) out << rec.nashconv;
    out << ',' << rec.br_value[0] << ',' << rec.br_value[1] << ','
        << rec.t_reweight_ms << ',' << rec.t_learn_ms << ',' << rec.t_eval_ms
        << '\n';
  }
}

}  // namespace offfsp
