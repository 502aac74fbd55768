#include "offfsp/offline_rl.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace offfsp {

double QTable::get(const std::string& key, Action a) const {
  const auto it = table_.find(key);
  if (it == table_.end()) return 0.0;
  return it->second[a];
}

const std::vector<double>* QTable::row(const std::string& key) const {
  const auto it = table_.find(key);
  return it == table_.end() ? nullptr : &it->second;
}

std::vector<double>& QTable::row(const std::string& key, int num_actions) {
  auto& row = table_[key];
  if (row.empty()) row.assign(num_actions, 0.0);
  return row;
}

void QTable::set(const std::string& key, Action a, int num_actions,
                 double value) {
  row(key, num_actions)[a] = value;
}

void QTable::dump_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << "infostate,action,value\n";
  std::vector<const std::string*> keys;
  for (const auto& [key, row] : table_) keys.push_back(&key);
  std::sort(keys.begin(), keys.end(),
            [](const auto* a, const auto* b) { return *a < *b; });
  for (const auto* key : keys) {
    const auto& row = table_.at(*key);
    for (std::size_t a = 0; a < row.size(); ++a) {
      out << '"' << *key << "\"," << a << ',' << row[a] << '\n';
    }
  }
}

Algorithm algorithm_from_string(const std::string& name) {
  if (name == "bc") return Algorithm::kBC;
  if (name == "qlearning") return Algorithm::kQLearning;
  if (name == "cql") return Algorithm::kCQL;
  if (name == "bcq") return Algorithm::kBCQ;
  if (name == "crr") return Algorithm::kCRR;
  throw std::invalid_argument(
      "unknown algorithm '" + name +
      "'; supported: bc, qlearning, cql, bcq, crr");
}

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::kBC: return "bc";
    case Algorithm::kQLearning: return "qlearning";
    case Algorithm::kCQL: return "cql";
    case Algorithm::kBCQ: return "bcq";
    case Algorithm::kCRR: return "crr";
  }
  return "?";
}

void LearnerConfig::validate() const {
  if (learning_rate <= 0.0) throw std::invalid_argument("learning_rate > 0");
  if (batch_size < 1) throw std::invalid_argument("batch_size >= 1");
  if (steps < 0) throw std::invalid_argument("steps >= 0");
  if (target_update_every < 1) {
    throw std::invalid_argument("target_update_every >= 1");
  }
  if (discount < 0.0 || discount > 1.0) {
    throw std::invalid_argument("discount in [0, 1]");
  }
  if (cql_alpha < 0.0) throw std::invalid_argument("cql_alpha >= 0");
  if (bcq_threshold < 0.0 || bcq_threshold > 1.0) {
    throw std::invalid_argument("bcq_threshold in [0, 1]");
  }
  if (crr_beta <= 0.0) throw std::invalid_argument("crr_beta > 0");
  if (crr_ratio_bound < 1.0) throw std::invalid_argument("crr_ratio_bound >= 1");
  if (weight_cap <= 0.0) throw std::invalid_argument("weight_cap > 0");
}

LearnedPolicy learn_bc(const WeightedPlayerDataset& wd) {
  if (wd.total_weight() <= 0.0) {
    throw std::runtime_error("degenerate dataset: all weights zero");
  }
  std::unordered_map<std::string, std::vector<double>> counts;
  const auto& tuples = wd.tuples();
  const auto& weights = wd.weights();
  for (std::size_t i = 0; i < tuples.size(); ++i) {
    auto& row = counts[tuples[i]->state_key];
    if (row.empty()) row.assign(tuples[i]->num_actions, 0.0);
    row[tuples[i]->action] += weights[i];
  }
  LearnedPolicy out;
  out.algorithm = Algorithm::kBC;
  for (auto& [key, row] : counts) {
    double total = 0.0;
    for (double c : row) total += c;
    if (total <= 0.0) continue;  // state only present with zero weight
    for (double& c : row) c /= total;
    out.policy.table.emplace(key, std::move(row));
  }
  return out;
}

namespace {

double masked_max(const std::vector<double>& row,
                  const std::vector<Action>* allowed) {
  if (!allowed) return *std::max_element(row.begin(), row.end());
  double best = row[(*allowed)[0]];
  for (Action a : *allowed) best = std::max(best, row[a]);
  return best;
}

// TD(0) sweep; `mask` (optional, per next-state key) restricts the bootstrap
// argmax to the BCQ-allowed actions.
void td_sweep(QTable& q, const QTable& target, const Batch& batch,
              double gamma, double lr, const BehaviorPolicy* mask_source,
              double bcq_threshold) {
  for (const PlayerTuple* t : batch) {
    double bootstrap = 0.0;
    if (!t->terminal) {
      const auto* target_row = target.row(t->next_key);
      if (target_row) {
        if (mask_source && mask_source->contains(t->next_key)) {
          const auto allowed = bcq_mask(*mask_source, t->next_key,
                                        t->num_next_actions, bcq_threshold);
          bootstrap = masked_max(*target_row, &allowed);
        } else {
          bootstrap = masked_max(*target_row, nullptr);
        }
      }
    }
    auto& row = q.row(t->state_key, t->num_actions);
    const double td_error = t->reward + gamma * bootstrap - row[t->action];
    row[t->action] += lr * td_error;
  }
}

}  // namespace

void td_step(QTable& q, const QTable& target, const Batch& batch, double gamma,
             double lr) {
  if (batch.empty()) throw std::invalid_argument("td_step: empty batch");
  td_sweep(q, target, batch, gamma, lr, nullptr, 0.0);
}

void cql_step(QTable& q, const QTable& target, const Batch& batch,
              double gamma, double lr, double alpha) {
  if (batch.empty()) throw std::invalid_argument("cql_step: empty batch");
  for (const PlayerTuple* t : batch) {
    const Batch single{t};
    td_sweep(q, target, single, gamma, lr, nullptr, 0.0);
    if (alpha == 0.0) continue;  // bit-identical to td_step
    // Penalty gradient over legal actions: push all values down by their
    // softmax share, push the data action back up.
    auto& row = q.row(t->state_key, t->num_actions);
    const double max_q = *std::max_element(row.begin(), row.end());
    double z = 0.0;
    std::vector<double> expq(row.size());
    for (std::size_t a = 0; a < row.size(); ++a) {
      expq[a] = std::exp(row[a] - max_q);
      z += expq[a];
    }
    for (std::size_t a = 0; a < row.size(); ++a) {
      row[a] -= lr * alpha * expq[a] / z;
    }
    row[t->action] += lr * alpha;
  }
}

std::vector<Action> bcq_mask(const BehaviorPolicy& empirical,
                             const std::string& key, int num_actions,
                             double threshold) {
  const auto it = empirical.table.find(key);
  if (it == empirical.table.end()) {
    throw std::out_of_range("bcq_mask: infostate '" + key +
                            "' not observed in the dataset");
  }
  const auto& freq = it->second;
  const double best = *std::max_element(freq.begin(), freq.end());
  std::vector<Action> allowed;
  for (int a = 0; a < num_actions; ++a) {
    if (freq[a] / best > threshold) allowed.push_back(a);
  }
  return allowed;
}

LearnedPolicy crr_policy(const QTable& q, const WeightedPlayerDataset& wd,
                         double beta, double ratio_bound) {
  std::unordered_map<std::string, std::vector<double>> counts;
  const auto& tuples = wd.tuples();
  const auto& weights = wd.weights();
  for (std::size_t i = 0; i < tuples.size(); ++i) {
    auto& row = counts[tuples[i]->state_key];
    if (row.empty()) row.assign(tuples[i]->num_actions, 0.0);
    row[tuples[i]->action] += weights[i];
  }
  LearnedPolicy out;
  out.algorithm = Algorithm::kCRR;
  for (auto& [key, count_row] : counts) {
    double total = 0.0;
    for (double c : count_row) total += c;
    if (total <= 0.0) continue;
    const auto* q_row = q.row(key);
    std::vector<double> probs(count_row.size(), 0.0);
    double baseline = 0.0;
    if (q_row) {
      for (std::size_t a = 0; a < count_row.size(); ++a) {
        baseline += count_row[a] / total * (*q_row)[a];
      }
    }
    double norm = 0.0;
    for (std::size_t a = 0; a < count_row.size(); ++a) {
      const double advantage = (q_row ? (*q_row)[a] : 0.0) - baseline;
      // ratio_bound clips the filter from both sides, so ratio_bound = 1
      // degenerates to weighted behavior cloning.
      const double filter = std::clamp(std::exp(advantage / beta),
                                       1.0 / ratio_bound, ratio_bound);
      probs[a] = count_row[a] * filter;
      norm += probs[a];
    }
    for (double& p : probs) p /= norm;
    out.policy.table.emplace(key, std::move(probs));
  }
  return out;
}

LearnedPolicy greedy_policy(const QTable& q, const BehaviorPolicy* mask_source,
                            double bcq_threshold) {
  LearnedPolicy out;
  out.algorithm = Algorithm::kQLearning;
  for (const auto& [key, row] : q.table()) {
    std::vector<Action> allowed;
    if (mask_source && mask_source->contains(key)) {
      allowed = bcq_mask(*mask_source, key, static_cast<int>(row.size()),
                         bcq_threshold);
    } else {
      allowed.resize(row.size());
      for (std::size_t a = 0; a < row.size(); ++a) allowed[a] = a;
    }
    Action best = allowed[0];
    for (Action a : allowed) {
      if (row[a] > row[best]) best = a;  // ties keep the lowest action id
    }
    ActionDist dist(row.size(), 0.0);
    dist[best] = 1.0;
    out.policy.table.emplace(key, std::move(dist));
  }
  return out;
}

BestResponseLearnResult learn_best_response(
    const WeightedPlayerDataset& wd, const std::optional<QTable>& warm_start,
    const LearnerConfig& cfg, std::mt19937_64& rng) {
  cfg.validate();
  if (cfg.algorithm == Algorithm::kBC) {
    return {learn_bc(wd), warm_start.value_or(QTable{})};
  }
  QTable q = warm_start.value_or(QTable{});
  QTable target = q;
  LearnedPolicy empirical;  // for BCQ masking and the CRR filter
  const bool needs_empirical = cfg.algorithm == Algorithm::kBCQ ||
                               cfg.algorithm == Algorithm::kCRR;
  if (needs_empirical) empirical = learn_bc(wd);

  for (int step = 0; step < cfg.steps; ++step) {
    if (step % cfg.target_update_every == 0) target = q;
    const Batch batch = wd.resample_batch(cfg.batch_size, rng);
    switch (cfg.algorithm) {
      case Algorithm::kQLearning:
        td_step(q, target, batch, cfg.discount, cfg.learning_rate);
        break;
      case Algorithm::kCQL:
      case Algorithm::kCRR:
        cql_step(q, target, batch, cfg.discount, cfg.learning_rate,
                 cfg.cql_alpha);
        break;
      case Algorithm::kBCQ:
        td_sweep(q, target, batch, cfg.discount, cfg.learning_rate,
                 &empirical.policy, cfg.bcq_threshold);
        break;
      default:
        break;
    }
  }

  BestResponseLearnResult result;
  result.qtable = std::move(q);
  switch (cfg.algorithm) {
    case Algorithm::kCRR:
      result.policy =
          crr_policy(result.qtable, wd, cfg.crr_beta, cfg.crr_ratio_bound);
      break;
    case Algorithm::kBCQ:
      result.policy = greedy_policy(result.qtable, &empirical.policy,
                                    cfg.bcq_threshold);
      break;
    default:
      result.policy = greedy_policy(result.qtable);
      break;
  }
  result.policy.iteration = 0;
  result.policy.algorithm = cfg.algorithm;
  return result;
}

}  // namespace offfsp
