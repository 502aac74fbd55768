#pragma once

#include <limits>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "offfsp/reweight.hpp"

namespace offfsp {

// Tabular action-value function. Missing entries read as 0.
class QTable {
 public:
  double get(const std::string& key, Action a) const;
  const std::vector<double>* row(const std::string& key) const;
  std::vector<double>& row(const std::string& key, int num_actions);
  void set(const std::string& key, Action a, int num_actions, double value);
  const std::unordered_map<std::string, std::vector<double>>& table() const {
    return table_;
  }
  void dump_csv(const std::string& path) const;

 private:
  std::unordered_map<std::string, std::vector<double>> table_;
};

enum class Algorithm { kBC, kQLearning, kCQL, kBCQ, kCRR };

Algorithm algorithm_from_string(const std::string& name);
std::string to_string(Algorithm a);

struct LearnerConfig {
  Algorithm algorithm = Algorithm::kCQL;
  // Tabular-scale defaults. The neural-net settings this family of learners
  // is usually run with (lr 1e-4, batch 1024, 1000 steps per iteration)
  // remain available via config; tabular tables need far fewer updates.
  double learning_rate = 1e-3;
  int batch_size = 256;
  int steps = 384;
  int target_update_every = 16;
  double discount = 1.0;  // episodic games: gamma = 1 makes the RL optimum the BR
  double cql_alpha = 0.05;
  double bcq_threshold = 0.1;
  double crr_beta = 1.0;
  double crr_ratio_bound = 20.0;
  double weight_cap = std::numeric_limits<double>::infinity();

  void validate() const;  // throws std::invalid_argument
};

struct LearnedPolicy {
  BehaviorPolicy policy;
  Algorithm algorithm = Algorithm::kBC;
  int iteration = 0;
};

using Batch = std::vector<const PlayerTuple*>;

// Weighted counting policy: pi(a|s) = weighted count(s,a) / weighted count(s).
LearnedPolicy learn_bc(const WeightedPlayerDataset& wd);

// One TD(0) sweep over the batch with max-bootstrap from the target table.
void td_step(QTable& q, const QTable& target, const Batch& batch, double gamma,
             double lr);

// td_step plus the tabular CQL penalty gradient: for each batch state,
// Q(s, .) -= lr*alpha*softmax(Q(s, .)) over legal actions and
// Q(s, a_data) += lr*alpha.
void cql_step(QTable& q, const QTable& target, const Batch& batch, double gamma,
              double lr, double alpha);

// Actions whose empirical frequency ratio to the most frequent action exceeds
// the threshold. The argmax-frequency action always passes.
std::vector<Action> bcq_mask(const BehaviorPolicy& empirical,
                             const std::string& key, int num_actions,
                             double threshold);

// Advantage-filtered weighted behavior cloning (exponential mode):
// pi(a|s) proportional to count_w(s,a) * f, with the filter
// f = exp(A(s,a)/beta) clipped into [1/ratio_bound, ratio_bound], so
// ratio_bound = 1 reduces to plain weighted cloning.
LearnedPolicy crr_policy(const QTable& q, const WeightedPlayerDataset& wd,
                         double beta, double ratio_bound);

// Deterministic argmax per infostate, ties to the lowest action id; with a
// mask source, the argmax is over the allowed actions only. Infostates absent
// from the table fall back to uniform at evaluation time.
LearnedPolicy greedy_policy(const QTable& q,
                            const BehaviorPolicy* mask_source = nullptr,
                            double bcq_threshold = 0.1);

struct BestResponseLearnResult {
  LearnedPolicy policy;
  QTable qtable;
};

// cfg.steps resample-batch + learner-step cycles, target table refreshed
// every target_update_every steps, warm-started from the previous iteration's
// table when given.
BestResponseLearnResult learn_best_response(
    const WeightedPlayerDataset& wd, const std::optional<QTable>& warm_start,
    const LearnerConfig& cfg, std::mt19937_64& rng);

}  // namespace offfsp
