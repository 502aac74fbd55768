#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "offfsp/dataset.hpp"
#include "offfsp/exact_solver.hpp"
#include "offfsp/offline_rl.hpp"

namespace offfsp {

// Per-player sequence-form average policy: stored(s,a) = x(s) * pi_k(a|s).
// Normalizing per state recovers the behavior-form average; the raw entries
// feed the opponent-reweighting numerator of the next iteration.
struct AveragePolicyStore {
  std::array<SequenceForm, 2> values;
  int iteration = 0;
};

// Ordered best responses plus the initial empirical policy, with the mixing
// weights implied by the alpha_k = 1/k schedule.
struct PolicyCollection {
  std::array<std::vector<LearnedPolicy>, 2> responses;  // beta_1 .. beta_K
  std::array<BehaviorPolicy, 2> initial;                // pi_hat_b
  std::array<std::vector<double>, 2> weights;  // over {initial, beta_1..}
};

struct IterationRecord {
  int iteration = 0;
  double nashconv = -1.0;  // -1: not evaluated this iteration
  std::array<double, 2> br_value{0.0, 0.0};  // learner's value vs the store
  double t_reweight_ms = 0.0;
  double t_learn_ms = 0.0;
  double t_eval_ms = 0.0;
};

struct RunReport {
  std::vector<IterationRecord> iterations;
  double total_reweight_ms = 0.0;
  double total_learn_ms = 0.0;
  double total_eval_ms = 0.0;
};

struct OffFspResult {
  PolicyCollection collection;
  AveragePolicyStore store;
  RunReport report;
};

// lambda of the realization-equivalence update: the probability that the new
// best response (rather than the running average) owns the play at a state
// with the given reach probabilities. Degenerate case (both reaches 0)
// resolves to alpha_k.
double lambda_mix(double alpha_k, double x_prev, double x_br);

// stored(s,a) <- (k-1)/k * stored(s,a) + 1/k * x_beta(s) * beta(a|s),
// inserting keys the best response reaches but the store lacks.
void update_average_policy(const Game& game, AveragePolicyStore& store,
                           Player player, const BehaviorPolicy& beta, int k);

// Behavior-form profile: pi(a|s) = stored(s,a) / sum_a' stored(s,a');
// zero-mass states fall back to uniform downstream.
StrategyProfile behavior_from_store(const AveragePolicyStore& store);

NashConvReport evaluate_aggregate(const AveragePolicyStore& store,
                                  const Game& game);

// Retains entries at multiples of `every` plus the last; renormalizes the
// mixing weights proportionally.
PolicyCollection checkpoint_collection(const PolicyCollection& collection,
                                       int every);

// Algorithm driver: initializes the store with the sequence form of the
// empirical behavior policy, then per iteration reweights against the
// opponent's previous-iteration store, learns each player's best response
// warm-started from the last one, and folds it into the store. Both players
// read the (k-1)-stores: simultaneous update.
OffFspResult run_off_fsp(const Game& game, const GameDataset& d_E, int K,
                         const LearnerConfig& cfg, int eval_every,
                         std::uint64_t seed);

void write_run_report_csv(const RunReport& report, const std::string& path);

}  // namespace offfsp
