#ifndef AIRNAV_TRAINER_HPP_
#define AIRNAV_TRAINER_HPP_

#include <optional>
#include <string>
#include <vector>

#include "airnav/policy.hpp"
#include "airnav/reward.hpp"
#include "airnav/world.hpp"

namespace airnav {

// One candidate action sequence for a single decision step.
struct RolloutRecord {
  ActionSequence sequence;
  std::vector<ChunkStep> steps;  // per-action features and log-probabilities
  double reward = 0.0;           // r_all earned by this candidate
  UAVState end_state;
};

// G candidates sampled from the same starting observation.
struct GroupSample {
  std::vector<RolloutRecord> rollouts;
};

// A point along an on-policy trajectory at which groups are sampled.
struct DecisionPoint {
  const Episode* episode = nullptr;
  UAVState state;
  SubgoalProgress progress;
  std::optional<Action> last_action;
  int t = 0;  // decision-step index within the episode
};

enum class TrainStage { kBcOnly, kGrpoOnly, kBcThenGrpo };

std::string_view train_stage_name(TrainStage s);
std::optional<TrainStage> train_stage_from_name(std::string_view name);

struct TrainConfig {
  int group_size = 8;
  double learning_rate = 1e-4;  // ascent step for the GRPO surrogate
  int updates = 1500;
  double clip_ratio = 0.2;
  int max_decision_steps = 50;
  std::uint64_t seed = 1;
  double temperature = 1.0;     // rollout sampling
  double d_norm_m = 200.0;      // feature distance normalizer

  int bc_epochs = 2;
  double bc_lr = 0.05;

  int train_episodes = 200;
  int holdout_episodes = 50;
  bool exclude_hard = true;     // keep the training world easy/medium
  int eval_every = 100;

  void validate() const;
};

struct CurvePoint {
  std::string stage;  // "bc" or "grpo"
  int update = 0;
  std::optional<double> mean_reward;  // grpo points
  std::optional<double> mean_loss;    // bc points
  std::optional<double> eval_sr;      // periodic greedy SR, percent
};

struct TrainResult {
  PolicyParams params;
  std::vector<CurvePoint> curve;
};

struct TrainingSuite {
  WorldMap world;
  std::vector<Episode> train;
  std::vector<Episode> holdout;
};

// Deterministic world + episode sets for a training run.
TrainingSuite make_training_suite(const WorldConfig& world_cfg,
                                  const SynthConfig& synth_cfg,
                                  const TrainConfig& cfg);

DecisionPoint start_point(const Episode& episode);

// Executes the record's sequence at the point, advancing state, subgoal
// progress, and the step index. Returns false once the episode is over
// (STOP emitted or the decision-step budget spent).
bool advance_point(DecisionPoint& point, const RolloutRecord& record,
                   int max_decision_steps);

// Samples one candidate sequence from the point's observation and scores it
// with the decision-step reward against the expert chunk at the same index.
RolloutRecord sample_candidate(const PolicyParams& params,
                               const DecisionPoint& point,
                               const RewardConfig& reward_cfg,
                               const TrainConfig& cfg, Rng& rng);

GroupSample sample_group(const PolicyParams& params, const DecisionPoint& point,
                         const RewardConfig& reward_cfg, const TrainConfig& cfg,
                         Rng& rng);

// a_i = (r_i - mean) / (population std + 1e-8).
std::vector<double> group_advantages(const std::vector<double>& rewards);

// Clipped surrogate, averaged per rollout over its sampled actions and over
// the group. logprob_old comes from the records; params supply logprob_new.
double grpo_objective(const PolicyParams& params, const GroupSample& group,
                      const std::vector<double>& advantages, double clip_ratio);

struct PolicyGradient {
  Eigen::Matrix<double, kNumActions, kFeatureDim> weights =
      Eigen::Matrix<double, kNumActions, kFeatureDim>::Zero();
  Eigen::Matrix<double, kNumActions, 1> bias =
      Eigen::Matrix<double, kNumActions, 1>::Zero();
};

PolicyGradient grpo_gradient(const PolicyParams& params,
                             const GroupSample& group,
                             const std::vector<double>& advantages,
                             double clip_ratio);

PolicyParams grpo_update(const PolicyParams& params, const GroupSample& group,
                         const TrainConfig& cfg);

// Cross-entropy imitation of expert actions, replayed from expert states.
// Returns the mean per-action loss of each epoch.
std::vector<double> bc_pretrain(PolicyParams& params,
                                const std::vector<Episode>& episodes,
                                int epochs, double lr, double d_norm,
                                Rng& rng);

// Greedy policy success rate over a suite, in percent.
double evaluate_policy_sr(const PolicyParams& params,
                          const std::vector<Episode>& episodes,
                          const TrainConfig& cfg);

TrainResult train(const WorldConfig& world_cfg, const SynthConfig& synth_cfg,
                  const RewardConfig& reward_cfg, const TrainConfig& cfg,
                  TrainStage stage);

}  // namespace airnav

#endif  // AIRNAV_TRAINER_HPP_
