#include "airnav/reward.hpp"

#include <cmath>
#include <stdexcept>

namespace airnav {

void RewardConfig::validate() const {
  if (!(epsilon > 0.0)) throw std::invalid_argument("reward: epsilon must be > 0");
  if (!(tau_yaw > 0.0)) throw std::invalid_argument("reward: tau_yaw must be > 0");
  const double weights[] = {alpha, beta, gamma, lambda1, lambda2};
  for (double w : weights) {
    if (!std::isfinite(w)) throw std::invalid_argument("reward: weight not finite");
  }
}

SubgoalProgress::SubgoalProgress(const Episode& episode)
    : reached_(episode.chain.intermediate.size(), false) {}

void SubgoalProgress::update(const Episode& episode, const Position& position) {
  if (reached_.size() != episode.chain.intermediate.size()) {
    throw std::invalid_argument("subgoal progress: episode mismatch");
  }
  for (std::size_t i = 0; i < reached_.size(); ++i) {
    if (reached_[i]) continue;
    const double d = euclidean_distance(
        position, episode.chain.intermediate[i].position);
    if (d < episode.node_threshold_m) reached_[i] = true;
  }
}

int SubgoalProgress::active_index(const Episode& episode) const {
  if (reached_.size() != episode.chain.intermediate.size()) {
    throw std::invalid_argument("subgoal progress: episode mismatch");
  }
  for (std::size_t i = 0; i < reached_.size(); ++i) {
    if (!reached_[i]) return static_cast<int>(i);
  }
  return static_cast<int>(reached_.size());  // the target
}

int SubgoalProgress::reached_count() const {
  int n = 0;
  for (bool r : reached_) n += r ? 1 : 0;
  return n;
}

double SubgoalProgress::reached_fraction(const Episode& episode) const {
  const double nodes =
      static_cast<double>(episode.chain.intermediate.size()) + 1.0;
  return reached_count() / nodes;
}

double distance_reward(double d_t, double d_t1, double epsilon) {
  if (d_t < 0.0 || d_t1 < 0.0) {
    throw std::invalid_argument("distance_reward: distances must be >= 0");
  }
  const double r = (d_t - d_t1) / (d_t + epsilon);
  return r > 0.0 ? r : 0.0;
}

double yaw_reward(Heading achieved, Heading subgoal, double tau_yaw) {
  const double delta = heading_delta(subgoal, achieved);
  const double r = 1.0 - std::abs(delta) / tau_yaw;
  return r > 0.0 ? r : 0.0;
}

double stop_reward(const ActionSequence& pred, const ActionSequence& gt,
                   double alpha, double beta) {
  const bool p = pred.ends_with_stop();
  const bool g = gt.ends_with_stop();
  if (p && g) return alpha;
  if (!p && !g) return beta;
  return 0.0;
}

FormatResult format_reward(std::string_view raw_output, double gamma) {
  FormatResult result;
  result.parsed = parse_action_sequence(raw_output);
  result.reward = result.parsed ? gamma : 0.0;
  return result;
}

double total_reward(const RewardBreakdown& b, const RewardConfig& cfg) {
  return cfg.lambda1 * b.r_dis + cfg.lambda2 * b.r_yaw + b.r_stop + b.r_format;
}

SubgoalRef active_subgoal(const Episode& episode,
                          const SubgoalProgress& progress) {
  const int idx = progress.active_index(episode);
  if (episode.node_states.empty() ||
      idx >= static_cast<int>(episode.node_states.size())) {
    throw std::invalid_argument("active_subgoal: episode has no node states");
  }
  const UAVState& s = episode.node_states[static_cast<std::size_t>(idx)];
  return SubgoalRef{s.position, s.heading};
}

ActionSequence gt_chunk_at(const Episode& episode, int decision_index) {
  if (decision_index < 0) {
    throw std::invalid_argument("gt_chunk_at: negative index");
  }
  if (decision_index < static_cast<int>(episode.expert_chunks.size())) {
    return episode.expert_chunks[static_cast<std::size_t>(decision_index)];
  }
  ActionSequence stop;
  stop.actions.push_back(Action::kStop);
  return stop;
}

RewardBreakdown step_reward(const Episode& episode, const UAVState& state_before,
                            std::string_view pred_raw,
                            const ActionSequence& gt_chunk,
                            const RewardConfig& cfg, SubgoalProgress& progress,
                            UAVState* state_after) {
  cfg.validate();
  RewardBreakdown b;
  if (state_after != nullptr) *state_after = state_before;

  const FormatResult fmt = format_reward(pred_raw, cfg.gamma);
  if (!fmt.parsed) {
    return b;  // all zeros; the UAV does not move
  }
  b.r_format = cfg.ablation.format ? fmt.reward : 0.0;

  const SubgoalRef subgoal = active_subgoal(episode, progress);
  const double d_t =
      euclidean_distance(state_before.position, subgoal.position);

  const SequenceExecution exec = apply_sequence(state_before, *fmt.parsed);
  const double d_t1 = euclidean_distance(exec.final.position, subgoal.position);

  if (cfg.ablation.subgoal) {
    b.r_dis = distance_reward(d_t, d_t1, cfg.epsilon);
    b.r_yaw = yaw_reward(exec.final.heading, subgoal.heading, cfg.tau_yaw);
  }
  if (cfg.ablation.stop) {
    b.r_stop = stop_reward(*fmt.parsed, gt_chunk, cfg.alpha, cfg.beta);
  }
  b.r_all = total_reward(b, cfg);

  for (const UAVState& s : exec.visited) progress.update(episode, s.position);
  if (state_after != nullptr) *state_after = exec.final;
  return b;
}

}  // namespace airnav
