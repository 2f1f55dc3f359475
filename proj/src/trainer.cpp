#include "airnav/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

#include "airnav/geometry.hpp"
#include "airnav/metrics.hpp"

namespace airnav {

std::string_view train_stage_name(TrainStage s) {
  switch (s) {
    case TrainStage::kBcOnly: return "bc";
    case TrainStage::kGrpoOnly: return "grpo";
    case TrainStage::kBcThenGrpo: return "bc+grpo";
  }
  throw std::invalid_argument("unknown train stage");
}

std::optional<TrainStage> train_stage_from_name(std::string_view name) {
  if (name == "bc") return TrainStage::kBcOnly;
  if (name == "grpo") return TrainStage::kGrpoOnly;
  if (name == "bc+grpo") return TrainStage::kBcThenGrpo;
  return std::nullopt;
}

void TrainConfig::validate() const {
  if (group_size < 2) throw std::invalid_argument("train: group_size must be >= 2");
  if (!(learning_rate > 0.0)) throw std::invalid_argument("train: lr must be > 0");
  if (updates < 0) throw std::invalid_argument("train: updates must be >= 0");
  if (!(clip_ratio > 0.0 && clip_ratio < 1.0)) {
    throw std::invalid_argument("train: clip_ratio must be in (0, 1)");
  }
  if (max_decision_steps < 1) {
    throw std::invalid_argument("train: max_decision_steps must be >= 1");
  }
  if (!(temperature > 0.0)) {
    throw std::invalid_argument("train: temperature must be > 0");
  }
  if (!(d_norm_m > 0.0)) throw std::invalid_argument("train: d_norm must be > 0");
  if (bc_epochs < 0) throw std::invalid_argument("train: bc_epochs must be >= 0");
  if (!(bc_lr > 0.0)) throw std::invalid_argument("train: bc_lr must be > 0");
  if (train_episodes < 1 || holdout_episodes < 0) {
    throw std::invalid_argument("train: bad episode counts");
  }
  if (eval_every < 1) throw std::invalid_argument("train: eval_every must be >= 1");
}

namespace {

std::vector<Episode> collect_episodes(const WorldMap& world,
                                      const SynthConfig& synth_cfg,
                                      int count, bool exclude_hard,
                                      std::uint64_t salt,
                                      const std::string& prefix) {
  std::vector<Episode> out;
  out.reserve(static_cast<std::size_t>(count));
  std::uint64_t index = 0;
  const std::uint64_t give_up =
      static_cast<std::uint64_t>(count) * 400ULL + 4000ULL;
  while (static_cast<int>(out.size()) < count) {
    if (index > give_up) {
      throw std::runtime_error(
          "episode collection stalled; synthesis config too restrictive");
    }
    char id[64];
    std::snprintf(id, sizeof(id), "%s-%04zu", prefix.c_str(), out.size());
    std::optional<Episode> ep = synthesize_episode(
        world, synth_cfg, mix_seed(salt, index), id);
    ++index;
    if (!ep) continue;
    if (exclude_hard && ep->difficulty == Difficulty::kHard) continue;
    out.push_back(std::move(*ep));
  }
  return out;
}

}  // namespace

TrainingSuite make_training_suite(const WorldConfig& world_cfg,
                                  const SynthConfig& synth_cfg,
                                  const TrainConfig& cfg) {
  cfg.validate();
  TrainingSuite suite;
  suite.world = generate_world(world_cfg, mix_seed(cfg.seed, 0x7472616e));
  suite.train = collect_episodes(suite.world, synth_cfg, cfg.train_episodes,
                                 cfg.exclude_hard, mix_seed(cfg.seed, 1),
                                 "train");
  suite.holdout = collect_episodes(suite.world, synth_cfg, cfg.holdout_episodes,
                                   cfg.exclude_hard, mix_seed(cfg.seed, 2),
                                   "hold");
  return suite;
}

DecisionPoint start_point(const Episode& episode) {
  DecisionPoint point;
  point.episode = &episode;
  point.state = episode.chain.start;
  point.progress = SubgoalProgress(episode);
  point.progress.update(episode, episode.chain.start.position);
  return point;
}

bool advance_point(DecisionPoint& point, const RolloutRecord& record,
                   int max_decision_steps) {
  const SequenceExecution exec = apply_sequence(point.state, record.sequence);
  for (const UAVState& s : exec.visited) {
    point.progress.update(*point.episode, s.position);
  }
  point.state = exec.final;
  point.last_action = record.sequence.actions.back();
  point.t += 1;
  return !exec.terminated && point.t < max_decision_steps;
}

RolloutRecord sample_candidate(const PolicyParams& params,
                               const DecisionPoint& point,
                               const RewardConfig& reward_cfg,
                               const TrainConfig& cfg, Rng& rng) {
  RolloutRecord rec;
  SubgoalProgress rollout_progress = point.progress;
  ChunkRollout chunk =
      rollout_chunk(params, *point.episode, point.state, rollout_progress,
                    point.last_action, rng, cfg.temperature, cfg.d_norm_m);
  rec.sequence = chunk.sequence;
  rec.steps = std::move(chunk.steps);

  SubgoalProgress reward_progress = point.progress;
  UAVState after = point.state;
  const RewardBreakdown b = step_reward(
      *point.episode, point.state, sequence_to_json(rec.sequence),
      gt_chunk_at(*point.episode, point.t), reward_cfg, reward_progress,
      &after);
  rec.reward = b.r_all;
  rec.end_state = after;
  return rec;
}

GroupSample sample_group(const PolicyParams& params, const DecisionPoint& point,
                         const RewardConfig& reward_cfg, const TrainConfig& cfg,
                         Rng& rng) {
  GroupSample group;
  group.rollouts.reserve(static_cast<std::size_t>(cfg.group_size));
  for (int g = 0; g < cfg.group_size; ++g) {
    Rng child = rng.child(static_cast<std::uint64_t>(g) + 1);
    group.rollouts.push_back(
        sample_candidate(params, point, reward_cfg, cfg, child));
  }
  return group;
}

std::vector<double> group_advantages(const std::vector<double>& rewards) {
  const std::size_t n = rewards.size();
  if (n < 2) throw std::invalid_argument("group_advantages: need G >= 2");
  const double mean =
      std::accumulate(rewards.begin(), rewards.end(), 0.0) / n;
  double var = 0.0;
  for (double r : rewards) var += (r - mean) * (r - mean);
  const double std_dev = std::sqrt(var / n);
  std::vector<double> adv(n);
  for (std::size_t i = 0; i < n; ++i) {
    adv[i] = (rewards[i] - mean) / (std_dev + 1e-8);
  }
  return adv;
}

namespace {

std::vector<double> rollout_rewards(const GroupSample& group) {
  std::vector<double> r;
  r.reserve(group.rollouts.size());
  for (const RolloutRecord& rec : group.rollouts) r.push_back(rec.reward);
  return r;
}

void check_group(const GroupSample& group, const std::vector<double>& adv) {
  if (group.rollouts.size() < 2) {
    throw std::invalid_argument("grpo: group must have >= 2 rollouts");
  }
  if (adv.size() != group.rollouts.size()) {
    throw std::invalid_argument("grpo: advantage count mismatch");
  }
}

}  // namespace

double grpo_objective(const PolicyParams& params, const GroupSample& group,
                      const std::vector<double>& advantages,
                      double clip_ratio) {
  check_group(group, advantages);
  const double lo = 1.0 - clip_ratio;
  const double hi = 1.0 + clip_ratio;
  double total = 0.0;
  for (std::size_t g = 0; g < group.rollouts.size(); ++g) {
    const RolloutRecord& rec = group.rollouts[g];
    if (rec.steps.empty()) continue;
    const double a = advantages[g];
    double sum = 0.0;
    for (const ChunkStep& s : rec.steps) {
      const Eigen::Matrix<double, kNumActions, 1> probs =
          softmax(params.logits(s.features));
      const double logp_new = std::log(probs(static_cast<int>(s.action)));
      const double ratio = std::exp(logp_new - s.logprob);
      const double clipped = std::clamp(ratio, lo, hi);
      sum += std::min(ratio * a, clipped * a);
    }
    total += sum / static_cast<double>(rec.steps.size());
  }
  return total / static_cast<double>(group.rollouts.size());
}

PolicyGradient grpo_gradient(const PolicyParams& params,
                             const GroupSample& group,
                             const std::vector<double>& advantages,
                             double clip_ratio) {
  check_group(group, advantages);
  const double lo = 1.0 - clip_ratio;
  const double hi = 1.0 + clip_ratio;
  PolicyGradient grad;
  const double inv_g = 1.0 / static_cast<double>(group.rollouts.size());
  for (std::size_t g = 0; g < group.rollouts.size(); ++g) {
    const RolloutRecord& rec = group.rollouts[g];
    if (rec.steps.empty()) continue;
    const double a = advantages[g];
    const double scale = inv_g / static_cast<double>(rec.steps.size());
    for (const ChunkStep& s : rec.steps) {
      const Eigen::Matrix<double, kNumActions, 1> probs =
          softmax(params.logits(s.features));
      const int ai = static_cast<int>(s.action);
      const double logp_new = std::log(probs(ai));
      const double ratio = std::exp(logp_new - s.logprob);
      // min(r a, clip(r) a) has zero slope once the clipped branch is the
      // active minimum outside the trust band.
      const bool clamped = (a > 0.0 && ratio > hi) || (a < 0.0 && ratio < lo);
      if (clamped || a == 0.0) continue;

      Eigen::Matrix<double, kNumActions, 1> dlogp = -probs;
      dlogp(ai) += 1.0;
      const double coeff = scale * a * ratio;
      grad.weights.noalias() += coeff * dlogp * s.features.transpose();
      grad.bias += coeff * dlogp;
    }
  }
  return grad;
}

PolicyParams grpo_update(const PolicyParams& params, const GroupSample& group,
                         const TrainConfig& cfg) {
  cfg.validate();
  const std::vector<double> adv = group_advantages(rollout_rewards(group));
  const PolicyGradient grad =
      grpo_gradient(params, group, adv, cfg.clip_ratio);
  if (!grad.weights.allFinite() || !grad.bias.allFinite()) {
    throw std::runtime_error("grpo_update: non-finite gradient");
  }
  PolicyParams next = params;
  next.weights += cfg.learning_rate * grad.weights;
  next.bias += cfg.learning_rate * grad.bias;
  return next;
}

std::vector<double> bc_pretrain(PolicyParams& params,
                                const std::vector<Episode>& episodes,
                                int epochs, double lr, double d_norm,
                                Rng& rng) {
  if (episodes.empty()) {
    throw std::invalid_argument("bc_pretrain: no episodes");
  }
  if (!(lr > 0.0)) throw std::invalid_argument("bc_pretrain: lr must be > 0");
  std::vector<double> epoch_losses;
  std::vector<std::size_t> order(episodes.size());
  std::iota(order.begin(), order.end(), 0);

  for (int e = 0; e < epochs; ++e) {
    Rng shuffle_rng = rng.child(static_cast<std::uint64_t>(e) + 101);
    shuffle_rng.shuffle(order);
    double loss_sum = 0.0;
    std::size_t samples = 0;

    for (std::size_t idx : order) {
      const Episode& ep = episodes[idx];
      SubgoalProgress progress(ep);
      progress.update(ep, ep.chain.start.position);
      UAVState state = ep.chain.start;
      std::optional<Action> last_action;

      for (Action target : ep.expert) {
        ProgressContext ctx;
        ctx.subgoal = active_subgoal(ep, progress);
        ctx.reached_fraction = progress.reached_fraction(ep);
        ctx.last_action = last_action;
        const FeatureVector f = featurize(state, ctx, d_norm);

        const Eigen::Matrix<double, kNumActions, 1> probs =
            softmax(params.logits(f));
        const int ti = static_cast<int>(target);
        loss_sum += -std::log(probs(ti));
        ++samples;

        Eigen::Matrix<double, kNumActions, 1> dlogits = probs;
        dlogits(ti) -= 1.0;
        params.weights.noalias() -= lr * dlogits * f.transpose();
        params.bias -= lr * dlogits;

        state = apply_action(state, target);
        progress.update(ep, state.position);
        last_action = target;
      }
    }
    epoch_losses.push_back(samples > 0 ? loss_sum / samples : 0.0);
  }
  return epoch_losses;
}

double evaluate_policy_sr(const PolicyParams& params,
                          const std::vector<Episode>& episodes,
                          const TrainConfig& cfg) {
  if (episodes.empty()) return 0.0;
  Rng dummy(0);  // greedy stepping draws nothing
  int successes = 0;
  for (const Episode& ep : episodes) {
    SubgoalProgress progress(ep);
    progress.update(ep, ep.chain.start.position);
    UAVState state = ep.chain.start;
    std::optional<Action> last_action;
    for (int t = 0; t < cfg.max_decision_steps; ++t) {
      ChunkRollout chunk = rollout_chunk(params, ep, state, progress,
                                         last_action, dummy, 0.0, cfg.d_norm_m);
      state = chunk.end;
      last_action = chunk.sequence.actions.back();
      if (chunk.sequence.ends_with_stop()) break;
    }
    const double ne =
        euclidean_distance(state.position, ep.chain.target.position);
    if (ne < ep.success_threshold_m) ++successes;
  }
  return 100.0 * successes / static_cast<double>(episodes.size());
}

TrainResult train(const WorldConfig& world_cfg, const SynthConfig& synth_cfg,
                  const RewardConfig& reward_cfg, const TrainConfig& cfg,
                  TrainStage stage) {
  cfg.validate();
  reward_cfg.validate();
  TrainResult result;
  TrainingSuite suite = make_training_suite(world_cfg, synth_cfg, cfg);
  Rng root(mix_seed(cfg.seed, 0x67726f77));

  const bool run_bc =
      stage == TrainStage::kBcOnly || stage == TrainStage::kBcThenGrpo;
  const bool run_grpo =
      stage == TrainStage::kGrpoOnly || stage == TrainStage::kBcThenGrpo;

  if (run_bc) {
    Rng bc_rng = root.child(11);
    const std::vector<double> losses = bc_pretrain(
        result.params, suite.train, cfg.bc_epochs, cfg.bc_lr, cfg.d_norm_m,
        bc_rng);
    for (std::size_t e = 0; e < losses.size(); ++e) {
      CurvePoint p;
      p.stage = "bc";
      p.update = static_cast<int>(e);
      p.mean_loss = losses[e];
      if (e + 1 == losses.size()) {
        p.eval_sr = evaluate_policy_sr(result.params, suite.holdout, cfg);
      }
      result.curve.push_back(p);
    }
  }

  if (run_grpo) {
    Rng grpo_rng = root.child(22);
    std::size_t next_episode = 0;
    std::optional<DecisionPoint> point;
    for (int u = 0; u < cfg.updates; ++u) {
      if (!point) {
        const Episode& ep =
            suite.train[next_episode % suite.train.size()];
        ++next_episode;
        point = start_point(ep);
      }
      Rng update_rng = grpo_rng.child(static_cast<std::uint64_t>(u) + 1);
      GroupSample group =
          sample_group(result.params, *point, reward_cfg, cfg, update_rng);
      result.params = grpo_update(result.params, group, cfg);

      // The behaviour trajectory continues along the first candidate, which
      // was sampled from the pre-update policy.
      if (!advance_point(*point, group.rollouts.front(),
                         cfg.max_decision_steps)) {
        point.reset();
      }

      CurvePoint p;
      p.stage = "grpo";
      p.update = u;
      double mean = 0.0;
      for (const RolloutRecord& r : group.rollouts) mean += r.reward;
      p.mean_reward = mean / static_cast<double>(group.rollouts.size());
      if ((u + 1) % cfg.eval_every == 0 || u + 1 == cfg.updates) {
        p.eval_sr = evaluate_policy_sr(result.params, suite.holdout, cfg);
      }
      result.curve.push_back(p);
    }
  }

  if (result.curve.empty() || !result.curve.back().eval_sr) {
    CurvePoint p;
    p.stage = run_grpo ? "grpo" : "bc";
    p.update = result.curve.empty() ? 0 : result.curve.back().update;
    p.eval_sr = evaluate_policy_sr(result.params, suite.holdout, cfg);
    result.curve.push_back(p);
  }
  return result;
}

}  // namespace airnav
