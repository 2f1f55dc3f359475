#ifndef AIRNAV_POLICY_HPP_
#define AIRNAV_POLICY_HPP_

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "airnav/episode.hpp"
#include "airnav/reward.hpp"
#include "airnav/rng.hpp"

namespace airnav {

inline constexpr int kFeatureDim = 10;

using FeatureVector = Eigen::Matrix<double, kFeatureDim, 1>;
using Logits = Eigen::Matrix<double, kNumActions, 1>;

// Linear softmax policy over the feature vector. Zero-initialized, which
// makes the initial action distribution uniform.
struct PolicyParams {
  Eigen::Matrix<double, kNumActions, kFeatureDim> weights =
      Eigen::Matrix<double, kNumActions, kFeatureDim>::Zero();
  Eigen::Matrix<double, kNumActions, 1> bias =
      Eigen::Matrix<double, kNumActions, 1>::Zero();

  Logits logits(const FeatureVector& f) const { return weights * f + bias; }

  std::vector<double> flatten() const;
  static PolicyParams from_flat(const std::vector<double>& values);
};

// Geometric context the featurizer needs beyond the raw observation.
struct ProgressContext {
  SubgoalRef subgoal;
  double reached_fraction = 0.0;
  std::optional<Action> last_action;
};

// Components, all in [-1, 1]:
//   0: bearing to subgoal / 180
//   1: distance to subgoal / d_norm, clipped to 1
//   2: sin(heading), 3: cos(heading)
//   4: fraction of chain nodes reached
//   5..9: last-action one-hot (forward, left, right, stop, none)
FeatureVector featurize(const UAVState& state, const ProgressContext& ctx,
                        double d_norm = 200.0);

Eigen::Matrix<double, kNumActions, 1> softmax(const Logits& logits);

struct PolicyDecision {
  Action action = Action::kStop;
  double logprob = 0.0;
};

// temperature > 0 samples from the softmax; temperature == 0 is greedy with
// lowest-index tie-break. The returned logprob is under the temperature-1
// distribution.
PolicyDecision policy_step(const PolicyParams& params, const FeatureVector& f,
                           Rng& rng, double temperature);

struct ChunkStep {
  FeatureVector features;
  Action action = Action::kStop;
  double logprob = 0.0;
};

struct ChunkRollout {
  ActionSequence sequence;
  std::vector<ChunkStep> steps;
  UAVState end;
};

// Samples up to `max_len` actions autoregressively from `state`, refeaturizing
// after each applied action and advancing subgoal progress as the UAV moves.
// Ends early when STOP is drawn.
ChunkRollout rollout_chunk(const PolicyParams& params, const Episode& episode,
                           const UAVState& state, SubgoalProgress& progress,
                           std::optional<Action> last_action, Rng& rng,
                           double temperature, double d_norm = 200.0,
                           int max_len = kMaxChunkLength);

}  // namespace airnav

#endif  // AIRNAV_POLICY_HPP_
