#include "airnav/policy.hpp"

#include <cmath>
#include <stdexcept>

#include "airnav/geometry.hpp"

namespace airnav {

std::vector<double> PolicyParams::flatten() const {
  std::vector<double> out;
  out.reserve(kNumActions * kFeatureDim + kNumActions);
  for (int r = 0; r < kNumActions; ++r) {
    for (int c = 0; c < kFeatureDim; ++c) out.push_back(weights(r, c));
  }
  for (int r = 0; r < kNumActions; ++r) out.push_back(bias(r));
  return out;
}

PolicyParams PolicyParams::from_flat(const std::vector<double>& values) {
  const std::size_t expected = kNumActions * kFeatureDim + kNumActions;
  if (values.size() != expected) {
    throw std::invalid_argument("policy params: expected " +
                                std::to_string(expected) + " values");
  }
  PolicyParams p;
  std::size_t i = 0;
  for (int r = 0; r < kNumActions; ++r) {
    for (int c = 0; c < kFeatureDim; ++c) p.weights(r, c) = values[i++];
  }
  for (int r = 0; r < kNumActions; ++r) p.bias(r) = values[i++];
  return p;
}

FeatureVector featurize(const UAVState& state, const ProgressContext& ctx,
                        double d_norm) {
  if (!(d_norm > 0.0)) throw std::invalid_argument("featurize: d_norm must be > 0");
  FeatureVector f = FeatureVector::Zero();

  const Heading bearing = bearing_between(state.position, ctx.subgoal.position);
  const double rel = heading_delta(state.heading, bearing);
  f(0) = rel / 180.0;

  const double dist =
      euclidean_distance(state.position, ctx.subgoal.position);
  f(1) = std::min(dist, d_norm) / d_norm;

  const double rad = deg2rad(state.heading.degrees);
  f(2) = std::sin(rad);
  f(3) = std::cos(rad);
  f(4) = ctx.reached_fraction;

  int slot = 4;  // "none"
  if (ctx.last_action) slot = static_cast<int>(*ctx.last_action);
  f(5 + slot) = 1.0;
  return f;
}

Eigen::Matrix<double, kNumActions, 1> softmax(const Logits& logits) {
  const double m = logits.maxCoeff();
  Eigen::Matrix<double, kNumActions, 1> e = (logits.array() - m).exp();
  return e / e.sum();
}

PolicyDecision policy_step(const PolicyParams& params, const FeatureVector& f,
                           Rng& rng, double temperature) {
  if (temperature < 0.0) {
    throw std::invalid_argument("policy_step: temperature must be >= 0");
  }
  const Logits logits = params.logits(f);
  const Eigen::Matrix<double, kNumActions, 1> probs = softmax(logits);

  PolicyDecision d;
  if (temperature == 0.0) {
    int best = 0;
    for (int i = 1; i < kNumActions; ++i) {
      if (logits(i) > logits(best)) best = i;
    }
    d.action = static_cast<Action>(best);
    d.logprob = std::log(probs(best));
    return d;
  }

  const Eigen::Matrix<double, kNumActions, 1> tempered =
      softmax(logits / temperature);
  const double u = rng.uniform01();
  double acc = 0.0;
  int picked = kNumActions - 1;
  for (int i = 0; i < kNumActions; ++i) {
    acc += tempered(i);
    if (u < acc) {
      picked = i;
      break;
    }
  }
  d.action = static_cast<Action>(picked);
  d.logprob = std::log(probs(picked));
  return d;
}

ChunkRollout rollout_chunk(const PolicyParams& params, const Episode& episode,
                           const UAVState& state, SubgoalProgress& progress,
                           std::optional<Action> last_action, Rng& rng,
                           double temperature, double d_norm, int max_len) {
  if (max_len < 1 || max_len > static_cast<int>(kMaxChunkLength)) {
    throw std::invalid_argument("rollout_chunk: max_len must be in [1, 8]");
  }
  ChunkRollout out;
  out.end = state;
  for (int i = 0; i < max_len; ++i) {
    ProgressContext ctx;
    ctx.subgoal = active_subgoal(episode, progress);
    ctx.reached_fraction = progress.reached_fraction(episode);
    ctx.last_action = last_action;

    ChunkStep step;
    step.features = featurize(out.end, ctx, d_norm);
    const PolicyDecision d = policy_step(params, step.features, rng, temperature);
    step.action = d.action;
    step.logprob = d.logprob;
    out.steps.push_back(step);
    out.sequence.actions.push_back(d.action);

    out.end = apply_action(out.end, d.action);
    progress.update(episode, out.end.position);
    last_action = d.action;
    if (d.action == Action::kStop) break;
  }
  return out;
}

}  // namespace airnav
