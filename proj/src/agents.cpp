#include "airnav/agents.hpp"

#include <stdexcept>

#include "airnav/geometry.hpp"

namespace airnav {

void RandomAgent::begin_episode(const Episode& episode) {
  rng_ = Rng(mix_seed(base_seed_, fnv1a64(episode.id)));
}

std::string RandomAgent::decide(const Observation& obs) {
  (void)obs;
  ActionSequence seq;
  for (std::size_t i = 0; i < kMaxChunkLength; ++i) {
    const Action a = static_cast<Action>(rng_.uniform_index(kNumActions));
    seq.actions.push_back(a);
    if (a == Action::kStop) break;
  }
  return sequence_to_json(seq);
}

void ExpertReplayAgent::begin_episode(const Episode& episode) {
  episode_ = &episode;
}

std::string ExpertReplayAgent::decide(const Observation& obs) {
  if (episode_ == nullptr) {
    throw std::logic_error("expert replay: no episode bound");
  }
  const int idx = obs.step - 1;
  return sequence_to_json(gt_chunk_at(*episode_, idx));
}

void GreedyOracleAgent::begin_episode(const Episode& episode) {
  episode_ = &episode;
}

std::string GreedyOracleAgent::decide(const Observation& obs) {
  if (episode_ == nullptr) {
    throw std::logic_error("greedy oracle: no episode bound");
  }
  const Episode& ep = *episode_;

  SubgoalProgress progress(ep);
  UAVState state = ep.chain.start;
  progress.update(ep, state.position);
  for (Action a : obs.action_history) {
    state = apply_action(state, a);
    progress.update(ep, state.position);
  }

  ActionSequence seq;
  for (std::size_t i = 0; i < kMaxChunkLength; ++i) {
    const double to_target =
        euclidean_distance(state.position, ep.chain.target.position);
    if (to_target < ep.success_threshold_m) {
      seq.actions.push_back(Action::kStop);
      break;
    }
    const int idx = progress.active_index(ep);
    const Position goal =
        idx < static_cast<int>(ep.chain.intermediate.size())
            ? ep.chain.intermediate[static_cast<std::size_t>(idx)].position
            : ep.chain.target.position;
    const Action a = lookahead_step(state, goal, horizon_);
    seq.actions.push_back(a);
    state = apply_action(state, a);
    progress.update(ep, state.position);
  }
  return sequence_to_json(seq);
}

std::optional<AgentKind> agent_kind_from_name(std::string_view name) {
  if (name == "random") return AgentKind::kRandom;
  if (name == "expert") return AgentKind::kExpertReplay;
  if (name == "oracle") return AgentKind::kGreedyOracle;
  return std::nullopt;
}

std::unique_ptr<Agent> make_builtin_agent(AgentKind kind, std::uint64_t seed) {
  switch (kind) {
    case AgentKind::kRandom:
      return std::make_unique<RandomAgent>(seed);
    case AgentKind::kExpertReplay:
      return std::make_unique<ExpertReplayAgent>();
    case AgentKind::kGreedyOracle:
      return std::make_unique<GreedyOracleAgent>();
  }
  throw std::invalid_argument("unknown agent kind");
}

}  // namespace airnav
