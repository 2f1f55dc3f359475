#ifndef AIRNAV_AGENTS_HPP_
#define AIRNAV_AGENTS_HPP_

#include <memory>
#include <optional>
#include <string>

#include "airnav/episode.hpp"
#include "airnav/observation.hpp"
#include "airnav/reward.hpp"
#include "airnav/rng.hpp"

namespace airnav {

// A decision-maker driven by the episode runner. decide() returns raw text;
// the runner parses and validates it, never trusting the agent.
class Agent {
 public:
  virtual ~Agent() = default;
  virtual void begin_episode(const Episode& episode) { (void)episode; }
  virtual std::string decide(const Observation& obs) = 0;
};

// Uniform action tokens, up to 8 per decision step, ending early on STOP.
// Reseeded per episode from (base seed, episode id) so suite results do not
// depend on scheduling order.
class RandomAgent : public Agent {
 public:
  explicit RandomAgent(std::uint64_t seed) : base_seed_(seed), rng_(seed) {}
  void begin_episode(const Episode& episode) override;
  std::string decide(const Observation& obs) override;

 private:
  std::uint64_t base_seed_;
  Rng rng_;
};

// Emits the episode's own expert chunk at each decision step; past the end of
// the chunk list it emits the lone STOP sequence.
class ExpertReplayAgent : public Agent {
 public:
  void begin_episode(const Episode& episode) override;
  std::string decide(const Observation& obs) override;

 private:
  const Episode* episode_ = nullptr;
};

// Privileged look-ahead toward the active chain node, stopping once within
// the success threshold of the target. Subgoal progress is re-derived from
// the observation's action history, so the agent itself stays stateless
// across decision steps.
class GreedyOracleAgent : public Agent {
 public:
  explicit GreedyOracleAgent(int horizon = 3) : horizon_(horizon) {}
  void begin_episode(const Episode& episode) override;
  std::string decide(const Observation& obs) override;

 private:
  const Episode* episode_ = nullptr;
  int horizon_;
};

enum class AgentKind { kRandom, kExpertReplay, kGreedyOracle };

std::optional<AgentKind> agent_kind_from_name(std::string_view name);

std::unique_ptr<Agent> make_builtin_agent(AgentKind kind, std::uint64_t seed);

}  // namespace airnav

#endif  // AIRNAV_AGENTS_HPP_
