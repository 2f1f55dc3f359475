#ifndef AIRNAV_RUNNER_HPP_
#define AIRNAV_RUNNER_HPP_

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "airnav/agents.hpp"
#include "airnav/memory.hpp"
#include "airnav/metrics.hpp"
#include "airnav/world.hpp"

namespace airnav {

struct RunConfig {
  double success_threshold_m = 20.0;
  int max_decision_steps = 50;
  MemoryPolicy memory;
  double sensor_radius_m = 100.0;
  int format_retries = 1;
  int parallelism = 0;  // 0 means use the hardware thread count
  std::uint64_t seed = 0;
  double bridge_timeout_s = 30.0;

  void validate() const;
};

// One unit of evaluation work. The world must be the one the episode was
// synthesized in.
struct RunItem {
  const Episode* episode = nullptr;
  const WorldMap* world = nullptr;
  std::string split;
};

std::pair<TrajectoryLog, EpisodeResult> run_episode(Agent& agent,
                                                    const Episode& episode,
                                                    const WorldMap& world,
                                                    const RunConfig& cfg,
                                                    const std::string& split = "");

struct SuiteOutcome {
  std::vector<EpisodeResult> results;  // in input order
  std::vector<TrajectoryLog> logs;     // parallel to results
  EvalReport report;
};

using AgentFactory = std::function<std::unique_ptr<Agent>()>;

// Runs every item on a bounded worker pool; each worker owns one agent from
// the factory and rebinds it per episode. Results are merged in input order.
SuiteOutcome run_suite(const AgentFactory& factory,
                       const std::vector<RunItem>& items, const RunConfig& cfg);

}  // namespace airnav

#endif  // AIRNAV_RUNNER_HPP_
