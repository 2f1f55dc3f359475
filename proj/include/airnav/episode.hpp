#ifndef AIRNAV_EPISODE_HPP_
#define AIRNAV_EPISODE_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "airnav/rng.hpp"
#include "airnav/world.hpp"

namespace airnav {

enum class Difficulty { kEasy, kMedium, kHard };

std::string_view difficulty_name(Difficulty d);
std::optional<Difficulty> difficulty_from_name(std::string_view name);

// Start -> intermediate landmarks -> target, consecutive gaps <= D_max.
struct NodeChain {
  UAVState start;
  std::vector<Landmark> intermediate;
  Landmark target;
};

struct SynthConfig {
  double d_max_m = 100.0;            // max gap between consecutive nodes
  int min_landmarks = 2;             // accepted intermediate-count window
  int max_landmarks = 6;
  double node_threshold_m = 10.0;    // arrival tolerance at intermediate nodes
  double success_threshold_m = 20.0; // arrival tolerance at the target
  int horizon = 3;                   // look-ahead depth
  int max_segment_actions = 200;     // per-segment primitive-action budget
  double min_start_target_m = 200.0; // sampled crow distance window
  double max_start_target_m = 500.0;
  // Accepted expert path length as a multiple of the crow distance. Keeps the
  // corpus near-optimal so path-weighted scores reflect agent behaviour rather
  // than corridor luck. <= 0 disables the gate.
  double max_detour_ratio = 1.05;
  int max_sample_attempts = 200;
  Kinematics kinematics;
};

struct Episode {
  std::string id;
  std::uint64_t seed = 0;
  std::uint64_t world_seed = 0;
  NodeChain chain;
  std::vector<Action> expert;               // ends with exactly one STOP
  std::vector<ActionSequence> expert_chunks;
  std::vector<UAVState> node_states;        // expert state at each node arrival
  std::string instruction;
  Difficulty difficulty = Difficulty::kEasy;
  double path_length_m = 0.0;

  // Runtime context carried from the synthesis config (not part of the
  // per-episode file schema; restored from the dataset manifest on load).
  double node_threshold_m = 10.0;
  double success_threshold_m = 20.0;

  std::size_t intermediate_count() const { return chain.intermediate.size(); }
};

UAVState sample_start(const WorldMap& world, Rng& rng);

enum class PlanRejection { kSparseLandmarks, kCountOutOfRange };

struct PlanResult {
  std::optional<NodeChain> chain;
  PlanRejection rejection = PlanRejection::kSparseLandmarks;

  explicit operator bool() const { return chain.has_value(); }
};

// Greedy corridor selection between start and target under the max-gap
// constraint. Rejection is an expected outcome, not an error.
PlanResult plan_landmarks(const WorldMap& world, const UAVState& start,
                          const Landmark& target, const SynthConfig& config);

// Exhaustive look-ahead over all non-STOP sequences of length `horizon`;
// returns the first action of the sequence minimizing terminal distance to
// goal. Ties resolve to the lexicographically first sequence
// (MOVE_FORWARD < TURN_LEFT < TURN_RIGHT).
Action lookahead_step(const UAVState& state, const Position& goal, int horizon,
                      const Kinematics& kin = {});

struct SegmentResult {
  std::vector<Action> actions;
  UAVState end;
  bool ok = false;
};

// Receding-horizon drive toward `node`, committing one action per iteration,
// until within `arrival_threshold`. Fails when the action budget runs out.
SegmentResult lookahead_segment(const UAVState& from, const Position& node,
                                double arrival_threshold,
                                const SynthConfig& config);

// Splits a full expert action list into decision-step chunks of <= 8.
std::vector<ActionSequence> chunk_actions(const std::vector<Action>& actions);

// Concatenates per-segment expert actions along the chain, appends STOP, and
// assembles the episode record. Returns nullopt if any segment fails.
std::optional<Episode> synthesize_trajectory(const NodeChain& chain,
                                             const SynthConfig& config);

Difficulty classify_difficulty(double path_length_m);

// Deterministic template instruction: one clause per landmark, final clause
// names the target and says stop.
std::string render_instruction(const NodeChain& chain);

// Full sampler: start/target selection, planning, trajectory synthesis,
// instruction rendering. Retries until accepted or attempts are exhausted.
std::optional<Episode> synthesize_episode(const WorldMap& world,
                                          const SynthConfig& config,
                                          std::uint64_t episode_seed,
                                          const std::string& id);

}  // namespace airnav

#endif  // AIRNAV_EPISODE_HPP_
