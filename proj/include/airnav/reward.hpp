#ifndef AIRNAV_REWARD_HPP_
#define AIRNAV_REWARD_HPP_

#include <optional>
#include <string_view>
#include <vector>

#include "airnav/episode.hpp"
#include "airnav/geometry.hpp"
#include "airnav/kinematics.hpp"

namespace airnav {

// Component switches for the reward ablations: a disabled component
// contributes zero to the total. "subgoal" covers both the distance and the
// heading terms.
struct RewardAblation {
  bool subgoal = true;
  bool stop = true;
  bool format = true;
};

struct RewardConfig {
  double epsilon = 1e-6;   // meters, guards the distance ratio
  double tau_yaw = 60.0;   // degrees, heading tolerance
  double alpha = 1.0;      // both sequences end with STOP
  double beta = 0.1;       // neither sequence ends with STOP
  double gamma = 0.1;      // well-formed output
  double lambda1 = 1.0;    // distance weight
  double lambda2 = 1.0;    // heading weight
  RewardAblation ablation;

  void validate() const;
};

struct RewardBreakdown {
  double r_dis = 0.0;
  double r_yaw = 0.0;
  double r_stop = 0.0;
  double r_format = 0.0;
  double r_all = 0.0;
};

// Expert state recorded at a chain node; supervision target for the rollout.
struct SubgoalRef {
  Position position = Position::Zero();
  Heading heading;
};

// Monotone, threshold-gated advancement over the chain's intermediate nodes.
// A node counts as reached once the UAV has come within node_threshold of the
// landmark at any point of the rollout; flags never clear.
class SubgoalProgress {
 public:
  SubgoalProgress() = default;
  explicit SubgoalProgress(const Episode& episode);

  void update(const Episode& episode, const Position& position);
  // First unreached intermediate, or the target once all are reached.
  int active_index(const Episode& episode) const;
  int reached_count() const;
  double reached_fraction(const Episode& episode) const;

 private:
  std::vector<bool> reached_;
};

double distance_reward(double d_t, double d_t1, double epsilon);
double yaw_reward(Heading achieved, Heading subgoal, double tau_yaw);
double stop_reward(const ActionSequence& pred, const ActionSequence& gt,
                   double alpha, double beta);

struct FormatResult {
  double reward = 0.0;
  std::optional<ActionSequence> parsed;
};

FormatResult format_reward(std::string_view raw_output, double gamma);

double total_reward(const RewardBreakdown& b, const RewardConfig& cfg);

SubgoalRef active_subgoal(const Episode& episode,
                          const SubgoalProgress& progress);

// Ground-truth chunk for a decision step (0-based); past the expert's own
// chunk list the expert would simply stop.
ActionSequence gt_chunk_at(const Episode& episode, int decision_index);

// Scores one decision step: parses the raw output, executes it from
// state_before, measures distance/heading against the subgoal active at the
// start of the step, then advances subgoal progress along the visited states.
// On unparseable output the state does not move and all components are zero.
RewardBreakdown step_reward(const Episode& episode, const UAVState& state_before,
                            std::string_view pred_raw,
                            const ActionSequence& gt_chunk,
                            const RewardConfig& cfg, SubgoalProgress& progress,
                            UAVState* state_after = nullptr);

}  // namespace airnav

#endif  // AIRNAV_REWARD_HPP_
