#ifndef AIRNAV_OBSERVATION_HPP_
#define AIRNAV_OBSERVATION_HPP_

#include <string>
#include <vector>

#include "airnav/kinematics.hpp"
#include "airnav/world.hpp"

namespace airnav {

// Everything the agent sees at decision step t: the instruction, its own
// state, previously executed actions, the current sensor frame, and the
// memory-selected historical frames (oldest first).
struct Observation {
  std::string episode_id;
  int step = 1;
  std::string instruction;
  UAVState state;
  std::vector<Action> action_history;
  SensorFrame current_frame;
  std::vector<SensorFrame> history_frames;
};

}  // namespace airnav

#endif  // AIRNAV_OBSERVATION_HPP_
