#ifndef AIRNAV_KINEMATICS_HPP_
#define AIRNAV_KINEMATICS_HPP_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "airnav/geometry.hpp"

namespace airnav {

// Discrete UAV action vocabulary. Order matters: it is the lexicographic
// tie-break order used by search and greedy decoding.
enum class Action { kMoveForward = 0, kTurnLeft = 1, kTurnRight = 2, kStop = 3 };

inline constexpr int kNumActions = 4;
inline constexpr int kMaxChunkLength = 8;

// Wire spellings of the action tokens.
std::string_view action_token(Action a);
std::optional<Action> action_from_token(std::string_view token);

struct UAVState {
  Position position{0.0, 0.0};
  Heading heading{0.0};
};

// Motion granularity. Defaults: 5 m forward step, 30 deg turns.
struct Kinematics {
  double step_length_m = 5.0;
  double turn_deg = 30.0;
};

// A decision-step chunk: 1..8 actions, STOP only as the final element.
struct ActionSequence {
  std::vector<Action> actions;

  bool ends_with_stop() const {
    return !actions.empty() && actions.back() == Action::kStop;
  }
  std::size_t size() const { return actions.size(); }
};

bool is_valid_sequence(const std::vector<Action>& actions);

struct SequenceExecution {
  UAVState final;
  std::vector<UAVState> visited;  // one post-action state per action
  bool terminated = false;        // sequence ended with STOP
};

UAVState apply_action(const UAVState& state, Action action,
                      const Kinematics& kin = {});

// Folds apply_action over the sequence. Throws std::invalid_argument if the
// sequence violates the ActionSequence invariants.
SequenceExecution apply_sequence(const UAVState& state,
                                 const ActionSequence& seq,
                                 const Kinematics& kin = {});

// Parses a JSON list of action tokens, e.g. ["MOVE_FORWARD","STOP"].
// Returns nullopt unless the text is a well-formed list of 1..8 known tokens
// with STOP (if present) in final position.
std::optional<ActionSequence> parse_action_sequence(std::string_view text);

// Canonical JSON rendering, the inverse of parse_action_sequence.
std::string sequence_to_json(const ActionSequence& seq);

}  // namespace airnav

#endif  // AIRNAV_KINEMATICS_HPP_
