#include "airnav/kinematics.hpp"

#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace airnav {

std::string_view action_token(Action a) {
  switch (a) {
    case Action::kMoveForward:
      return "MOVE_FORWARD";
    case Action::kTurnLeft:
      return "TURN_LEFT";
    case Action::kTurnRight:
      return "TURN_RIGHT";
    case Action::kStop:
      return "STOP";
  }
  throw std::logic_error("action_token: unknown action");
}

std::optional<Action> action_from_token(std::string_view token) {
  if (token == "MOVE_FORWARD") return Action::kMoveForward;
  if (token == "TURN_LEFT") return Action::kTurnLeft;
  if (token == "TURN_RIGHT") return Action::kTurnRight;
  if (token == "STOP") return Action::kStop;
  return std::nullopt;
}

bool is_valid_sequence(const std::vector<Action>& actions) {
  if (actions.empty() || actions.size() > kMaxChunkLength) return false;
  for (std::size_t i = 0; i + 1 < actions.size(); ++i) {
    if (actions[i] == Action::kStop) return false;
  }
  return true;
}

UAVState apply_action(const UAVState& state, Action action,
                      const Kinematics& kin) {
  UAVState next = state;
  switch (action) {
    case Action::kMoveForward: {
      const double theta = deg2rad(state.heading.degrees);
      next.position.x() += kin.step_length_m * std::sin(theta);
      next.position.y() += kin.step_length_m * std::cos(theta);
      break;
    }
    case Action::kTurnLeft:
      next.heading = normalize_heading(state.heading.degrees - kin.turn_deg);
      break;
    case Action::kTurnRight:
      next.heading = normalize_heading(state.heading.degrees + kin.turn_deg);
      break;
    case Action::kStop:
      break;
  }
  return next;
}

SequenceExecution apply_sequence(const UAVState& state,
                                 const ActionSequence& seq,
                                 const Kinematics& kin) {
  if (!is_valid_sequence(seq.actions)) {
    throw std::invalid_argument(
        "apply_sequence: sequence violates length/STOP invariants");
  }
  SequenceExecution out;
  out.final = state;
  out.visited.reserve(seq.actions.size());
  for (Action a : seq.actions) {
    out.final = apply_action(out.final, a, kin);
    out.visited.push_back(out.final);
  }
  out.terminated = seq.ends_with_stop();
  return out;
}

std::optional<ActionSequence> parse_action_sequence(std::string_view text) {
  nlohmann::json doc = nlohmann::json::parse(text, nullptr, false);
  if (doc.is_discarded() || !doc.is_array()) return std::nullopt;
  ActionSequence seq;
  seq.actions.reserve(doc.size());
  for (const auto& item : doc) {
    if (!item.is_string()) return std::nullopt;
    auto action = action_from_token(item.get_ref<const std::string&>());
    if (!action) return std::nullopt;
    seq.actions.push_back(*action);
  }
  if (!is_valid_sequence(seq.actions)) return std::nullopt;
  return seq;
}

std::string sequence_to_json(const ActionSequence& seq) {
  nlohmann::json doc = nlohmann::json::array();
  for (Action a : seq.actions) doc.push_back(std::string(action_token(a)));
  return doc.dump();
}

}  // namespace airnav
