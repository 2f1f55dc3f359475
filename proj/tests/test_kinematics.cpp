#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "airnav/kinematics.hpp"

using namespace airnav;

TEST_CASE("action tokens round-trip on the wire spellings") {
  CHECK(action_token(Action::kMoveForward) == "MOVE_FORWARD");
  CHECK(action_token(Action::kTurnLeft) == "TURN_LEFT");
  CHECK(action_token(Action::kTurnRight) == "TURN_RIGHT");
  CHECK(action_token(Action::kStop) == "STOP");
  for (Action a : {Action::kMoveForward, Action::kTurnLeft, Action::kTurnRight,
                   Action::kStop}) {
    CHECK(action_from_token(action_token(a)) == a);
  }
  CHECK(!action_from_token("FLY_UP").has_value());
  CHECK(!action_from_token("move_forward").has_value());
  CHECK(!action_from_token("").has_value());
}

TEST_CASE("enum order is the search tie-break order") {
  CHECK(static_cast<int>(Action::kMoveForward) == 0);
  CHECK(static_cast<int>(Action::kTurnLeft) == 1);
  CHECK(static_cast<int>(Action::kTurnRight) == 2);
  CHECK(static_cast<int>(Action::kStop) == 3);
}

TEST_CASE("apply_action moves and turns under the compass convention") {
  const UAVState north{Position{0, 0}, Heading{0.0}};

  const UAVState fwd = apply_action(north, Action::kMoveForward);
  CHECK(fwd.position.x() == doctest::Approx(0.0));
  CHECK(fwd.position.y() == doctest::Approx(5.0));
  CHECK(fwd.heading.degrees == doctest::Approx(0.0));

  const UAVState east = apply_action({Position{0, 0}, Heading{90.0}},
                                     Action::kMoveForward);
  CHECK(east.position.x() == doctest::Approx(5.0));
  CHECK(east.position.y() == doctest::Approx(0.0).epsilon(1e-12));

  // 5*sin(30) = 2.5, 5*cos(30) = 4.330127018922194
  const UAVState diag = apply_action({Position{0, 0}, Heading{30.0}},
                                     Action::kMoveForward);
  CHECK(diag.position.x() == doctest::Approx(2.5));
  CHECK(diag.position.y() == doctest::Approx(4.330127018922194));

  CHECK(apply_action(north, Action::kTurnLeft).heading.degrees ==
        doctest::Approx(-30.0));
  CHECK(apply_action(north, Action::kTurnRight).heading.degrees ==
        doctest::Approx(30.0));
  // turning wraps through the +/-180 seam
  CHECK(apply_action({Position{0, 0}, Heading{180.0}}, Action::kTurnRight)
            .heading.degrees == doctest::Approx(-150.0));
  CHECK(apply_action({Position{0, 0}, Heading{-170.0}}, Action::kTurnLeft)
            .heading.degrees == doctest::Approx(160.0));

  const UAVState stopped = apply_action(diag, Action::kStop);
  CHECK(stopped.position.x() == doctest::Approx(diag.position.x()));
  CHECK(stopped.position.y() == doctest::Approx(diag.position.y()));
  CHECK(stopped.heading.degrees == doctest::Approx(diag.heading.degrees));
}

TEST_CASE("apply_sequence folds and reports termination") {
  const UAVState start{Position{0, 0}, Heading{0.0}};

  SUBCASE("two forwards") {
    const SequenceExecution ex = apply_sequence(
        start, ActionSequence{{Action::kMoveForward, Action::kMoveForward}});
    CHECK(ex.final.position.y() == doctest::Approx(10.0));
    CHECK(!ex.terminated);
    CHECK(ex.visited.size() == 2);
    CHECK(ex.visited[0].position.y() == doctest::Approx(5.0));
  }

  SUBCASE("lone stop") {
    const SequenceExecution ex =
        apply_sequence(start, ActionSequence{{Action::kStop}});
    CHECK(ex.final.position.x() == doctest::Approx(0.0));
    CHECK(ex.final.position.y() == doctest::Approx(0.0));
    CHECK(ex.terminated);
  }

  SUBCASE("turn, forward, stop") {
    const SequenceExecution ex = apply_sequence(
        start, ActionSequence{
                   {Action::kTurnRight, Action::kMoveForward, Action::kStop}});
    CHECK(ex.final.position.x() == doctest::Approx(2.5));
    CHECK(ex.final.position.y() == doctest::Approx(4.330127018922194));
    CHECK(ex.final.heading.degrees == doctest::Approx(30.0));
    CHECK(ex.terminated);
    CHECK(ex.visited.size() == 3);
  }

  SUBCASE("invalid sequences throw") {
    CHECK_THROWS_AS(apply_sequence(start, ActionSequence{}),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        apply_sequence(start, ActionSequence{{Action::kStop,
                                              Action::kMoveForward}}),
        std::invalid_argument);
    ActionSequence nine;
    nine.actions.assign(9, Action::kMoveForward);
    CHECK_THROWS_AS(apply_sequence(start, nine), std::invalid_argument);
  }
}

TEST_CASE("is_valid_sequence enforces the chunk grammar") {
  CHECK(is_valid_sequence({Action::kStop}));
  CHECK(is_valid_sequence({Action::kMoveForward}));
  CHECK(is_valid_sequence(std::vector<Action>(8, Action::kMoveForward)));
  CHECK(is_valid_sequence({Action::kTurnLeft, Action::kStop}));
  CHECK(!is_valid_sequence({}));
  CHECK(!is_valid_sequence(std::vector<Action>(9, Action::kMoveForward)));
  CHECK(!is_valid_sequence({Action::kStop, Action::kStop}));
  CHECK(!is_valid_sequence({Action::kStop, Action::kMoveForward}));
}

TEST_CASE("parse_action_sequence accepts only the wire grammar") {
  auto parsed = parse_action_sequence(R"(["MOVE_FORWARD","STOP"])");
  REQUIRE(parsed.has_value());
  CHECK(parsed->actions.size() == 2);
  CHECK(parsed->actions[0] == Action::kMoveForward);
  CHECK(parsed->actions[1] == Action::kStop);

  CHECK(parse_action_sequence(R"( [ "TURN_LEFT" , "TURN_RIGHT" ] )").has_value());
  CHECK(!parse_action_sequence(R"(["FLY_UP"])").has_value());
  CHECK(!parse_action_sequence("[]").has_value());
  CHECK(!parse_action_sequence(R"(["STOP","MOVE_FORWARD"])").has_value());
  CHECK(!parse_action_sequence("not json").has_value());
  CHECK(!parse_action_sequence(R"({"a":1})").has_value());
  CHECK(!parse_action_sequence("[1,2]").has_value());
  CHECK(!parse_action_sequence("").has_value());

  std::string nine = "[";
  for (int i = 0; i < 9; ++i) {
    nine += i ? ",\"MOVE_FORWARD\"" : "\"MOVE_FORWARD\"";
  }
  nine += "]";
  CHECK(!parse_action_sequence(nine).has_value());

  std::string eight = "[";
  for (int i = 0; i < 8; ++i) {
    eight += i ? ",\"MOVE_FORWARD\"" : "\"MOVE_FORWARD\"";
  }
  eight += "]";
  CHECK(parse_action_sequence(eight).has_value());
}

TEST_CASE("sequence_to_json is the exact inverse of parsing") {
  const ActionSequence seq{
      {Action::kTurnRight, Action::kMoveForward, Action::kStop}};
  const std::string text = sequence_to_json(seq);
  CHECK(text == R"(["TURN_RIGHT","MOVE_FORWARD","STOP"])");
  auto back = parse_action_sequence(text);
  REQUIRE(back.has_value());
  CHECK(back->actions == seq.actions);
}

TEST_CASE("custom kinematics scale the step") {
  Kinematics kin;
  kin.step_length_m = 2.0;
  kin.turn_deg = 45.0;
  const UAVState s =
      apply_action({Position{0, 0}, Heading{0.0}}, Action::kMoveForward, kin);
  CHECK(s.position.y() == doctest::Approx(2.0));
  const UAVState t =
      apply_action({Position{0, 0}, Heading{0.0}}, Action::kTurnRight, kin);
  CHECK(t.heading.degrees == doctest::Approx(45.0));
}
