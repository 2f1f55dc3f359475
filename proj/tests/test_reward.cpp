#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "airnav/reward.hpp"
#include "airnav/rng.hpp"

using namespace airnav;

namespace {

// Hand-built two-node episode: start at the origin facing north, one
// intermediate 100 m north, target 200 m north. Expert states sit exactly on
// the nodes so distances in the tests stay round numbers.
Episode straight_episode() {
  Episode ep;
  ep.id = "crafted";
  ep.chain.start = UAVState{Position{0, 0}, Heading{0.0}};
  ep.chain.intermediate = {
      Landmark{"mid", Position{0, 100}, 5.0, "mid post"}};
  ep.chain.target = Landmark{"end", Position{0, 200}, 5.0, "end pad"};
  ep.node_states = {UAVState{Position{0, 100}, Heading{0.0}},
                    UAVState{Position{0, 200}, Heading{0.0}}};
  ep.node_threshold_m = 10.0;
  ep.success_threshold_m = 20.0;
  ActionSequence fwd;
  fwd.actions.assign(8, Action::kMoveForward);
  ActionSequence stop;
  stop.actions.push_back(Action::kStop);
  ep.expert_chunks = {fwd, fwd, fwd, fwd, fwd, stop};
  for (const ActionSequence& c : ep.expert_chunks) {
    ep.expert.insert(ep.expert.end(), c.actions.begin(), c.actions.end());
  }
  ep.path_length_m = 200.0;
  return ep;
}

Episode no_intermediate_episode() {
  Episode ep = straight_episode();
  ep.chain.intermediate.clear();
  ep.chain.target = Landmark{"end", Position{0, 100}, 5.0, "end pad"};
  ep.node_states = {UAVState{Position{0, 100}, Heading{0.0}}};
  return ep;
}

}  // namespace

TEST_CASE("distance_reward clamps regressions to zero") {
  RewardConfig cfg;
  CHECK(distance_reward(100.0, 80.0, cfg.epsilon) ==
        doctest::Approx(0.2).epsilon(1e-6));
  CHECK(distance_reward(50.0, 60.0, cfg.epsilon) == 0.0);
  CHECK(distance_reward(0.0, 0.0, cfg.epsilon) == 0.0);
  CHECK_THROWS_AS(distance_reward(-1.0, 0.0, cfg.epsilon),
                  std::invalid_argument);
  CHECK_THROWS_AS(distance_reward(0.0, -1.0, cfg.epsilon),
                  std::invalid_argument);
}

TEST_CASE("distance_reward stays in [0, 1] under randomized inputs") {
  Rng rng(13);
  for (int i = 0; i < 100000; ++i) {
    const double d_t = rng.uniform(0.0, 500.0);
    const double d_t1 = rng.uniform(0.0, 500.0);
    const double r = distance_reward(d_t, d_t1, 1e-6);
    CHECK(r >= 0.0);
    CHECK(r <= 1.0);
  }
}

TEST_CASE("yaw_reward is a clipped linear falloff") {
  CHECK(yaw_reward(Heading{40.0}, Heading{40.0}, 60.0) == doctest::Approx(1.0));
  CHECK(yaw_reward(Heading{70.0}, Heading{40.0}, 60.0) == doctest::Approx(0.5));
  CHECK(yaw_reward(Heading{10.0}, Heading{40.0}, 60.0) == doctest::Approx(0.5));
  CHECK(yaw_reward(Heading{130.0}, Heading{40.0}, 60.0) == 0.0);
  // symmetric across the +/-180 seam
  CHECK(yaw_reward(Heading{-170.0}, Heading{170.0}, 60.0) ==
        doctest::Approx(1.0 - 20.0 / 60.0));
}

TEST_CASE("yaw_reward bounds and symmetry under randomized headings") {
  Rng rng(14);
  for (int i = 0; i < 100000; ++i) {
    const Heading a = normalize_heading(rng.uniform(-180.0, 180.0));
    const Heading b = normalize_heading(rng.uniform(-180.0, 180.0));
    const double r = yaw_reward(a, b, 60.0);
    CHECK(r >= 0.0);
    CHECK(r <= 1.0);
    CHECK(r == doctest::Approx(yaw_reward(b, a, 60.0)));
  }
}

TEST_CASE("stop_reward depends only on the final tokens") {
  RewardConfig cfg;
  ActionSequence stop{{Action::kMoveForward, Action::kStop}};
  ActionSequence go{{Action::kMoveForward, Action::kMoveForward}};
  ActionSequence turn{{Action::kMoveForward, Action::kTurnRight}};
  CHECK(stop_reward(stop, stop, cfg.alpha, cfg.beta) == doctest::Approx(1.0));
  CHECK(stop_reward(go, turn, cfg.alpha, cfg.beta) == doctest::Approx(0.1));
  CHECK(stop_reward(stop, go, cfg.alpha, cfg.beta) == 0.0);
  CHECK(stop_reward(go, stop, cfg.alpha, cfg.beta) == 0.0);
}

TEST_CASE("format_reward accepts exactly the wire grammar") {
  const FormatResult ok = format_reward(R"(["MOVE_FORWARD","STOP"])", 0.1);
  CHECK(ok.reward == doctest::Approx(0.1));
  REQUIRE(ok.parsed.has_value());
  CHECK(ok.parsed->actions.size() == 2);

  CHECK(!format_reward(R"(["FLY_UP"])", 0.1).parsed.has_value());
  CHECK(format_reward(R"(["FLY_UP"])", 0.1).reward == 0.0);
  CHECK(!format_reward("[]", 0.1).parsed.has_value());
  CHECK(!format_reward("garbage", 0.1).parsed.has_value());

  std::string nine = "[";
  for (int i = 0; i < 9; ++i) nine += i ? ",\"STOP\"" : "\"MOVE_FORWARD\"";
  nine += "]";
  CHECK(!format_reward(nine, 0.1).parsed.has_value());
}

TEST_CASE("total_reward is the weighted linear combination") {
  RewardConfig cfg;  // lambda1 = lambda2 = 1
  CHECK(total_reward({0.2, 0.5, 1.0, 0.1, 0.0}, cfg) == doctest::Approx(1.8));
  CHECK(total_reward({0.0, 0.0, 0.0, 0.0, 0.0}, cfg) == 0.0);
  CHECK(total_reward({1.0, 1.0, 1.0, 0.1, 0.0}, cfg) == doctest::Approx(3.1));
  cfg.lambda1 = 0.5;
  cfg.lambda2 = 2.0;
  CHECK(total_reward({0.2, 0.5, 1.0, 0.1, 0.0}, cfg) ==
        doctest::Approx(0.5 * 0.2 + 2.0 * 0.5 + 1.0 + 0.1));
}

TEST_CASE("subgoal progress advances monotonically and never regresses") {
  const Episode ep = straight_episode();
  SubgoalProgress progress(ep);
  CHECK(progress.active_index(ep) == 0);
  CHECK(progress.reached_fraction(ep) == doctest::Approx(0.0));

  progress.update(ep, Position{0, 50});  // not within 10 m of the node
  CHECK(progress.active_index(ep) == 0);

  progress.update(ep, Position{0, 95});  // 5 m short of the node
  CHECK(progress.active_index(ep) == 1);
  CHECK(progress.reached_count() == 1);
  CHECK(progress.reached_fraction(ep) == doctest::Approx(0.5));

  // moving away does not clear the flag
  progress.update(ep, Position{0, 0});
  CHECK(progress.active_index(ep) == 1);

  const SubgoalRef ref = active_subgoal(ep, progress);
  CHECK(ref.position.y() == doctest::Approx(200.0));
}

TEST_CASE("active_subgoal selects the first unreached node state") {
  const Episode ep = straight_episode();
  SubgoalProgress fresh(ep);
  const SubgoalRef first = active_subgoal(ep, fresh);
  CHECK(first.position.y() == doctest::Approx(100.0));

  Episode bare = straight_episode();
  bare.node_states.clear();
  CHECK_THROWS_AS(active_subgoal(bare, fresh), std::invalid_argument);
}

TEST_CASE("gt_chunk_at degrades to a lone STOP past the expert") {
  const Episode ep = straight_episode();
  CHECK(gt_chunk_at(ep, 0).size() == 8);
  CHECK(gt_chunk_at(ep, 5).size() == 1);
  CHECK(gt_chunk_at(ep, 6).size() == 1);
  CHECK(gt_chunk_at(ep, 100).ends_with_stop());
  CHECK_THROWS_AS(gt_chunk_at(ep, -1), std::invalid_argument);
}

TEST_CASE("step_reward composes the components") {
  RewardConfig cfg;
  const Episode ep = no_intermediate_episode();  // subgoal 100 m north

  SUBCASE("approach, aligned, both stop") {
    SubgoalProgress progress(ep);
    UAVState after;
    // moves 20 m of 100 m toward the subgoal, ends aligned, ends with STOP
    const RewardBreakdown b = step_reward(
        ep, ep.chain.start,
        R"(["MOVE_FORWARD","MOVE_FORWARD","MOVE_FORWARD","MOVE_FORWARD","STOP"])",
        gt_chunk_at(ep, 5), cfg, progress, &after);
    CHECK(b.r_dis == doctest::Approx(0.2).epsilon(1e-6));
    CHECK(b.r_yaw == doctest::Approx(1.0));
    CHECK(b.r_stop == doctest::Approx(1.0));
    CHECK(b.r_format == doctest::Approx(0.1));
    CHECK(b.r_all == doctest::Approx(2.3).epsilon(1e-6));
    CHECK(after.position.y() == doctest::Approx(20.0));
  }

  SUBCASE("malformed output earns nothing and does not move") {
    SubgoalProgress progress(ep);
    UAVState after;
    const RewardBreakdown b = step_reward(ep, ep.chain.start, "nonsense",
                                          gt_chunk_at(ep, 0), cfg, progress,
                                          &after);
    CHECK(b.r_dis == 0.0);
    CHECK(b.r_yaw == 0.0);
    CHECK(b.r_stop == 0.0);
    CHECK(b.r_format == 0.0);
    CHECK(b.r_all == 0.0);
    CHECK(after.position.x() == doctest::Approx(0.0));
    CHECK(after.position.y() == doctest::Approx(0.0));
  }

  SUBCASE("divergent rollout keeps only consolation terms") {
    SubgoalProgress progress(ep);
    UAVState after;
    // turn about and move away; neither this nor the gt chunk ends with STOP
    const RewardBreakdown b = step_reward(
        ep, UAVState{Position{0, 0}, Heading{180.0}},
        R"(["MOVE_FORWARD","MOVE_FORWARD"])", gt_chunk_at(ep, 0), cfg,
        progress, &after);
    CHECK(b.r_dis == 0.0);
    const double expected_yaw =
        yaw_reward(Heading{180.0}, Heading{0.0}, cfg.tau_yaw);
    CHECK(b.r_yaw == doctest::Approx(expected_yaw));
    CHECK(b.r_yaw == 0.0);  // 180 degrees off with a 60 degree tolerance
    CHECK(b.r_stop == doctest::Approx(0.1));
    CHECK(b.r_format == doctest::Approx(0.1));
    CHECK(b.r_all == doctest::Approx(0.2));
    CHECK(after.position.y() == doctest::Approx(-10.0));
  }
}

TEST_CASE("step_reward measures against the subgoal at the chunk start") {
  RewardConfig cfg;
  const Episode ep = straight_episode();
  SubgoalProgress progress(ep);
  // drive from just south of the intermediate node: the chunk crosses the
  // node threshold mid-flight, yet d_t/d_t1 stay measured to node 1
  const UAVState before{Position{0, 92}, Heading{0.0}};
  UAVState after;
  const RewardBreakdown b = step_reward(
      ep, before, R"(["MOVE_FORWARD","MOVE_FORWARD"])", gt_chunk_at(ep, 0),
      cfg, progress, &after);
  // d_t = 8, d_t1 = 2 against node 1 at (0,100)
  CHECK(b.r_dis == doctest::Approx((8.0 - 2.0) / (8.0 + cfg.epsilon)));
  // the crossing is recorded for the next step
  CHECK(progress.active_index(ep) == 1);
  CHECK(after.position.y() == doctest::Approx(102.0));
}

TEST_CASE("reward ablations zero their components only") {
  const Episode ep = no_intermediate_episode();
  const char* pred =
      R"(["MOVE_FORWARD","MOVE_FORWARD","MOVE_FORWARD","MOVE_FORWARD","STOP"])";

  RewardConfig cfg;
  SubgoalProgress p1(ep);
  const RewardBreakdown full =
      step_reward(ep, ep.chain.start, pred, gt_chunk_at(ep, 5), cfg, p1);

  cfg.ablation = RewardAblation{false, true, true};
  SubgoalProgress p2(ep);
  const RewardBreakdown no_subgoal =
      step_reward(ep, ep.chain.start, pred, gt_chunk_at(ep, 5), cfg, p2);
  CHECK(no_subgoal.r_dis == 0.0);
  CHECK(no_subgoal.r_yaw == 0.0);
  CHECK(no_subgoal.r_stop == doctest::Approx(full.r_stop));
  CHECK(no_subgoal.r_format == doctest::Approx(full.r_format));

  cfg.ablation = RewardAblation{true, false, true};
  SubgoalProgress p3(ep);
  const RewardBreakdown no_stop =
      step_reward(ep, ep.chain.start, pred, gt_chunk_at(ep, 5), cfg, p3);
  CHECK(no_stop.r_stop == 0.0);
  CHECK(no_stop.r_dis == doctest::Approx(full.r_dis));

  cfg.ablation = RewardAblation{true, true, false};
  SubgoalProgress p4(ep);
  const RewardBreakdown no_format =
      step_reward(ep, ep.chain.start, pred, gt_chunk_at(ep, 5), cfg, p4);
  CHECK(no_format.r_format == 0.0);
  CHECK(no_format.r_dis == doctest::Approx(full.r_dis));
  CHECK(no_format.r_all ==
        doctest::Approx(full.r_all - full.r_format));
}

TEST_CASE("RewardConfig validation") {
  RewardConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.epsilon = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = RewardConfig{};
  cfg.tau_yaw = -5.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
