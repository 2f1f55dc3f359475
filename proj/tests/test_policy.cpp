#include "doctest.h"

#include <array>
#include <cmath>
#include <stdexcept>

#include "airnav/policy.hpp"

using namespace airnav;

namespace {

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
  return ep;
}

ProgressContext plain_ctx(const Position& subgoal) {
  ProgressContext ctx;
  ctx.subgoal.position = subgoal;
  ctx.subgoal.heading = Heading{0.0};
  return ctx;
}

}  // namespace

TEST_CASE("featurize encodes relative bearing in slot 0") {
  const UAVState north{Position{0, 0}, Heading{0.0}};
  CHECK(featurize(north, plain_ctx(Position{0, 100}))(0) == doctest::Approx(0.0));
  CHECK(featurize(north, plain_ctx(Position{100, 0}))(0) == doctest::Approx(0.5));
  CHECK(featurize(north, plain_ctx(Position{-100, 0}))(0) ==
        doctest::Approx(-0.5));
  // directly behind lands on the +180 side of the wrap
  CHECK(featurize(north, plain_ctx(Position{0, -100}))(0) == doctest::Approx(1.0));

  const UAVState east{Position{0, 0}, Heading{90.0}};
  CHECK(featurize(east, plain_ctx(Position{0, 100}))(0) == doctest::Approx(-0.5));
}

TEST_CASE("featurize clips distance at d_norm") {
  const UAVState s{Position{0, 0}, Heading{0.0}};
  CHECK(featurize(s, plain_ctx(Position{0, 100}), 200.0)(1) ==
        doctest::Approx(0.5));
  CHECK(featurize(s, plain_ctx(Position{0, 400}), 200.0)(1) ==
        doctest::Approx(1.0));
  CHECK(featurize(s, plain_ctx(Position{0, 200}), 200.0)(1) ==
        doctest::Approx(1.0));
  CHECK(featurize(s, plain_ctx(Position{0, 0}))(1) == 0.0);
  CHECK_THROWS_AS(featurize(s, plain_ctx(Position{0, 1}), 0.0),
                  std::invalid_argument);
}

TEST_CASE("featurize heading trig and progress slots") {
  ProgressContext ctx = plain_ctx(Position{0, 100});
  ctx.reached_fraction = 0.75;

  const FeatureVector f_n = featurize(UAVState{Position{0, 0}, Heading{0.0}}, ctx);
  CHECK(f_n(2) == doctest::Approx(0.0));
  CHECK(f_n(3) == doctest::Approx(1.0));
  CHECK(f_n(4) == doctest::Approx(0.75));

  const FeatureVector f_e =
      featurize(UAVState{Position{0, 0}, Heading{90.0}}, ctx);
  CHECK(f_e(2) == doctest::Approx(1.0));
  CHECK(f_e(3) == doctest::Approx(0.0).epsilon(1e-12));

  const FeatureVector f_30 =
      featurize(UAVState{Position{0, 0}, Heading{30.0}}, ctx);
  CHECK(f_30(2) == doctest::Approx(0.5));
  CHECK(f_30(3) == doctest::Approx(std::sqrt(3.0) / 2.0));
}

TEST_CASE("featurize one-hots the previous action") {
  const UAVState s{Position{0, 0}, Heading{0.0}};
  ProgressContext ctx = plain_ctx(Position{0, 100});

  const std::array<Action, 4> acts = {Action::kMoveForward, Action::kTurnLeft,
                                      Action::kTurnRight, Action::kStop};
  for (int i = 0; i < 4; ++i) {
    ctx.last_action = acts[i];
    const FeatureVector f = featurize(s, ctx);
    for (int slot = 0; slot < 5; ++slot) {
      CHECK(f(5 + slot) == (slot == i ? 1.0 : 0.0));
    }
  }
  ctx.last_action.reset();
  const FeatureVector f = featurize(s, ctx);
  CHECK(f(9) == 1.0);
  CHECK(f(5) + f(6) + f(7) + f(8) == 0.0);
}

TEST_CASE("softmax normalizes and is shift invariant") {
  Logits z = Logits::Zero();
  const auto uniform = softmax(z);
  for (int i = 0; i < kNumActions; ++i) {
    CHECK(uniform(i) == doctest::Approx(0.25));
  }

  z << std::log(1.0), std::log(2.0), std::log(3.0), std::log(4.0);
  const auto p = softmax(z);
  CHECK(p(0) == doctest::Approx(0.1));
  CHECK(p(1) == doctest::Approx(0.2));
  CHECK(p(2) == doctest::Approx(0.3));
  CHECK(p(3) == doctest::Approx(0.4));

  const auto shifted = softmax((z.array() + 1000.0).matrix());
  for (int i = 0; i < kNumActions; ++i) {
    CHECK(shifted(i) == doctest::Approx(p(i)));
  }
  CHECK(p.sum() == doctest::Approx(1.0));
}

TEST_CASE("zero-initialized policy samples uniformly") {
  PolicyParams params;
  Rng rng(7);
  const FeatureVector f = featurize(UAVState{Position{0, 0}, Heading{0.0}},
                                    plain_ctx(Position{0, 100}));
  std::array<int, 4> counts = {0, 0, 0, 0};
  const int n = 40000;
  for (int i = 0; i < n; ++i) {
    const PolicyDecision d = policy_step(params, f, rng, 1.0);
    ++counts[static_cast<int>(d.action)];
    CHECK(d.logprob == doctest::Approx(std::log(0.25)));
  }
  for (int c : counts) {
    CHECK(static_cast<double>(c) / n == doctest::Approx(0.25).epsilon(0.04));
  }
}

TEST_CASE("greedy decoding takes the argmax with lowest-index ties") {
  PolicyParams params;
  params.bias << 0.5, 2.0, 2.0, -1.0;
  Rng rng(1);
  const FeatureVector f = FeatureVector::Zero();
  const PolicyDecision d = policy_step(params, f, rng, 0.0);
  CHECK(d.action == Action::kTurnLeft);  // ties with kTurnRight, lower index
  const auto probs = softmax(params.logits(f));
  CHECK(d.logprob == doctest::Approx(std::log(probs(1))));
  CHECK_THROWS_AS(policy_step(params, f, rng, -0.5), std::invalid_argument);
}

TEST_CASE("sampled logprob is reported under the temperature-1 distribution") {
  PolicyParams params;
  params.bias << 1.0, 0.0, -1.0, 0.5;
  Rng rng(11);
  const FeatureVector f = FeatureVector::Zero();
  const auto probs = softmax(params.logits(f));
  for (int i = 0; i < 200; ++i) {
    const PolicyDecision d = policy_step(params, f, rng, 3.0);
    CHECK(d.logprob ==
          doctest::Approx(std::log(probs(static_cast<int>(d.action)))));
  }
}

TEST_CASE("rollout_chunk ends on STOP and caps at the chunk length") {
  const Episode ep = straight_episode();

  PolicyParams stopper;
  stopper.bias(static_cast<int>(Action::kStop)) = 1000.0;
  SubgoalProgress prog(ep);
  Rng rng(3);
  const ChunkRollout one = rollout_chunk(stopper, ep, ep.chain.start, prog,
                                         std::nullopt, rng, 1.0);
  CHECK(one.sequence.size() == 1);
  CHECK(one.sequence.ends_with_stop());
  CHECK(one.end.position == ep.chain.start.position);
  CHECK(one.steps.size() == 1);
  CHECK(one.steps[0].logprob == doctest::Approx(0.0).epsilon(1e-9));

  PolicyParams pusher;
  pusher.bias(static_cast<int>(Action::kMoveForward)) = 1000.0;
  SubgoalProgress prog2(ep);
  const ChunkRollout eight = rollout_chunk(pusher, ep, ep.chain.start, prog2,
                                           std::nullopt, rng, 1.0);
  CHECK(eight.sequence.size() == kMaxChunkLength);
  CHECK_FALSE(eight.sequence.ends_with_stop());
  CHECK(is_valid_sequence(eight.sequence.actions));
  CHECK(eight.end.position.y() == doctest::Approx(40.0));

  SubgoalProgress prog3(ep);
  const ChunkRollout three = rollout_chunk(pusher, ep, ep.chain.start, prog3,
                                           std::nullopt, rng, 1.0, 200.0, 3);
  CHECK(three.sequence.size() == 3);
  CHECK_THROWS_AS(rollout_chunk(pusher, ep, ep.chain.start, prog3,
                                std::nullopt, rng, 1.0, 200.0, 0),
                  std::invalid_argument);
  CHECK_THROWS_AS(rollout_chunk(pusher, ep, ep.chain.start, prog3,
                                std::nullopt, rng, 1.0, 200.0, 9),
                  std::invalid_argument);
}

TEST_CASE("rollout_chunk refeaturizes against the advancing subgoal") {
  const Episode ep = straight_episode();
  PolicyParams pusher;
  pusher.bias(static_cast<int>(Action::kMoveForward)) = 1000.0;

  // Start 40 m short of the intermediate node at (0, 100). The chunk crosses
  // it, so late steps must be featurized against the target instead.
  SubgoalProgress prog(ep);
  const UAVState start{Position{0, 60}, Heading{0.0}};
  prog.update(ep, start.position);
  Rng rng(5);
  const ChunkRollout roll =
      rollout_chunk(pusher, ep, start, prog, std::nullopt, rng, 1.0);

  REQUIRE(roll.steps.size() == 8);
  // step 0 featurized at (0, 60) toward the node
  CHECK(roll.steps[0].features(1) == doctest::Approx(40.0 / 200.0));
  CHECK(roll.steps[0].features(4) == 0.0);
  // step 7 featurized at (0, 95), node already crossed, toward the target
  CHECK(roll.steps[7].features(1) == doctest::Approx(105.0 / 200.0));
  // fraction counts the target in the denominator: 1 of 2 chain nodes
  CHECK(roll.steps[7].features(4) == doctest::Approx(0.5));
  CHECK(prog.reached_count() == 1);
  CHECK(roll.end.position.y() == doctest::Approx(100.0));
}

TEST_CASE("rollout_chunk is deterministic for a fixed stream") {
  const Episode ep = straight_episode();
  PolicyParams params;
  params.weights.setConstant(0.05);

  auto run = [&]() {
    SubgoalProgress prog(ep);
    Rng rng(99);
    return rollout_chunk(params, ep, ep.chain.start, prog, std::nullopt, rng,
                         1.0);
  };
  const ChunkRollout a = run();
  const ChunkRollout b = run();
  REQUIRE(a.sequence.size() == b.sequence.size());
  for (std::size_t i = 0; i < a.sequence.size(); ++i) {
    CHECK(a.sequence.actions[i] == b.sequence.actions[i]);
    CHECK(a.steps[i].logprob == b.steps[i].logprob);
  }
}

TEST_CASE("policy params flatten round trip") {
  PolicyParams p;
  p.weights(1, 2) = 7.0;
  p.weights(3, 9) = -0.25;
  p.bias(0) = 0.5;
  p.bias(3) = -2.0;

  const std::vector<double> flat = p.flatten();
  REQUIRE(flat.size() == 44);
  CHECK(flat[1 * kFeatureDim + 2] == 7.0);
  CHECK(flat[3 * kFeatureDim + 9] == -0.25);
  CHECK(flat[40] == 0.5);
  CHECK(flat[43] == -2.0);

  const PolicyParams q = PolicyParams::from_flat(flat);
  CHECK((q.weights - p.weights).cwiseAbs().maxCoeff() == 0.0);
  CHECK((q.bias - p.bias).cwiseAbs().maxCoeff() == 0.0);

  std::vector<double> bad(43, 0.0);
  CHECK_THROWS_AS(PolicyParams::from_flat(bad), std::invalid_argument);
}
