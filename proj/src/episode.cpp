#include "airnav/episode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "airnav/geometry.hpp"

namespace airnav {

std::string_view difficulty_name(Difficulty d) {
  switch (d) {
    case Difficulty::kEasy: return "easy";
    case Difficulty::kMedium: return "medium";
    case Difficulty::kHard: return "hard";
  }
  throw std::invalid_argument("unknown difficulty");
}

std::optional<Difficulty> difficulty_from_name(std::string_view name) {
  if (name == "easy") return Difficulty::kEasy;
  if (name == "medium") return Difficulty::kMedium;
  if (name == "hard") return Difficulty::kHard;
  return std::nullopt;
}

UAVState sample_start(const WorldMap& world, Rng& rng) {
  if (world.landmarks.empty()) {
    throw std::invalid_argument("sample_start: empty world");
  }
  const Bounds& b = world.bounds;
  UAVState s;
  s.position.x() = rng.uniform(b.min.x(), b.max.x());
  s.position.y() = rng.uniform(b.min.y(), b.max.y());
  // 12 headings at multiples of 30 deg in (-180, 180].
  const int k = static_cast<int>(rng.uniform_index(12));
  s.heading = normalize_heading(-150.0 + 30.0 * k);
  return s;
}

PlanResult plan_landmarks(const WorldMap& world, const UAVState& start,
                          const Landmark& target, const SynthConfig& config) {
  PlanResult result;
  NodeChain chain;
  chain.start = start;
  chain.target = target;

  Position current = start.position;
  double dist_to_target = euclidean_distance(current, target.position);

  while (dist_to_target > config.d_max_m) {
    if (static_cast<int>(chain.intermediate.size()) >= config.max_landmarks) {
      result.rejection = PlanRejection::kCountOutOfRange;
      return result;
    }
    const Landmark* best = nullptr;
    double best_dist = dist_to_target;  // must make strict progress
    for (const Landmark& lm : world.landmarks) {
      if (lm.id == target.id) continue;
      bool used = false;
      for (const Landmark& prev : chain.intermediate) {
        if (prev.id == lm.id) { used = true; break; }
      }
      if (used) continue;
      if (euclidean_distance(current, lm.position) > config.d_max_m) continue;
      const double d = euclidean_distance(lm.position, target.position);
      if (d < best_dist) {
        best_dist = d;
        best = &lm;
      }
    }
    if (best == nullptr) {
      result.rejection = PlanRejection::kSparseLandmarks;
      return result;
    }
    chain.intermediate.push_back(*best);
    current = best->position;
    dist_to_target = best_dist;
  }

  const int count = static_cast<int>(chain.intermediate.size());
  if (count < config.min_landmarks || count > config.max_landmarks) {
    result.rejection = PlanRejection::kCountOutOfRange;
    return result;
  }
  result.chain = std::move(chain);
  return result;
}

namespace {

constexpr Action kLookaheadMoves[3] = {Action::kMoveForward, Action::kTurnLeft,
                                       Action::kTurnRight};

}  // namespace

Action lookahead_step(const UAVState& state, const Position& goal, int horizon,
                      const Kinematics& kin) {
  if (horizon < 1) throw std::invalid_argument("lookahead_step: horizon < 1");

  long total = 1;
  for (int i = 0; i < horizon; ++i) total *= 3;

  Action best_first = Action::kMoveForward;
  double best_dist = std::numeric_limits<double>::infinity();
  for (long idx = 0; idx < total; ++idx) {
    // Most-significant digit first so enumeration order is lexicographic
    // (MOVE_FORWARD < TURN_LEFT < TURN_RIGHT); the first minimizer wins ties.
    UAVState s = state;
    Action first = Action::kMoveForward;
    long rem = idx;
    long place = total / 3;
    for (int d = 0; d < horizon; ++d) {
      const Action a = kLookaheadMoves[(rem / place) % 3];
      if (d == 0) first = a;
      s = apply_action(s, a, kin);
      rem %= place;
      if (place > 1) place /= 3;
    }
    const double dist = euclidean_distance(s.position, goal);
    if (dist < best_dist) {
      best_dist = dist;
      best_first = first;
    }
  }
  return best_first;
}

SegmentResult lookahead_segment(const UAVState& from, const Position& node,
                                double arrival_threshold,
                                const SynthConfig& config) {
  if (arrival_threshold <= 0.0) {
    throw std::invalid_argument("lookahead_segment: threshold must be > 0");
  }
  SegmentResult result;
  result.end = from;
  while (!(euclidean_distance(result.end.position, node) < arrival_threshold)) {
    if (static_cast<int>(result.actions.size()) >= config.max_segment_actions) {
      result.ok = false;
      return result;
    }
    const Action a =
        lookahead_step(result.end, node, config.horizon, config.kinematics);
    result.end = apply_action(result.end, a, config.kinematics);
    result.actions.push_back(a);
  }
  result.ok = true;
  return result;
}

std::vector<ActionSequence> chunk_actions(const std::vector<Action>& actions) {
  std::vector<ActionSequence> chunks;
  ActionSequence current;
  for (Action a : actions) {
    current.actions.push_back(a);
    if (current.actions.size() == kMaxChunkLength) {
      chunks.push_back(std::move(current));
      current = ActionSequence{};
    }
  }
  if (!current.actions.empty()) chunks.push_back(std::move(current));
  return chunks;
}

std::optional<Episode> synthesize_trajectory(const NodeChain& chain,
                                             const SynthConfig& config) {
  Episode ep;
  ep.chain = chain;
  ep.node_threshold_m = config.node_threshold_m;
  ep.success_threshold_m = config.success_threshold_m;

  UAVState cursor = chain.start;
  for (const Landmark& lm : chain.intermediate) {
    SegmentResult seg = lookahead_segment(cursor, lm.position,
                                          config.node_threshold_m, config);
    if (!seg.ok) return std::nullopt;
    ep.expert.insert(ep.expert.end(), seg.actions.begin(), seg.actions.end());
    cursor = seg.end;
    ep.node_states.push_back(cursor);
  }
  SegmentResult last = lookahead_segment(cursor, chain.target.position,
                                         config.success_threshold_m, config);
  if (!last.ok) return std::nullopt;
  ep.expert.insert(ep.expert.end(), last.actions.begin(), last.actions.end());
  cursor = last.end;
  ep.node_states.push_back(cursor);

  ep.expert.push_back(Action::kStop);
  ep.expert_chunks = chunk_actions(ep.expert);

  int forwards = 0;
  for (Action a : ep.expert) {
    if (a == Action::kMoveForward) ++forwards;
  }
  ep.path_length_m = config.kinematics.step_length_m * forwards;
  ep.difficulty = classify_difficulty(ep.path_length_m);
  ep.instruction = render_instruction(chain);
  return ep;
}

Difficulty classify_difficulty(double path_length_m) {
  if (path_length_m < 0.0) {
    throw std::invalid_argument("classify_difficulty: negative length");
  }
  if (path_length_m < 135.0) return Difficulty::kEasy;
  if (path_length_m < 235.0) return Difficulty::kMedium;
  return Difficulty::kHard;
}

std::string render_instruction(const NodeChain& chain) {
  std::string text;
  if (chain.intermediate.empty()) {
    text = "Fly to the " + chain.target.label + " and stop.";
    return text;
  }
  text = "Head toward the " + chain.intermediate.front().label;
  for (std::size_t i = 1; i < chain.intermediate.size(); ++i) {
    text += ", then head toward the " + chain.intermediate[i].label;
  }
  text += ", then fly to the " + chain.target.label + " and stop.";
  return text;
}

std::optional<Episode> synthesize_episode(const WorldMap& world,
                                          const SynthConfig& config,
                                          std::uint64_t episode_seed,
                                          const std::string& id) {
  Rng rng(mix_seed(world.rng_seed, episode_seed));
  for (int attempt = 0; attempt < config.max_sample_attempts; ++attempt) {
    const UAVState start = sample_start(world, rng);

    std::vector<const Landmark*> candidates;
    for (const Landmark& lm : world.landmarks) {
      const double d = euclidean_distance(start.position, lm.position);
      if (d >= config.min_start_target_m && d <= config.max_start_target_m) {
        candidates.push_back(&lm);
      }
    }
    if (candidates.empty()) continue;
    const Landmark& target =
        *candidates[rng.uniform_index(candidates.size())];

    PlanResult plan = plan_landmarks(world, start, target, config);
    if (!plan) continue;

    std::optional<Episode> ep = synthesize_trajectory(*plan.chain, config);
    if (!ep) continue;
    if (config.max_detour_ratio > 0.0) {
      const double crow =
          euclidean_distance(start.position, target.position);
      if (ep->path_length_m > config.max_detour_ratio * crow) continue;
    }

    ep->id = id;
    ep->seed = episode_seed;
    ep->world_seed = world.rng_seed;
    return ep;
  }
  return std::nullopt;
}

}  // namespace airnav
