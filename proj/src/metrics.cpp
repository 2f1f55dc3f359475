#include "airnav/metrics.hpp"

#include <algorithm>
#include <stdexcept>

#include "airnav/geometry.hpp"

namespace airnav {

std::string_view termination_cause_name(TerminationCause c) {
  switch (c) {
    case TerminationCause::kStop: return "stop";
    case TerminationCause::kMaxSteps: return "max-steps";
    case TerminationCause::kFormatAbort: return "format-abort";
  }
  throw std::invalid_argument("unknown termination cause");
}

std::string_view stop_class_name(StopClass c) {
  switch (c) {
    case StopClass::kCorrect: return "correct";
    case StopClass::kEarlyStop: return "early_stop";
    case StopClass::kMissedStop: return "missed_stop";
  }
  throw std::invalid_argument("unknown stop class");
}

double navigation_error(const Position& final_pos, const Position& target) {
  return euclidean_distance(final_pos, target);
}

bool is_success(double ne_m, double threshold_m) {
  if (ne_m < 0.0) throw std::invalid_argument("is_success: negative error");
  return ne_m < threshold_m;
}

bool oracle_success(const TrajectoryLog& log, const Position& target,
                    double threshold_m) {
  for (const UAVState& s : log.states) {
    if (euclidean_distance(s.position, target) < threshold_m) return true;
  }
  return false;
}

double spl(bool success, double shortest_m, double actual_m) {
  if (!(shortest_m > 0.0)) {
    throw std::invalid_argument("spl: shortest path must be > 0");
  }
  if (actual_m < 0.0) throw std::invalid_argument("spl: negative path length");
  if (!success) return 0.0;
  return shortest_m / std::max(actual_m, shortest_m);
}

StopClass stop_class(const TrajectoryLog& log, const Episode& episode,
                     double threshold_m) {
  if (log.states.empty()) throw std::invalid_argument("stop_class: empty log");
  const double ne =
      navigation_error(log.states.back().position, episode.chain.target.position);
  if (log.cause == TerminationCause::kStop && ne >= threshold_m) {
    return StopClass::kEarlyStop;
  }
  if (log.cause == TerminationCause::kMaxSteps &&
      oracle_success(log, episode.chain.target.position, threshold_m)) {
    return StopClass::kMissedStop;
  }
  return StopClass::kCorrect;
}

double executed_path_length(const std::vector<Action>& executed,
                            const Kinematics& kin) {
  int forwards = 0;
  for (Action a : executed) {
    if (a == Action::kMoveForward) ++forwards;
  }
  return kin.step_length_m * forwards;
}

EpisodeResult score_episode(const TrajectoryLog& log, const Episode& episode,
                            double threshold_m, const std::string& split) {
  if (log.states.empty()) {
    throw std::invalid_argument("score_episode: empty trajectory");
  }
  EpisodeResult r;
  r.episode_id = log.episode_id;
  r.split = split;
  r.difficulty = episode.difficulty;
  r.cause = log.cause;
  r.ne_m = navigation_error(log.states.back().position,
                            episode.chain.target.position);
  r.success = is_success(r.ne_m, threshold_m);
  r.oracle_success = oracle_success(log, episode.chain.target.position,
                                    threshold_m);
  r.path_length_m = executed_path_length(log.executed);
  r.shortest_path_m = euclidean_distance(episode.chain.start.position,
                                         episode.chain.target.position);
  r.spl = spl(r.success, r.shortest_path_m, r.path_length_m);
  r.stop_class = stop_class(log, episode, threshold_m);
  r.decision_steps = static_cast<int>(log.raw_outputs.size());
  return r;
}

namespace {

MetricSummary summarize(const std::vector<const EpisodeResult*>& rs) {
  MetricSummary s;
  s.count = static_cast<int>(rs.size());
  if (rs.empty()) return s;
  double ne = 0.0, sr = 0.0, osr = 0.0, spl_sum = 0.0;
  for (const EpisodeResult* r : rs) {
    ne += r->ne_m;
    sr += r->success ? 1.0 : 0.0;
    osr += r->oracle_success ? 1.0 : 0.0;
    spl_sum += r->spl;
  }
  const double n = static_cast<double>(rs.size());
  s.mean_ne_m = ne / n;
  s.sr_pct = 100.0 * sr / n;
  s.osr_pct = 100.0 * osr / n;
  s.spl_pct = 100.0 * spl_sum / n;
  return s;
}

}  // namespace

EvalReport aggregate(const std::vector<EpisodeResult>& results) {
  if (results.empty()) throw std::invalid_argument("aggregate: empty results");
  EvalReport report;
  std::vector<const EpisodeResult*> all;
  std::map<std::string, std::vector<const EpisodeResult*>> split_groups;
  std::map<std::string, std::vector<const EpisodeResult*>> diff_groups;
  for (const EpisodeResult& r : results) {
    all.push_back(&r);
    split_groups[r.split].push_back(&r);
    diff_groups[std::string(difficulty_name(r.difficulty))].push_back(&r);
  }
  report.overall = summarize(all);
  for (const auto& [k, v] : split_groups) report.by_split[k] = summarize(v);
  for (const auto& [k, v] : diff_groups) report.by_difficulty[k] = summarize(v);
  return report;
}

}  // namespace airnav
