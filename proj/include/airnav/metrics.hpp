#ifndef AIRNAV_METRICS_HPP_
#define AIRNAV_METRICS_HPP_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "airnav/episode.hpp"
#include "airnav/kinematics.hpp"

namespace airnav {

enum class TerminationCause { kStop, kMaxSteps, kFormatAbort };

std::string_view termination_cause_name(TerminationCause c);

enum class StopClass { kCorrect, kEarlyStop, kMissedStop };

std::string_view stop_class_name(StopClass c);

struct TrajectoryLog {
  std::string episode_id;
  std::vector<UAVState> states;  // states[0] is the start, then post-action
  std::vector<std::string> raw_outputs;
  std::vector<Action> executed;
  TerminationCause cause = TerminationCause::kStop;
  double wall_time_s = 0.0;
};

struct EpisodeResult {
  std::string episode_id;
  std::string split;
  Difficulty difficulty = Difficulty::kEasy;
  double ne_m = 0.0;
  bool success = false;
  bool oracle_success = false;
  double spl = 0.0;
  StopClass stop_class = StopClass::kCorrect;
  TerminationCause cause = TerminationCause::kStop;
  double path_length_m = 0.0;      // executed forward distance
  double shortest_path_m = 0.0;    // straight-line start to target
  int decision_steps = 0;
};

struct MetricSummary {
  int count = 0;
  double mean_ne_m = 0.0;
  double sr_pct = 0.0;
  double osr_pct = 0.0;
  double spl_pct = 0.0;
};

struct EvalReport {
  MetricSummary overall;
  std::map<std::string, MetricSummary> by_split;
  std::map<std::string, MetricSummary> by_difficulty;
};

double navigation_error(const Position& final_pos, const Position& target);
bool is_success(double ne_m, double threshold_m);
bool oracle_success(const TrajectoryLog& log, const Position& target,
                    double threshold_m);
double spl(bool success, double shortest_m, double actual_m);
StopClass stop_class(const TrajectoryLog& log, const Episode& episode,
                     double threshold_m);

// Executed forward distance: 5 m per MOVE_FORWARD, everything else free.
double executed_path_length(const std::vector<Action>& executed,
                            const Kinematics& kin = {});

EpisodeResult score_episode(const TrajectoryLog& log, const Episode& episode,
                            double threshold_m, const std::string& split);

EvalReport aggregate(const std::vector<EpisodeResult>& results);

}  // namespace airnav

#endif  // AIRNAV_METRICS_HPP_
