#ifndef AIRNAV_SERIALIZATION_HPP_
#define AIRNAV_SERIALIZATION_HPP_

#include <array>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "airnav/episode.hpp"
#include "airnav/memory.hpp"
#include "airnav/metrics.hpp"
#include "airnav/policy.hpp"
#include "airnav/reward.hpp"
#include "airnav/runner.hpp"
#include "airnav/trainer.hpp"
#include "airnav/world.hpp"

namespace airnav {

inline constexpr std::array<const char*, 4> kSplitNames = {
    "train", "val_seen", "val_unseen", "test_unseen"};

nlohmann::json episode_to_json(const Episode& episode);
Episode episode_from_json(const nlohmann::json& j, double node_threshold_m,
                          double success_threshold_m);

struct GenConfig {
  WorldConfig world;
  SynthConfig synth;
  int episodes = 100;
  std::uint64_t seed = 0;
  // train, val_seen, val_unseen, test_unseen
  std::array<double, 4> split_ratios = {0.7, 0.1, 0.1, 0.1};

  void validate() const;
};

struct Dataset {
  GenConfig config;
  // split name -> world seed; train and val_seen share one seed.
  std::map<std::string, std::uint64_t> world_seeds;
  std::map<std::string, std::vector<Episode>> splits;
};

Dataset generate_dataset(const GenConfig& cfg);
void write_dataset(const Dataset& dataset, const std::filesystem::path& dir);
Dataset load_dataset(const std::filesystem::path& dir);

nlohmann::json result_to_json(const EpisodeResult& r);
nlohmann::json report_to_json(const EvalReport& report);
void write_results(const std::vector<EpisodeResult>& results,
                   const EvalReport& report, const std::filesystem::path& dir);
std::vector<EpisodeResult> load_results(const std::filesystem::path& file);

void write_curve(const std::vector<CurvePoint>& curve,
                 const std::filesystem::path& file);
void write_params(const PolicyParams& params,
                  const std::filesystem::path& file);
PolicyParams load_params(const std::filesystem::path& file);

// Experiment config file: JSON with optional sections
// {world, synth, memory, reward, train, run, gen}.
struct AppConfig {
  WorldConfig world;
  SynthConfig synth;
  MemoryPolicy memory;
  RewardConfig reward;
  TrainConfig train;
  RunConfig run;
  GenConfig gen;
};

AppConfig parse_app_config(const nlohmann::json& j);
AppConfig load_app_config(const std::filesystem::path& file);

}  // namespace airnav

#endif  // AIRNAV_SERIALIZATION_HPP_
