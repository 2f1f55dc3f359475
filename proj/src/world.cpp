#include "airnav/world.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

#include "airnav/rng.hpp"

namespace airnav {
namespace {

constexpr std::array<std::string_view, 18> kAdjectives = {
    "red",    "white",  "gray",   "old",     "tall",   "round",
    "narrow", "modern", "brick",  "glass",   "stone",  "green",
    "yellow", "wide",   "small",  "covered", "sunken", "painted"};

constexpr std::array<std::string_view, 20> kNouns = {
    "warehouse", "tower",      "bridge",   "fountain", "depot",
    "chapel",    "silo",       "pavilion", "garage",   "market",
    "terrace",   "reservoir",  "stadium",  "library",  "kiosk",
    "monument",  "greenhouse", "plaza",    "hangar",   "crane"};

}  // namespace

WorldMap generate_world(const WorldConfig& config, std::uint64_t seed) {
  if (config.width_m < 0.0 || config.height_m < 0.0 ||
      config.landmark_count < 0) {
    throw std::invalid_argument("generate_world: invalid config");
  }
  WorldMap world;
  world.rng_seed = seed;
  world.bounds.min = Position{0.0, 0.0};
  world.bounds.max = Position{config.width_m, config.height_m};

  Rng rng(mix_seed(seed, 0x776f726c64ULL));  // "world"
  world.landmarks.reserve(static_cast<std::size_t>(config.landmark_count));
  for (int i = 0; i < config.landmark_count; ++i) {
    Landmark lm;
    char id[16];
    std::snprintf(id, sizeof(id), "lm-%04d", i);
    lm.id = id;
    lm.position = Position{rng.uniform(0.0, config.width_m),
                           rng.uniform(0.0, config.height_m)};
    lm.radius_m = rng.uniform(config.min_landmark_radius_m,
                              config.max_landmark_radius_m);
    const auto adj = kAdjectives[rng.uniform_index(kAdjectives.size())];
    const auto noun = kNouns[rng.uniform_index(kNouns.size())];
    lm.label = std::string(adj) + " " + std::string(noun);
    world.landmarks.push_back(std::move(lm));
  }

  // Labels double as instruction text; disambiguate duplicates.
  std::vector<std::size_t> order(world.landmarks.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return world.landmarks[a].label < world.landmarks[b].label;
  });
  std::size_t run_start = 0;
  for (std::size_t i = 1; i <= order.size(); ++i) {
    if (i == order.size() ||
        world.landmarks[order[i]].label != world.landmarks[order[run_start]].label) {
      if (i - run_start > 1) {
        for (std::size_t k = run_start; k < i; ++k) {
          world.landmarks[order[k]].label +=
              " " + std::to_string(k - run_start + 1);
        }
      }
      run_start = i;
    }
  }
  return world;
}

SensorFrame render_frame(const WorldMap& world, const UAVState& state,
                         int step, double sensor_radius_m) {
  if (sensor_radius_m <= 0.0) {
    throw std::invalid_argument("render_frame: sensor_radius must be > 0");
  }
  SensorFrame frame;
  frame.step = step;
  frame.heading = state.heading;
  for (const Landmark& lm : world.landmarks) {
    const double d = euclidean_distance(state.position, lm.position);
    if (d > sensor_radius_m) continue;
    const Heading abs_bearing = bearing_between(state.position, lm.position);
    frame.visible.push_back(FrameEntry{
        lm.id, heading_delta(state.heading, abs_bearing), d});
  }
  std::sort(frame.visible.begin(), frame.visible.end(),
            [](const FrameEntry& a, const FrameEntry& b) {
              if (a.distance_m != b.distance_m) return a.distance_m < b.distance_m;
              return a.landmark_id < b.landmark_id;
            });
  return frame;
}

}  // namespace airnav
