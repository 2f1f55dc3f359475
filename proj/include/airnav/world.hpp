#ifndef AIRNAV_WORLD_HPP_
#define AIRNAV_WORLD_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "airnav/geometry.hpp"
#include "airnav/kinematics.hpp"

namespace airnav {

struct Landmark {
  std::string id;
  Position position{0.0, 0.0};
  double radius_m = 1.0;
  std::string label;
};

struct Bounds {
  Position min{0.0, 0.0};
  Position max{0.0, 0.0};

  double width() const { return max.x() - min.x(); }
  double height() const { return max.y() - min.y(); }
  Position center() const { return 0.5 * (min + max); }
  bool contains(const Position& p) const {
    return p.x() >= min.x() && p.x() <= max.x() && p.y() >= min.y() &&
           p.y() <= max.y();
  }
};

struct WorldMap {
  Bounds bounds;
  std::vector<Landmark> landmarks;
  std::uint64_t rng_seed = 0;
};

struct WorldConfig {
  double width_m = 1000.0;
  double height_m = 1000.0;
  int landmark_count = 1200;
  double min_landmark_radius_m = 4.0;
  double max_landmark_radius_m = 15.0;
};

// Deterministically populates a rectangular map with labeled landmarks.
WorldMap generate_world(const WorldConfig& config, std::uint64_t seed);

// One visible landmark, relative to the observer.
struct FrameEntry {
  std::string landmark_id;
  double bearing_deg = 0.0;  // relative to own heading, (-180, 180]
  double distance_m = 0.0;
};

// Feature-level stand-in for a first-person camera image.
struct SensorFrame {
  int step = 0;
  Heading heading{0.0};
  std::vector<FrameEntry> visible;  // ascending distance
};

SensorFrame render_frame(const WorldMap& world, const UAVState& state,
                         int step, double sensor_radius_m);

}  // namespace airnav

#endif  // AIRNAV_WORLD_HPP_
