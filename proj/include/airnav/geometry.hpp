#ifndef AIRNAV_GEOMETRY_HPP_
#define AIRNAV_GEOMETRY_HPP_

#include <Eigen/Core>

namespace airnav {

// Planar position in meters: x east, y north.
using Position = Eigen::Vector2d;

// Heading in degrees, normalized to (-180, 180]. 0 deg points north (+y),
// positive angles rotate clockwise (east = +90).
struct Heading {
  double degrees = 0.0;
};

// Wraps an angle into (-180, 180]. Throws std::invalid_argument on
// non-finite input.
Heading normalize_heading(double raw_degrees);

// Shortest signed angular difference to - from, in (-180, 180].
double heading_delta(Heading from, Heading to);

double euclidean_distance(const Position& a, const Position& b);

// Absolute compass bearing of the direction a -> b under the north-zero,
// clockwise-positive convention. Returns 0 when a == b.
Heading bearing_between(const Position& a, const Position& b);

inline double deg2rad(double deg) { return deg * 0.017453292519943295; }

}  // namespace airnav

#endif  // AIRNAV_GEOMETRY_HPP_
