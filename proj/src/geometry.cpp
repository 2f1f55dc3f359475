#include "airnav/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace airnav {

Heading normalize_heading(double raw_degrees) {
  if (!std::isfinite(raw_degrees)) {
    throw std::invalid_argument("normalize_heading: non-finite angle");
  }
  double r = std::fmod(raw_degrees, 360.0);
  if (r <= -180.0) {
    r += 360.0;
  } else if (r > 180.0) {
    r -= 360.0;
  }
  return Heading{r};
}

double heading_delta(Heading from, Heading to) {
  return normalize_heading(to.degrees - from.degrees).degrees;
}

double euclidean_distance(const Position& a, const Position& b) {
  return (a - b).norm();
}

Heading bearing_between(const Position& a, const Position& b) {
  const Position d = b - a;
  if (d.x() == 0.0 && d.y() == 0.0) return Heading{0.0};
  // atan2(east, north): 0 = north, clockwise positive.
  return normalize_heading(std::atan2(d.x(), d.y()) * 57.29577951308232);
}

}  // namespace airnav
