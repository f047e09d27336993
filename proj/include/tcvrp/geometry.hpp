#pragma once

#include <cmath>

namespace tcvrp {

// Planar point; coordinates are miles.
struct Point {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Point&) const = default;
};

inline double manhattan(Point a, Point b) {
  return std::abs(a.x - b.x) + std::abs(a.y - b.y);
}

inline double euclidean(Point a, Point b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

inline Point midpoint(Point a, Point b) {
  return {(a.x + b.x) / 2.0, (a.y + b.y) / 2.0};
}

// Minutes needed to cover `miles` at `mph`.
inline double minutes_at(double miles, double mph) { return miles / mph * 60.0; }

}  // namespace tcvrp
