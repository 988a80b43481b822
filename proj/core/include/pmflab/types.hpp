#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace pmflab {

using NodeId = int;

struct Point {
  double x = 0.0;
  double y = 0.0;
};

// Region in which nodes live. Distances are Euclidean, except on the torus
// where each axis wraps: min(|d|, side - |d|).
struct Region {
  enum class Kind { UnitSquare, Square, Torus };

  Kind kind = Kind::UnitSquare;
  double side = 1.0;

  static Region unit_square() { return Region{Kind::UnitSquare, 1.0}; }

  static Region square(double side) {
    if (!(side > 0.0)) throw std::domain_error("region side must be positive");
    return Region{Kind::Square, side};
  }

  static Region torus(double side) {
    if (!(side > 0.0)) throw std::domain_error("torus side must be positive");
    return Region{Kind::Torus, side};
  }

  double distance(const Point& a, const Point& b) const {
    double dx = std::fabs(a.x - b.x);
    double dy = std::fabs(a.y - b.y);
    if (kind == Kind::Torus) {
      dx = std::min(dx, side - dx);
      dy = std::min(dy, side - dy);
    }
    return std::hypot(dx, dy);
  }
};

// Size caps for the exponential-cut enumeration and the exact LP solver.
// The CLI can override these through the PMFLAB_LIMITS environment variable.
struct Limits {
  int enum_cap = 22;
  int lp_row_cap = 1500;
};

// Input is structurally valid but exceeds a configured cap.
class CapabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pmflab
