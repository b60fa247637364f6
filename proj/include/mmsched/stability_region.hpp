#pragma once

#include "mmsched/mdp_core.hpp"

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mmsched {

/// Correlation level below which the region has six corners: 1 - sqrt(2)/2.
double critical_epsilon();

/// Corners of the saturated rate region, b0 = (0, 1/2) through b5 = (1/2, 0).
enum class CornerId { b0 = 0, b1, b2, b3, b4, b5 };

std::string_view corner_name(CornerId id);
std::optional<CornerId> parse_corner(std::string_view name);
/// b_i <-> b_(5-i) under exchange of the queues.
CornerId mirror(CornerId id);

/// a1 * l1 + a2 * l2 <= b.
struct HalfSpace {
  double a1 = 0.0;
  double a2 = 0.0;
  double b = 0.0;

  double slack(RatePair p) const { return b - (a1 * p.r1 + a2 * p.r2); }
  /// Scaled so that |a1| + |a2| = 1.
  HalfSpace normalized() const;
};

struct RegionCorner {
  std::string label;
  RatePair rate;
};

/**
 * Convex rate region kept in both vertex and halfspace form.
 *
 * `polygon` is the full counterclockwise vertex list starting at the vertex
 * with the largest r1. `corners` is the part of that list running from the
 * largest-r1 vertex to the largest-r2 vertex, i.e. the upper-right frontier
 * that plots and corner maps care about. Halfspaces that are not tight along
 * an edge are dropped, as are duplicates.
 */
class RateRegion {
 public:
  /// Intersection of `constraints` with the nonnegative quadrant.
  static RateRegion from_halfspaces(const std::vector<HalfSpace>& constraints);
  /// Convex hull of the points; near-duplicate and collinear points merge at 1e-9.
  static RateRegion from_points(std::span<const RatePair> points);

  const std::vector<RegionCorner>& corners() const { return corners_; }
  const std::vector<HalfSpace>& halfspaces() const { return halfspaces_; }
  const std::vector<RatePair>& polygon() const { return polygon_; }

  /// Names frontier corners that coincide (1e-9) with the given points.
  void label_corners(const std::vector<std::pair<CornerId, RatePair>>& named);

 private:
  void build_frontier();

  std::vector<RegionCorner> corners_;
  std::vector<HalfSpace> halfspaces_;
  std::vector<RatePair> polygon_;
};

/// Corner rates for the correlated channel; b1 and b4 only below critical_epsilon().
std::vector<std::pair<CornerId, RatePair>> corner_points(double epsilon);
RatePair corner_rate(double epsilon, CornerId id);

/// Closed-form region for the Gilbert-Elliott channel with one-slot switchover.
RateRegion closed_form_region(double epsilon);

/// Hull of a set of achievable rate pairs.
RateRegion region_from_vertices(std::span<const RatePair> rates);

/// True iff lambda >= 0 and lambda + (delta, delta) satisfies every halfspace.
bool contains(const RateRegion& region, RatePair lambda, double delta = 0.0);

/// l1/p1 + l2/p2 <= 1. Throws std::invalid_argument if p1 or p2 is not in (0, 1].
RateRegion iid_region(double p1, double p2);

/// Region without switchover delay: l1 <= p1, l2 <= p2, l1 + l2 <= p1 + p2 (1 - p1).
RateRegion no_switchover_region(double p1, double p2);

/// Hausdorff distance between the polygons of two regions.
double hausdorff_distance(const RateRegion& a, const RateRegion& b);

/**
 * Piecewise-constant map from the queue ratio q2/q1 to a corner.
 * corners[i] is chosen on (thresholds[i-1], thresholds[i]]; thresholds ascend.
 */
struct CornerMap {
  std::vector<double> thresholds;
  std::vector<CornerId> corners;

  /// Ratio exactly on a threshold takes the lower interval; q1 = 0 maps to the
  /// last corner and q2 = 0 to the first. Throws if both are zero.
  CornerId lookup(double q1, double q2) const;
};

CornerMap fbdc_corner_thresholds(double epsilon);
CornerMap myopic_corner_thresholds(double epsilon);

CornerId fbdc_corner_map(double epsilon, double q1, double q2);
CornerId myopic_corner_map(double epsilon, double q1, double q2);

/// argmax of q1 r1 + q2 r2 over corner_points(epsilon); first corner wins ties
/// when scanning from b5 towards b0.
CornerId best_corner(double epsilon, double q1, double q2);

/// Region export: corner section `corner_id,r1,r2` then halfspace section `a1,a2,b`.
void write_region_csv(std::ostream& out, const std::string& name, const RateRegion& region);

}  // namespace mmsched
