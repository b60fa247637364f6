#include "mmsched/stability_region.hpp"

#include "mmsched/csv.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace mmsched {

namespace {

constexpr double kMergeTolerance = 1e-9;

double cross(RatePair o, RatePair a, RatePair b) {
  return (a.r1 - o.r1) * (b.r2 - o.r2) - (a.r2 - o.r2) * (b.r1 - o.r1);
}

double distance(RatePair a, RatePair b) { return std::hypot(a.r1 - b.r1, a.r2 - b.r2); }

// Distance from p to the line through a and b (a != b).
double line_distance(RatePair p, RatePair a, RatePair b) {
  return std::abs(cross(a, b, p)) / distance(a, b);
}

double segment_distance(RatePair p, RatePair a, RatePair b) {
  const double dx = b.r1 - a.r1;
  const double dy = b.r2 - a.r2;
  const double len2 = dx * dx + dy * dy;
  if (len2 == 0.0) return distance(p, a);
  const double t = std::clamp(((p.r1 - a.r1) * dx + (p.r2 - a.r2) * dy) / len2, 0.0, 1.0);
  return distance(p, {a.r1 + t * dx, a.r2 + t * dy});
}

// Drops repeated and collinear vertices of a closed counterclockwise loop.
std::vector<RatePair> simplify_loop(std::vector<RatePair> poly) {
  bool changed = true;
  while (changed && poly.size() > 1) {
    changed = false;
    for (std::size_t i = 0; i < poly.size() && poly.size() > 1; ++i) {
      const RatePair& next = poly[(i + 1) % poly.size()];
      if (distance(poly[i], next) <= kMergeTolerance) {
        poly.erase(poly.begin() + static_cast<std::ptrdiff_t>((i + 1) % poly.size()));
        changed = true;
        break;
      }
    }
    if (changed || poly.size() < 3) continue;
    for (std::size_t i = 0; i < poly.size(); ++i) {
      const RatePair& prev = poly[(i + poly.size() - 1) % poly.size()];
      const RatePair& next = poly[(i + 1) % poly.size()];
      if (line_distance(poly[i], prev, next) <= kMergeTolerance) {
        poly.erase(poly.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
        break;
      }
    }
  }
  return poly;
}

// Sutherland-Hodgman step against a single halfplane.
std::vector<RatePair> clip(const std::vector<RatePair>& poly, const HalfSpace& h) {
  std::vector<RatePair> out;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const RatePair cur = poly[i];
    const RatePair nxt = poly[(i + 1) % n];
    const double sc = h.slack(cur);
    const double sn = h.slack(nxt);
    if (sc >= 0.0) out.push_back(cur);
    if ((sc >= 0.0) != (sn >= 0.0)) {
      const double t = sc / (sc - sn);
      out.push_back({cur.r1 + t * (nxt.r1 - cur.r1), cur.r2 + t * (nxt.r2 - cur.r2)});
    }
  }
  return out;
}

// Rotates so the loop starts at the largest-r1 vertex (lowest r2 on ties).
void rotate_to_start(std::vector<RatePair>& poly) {
  if (poly.empty()) return;
  auto start = std::min_element(poly.begin(), poly.end(), [](RatePair a, RatePair b) {
    if (std::abs(a.r1 - b.r1) > kMergeTolerance) return a.r1 > b.r1;
    return a.r2 < b.r2;
  });
  std::rotate(poly.begin(), start, poly.end());
}

bool tight(const HalfSpace& h, RatePair p) {
  const double norm = std::hypot(h.a1, h.a2);
  return std::abs(h.slack(p)) <= kMergeTolerance * std::max(1.0, norm);
}

bool same_halfspace(const HalfSpace& a, const HalfSpace& b) {
  const HalfSpace na = a.normalized();
  const HalfSpace nb = b.normalized();
  return std::abs(na.a1 - nb.a1) <= 1e-12 && std::abs(na.a2 - nb.a2) <= 1e-12 &&
         std::abs(na.b - nb.b) <= 1e-12;
}

std::vector<HalfSpace> with_nonnegativity(const std::vector<HalfSpace>& constraints) {
  std::vector<HalfSpace> all{{-1.0, 0.0, 0.0}, {0.0, -1.0, 0.0}};
  all.insert(all.end(), constraints.begin(), constraints.end());
  return all;
}

}  // namespace

double critical_epsilon() { return 1.0 - std::sqrt(2.0) / 2.0; }

std::string_view corner_name(CornerId id) {
  static constexpr std::string_view names[] = {"b0", "b1", "b2", "b3", "b4", "b5"};
  return names[static_cast<int>(id)];
}

std::optional<CornerId> parse_corner(std::string_view name) {
  for (int i = 0; i <= 5; ++i) {
    if (corner_name(static_cast<CornerId>(i)) == name) return static_cast<CornerId>(i);
  }
  return std::nullopt;
}

CornerId mirror(CornerId id) { return static_cast<CornerId>(5 - static_cast<int>(id)); }

HalfSpace HalfSpace::normalized() const {
  const double scale = std::abs(a1) + std::abs(a2);
  if (scale == 0.0) throw std::invalid_argument("halfspace normal is zero");
  return {a1 / scale, a2 / scale, b / scale};
}

RateRegion RateRegion::from_halfspaces(const std::vector<HalfSpace>& constraints) {
  const auto all = with_nonnegativity(constraints);
  for (const auto& h : all) {
    if (h.a1 == 0.0 && h.a2 == 0.0) throw std::invalid_argument("halfspace normal is zero");
  }

  // Every region of interest lives inside the unit square; start a bit wider.
  std::vector<RatePair> poly{{0.0, 0.0}, {2.0, 0.0}, {2.0, 2.0}, {0.0, 2.0}};
  for (const auto& h : all) {
    poly = clip(poly, h);
    if (poly.empty()) break;
  }

  RateRegion region;
  region.polygon_ = simplify_loop(std::move(poly));
  rotate_to_start(region.polygon_);

  for (const auto& h : all) {
    const auto tight_count = std::count_if(region.polygon_.begin(), region.polygon_.end(),
                                           [&](RatePair p) { return tight(h, p); });
    if (tight_count < 2) continue;
    const bool duplicate = std::any_of(region.halfspaces_.begin(), region.halfspaces_.end(),
                                       [&](const HalfSpace& k) { return same_halfspace(h, k); });
    if (!duplicate) region.halfspaces_.push_back(h);
  }
  region.build_frontier();
  return region;
}

RateRegion RateRegion::from_points(std::span<const RatePair> points) {
  if (points.empty()) throw std::invalid_argument("cannot build a region from no points");

  std::vector<RatePair> pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end(), [](RatePair a, RatePair b) {
    return a.r1 < b.r1 || (a.r1 == b.r1 && a.r2 < b.r2);
  });

  // Andrew's monotone chain; points within tolerance of a hull edge are dropped.
  std::vector<RatePair> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k > 1 ? k - 1 : k);

  RateRegion region;
  region.polygon_ = simplify_loop(std::move(hull));
  rotate_to_start(region.polygon_);

  const auto& poly = region.polygon_;
  if (poly.size() >= 3) {
    for (std::size_t i = 0; i < poly.size(); ++i) {
      const RatePair a = poly[i];
      const RatePair b = poly[(i + 1) % poly.size()];
      // Outward normal of a counterclockwise edge.
      const double n1 = b.r2 - a.r2;
      const double n2 = a.r1 - b.r1;
      region.halfspaces_.push_back({n1, n2, n1 * a.r1 + n2 * a.r2});
    }
  } else if (poly.size() == 2) {
    const RatePair a = poly[0];
    const RatePair b = poly[1];
    const double d1 = b.r1 - a.r1;
    const double d2 = b.r2 - a.r2;
    region.halfspaces_ = {{-d2, d1, -d2 * a.r1 + d1 * a.r2},
                          {d2, -d1, d2 * a.r1 - d1 * a.r2},
                          {d1, d2, d1 * b.r1 + d2 * b.r2},
                          {-d1, -d2, -d1 * a.r1 - d2 * a.r2}};
  } else {
    const RatePair a = poly[0];
    region.halfspaces_ = {{1.0, 0.0, a.r1}, {-1.0, 0.0, -a.r1}, {0.0, 1.0, a.r2}, {0.0, -1.0, -a.r2}};
  }
  region.build_frontier();
  return region;
}

void RateRegion::build_frontier() {
  corners_.clear();
  if (polygon_.empty()) return;
  std::size_t end = 0;
  for (std::size_t i = 1; i < polygon_.size(); ++i) {
    const RatePair p = polygon_[i];
    const RatePair e = polygon_[end];
    if (p.r2 > e.r2 + kMergeTolerance || (std::abs(p.r2 - e.r2) <= kMergeTolerance && p.r1 < e.r1)) {
      end = i;
    }
  }
  for (std::size_t i = 0; i <= end; ++i) {
    corners_.push_back({"v" + std::to_string(i), polygon_[i]});
  }
}

void RateRegion::label_corners(const std::vector<std::pair<CornerId, RatePair>>& named) {
  for (auto& c : corners_) {
    for (const auto& [id, rate] : named) {
      if (distance(c.rate, rate) <= kMergeTolerance) c.label = std::string(corner_name(id));
    }
  }
}

std::vector<std::pair<CornerId, RatePair>> corner_points(double epsilon) {
  if (!(epsilon > 0.0 && epsilon <= 0.5)) throw std::invalid_argument("epsilon must lie in (0, 0.5]");
  const double e = epsilon;
  const RatePair b2{(1.0 - e) * (3.0 - 2.0 * e) / (4.0 * (2.0 - e)), (3.0 - 2.0 * e) / (4.0 * (2.0 - e))};
  const RatePair b1{(1.0 - e) * (1.0 - e) / 4.0, (2.0 - e) / 4.0};

  std::vector<std::pair<CornerId, RatePair>> out;
  out.emplace_back(CornerId::b5, RatePair{0.5, 0.0});
  if (e < critical_epsilon()) out.emplace_back(CornerId::b4, b1.swapped());
  out.emplace_back(CornerId::b3, b2.swapped());
  out.emplace_back(CornerId::b2, b2);
  if (e < critical_epsilon()) out.emplace_back(CornerId::b1, b1);
  out.emplace_back(CornerId::b0, RatePair{0.0, 0.5});
  return out;
}

RatePair corner_rate(double epsilon, CornerId id) {
  for (const auto& [cid, rate] : corner_points(epsilon)) {
    if (cid == id) return rate;
  }
  throw std::invalid_argument("corner " + std::string(corner_name(id)) +
                              " does not exist at this epsilon");
}

RateRegion closed_form_region(double epsilon) {
  if (!(epsilon > 0.0 && epsilon <= 0.5)) throw std::invalid_argument("epsilon must lie in (0, 0.5]");
  const double e = epsilon;
  const double sum_bound = 0.75 - e / 2.0;
  std::vector<HalfSpace> constraints;
  if (e < critical_epsilon()) {
    const double sq = (1.0 - e) * (1.0 - e);
    const double mid = 1.0 + e - e * e;
    constraints = {{e, sq, sq / 2.0},
                   {1.0 - e, mid, sum_bound},
                   {1.0, 1.0, sum_bound},
                   {mid, 1.0 - e, sum_bound},
                   {sq, e, sq / 2.0}};
  } else {
    const double g = (1.0 - e) * (3.0 - 2.0 * e);
    constraints = {{1.0, g, g / 2.0}, {1.0, 1.0, sum_bound}, {g, 1.0, g / 2.0}};
  }
  RateRegion region = RateRegion::from_halfspaces(constraints);
  region.label_corners(corner_points(epsilon));
  return region;
}

RateRegion region_from_vertices(std::span<const RatePair> rates) {
  return RateRegion::from_points(rates);
}

bool contains(const RateRegion& region, RatePair lambda, double delta) {
  if (lambda.r1 < 0.0 || lambda.r2 < 0.0) return false;
  const RatePair shifted{lambda.r1 + delta, lambda.r2 + delta};
  return std::all_of(region.halfspaces().begin(), region.halfspaces().end(),
                     [&](const HalfSpace& h) { return h.slack(shifted) >= -1e-12; });
}

RateRegion iid_region(double p1, double p2) {
  if (!(p1 > 0.0 && p1 <= 1.0) || !(p2 > 0.0 && p2 <= 1.0)) {
    throw std::invalid_argument("iid region needs ON probabilities in (0, 1]");
  }
  return RateRegion::from_halfspaces({{1.0 / p1, 1.0 / p2, 1.0}});
}

RateRegion no_switchover_region(double p1, double p2) {
  if (!(p1 >= 0.0 && p1 <= 1.0) || !(p2 >= 0.0 && p2 <= 1.0)) {
    throw std::invalid_argument("ON probabilities must lie in [0, 1]");
  }
  return RateRegion::from_halfspaces(
      {{1.0, 0.0, p1}, {0.0, 1.0, p2}, {1.0, 1.0, p1 + p2 * (1.0 - p1)}});
}

double hausdorff_distance(const RateRegion& a, const RateRegion& b) {
  auto point_to_region = [](RatePair p, const std::vector<RatePair>& poly) {
    if (poly.size() == 1) return distance(p, poly[0]);
    if (poly.size() >= 3) {
      bool inside = true;
      for (std::size_t i = 0; i < poly.size(); ++i) {
        if (cross(poly[i], poly[(i + 1) % poly.size()], p) < 0.0) {
          inside = false;
          break;
        }
      }
      if (inside) return 0.0;
    }
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < poly.size(); ++i) {
      best = std::min(best, segment_distance(p, poly[i], poly[(i + 1) % poly.size()]));
    }
    return best;
  };
  double d = 0.0;
  for (const auto& p : a.polygon()) d = std::max(d, point_to_region(p, b.polygon()));
  for (const auto& p : b.polygon()) d = std::max(d, point_to_region(p, a.polygon()));
  return d;
}

CornerId CornerMap::lookup(double q1, double q2) const {
  if (q1 < 0.0 || q2 < 0.0) throw std::invalid_argument("queue lengths must be nonnegative");
  if (q1 == 0.0 && q2 == 0.0) throw std::invalid_argument("corner map undefined when both queues are empty");
  std::size_t i = 0;
  while (i < thresholds.size() && q2 > thresholds[i] * q1) ++i;
  return corners[i];
}

CornerMap fbdc_corner_thresholds(double epsilon) {
  if (!(epsilon > 0.0 && epsilon <= 0.5)) throw std::invalid_argument("epsilon must lie in (0, 0.5]");
  const double e = epsilon;
  if (e < critical_epsilon()) {
    const double sq = (1.0 - e) * (1.0 - e);
    const double mid = 1.0 + e - e * e;
    return {{e / sq, (1.0 - e) / mid, 1.0, mid / (1.0 - e), sq / e},
            {CornerId::b5, CornerId::b4, CornerId::b3, CornerId::b2, CornerId::b1, CornerId::b0}};
  }
  const double g = (1.0 - e) * (3.0 - 2.0 * e);
  return {{1.0 / g, 1.0, g}, {CornerId::b5, CornerId::b3, CornerId::b2, CornerId::b0}};
}

CornerMap myopic_corner_thresholds(double epsilon) {
  if (!(epsilon > 0.0 && epsilon <= 0.5)) throw std::invalid_argument("epsilon must lie in (0, 0.5]");
  const double e = epsilon;
  if (e < critical_epsilon()) {
    return {{e / (1.0 - e), (1.0 - e) / (2.0 - e), 1.0, (2.0 - e) / (1.0 - e), (1.0 - e) / e},
            {CornerId::b5, CornerId::b4, CornerId::b3, CornerId::b2, CornerId::b1, CornerId::b0}};
  }
  return {{e / (1.0 - e), 1.0, (1.0 - e) / e},
          {CornerId::b5, CornerId::b3, CornerId::b2, CornerId::b0}};
}

CornerId fbdc_corner_map(double epsilon, double q1, double q2) {
  return fbdc_corner_thresholds(epsilon).lookup(q1, q2);
}

CornerId myopic_corner_map(double epsilon, double q1, double q2) {
  return myopic_corner_thresholds(epsilon).lookup(q1, q2);
}

CornerId best_corner(double epsilon, double q1, double q2) {
  const auto corners = corner_points(epsilon);
  CornerId best = corners.front().first;
  double best_value = -std::numeric_limits<double>::infinity();
  for (const auto& [id, rate] : corners) {
    const double value = q1 * rate.r1 + q2 * rate.r2;
    if (value > best_value) {
      best_value = value;
      best = id;
    }
  }
  return best;
}

void write_region_csv(std::ostream& out, const std::string& name, const RateRegion& region) {
  out << "region," << name << "\n";
  out << "corner_id,r1,r2\n";
  for (const auto& c : region.corners()) {
    out << c.label << ',' << csv::number(c.rate.r1) << ',' << csv::number(c.rate.r2) << "\n";
  }
  out << "a1,a2,b\n";
  for (const auto& h : region.halfspaces()) {
    out << csv::number(h.a1) << ',' << csv::number(h.a2) << ',' << csv::number(h.b) << "\n";
  }
}

}  // namespace mmsched
