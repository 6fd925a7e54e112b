#include "hagmn/features.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace hagmn {

namespace {

constexpr std::size_t kResample = 32;  // samples along the arc

double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

double polyline_arc_length(const std::vector<Point>& poly) {
  double s = 0.0;
  for (std::size_t k = 1; k < poly.size(); ++k)
    s += std::hypot(poly[k].x - poly[k - 1].x, poly[k].y - poly[k - 1].y);
  return s;
}

/// Point at arc-length position t*total along the polyline, t in [0,1].
Point point_at(const std::vector<Point>& poly, double t, double total) {
  double want = t * total;
  for (std::size_t k = 1; k < poly.size(); ++k) {
    const double seg = std::hypot(poly[k].x - poly[k - 1].x, poly[k].y - poly[k - 1].y);
    if (want <= seg || k + 1 == poly.size()) {
      const double u = seg > 0.0 ? std::min(1.0, want / seg) : 0.0;
      return {poly[k - 1].x + u * (poly[k].x - poly[k - 1].x),
              poly[k - 1].y + u * (poly[k].y - poly[k - 1].y)};
    }
    want -= seg;
  }
  return poly.back();
}

double wrap_angle(double a) {
  while (a > std::numbers::pi) a -= 2.0 * std::numbers::pi;
  while (a <= -std::numbers::pi) a += 2.0 * std::numbers::pi;
  return a;
}

}  // namespace

void extract_features(LabeledTree& tree, std::size_t d, double canvas) {
  if (d < 16) throw std::invalid_argument("extract_features: d must be >= 16");
  const double diag = canvas * std::numbers::sqrt2;
  const auto depths = node_depths(tree);
  const auto ids = index_by_id(tree);
  const std::size_t n = tree.nodes.size();

  std::vector<std::size_t> child_count(n, 0), subtree(n, 1);
  for (const auto& node : tree.nodes)
    if (node.parent >= 0) ++child_count[ids[static_cast<std::size_t>(node.parent)]];
  // accumulate subtree sizes leaf-up: process nodes by decreasing depth
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return depths[a] > depths[b]; });
  for (std::size_t i : order) {
    const int p = tree.nodes[i].parent;
    if (p >= 0) subtree[ids[static_cast<std::size_t>(p)]] += subtree[i];
  }

  for (std::size_t i = 0; i < n; ++i) {
    SegmentNode& node = tree.nodes[i];
    const auto& poly = node.polyline;
    if (poly.size() < 2) throw std::invalid_argument("extract_features: polyline has < 2 points");
    const double arc = polyline_arc_length(poly);
    if (arc <= 0.0) throw std::invalid_argument("extract_features: zero-length polyline");

    const Point start = poly.front();
    const Point end = poly.back();
    const Point mid = point_at(poly, 0.5, arc);
    const double chord = std::hypot(end.x - start.x, end.y - start.y);

    double min_x = start.x, max_x = start.x, min_y = start.y, max_y = start.y;
    for (const Point& p : poly) {
      min_x = std::min(min_x, p.x);
      max_x = std::max(max_x, p.x);
      min_y = std::min(min_y, p.y);
      max_y = std::max(max_y, p.y);
    }

    double dir_x = 0.5, dir_y = 0.5;
    if (chord > 1e-9) {
      dir_x = (1.0 + (end.x - start.x) / chord) / 2.0;
      dir_y = (1.0 + (end.y - start.y) / chord) / 2.0;
    }

    // resampled tangents for curvature and the angle histogram
    std::vector<double> angles;
    angles.reserve(kResample - 1);
    Point prev = point_at(poly, 0.0, arc);
    for (std::size_t s = 1; s < kResample; ++s) {
      const Point cur = point_at(poly, static_cast<double>(s) / (kResample - 1), arc);
      angles.push_back(std::atan2(cur.y - prev.y, cur.x - prev.x));
      prev = cur;
    }
    double mean_turn = 0.0;
    for (std::size_t t = 1; t < angles.size(); ++t)
      mean_turn += std::abs(wrap_angle(angles[t] - angles[t - 1]));
    mean_turn /= static_cast<double>(angles.size() - 1);

    const std::size_t degree = child_count[i] + (node.parent >= 0 ? 1 : 0);
    const double base[kBaseFeatureCount] = {
        clamp01(static_cast<double>(degree) / 8.0),
        clamp01(static_cast<double>(depths[i]) / 8.0),
        clamp01(static_cast<double>(child_count[i]) / 8.0),
        static_cast<double>(subtree[i]) / static_cast<double>(n),
        node.parent >= 0 ? 1.0 : 0.0,
        clamp01(start.x / canvas), clamp01(start.y / canvas),
        clamp01(mid.x / canvas), clamp01(mid.y / canvas),
        clamp01(end.x / canvas), clamp01(end.y / canvas),
        clamp01(min_x / canvas), clamp01(min_y / canvas),
        clamp01((max_x - min_x) / canvas), clamp01((max_y - min_y) / canvas),
        clamp01(dir_x), clamp01(dir_y),
        clamp01(arc / diag), clamp01(chord / diag),
        clamp01(chord / arc),
        clamp01(mean_turn / std::numbers::pi),
    };

    node.features.assign(d, 0.0);
    for (std::size_t k = 0; k < std::min(d, kBaseFeatureCount); ++k)
      node.features[k] = base[k];
    if (d > kBaseFeatureCount) {
      const std::size_t bins = d - kBaseFeatureCount;
      for (double a : angles) {
        const double u = (wrap_angle(a) + std::numbers::pi) / (2.0 * std::numbers::pi);
        std::size_t b = std::min(bins - 1, static_cast<std::size_t>(u * bins));
        node.features[kBaseFeatureCount + b] += 1.0 / static_cast<double>(angles.size());
      }
    }
  }
}

}  // namespace hagmn
