#include "hagmn/synth.hpp"

#include <cmath>
#include <stdexcept>

#include "hagmn/features.hpp"
#include "hagmn/rng.hpp"

namespace hagmn {

namespace {

struct ViewAngles {
  double lma_lo, lma_hi;    // absolute heading of the LMA, y-down frame
  double lad_lo, lad_hi;    // turn applied at the LMA tip toward the LAD
  double lcx_lo, lcx_hi;    // turn toward the LCX
  double d_lo, d_hi;        // turn off the LAD trunk for D branches
  double om_lo, om_hi;      // turn off the LCX trunk for OM branches
};

ViewAngles view_angles(const std::string& view) {
  if (view == "CRA") return {0.00, 0.30, 0.55, 0.95, -0.55, -0.20, -0.60, -0.35, 0.45, 0.75};
  if (view == "CAU") return {0.20, 0.50, 0.40, 0.80, -0.85, -0.45, -0.65, -0.40, 0.55, 0.85};
  // unknown tags reuse the CRA geometry so custom view lists still work
  return {0.00, 0.30, 0.55, 0.95, -0.55, -0.20, -0.60, -0.35, 0.45, 0.75};
}

std::vector<Point> trace_polyline(Point start, double heading, double length,
                                  int points, double jitter, double canvas, Rng& rng) {
  std::vector<Point> poly = {start};
  const double step = length / static_cast<double>(points - 1);
  const double drift = rng.uniform(-0.06, 0.06);  // constant curvature component
  const double margin = 6.0;
  Point cur = start;
  double h = heading;
  for (int k = 1; k < points; ++k) {
    h += drift + jitter * rng.uniform(-1.0, 1.0);
    Point next{cur.x + step * std::cos(h), cur.y + step * std::sin(h)};
    if (next.x < margin || next.x > canvas - margin || next.y < margin ||
        next.y > canvas - margin) {
      // steer back toward the canvas center instead of clamping, which would
      // stall the polyline on the border
      h = std::atan2(canvas / 2 - cur.y, canvas / 2 - cur.x);
      next = {cur.x + step * std::cos(h), cur.y + step * std::sin(h)};
    }
    poly.push_back(next);
    cur = next;
  }
  return poly;
}

}  // namespace

void GeneratorConfig::validate() const {
  auto bad = [](const std::string& what) {
    throw std::invalid_argument("generator config: " + what);
  };
  if (lad_segments_min < 1 || lcx_segments_min < 1) bad("trunks need at least one segment");
  if (lad_segments_max < lad_segments_min || lcx_segments_max < lcx_segments_min ||
      d_branches_max < d_branches_min || om_branches_max < om_branches_min)
    bad("inverted count range");
  if (d_branches_min < 0 || om_branches_min < 0) bad("negative branch count");
  if (canvas < 64.0) bad("canvas too small");
  if (polyline_points_min < 2 || polyline_points_max < polyline_points_min)
    bad("polyline needs >= 2 points");
  if (feature_dim < 16) bad("feature dimension must be >= 16");
  if (views.empty() || sites.empty()) bad("empty view or site list");
}

LabeledTree generate_tree(std::uint64_t seed, const GeneratorConfig& cfg) {
  cfg.validate();
  Rng rng(seed);

  LabeledTree tree;
  tree.id = "tree-" + std::to_string(seed);
  tree.view = cfg.views[rng.below(cfg.views.size())];
  tree.site = cfg.sites[rng.below(cfg.sites.size())];
  const ViewAngles ang = view_angles(tree.view);

  const int n_lad = rng.range(cfg.lad_segments_min, cfg.lad_segments_max);
  const int n_lcx = rng.range(cfg.lcx_segments_min, cfg.lcx_segments_max);
  const int n_d = rng.range(cfg.d_branches_min, cfg.d_branches_max);
  const int n_om = rng.range(cfg.om_branches_min, cfg.om_branches_max);

  auto points = [&] { return rng.range(cfg.polyline_points_min, cfg.polyline_points_max); };
  int next_id = 0;
  auto add_node = [&](ArteryClass cls, int parent, std::vector<Point> poly) {
    SegmentNode n;
    n.id = next_id++;
    n.cls = cls;
    n.parent = parent;
    n.polyline = std::move(poly);
    tree.nodes.push_back(std::move(n));
    return tree.nodes.back().id;
  };

  // LMA root near the ostium
  const Point ostium{rng.uniform(40.0, 80.0), rng.uniform(200.0, 280.0)};
  const double lma_heading = rng.uniform(ang.lma_lo, ang.lma_hi);
  const double lma_len = rng.uniform(30.0, 55.0);
  auto lma_poly = trace_polyline(ostium, lma_heading, lma_len, points(),
                                 cfg.heading_jitter, cfg.canvas, rng);
  const int lma_id = add_node(ArteryClass::LMA, -1, lma_poly);

  auto chord_heading = [](const std::vector<Point>& poly) {
    const Point& a = poly[poly.size() - 2];
    const Point& b = poly.back();
    return std::atan2(b.y - a.y, b.x - a.x);
  };

  struct Trunk {
    std::vector<int> ids;                 // chain node ids, root-most first
    std::vector<std::vector<Point>> tips; // polyline per segment
  };

  auto grow_trunk = [&](ArteryClass cls, double turn_lo, double turn_hi, int count) {
    Trunk trunk;
    int parent = lma_id;
    Point start = lma_poly.back();
    double heading = chord_heading(lma_poly) + rng.uniform(turn_lo, turn_hi);
    for (int s = 0; s < count; ++s) {
      const double len = rng.uniform(55.0, 110.0) * (1.0 - 0.08 * s);
      auto poly = trace_polyline(start, heading, len, points(), cfg.heading_jitter,
                                 cfg.canvas, rng);
      const int id = add_node(cls, parent, poly);
      trunk.ids.push_back(id);
      trunk.tips.push_back(poly);
      parent = id;
      start = poly.back();
      heading = chord_heading(poly) + rng.uniform(-0.18, 0.18);
    }
    return trunk;
  };

  const Trunk lad = grow_trunk(ArteryClass::LAD, ang.lad_lo, ang.lad_hi, n_lad);

  auto grow_branches = [&](ArteryClass cls, const Trunk& trunk, double turn_lo,
                           double turn_hi, int count) {
    for (int j = 0; j < count; ++j) {
      const int seg = std::min<int>(j, static_cast<int>(trunk.ids.size()) - 1);
      const auto& parent_poly = trunk.tips[static_cast<std::size_t>(seg)];
      const double heading =
          chord_heading(parent_poly) + rng.uniform(turn_lo, turn_hi);
      const double len = rng.uniform(40.0, 80.0);
      auto poly = trace_polyline(parent_poly.back(), heading, len, points(),
                                 cfg.heading_jitter, cfg.canvas, rng);
      add_node(cls, trunk.ids[static_cast<std::size_t>(seg)], poly);
    }
  };

  grow_branches(ArteryClass::D, lad, ang.d_lo, ang.d_hi, n_d);
  const Trunk lcx = grow_trunk(ArteryClass::LCX, ang.lcx_lo, ang.lcx_hi, n_lcx);
  grow_branches(ArteryClass::OM, lcx, ang.om_lo, ang.om_hi, n_om);

  extract_features(tree, static_cast<std::size_t>(cfg.feature_dim), cfg.canvas);
  validate_tree(tree);
  return tree;
}

}  // namespace hagmn
