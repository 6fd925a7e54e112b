#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hagmn/artery.hpp"

namespace hagmn {

/// Bounds for the synthetic LCA generator. Chains (LAD/LCX trunks) have
/// 1..4 segments by default; 1..3 side branches each of D and OM.
struct GeneratorConfig {
  int lad_segments_min = 1, lad_segments_max = 4;
  int lcx_segments_min = 1, lcx_segments_max = 4;
  int d_branches_min = 1, d_branches_max = 3;
  int om_branches_min = 1, om_branches_max = 3;
  double canvas = 512.0;
  int polyline_points_min = 6, polyline_points_max = 12;
  double heading_jitter = 0.22;  // radians, per-step curvature noise
  std::vector<std::string> views = {"CRA", "CAU"};
  std::vector<std::string> sites = {"SITE1", "SITE2"};
  int feature_dim = 121;

  /// Throws std::invalid_argument when bounds are infeasible (zero-length
  /// trunks, inverted ranges, degenerate canvas or polylines, d < 16).
  void validate() const;
};

/// Deterministically generates one labeled tree: LMA root, chained LAD and
/// LCX trunks, D branches off LAD junctions, OM branches off LCX junctions.
/// Feature vectors are extracted before returning; the result always passes
/// validate_tree.
LabeledTree generate_tree(std::uint64_t seed, const GeneratorConfig& cfg = {});

}  // namespace hagmn
