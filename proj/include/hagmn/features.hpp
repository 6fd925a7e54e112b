#pragma once

#include <cstddef>

#include "hagmn/artery.hpp"

namespace hagmn {

/// Number of entries before the tangent-angle histogram block.
inline constexpr std::size_t kBaseFeatureCount = 21;

/// Per-segment feature vector of exactly `d` entries, every entry in [0, 1].
///
/// Layout (truncated to d when 16 <= d < 21, histogram of d-21 bins after):
///   [0]  degree / 8                 [1]  depth / 8
///   [2]  child count / 8            [3]  subtree size / n
///   [4]  has parent                 [5..6]   start x,y / canvas
///   [7..8]   mid x,y / canvas       [9..10]  end x,y / canvas
///   [11..12] bbox min x,y / canvas  [13..14] bbox w,h / canvas
///   [15..16] chord direction cosines, remapped to [0,1]
///   [17] arc length / diag          [18] chord length / diag
///   [19] tortuosity as chord/arc    [20] mean |turn angle| / pi
///   [21..d-1] resampled tangent-angle histogram over [-pi, pi)
///
/// Requires d >= 16; throws on degenerate (zero-length) polylines.
void extract_features(LabeledTree& tree, std::size_t d, double canvas = 512.0);

}  // namespace hagmn
