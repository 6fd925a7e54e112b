#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace hagmn {

/// The five left-coronary segment classes.
enum class ArteryClass : std::uint8_t { LMA = 0, LAD = 1, LCX = 2, D = 3, OM = 4 };

inline constexpr int kNumClasses = 5;
inline constexpr std::array<ArteryClass, kNumClasses> kAllClasses = {
    ArteryClass::LMA, ArteryClass::LAD, ArteryClass::LCX, ArteryClass::D,
    ArteryClass::OM};

const char* to_string(ArteryClass c);
std::optional<ArteryClass> artery_class_from_string(const std::string& s);

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// One arterial segment: a labeled centerline polyline in pixel units on a
/// 512x512 canvas. parent is a node id, -1 for the root.
struct SegmentNode {
  int id = 0;
  ArteryClass cls = ArteryClass::LMA;
  std::vector<Point> polyline;
  int parent = -1;
  std::vector<double> features;
};

struct LabeledTree {
  std::string id;
  std::string view;  // view-angle tag, e.g. "CRA"
  std::string site;
  std::vector<SegmentNode> nodes;
};

/// Which artery classes may physically touch. Symmetric by construction.
/// LAD-LCX direct contact is excluded by default (they meet through LMA).
class AnatomyTable {
 public:
  static AnatomyTable standard(bool allow_lad_lcx_contact = false);
  bool allowed(ArteryClass a, ArteryClass b) const {
    return m_[static_cast<int>(a)][static_cast<int>(b)];
  }

 private:
  bool m_[kNumClasses][kNumClasses] = {};
};

/// Every LabeledTree invariant violation, empty when valid: parent links form
/// a single rooted tree, the root is an LMA segment, class adjacency obeys the
/// anatomy table, polylines have >= 2 pairwise-distinct consecutive points.
std::vector<std::string> tree_violations(const LabeledTree& tree,
                                         const AnatomyTable& table = AnatomyTable::standard());

/// Throws std::runtime_error listing the violations, if any.
void validate_tree(const LabeledTree& tree,
                   const AnatomyTable& table = AnatomyTable::standard());

/// Index of the root node (the single parentless node). Throws when absent.
std::size_t root_index(const LabeledTree& tree);

/// node-id -> node-index map. Throws on duplicate ids.
std::vector<std::size_t> index_by_id(const LabeledTree& tree);

/// Undirected tree adjacency as node indices (parent + children).
std::vector<std::vector<std::size_t>> tree_adjacency(const LabeledTree& tree);

/// Depth (edge count from the root) per node index.
std::vector<int> node_depths(const LabeledTree& tree);

}  // namespace hagmn
