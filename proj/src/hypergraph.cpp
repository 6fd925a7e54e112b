#include "hagmn/hypergraph.hpp"

#include <algorithm>
#include <iostream>
#include <stdexcept>

namespace hagmn {

namespace {

/// Intrinsic, id-free sort key: (depth, class, polyline geometry). Original
/// node id is the last resort so the order is total even for duplicated
/// geometry.
struct NodeKey {
  int depth;
  int cls;
  const SegmentNode* node;

  bool operator<(const NodeKey& o) const {
    if (depth != o.depth) return depth < o.depth;
    if (cls != o.cls) return cls < o.cls;
    const auto& a = node->polyline;
    const auto& b = o.node->polyline;
    for (std::size_t k = 0; k < std::min(a.size(), b.size()); ++k) {
      if (a[k].x != b[k].x) return a[k].x < b[k].x;
      if (a[k].y != b[k].y) return a[k].y < b[k].y;
    }
    if (a.size() != b.size()) return a.size() < b.size();
    return node->id < o.node->id;
  }
};

}  // namespace

std::vector<std::size_t> IndividualHypergraph::class_ordinals() const {
  std::vector<std::size_t> ord(classes.size(), 0);
  std::size_t seen[kNumClasses] = {};
  for (std::size_t i = 0; i < classes.size(); ++i)
    ord[i] = seen[static_cast<int>(classes[i])]++;
  return ord;
}

IndividualHypergraph build_individual(const LabeledTree& tree) {
  validate_tree(tree);
  const std::size_t n = tree.nodes.size();
  const auto depths = node_depths(tree);
  const auto adj_orig = tree_adjacency(tree);

  std::size_t d = tree.nodes.empty() ? 0 : tree.nodes[0].features.size();
  for (const auto& node : tree.nodes) {
    if (node.features.size() != d || d == 0)
      throw std::invalid_argument("build_individual: tree " + tree.id +
                                  " has missing or ragged feature vectors");
  }

  std::vector<NodeKey> keys;
  keys.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    keys.push_back({depths[i], static_cast<int>(tree.nodes[i].cls), &tree.nodes[i]});
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
  std::vector<std::size_t> rank(n);
  for (std::size_t c = 0; c < n; ++c) rank[order[c]] = c;

  IndividualHypergraph g;
  g.tree_id = tree.id;
  g.view = tree.view;
  g.d = d;
  g.node_features = DenseMatrix(n, d);
  g.adjacency.resize(n);
  for (std::size_t c = 0; c < n; ++c) {
    const SegmentNode& node = tree.nodes[order[c]];
    g.node_ids.push_back(node.id);
    g.classes.push_back(node.cls);
    for (std::size_t k = 0; k < d; ++k) g.node_features.at(c, k) = node.features[k];
    for (std::size_t nb : adj_orig[order[c]]) g.adjacency[c].push_back(rank[nb]);
    std::sort(g.adjacency[c].begin(), g.adjacency[c].end());
  }

  if (n < 3) {
    std::cerr << "warning: tree " << tree.id << " has " << n
              << " nodes; hyperedge set is empty\n";
    return g;
  }

  // every connected triple in a tree has a unique center adjacent to the
  // other two; enumerate neighbor pairs around each center
  for (std::size_t center = 0; center < n; ++center) {
    const auto& nbs = g.adjacency[center];
    for (std::size_t a = 0; a < nbs.size(); ++a)
      for (std::size_t b = a + 1; b < nbs.size(); ++b)
        g.edges.push_back({{static_cast<int>(center), static_cast<int>(nbs[a]),
                            static_cast<int>(nbs[b])}});
  }
  std::sort(g.edges.begin(), g.edges.end(),
            [](const Hyperedge& x, const Hyperedge& y) { return x.nodes < y.nodes; });

  g.edge_features = DenseMatrix(g.edges.size(), 3 * d);
  for (std::size_t e = 0; e < g.edges.size(); ++e)
    for (int t = 0; t < 3; ++t)
      for (std::size_t k = 0; k < d; ++k)
        g.edge_features.at(e, static_cast<std::size_t>(t) * d + k) =
            g.node_features.at(static_cast<std::size_t>(g.edges[e].nodes[t]), k);
  return g;
}

DenseMatrix ground_truth_assignment(const IndividualHypergraph& g1,
                                    const IndividualHypergraph& g2) {
  DenseMatrix m(g1.n(), g2.n());
  const auto ord1 = g1.class_ordinals();
  const auto ord2 = g2.class_ordinals();
  for (std::size_t i = 0; i < g1.n(); ++i)
    for (std::size_t a = 0; a < g2.n(); ++a)
      if (g1.classes[i] == g2.classes[a] && ord1[i] == ord2[a]) m.at(i, a) = 1.0;
  return m;
}

}  // namespace hagmn
