#include "hagmn/artery.hpp"

#include <map>
#include <stdexcept>

namespace hagmn {

const char* to_string(ArteryClass c) {
  switch (c) {
    case ArteryClass::LMA: return "LMA";
    case ArteryClass::LAD: return "LAD";
    case ArteryClass::LCX: return "LCX";
    case ArteryClass::D: return "D";
    case ArteryClass::OM: return "OM";
  }
  return "?";
}

std::optional<ArteryClass> artery_class_from_string(const std::string& s) {
  for (ArteryClass c : kAllClasses)
    if (s == to_string(c)) return c;
  return std::nullopt;
}

AnatomyTable AnatomyTable::standard(bool allow_lad_lcx_contact) {
  AnatomyTable t;
  auto link = [&t](ArteryClass a, ArteryClass b) {
    t.m_[static_cast<int>(a)][static_cast<int>(b)] = true;
    t.m_[static_cast<int>(b)][static_cast<int>(a)] = true;
  };
  link(ArteryClass::LMA, ArteryClass::LAD);
  link(ArteryClass::LMA, ArteryClass::LCX);
  link(ArteryClass::LAD, ArteryClass::LAD);  // chained trunk segments
  link(ArteryClass::LAD, ArteryClass::D);
  link(ArteryClass::LCX, ArteryClass::LCX);
  link(ArteryClass::LCX, ArteryClass::OM);
  link(ArteryClass::D, ArteryClass::D);
  link(ArteryClass::OM, ArteryClass::OM);
  if (allow_lad_lcx_contact) link(ArteryClass::LAD, ArteryClass::LCX);
  return t;
}

std::vector<std::size_t> index_by_id(const LabeledTree& tree) {
  std::map<int, std::size_t> by_id;
  for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
    if (!by_id.emplace(tree.nodes[i].id, i).second)
      throw std::runtime_error("tree " + tree.id + ": duplicate node id " +
                               std::to_string(tree.nodes[i].id));
  }
  // callers look nodes up through parent ids; return a flat id->index table
  // sized by max id for O(1) access
  int max_id = -1;
  for (const auto& [id, idx] : by_id) max_id = std::max(max_id, id);
  std::vector<std::size_t> table(static_cast<std::size_t>(max_id + 1), SIZE_MAX);
  for (const auto& [id, idx] : by_id) table[static_cast<std::size_t>(id)] = idx;
  return table;
}

std::size_t root_index(const LabeledTree& tree) {
  std::size_t root = SIZE_MAX;
  for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
    if (tree.nodes[i].parent < 0) {
      if (root != SIZE_MAX) throw std::runtime_error("tree " + tree.id + ": multiple roots");
      root = i;
    }
  }
  if (root == SIZE_MAX) throw std::runtime_error("tree " + tree.id + ": no root");
  return root;
}

std::vector<std::vector<std::size_t>> tree_adjacency(const LabeledTree& tree) {
  const auto ids = index_by_id(tree);
  std::vector<std::vector<std::size_t>> adj(tree.nodes.size());
  for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
    const int p = tree.nodes[i].parent;
    if (p < 0) continue;
    if (static_cast<std::size_t>(p) >= ids.size() || ids[static_cast<std::size_t>(p)] == SIZE_MAX)
      throw std::runtime_error("tree " + tree.id + ": dangling parent id " + std::to_string(p));
    const std::size_t pi = ids[static_cast<std::size_t>(p)];
    adj[i].push_back(pi);
    adj[pi].push_back(i);
  }
  return adj;
}

std::vector<int> node_depths(const LabeledTree& tree) {
  const auto ids = index_by_id(tree);
  std::vector<int> depth(tree.nodes.size(), -1);
  // parent chains are short; walk up with memoization
  for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
    std::vector<std::size_t> path;
    std::size_t cur = i;
    while (depth[cur] < 0) {
      path.push_back(cur);
      const int p = tree.nodes[cur].parent;
      if (p < 0) {
        depth[cur] = 0;
        path.pop_back();
        break;
      }
      const std::size_t pi = ids[static_cast<std::size_t>(p)];
      if (path.size() > tree.nodes.size())
        throw std::runtime_error("tree " + tree.id + ": parent cycle");
      cur = pi;
    }
    for (std::size_t k = path.size(); k-- > 0;) {
      const int p = tree.nodes[path[k]].parent;
      depth[path[k]] = depth[ids[static_cast<std::size_t>(p)]] + 1;
    }
  }
  return depth;
}

std::vector<std::string> tree_violations(const LabeledTree& tree, const AnatomyTable& table) {
  std::vector<std::string> errs;
  if (tree.nodes.empty()) {
    errs.push_back("empty tree");
    return errs;
  }
  std::map<int, std::size_t> by_id;
  for (std::size_t i = 0; i < tree.nodes.size(); ++i)
    if (!by_id.emplace(tree.nodes[i].id, i).second)
      errs.push_back("duplicate node id " + std::to_string(tree.nodes[i].id));
  if (!errs.empty()) return errs;

  std::size_t roots = 0;
  for (const auto& n : tree.nodes) {
    if (n.parent < 0) {
      ++roots;
      if (n.cls != ArteryClass::LMA) errs.push_back("root is not LMA");
    } else if (!by_id.count(n.parent)) {
      errs.push_back("node " + std::to_string(n.id) + ": dangling parent");
    }
    if (n.polyline.size() < 2)
      errs.push_back("node " + std::to_string(n.id) + ": polyline has < 2 points");
    for (std::size_t k = 1; k < n.polyline.size(); ++k)
      if (n.polyline[k].x == n.polyline[k - 1].x && n.polyline[k].y == n.polyline[k - 1].y) {
        errs.push_back("node " + std::to_string(n.id) + ": repeated consecutive point");
        break;
      }
  }
  if (roots != 1) errs.push_back("expected exactly 1 root, found " + std::to_string(roots));
  if (!errs.empty()) return errs;

  // connectivity + acyclicity: every node must reach the root by parent links
  for (const auto& n : tree.nodes) {
    std::size_t steps = 0;
    int cur = n.id;
    while (tree.nodes[by_id[cur]].parent >= 0) {
      cur = tree.nodes[by_id[cur]].parent;
      if (++steps > tree.nodes.size()) {
        errs.push_back("parent cycle reachable from node " + std::to_string(n.id));
        break;
      }
    }
  }
  for (const auto& n : tree.nodes) {
    if (n.parent < 0) continue;
    const auto& p = tree.nodes[by_id[n.parent]];
    if (!table.allowed(n.cls, p.cls))
      errs.push_back(std::string("class adjacency ") + to_string(n.cls) + "-" +
                     to_string(p.cls) + " not allowed (node " + std::to_string(n.id) + ")");
  }
  return errs;
}

void validate_tree(const LabeledTree& tree, const AnatomyTable& table) {
  const auto errs = tree_violations(tree, table);
  if (errs.empty()) return;
  std::string msg = "invalid tree " + tree.id + ":";
  for (const auto& e : errs) msg += "\n  - " + e;
  throw std::runtime_error(msg);
}

}  // namespace hagmn
