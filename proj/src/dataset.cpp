#include "hagmn/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <stdexcept>

#include <json.hpp>

#include "hagmn/rng.hpp"

namespace hagmn {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

json dump_tree(const LabeledTree& tree) {
  ordered_json j;
  j["schema"] = "hagmn-tree/1";
  j["id"] = tree.id;
  j["view"] = tree.view;
  j["site"] = tree.site;
  j["nodes"] = json::array();
  for (const auto& n : tree.nodes) {
    ordered_json nj;
    nj["id"] = n.id;
    nj["class"] = to_string(n.cls);
    nj["parent"] = n.parent;
    nj["polyline"] = json::array();
    for (const Point& p : n.polyline) nj["polyline"].push_back({p.x, p.y});
    nj["features"] = n.features;
    j["nodes"].push_back(std::move(nj));
  }
  return j;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path.string());
  json j;
  in >> j;
  return j;
}

void expect_schema(const json& j, const std::string& want, const std::filesystem::path& path) {
  if (!j.contains("schema") || j["schema"] != want)
    throw std::runtime_error(path.string() + ": expected schema " + want);
}

}  // namespace

void save_tree_json(const LabeledTree& tree, const std::filesystem::path& path) {
  write_text(path, dump_tree(tree).dump(1) + "\n");
}

LabeledTree load_tree_json(const std::filesystem::path& path) {
  const json j = read_json(path);
  expect_schema(j, "hagmn-tree/1", path);
  LabeledTree tree;
  tree.id = j.at("id").get<std::string>();
  tree.view = j.at("view").get<std::string>();
  tree.site = j.at("site").get<std::string>();
  for (const auto& nj : j.at("nodes")) {
    SegmentNode n;
    n.id = nj.at("id").get<int>();
    const auto cls = artery_class_from_string(nj.at("class").get<std::string>());
    if (!cls) throw std::runtime_error(path.string() + ": unknown class " +
                                       nj.at("class").get<std::string>());
    n.cls = *cls;
    n.parent = nj.at("parent").get<int>();
    for (const auto& pj : nj.at("polyline"))
      n.polyline.push_back({pj.at(0).get<double>(), pj.at(1).get<double>()});
    n.features = nj.at("features").get<std::vector<double>>();
    tree.nodes.push_back(std::move(n));
  }
  return tree;
}

void save_corpus_manifest(const CorpusManifest& m, const std::filesystem::path& path) {
  ordered_json j;
  j["schema"] = "hagmn-corpus/1";
  j["seed"] = m.seed;
  j["d"] = m.d;
  j["views"] = m.views;
  j["trees"] = json::array();
  for (const auto& e : m.trees) {
    ordered_json ej;
    ej["file"] = e.file;
    ej["id"] = e.id;
    ej["view"] = e.view;
    ej["site"] = e.site;
    ej["n"] = e.n_nodes;
    j["trees"].push_back(std::move(ej));
  }
  write_text(path, j.dump(1) + "\n");
}

CorpusManifest load_corpus_manifest(const std::filesystem::path& path) {
  const json j = read_json(path);
  expect_schema(j, "hagmn-corpus/1", path);
  CorpusManifest m;
  m.seed = j.at("seed").get<std::uint64_t>();
  m.d = j.at("d").get<std::size_t>();
  m.views = j.at("views").get<std::vector<std::string>>();
  for (const auto& ej : j.at("trees")) {
    CorpusEntry e;
    e.file = ej.at("file").get<std::string>();
    e.id = ej.at("id").get<std::string>();
    e.view = ej.at("view").get<std::string>();
    e.site = ej.at("site").get<std::string>();
    e.n_nodes = ej.at("n").get<std::size_t>();
    m.trees.push_back(std::move(e));
  }
  return m;
}

std::vector<SplitIndices> split_dataset(const std::vector<CorpusEntry>& corpus,
                                        double template_fraction, int folds,
                                        std::uint64_t seed) {
  if (!(template_fraction > 0.0 && template_fraction < 1.0))
    throw std::invalid_argument("split_dataset: template fraction must be in (0,1)");
  if (folds < 1) throw std::invalid_argument("split_dataset: folds must be >= 1");
  if (corpus.size() < static_cast<std::size_t>(folds) + 1)
    throw std::invalid_argument("split_dataset: corpus smaller than folds + 1");

  // group by view tag for stratified selection
  std::map<std::string, std::vector<std::size_t>> by_view;
  for (std::size_t i = 0; i < corpus.size(); ++i) by_view[corpus[i].view].push_back(i);

  Rng rng(seed);
  const std::size_t tp_total = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(template_fraction *
                                               static_cast<double>(corpus.size()))));

  std::vector<std::size_t> templates;
  std::vector<std::vector<std::size_t>> fold_tests(static_cast<std::size_t>(folds));
  // proportional template allocation per view, remainder to the largest groups
  std::size_t assigned = 0;
  std::vector<std::pair<std::string, std::size_t>> quota;
  for (auto& [view, idxs] : by_view) {
    rng.shuffle(idxs);
    const std::size_t q = (tp_total * idxs.size()) / corpus.size();
    quota.emplace_back(view, q);
    assigned += q;
  }
  for (std::size_t k = 0; assigned < tp_total; k = (k + 1) % quota.size()) {
    ++quota[k].second;
    ++assigned;
  }
  for (auto& [view, q] : quota) {
    auto& idxs = by_view[view];
    const std::size_t take = std::min(q, idxs.size());
    for (std::size_t k = 0; k < take; ++k) templates.push_back(idxs[k]);
    idxs.erase(idxs.begin(), idxs.begin() + static_cast<std::ptrdiff_t>(take));
    // round-robin the remaining view members over the test folds
    for (std::size_t k = 0; k < idxs.size(); ++k)
      fold_tests[k % static_cast<std::size_t>(folds)].push_back(idxs[k]);
  }

  std::sort(templates.begin(), templates.end());
  std::vector<SplitIndices> out;
  for (int f = 0; f < folds; ++f) {
    SplitIndices s;
    s.templates = templates;
    s.test = fold_tests[static_cast<std::size_t>(f)];
    std::sort(s.test.begin(), s.test.end());
    for (int g = 0; g < folds; ++g) {
      if (g == f) continue;
      s.train.insert(s.train.end(), fold_tests[static_cast<std::size_t>(g)].begin(),
                     fold_tests[static_cast<std::size_t>(g)].end());
    }
    std::sort(s.train.begin(), s.train.end());
    out.push_back(std::move(s));
  }
  return out;
}

void save_split_manifest(const SplitManifest& m, const std::filesystem::path& path) {
  ordered_json j;
  j["schema"] = "hagmn-split/1";
  j["seed"] = m.seed;
  j["template_fraction"] = m.template_fraction;
  j["folds"] = m.folds;
  j["fold"] = m.fold;
  j["template"] = m.template_files;
  j["train"] = m.train_files;
  j["test"] = m.test_files;
  write_text(path, j.dump(1) + "\n");
}

SplitManifest load_split_manifest(const std::filesystem::path& path) {
  const json j = read_json(path);
  expect_schema(j, "hagmn-split/1", path);
  SplitManifest m;
  m.seed = j.at("seed").get<std::uint64_t>();
  m.template_fraction = j.at("template_fraction").get<double>();
  m.folds = j.at("folds").get<int>();
  m.fold = j.at("fold").get<int>();
  m.template_files = j.at("template").get<std::vector<std::string>>();
  m.train_files = j.at("train").get<std::vector<std::string>>();
  m.test_files = j.at("test").get<std::vector<std::string>>();
  return m;
}

DatasetSplit load_split(const SplitManifest& m, const std::filesystem::path& corpus_dir) {
  DatasetSplit split;
  for (const auto& f : m.train_files) split.train.push_back(load_tree_json(corpus_dir / f));
  for (const auto& f : m.test_files) split.test.push_back(load_tree_json(corpus_dir / f));
  for (const auto& f : m.template_files)
    split.templates.push_back(load_tree_json(corpus_dir / f));
  return split;
}

}  // namespace hagmn
