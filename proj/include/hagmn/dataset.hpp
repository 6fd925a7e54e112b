#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "hagmn/artery.hpp"

namespace hagmn {

/// Tree files are one JSON document per tree:
///   {"schema":"hagmn-tree/1","id":...,"view":...,"site":...,
///    "nodes":[{"id":..,"class":"LMA","parent":-1,
///              "polyline":[[x,y],...],"features":[...]}]}
/// Field names are fixed by round-trip tests.
void save_tree_json(const LabeledTree& tree, const std::filesystem::path& path);
LabeledTree load_tree_json(const std::filesystem::path& path);

struct CorpusEntry {
  std::string file;
  std::string id;
  std::string view;
  std::string site;
  std::size_t n_nodes = 0;
};

/// Corpus manifest ("hagmn-corpus/1"): generation seed, feature dimension,
/// view tags, and one entry per tree file.
struct CorpusManifest {
  std::uint64_t seed = 0;
  std::size_t d = 0;
  std::vector<std::string> views;
  std::vector<CorpusEntry> trees;
};

void save_corpus_manifest(const CorpusManifest& m, const std::filesystem::path& path);
CorpusManifest load_corpus_manifest(const std::filesystem::path& path);

/// Index-based split for one cross-validation fold. Indices refer to the
/// corpus manifest order; the template set is shared across folds.
struct SplitIndices {
  std::vector<std::size_t> templates;  // D_tp
  std::vector<std::size_t> train;      // D_tr
  std::vector<std::size_t> test;       // D_te
};

/// Fixed template set of ~template_fraction of the corpus, remaining trees
/// partitioned into `folds` equal-as-possible test folds. Both selections are
/// stratified by view tag. Every tree lands in exactly one of D_tp or one
/// fold's D_te.
std::vector<SplitIndices> split_dataset(const std::vector<CorpusEntry>& corpus,
                                        double template_fraction, int folds,
                                        std::uint64_t seed);

/// Split manifest file ("hagmn-split/1") for one chosen fold.
struct SplitManifest {
  std::uint64_t seed = 0;
  double template_fraction = 0.1;
  int folds = 5;
  int fold = 0;
  std::vector<std::string> template_files;
  std::vector<std::string> train_files;
  std::vector<std::string> test_files;
};

void save_split_manifest(const SplitManifest& m, const std::filesystem::path& path);
SplitManifest load_split_manifest(const std::filesystem::path& path);

/// In-memory split: D_tr / D_te / D_tp.
struct DatasetSplit {
  std::vector<LabeledTree> train;
  std::vector<LabeledTree> test;
  std::vector<LabeledTree> templates;
};

DatasetSplit load_split(const SplitManifest& m, const std::filesystem::path& corpus_dir);

}  // namespace hagmn
