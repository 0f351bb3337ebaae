#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "medsearch/corpus.h"
#include "medsearch/embedding.h"
#include "medsearch/index.h"
#include "medsearch/text.h"

namespace medsearch {

struct SnapshotPaths {
  std::filesystem::path store;
  std::filesystem::path lexicon;
  std::filesystem::path matrix;
  std::filesystem::path index;  // reverse records live at index + ".docs"

  /// Paths (including the reverse-record file) that do not exist.
  std::vector<std::filesystem::path> missing() const;
};

/// Query-time data derived per document when a snapshot is assembled.
struct DocumentFeatures {
  std::vector<Tid> title_terms;  // ascending, distinct
  WeightedVector title_vector;
};

/// Everything a query reads, immutable once built. Share it through
/// shared_ptr<const SearchSnapshot>; replacing the pointer publishes a new
/// version without disturbing in-flight readers.
class SearchSnapshot {
 public:
  SearchSnapshot(CorpusStore corpus, Lexicon lexicon, EmbeddingMatrix matrix, InvertedIndex index,
                 TextPipeline pipeline = TextPipeline());

  /// Throws ConfigError naming every missing file; DataError on bad contents.
  static std::shared_ptr<const SearchSnapshot> load(const SnapshotPaths& paths,
                                                    TextPipeline pipeline = TextPipeline());

  const CorpusStore& corpus() const { return corpus_; }
  const Lexicon& lexicon() const { return lexicon_; }
  const EmbeddingMatrix& matrix() const { return matrix_; }
  const InvertedIndex& index() const { return index_; }
  const TextPipeline& pipeline() const { return pipeline_; }

  const DocumentFeatures* features(Pmid pmid) const;
  /// Fingerprint of index, lexicon and matrix; changes when any is rebuilt.
  const std::string& version() const { return version_; }

 private:
  CorpusStore corpus_;
  Lexicon lexicon_;
  EmbeddingMatrix matrix_;
  InvertedIndex index_;
  TextPipeline pipeline_;
  std::unordered_map<Pmid, DocumentFeatures> features_;
  std::string version_;
};

}  // namespace medsearch
