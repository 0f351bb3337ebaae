#pragma once

#include <span>
#include <vector>

#include "medsearch/corpus.h"
#include "medsearch/index.h"
#include "medsearch/text.h"

namespace medsearch {

struct TokenizedCorpus {
  Lexicon lexicon;
  std::vector<IndexedDocument> documents;  // PMID order
};

/// Builds a lexicon over every stored title and abstract, counting each
/// document once for document frequency.
TokenizedCorpus tokenize_corpus(const CorpusStore& store, const TextPipeline& pipeline);

/// Tokenizes against a frozen lexicon; unseen tokens are dropped.
std::vector<IndexedDocument> tokenize_corpus(const CorpusStore& store, const TextPipeline& pipeline,
                                             const Lexicon& lexicon);

/// Title TIDs followed by abstract TIDs, one stream per document.
std::vector<std::vector<Tid>> training_streams(std::span<const IndexedDocument> documents);

}  // namespace medsearch
