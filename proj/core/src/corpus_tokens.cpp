#include "medsearch/corpus_tokens.h"

namespace medsearch {

TokenizedCorpus tokenize_corpus(const CorpusStore& store, const TextPipeline& pipeline) {
  TokenizedCorpus out;
  out.documents.reserve(store.size());
  for (const auto& [pmid, doc] : store.documents()) {
    IndexedDocument d;
    d.pmid = pmid;
    d.title_tids = pipeline.text_to_tids(doc.record.title, out.lexicon, true);
    d.abstract_tids = pipeline.text_to_tids(doc.record.abstract, out.lexicon, true);
    std::vector<Tid> all(d.title_tids);
    all.insert(all.end(), d.abstract_tids.begin(), d.abstract_tids.end());
    out.lexicon.count_document(all);
    out.documents.push_back(std::move(d));
  }
  return out;
}

std::vector<IndexedDocument> tokenize_corpus(const CorpusStore& store, const TextPipeline& pipeline,
                                             const Lexicon& lexicon) {
  std::vector<IndexedDocument> out;
  out.reserve(store.size());
  for (const auto& [pmid, doc] : store.documents()) {
    out.push_back({pmid, pipeline.text_to_tids(doc.record.title, lexicon),
                   pipeline.text_to_tids(doc.record.abstract, lexicon)});
  }
  return out;
}

std::vector<std::vector<Tid>> training_streams(std::span<const IndexedDocument> documents) {
  std::vector<std::vector<Tid>> streams;
  streams.reserve(documents.size());
  for (const auto& d : documents) {
    auto& s = streams.emplace_back(d.title_tids);
    s.insert(s.end(), d.abstract_tids.begin(), d.abstract_tids.end());
  }
  return streams;
}

}  // namespace medsearch
