#include "medsearch/snapshot.h"

#include <algorithm>
#include <cstdio>
#include <cstring>

#include "binary_io.h"
#include "medsearch/errors.h"

namespace medsearch {

std::vector<std::filesystem::path> SnapshotPaths::missing() const {
  std::vector<std::filesystem::path> out;
  for (const auto& p : {store, lexicon, matrix, index, reverse_record_path(index)}) {
    if (p.empty() || !std::filesystem::exists(p)) out.push_back(p);
  }
  return out;
}

SearchSnapshot::SearchSnapshot(CorpusStore corpus, Lexicon lexicon, EmbeddingMatrix matrix, InvertedIndex index,
                               TextPipeline pipeline)
    : corpus_(std::move(corpus)),
      lexicon_(std::move(lexicon)),
      matrix_(std::move(matrix)),
      index_(std::move(index)),
      pipeline_(std::move(pipeline)) {
  features_.reserve(corpus_.size());
  for (const auto& [pmid, doc] : corpus_.documents()) {
    DocumentFeatures f;
    const auto tids = pipeline_.text_to_tids(doc.record.title, lexicon_);
    f.title_vector = embed_weighted(tids, matrix_, lexicon_);
    f.title_terms = tids;
    std::sort(f.title_terms.begin(), f.title_terms.end());
    f.title_terms.erase(std::unique(f.title_terms.begin(), f.title_terms.end()), f.title_terms.end());
    features_.emplace(pmid, std::move(f));
  }

  detail::Fnv1a h;
  for (const auto& [tid, pmids] : index_.postings()) {
    h.add_u64(tid);
    h.add(pmids.data(), pmids.size() * sizeof(Pmid));
  }
  h.add_u64(lexicon_.size());
  h.add_u64(lexicon_.corpus_size());
  h.add_u64(static_cast<std::uint64_t>(matrix_.dim()));
  for (Tid t : matrix_.tids()) {
    const auto row = matrix_.row(t);
    h.add(row.data(), row.size_bytes());
  }
  h.add_u64(corpus_.size());
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h.value()));
  version_ = buf;
}

std::shared_ptr<const SearchSnapshot> SearchSnapshot::load(const SnapshotPaths& paths, TextPipeline pipeline) {
  if (const auto missing = paths.missing(); !missing.empty()) {
    std::string msg = "snapshot files missing:";
    for (const auto& p : missing) msg += " '" + p.string() + "'";
    throw ConfigError(msg);
  }
  return std::make_shared<const SearchSnapshot>(load_corpus_store(paths.store), Lexicon::load(paths.lexicon),
                                                EmbeddingMatrix::load(paths.matrix), load_index(paths.index),
                                                std::move(pipeline));
}

const DocumentFeatures* SearchSnapshot::features(Pmid pmid) const {
  const auto it = features_.find(pmid);
  return it == features_.end() ? nullptr : &it->second;
}

}  // namespace medsearch
