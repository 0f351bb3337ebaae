#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <vector>

#include "medsearch/text.h"
#include "medsearch/types.h"

namespace medsearch {

/// Input to build_index: one document's title and abstract TIDs.
struct IndexedDocument {
  Pmid pmid = 0;
  std::vector<Tid> title_tids;
  std::vector<Tid> abstract_tids;
};

/// Input to merge_incremental: a document's TID set (duplicates allowed).
struct DocumentTerms {
  Pmid pmid = 0;
  std::vector<Tid> tids;
};

/// TID -> ascending PMIDs, plus the per-document reverse record (PMID ->
/// ascending distinct TIDs) needed to replace a re-indexed document.
class InvertedIndex {
 public:
  const std::map<Tid, std::vector<Pmid>>& postings() const { return postings_; }
  const std::map<Pmid, std::vector<Tid>>& document_terms() const { return doc_terms_; }

  /// Ascending PMIDs containing tid; empty when unknown.
  std::span<const Pmid> lookup(Tid tid) const;
  /// Ascending distinct TIDs of pmid; empty when not indexed.
  std::span<const Tid> terms_of(Pmid pmid) const;
  bool contains_document(Pmid pmid) const { return doc_terms_.contains(pmid); }

  std::size_t document_count() const { return doc_terms_.size(); }
  std::size_t row_count() const;

  bool operator==(const InvertedIndex&) const = default;

  friend InvertedIndex build_index(std::span<const IndexedDocument>);
  friend InvertedIndex merge_incremental(const InvertedIndex&, std::span<const DocumentTerms>);
  friend InvertedIndex read_index(std::istream&, std::istream&);

 private:
  std::map<Tid, std::vector<Pmid>> postings_;
  std::map<Pmid, std::vector<Tid>> doc_terms_;
};

/// Throws InputError on a duplicate PMID.
InvertedIndex build_index(std::span<const IndexedDocument> docs);

/// Adds new documents; a PMID already indexed has its old postings replaced.
/// Within new_docs the last entry for a PMID wins.
InvertedIndex merge_incremental(const InvertedIndex& index, std::span<const DocumentTerms> new_docs);

/// Free-function alias of InvertedIndex::lookup.
inline std::span<const Pmid> lookup(const InvertedIndex& index, Tid tid) { return index.lookup(tid); }

/// TID with the smallest doc_freq, ties to the smaller TID. Throws InputError
/// on an empty list or a TID the lexicon does not know.
Tid rarest_token(std::span<const Tid> tids, const Lexicon& lexicon);

/// Postings stream: "MSIX" magic, u32 version, u64 row count, then
/// (u32 tid, u32 pmid) rows sorted by (tid, pmid), little-endian.
/// Reverse stream: "MSRV" magic, u32 version, u64 doc count, then
/// (u32 pmid, u32 n, n x u32 tid) per document in PMID order.
void write_index(const InvertedIndex& index, std::ostream& postings, std::ostream& reverse);
/// Throws DataError on bad magic, truncation, unsorted rows, or mismatch
/// between the two streams.
InvertedIndex read_index(std::istream& postings, std::istream& reverse);

constexpr std::size_t kIndexHeaderBytes = 16;
constexpr std::size_t kIndexRowBytes = 8;

/// `path` holds postings, `path` + ".docs" the reverse records.
std::filesystem::path reverse_record_path(const std::filesystem::path& index_path);
void save_index(const InvertedIndex& index, const std::filesystem::path& path);
InvertedIndex load_index(const std::filesystem::path& path);

}  // namespace medsearch
