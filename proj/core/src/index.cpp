#include "medsearch/index.h"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "binary_io.h"
#include "medsearch/errors.h"

namespace medsearch {
namespace {

std::vector<Tid> distinct_sorted(std::vector<Tid> tids) {
  std::sort(tids.begin(), tids.end());
  tids.erase(std::unique(tids.begin(), tids.end()), tids.end());
  return tids;
}

constexpr char kPostingsMagic[5] = "MSIX";
constexpr char kReverseMagic[5] = "MSRV";
constexpr std::uint32_t kIndexVersion = 1;

}  // namespace

std::span<const Pmid> InvertedIndex::lookup(Tid tid) const {
  const auto it = postings_.find(tid);
  if (it == postings_.end()) return {};
  return it->second;
}

std::span<const Tid> InvertedIndex::terms_of(Pmid pmid) const {
  const auto it = doc_terms_.find(pmid);
  if (it == doc_terms_.end()) return {};
  return it->second;
}

std::size_t InvertedIndex::row_count() const {
  std::size_t n = 0;
  for (const auto& [tid, pmids] : postings_) n += pmids.size();
  return n;
}

InvertedIndex build_index(std::span<const IndexedDocument> docs) {
  InvertedIndex index;
  for (const auto& doc : docs) {
    std::vector<Tid> all(doc.title_tids);
    all.insert(all.end(), doc.abstract_tids.begin(), doc.abstract_tids.end());
    auto terms = distinct_sorted(std::move(all));
    if (!index.doc_terms_.emplace(doc.pmid, terms).second) {
      throw InputError("duplicate PMID " + std::to_string(doc.pmid) + " in build_index input");
    }
    for (Tid t : terms) index.postings_[t].push_back(doc.pmid);
  }
  for (auto& [tid, pmids] : index.postings_) std::sort(pmids.begin(), pmids.end());
  return index;
}

InvertedIndex merge_incremental(const InvertedIndex& index, std::span<const DocumentTerms> new_docs) {
  // Last entry per PMID wins.
  std::map<Pmid, std::vector<Tid>> incoming;
  for (const auto& doc : new_docs) incoming[doc.pmid] = distinct_sorted(doc.tids);
  if (incoming.empty()) return index;

  std::unordered_map<Tid, std::vector<Pmid>> removals;
  std::unordered_map<Tid, std::vector<Pmid>> additions;
  for (const auto& [pmid, terms] : incoming) {
    if (auto old = index.doc_terms_.find(pmid); old != index.doc_terms_.end()) {
      for (Tid t : old->second) removals[t].push_back(pmid);
    }
    for (Tid t : terms) additions[t].push_back(pmid);
  }

  InvertedIndex merged = index;
  for (auto& [tid, pmids] : removals) {
    auto& list = merged.postings_[tid];
    std::sort(pmids.begin(), pmids.end());
    std::vector<Pmid> kept;
    kept.reserve(list.size());
    std::set_difference(list.begin(), list.end(), pmids.begin(), pmids.end(), std::back_inserter(kept));
    list = std::move(kept);
  }
  for (auto& [tid, pmids] : additions) {
    auto& list = merged.postings_[tid];
    std::sort(pmids.begin(), pmids.end());
    std::vector<Pmid> out;
    out.reserve(list.size() + pmids.size());
    std::merge(list.begin(), list.end(), pmids.begin(), pmids.end(), std::back_inserter(out));
    list = std::move(out);
  }
  std::erase_if(merged.postings_, [](const auto& kv) { return kv.second.empty(); });
  for (auto& [pmid, terms] : incoming) merged.doc_terms_[pmid] = std::move(terms);
  return merged;
}

Tid rarest_token(std::span<const Tid> tids, const Lexicon& lexicon) {
  if (tids.empty()) throw InputError("rarest_token of an empty token list");
  Tid best = 0;
  std::uint32_t best_df = 0;
  for (Tid t : tids) {
    if (!lexicon.contains(t)) throw InputError("TID " + std::to_string(t) + " is not in the lexicon");
    const auto df = lexicon.doc_freq(t);
    if (best == 0 || df < best_df || (df == best_df && t < best)) {
      best = t;
      best_df = df;
    }
  }
  return best;
}

void write_index(const InvertedIndex& index, std::ostream& postings, std::ostream& reverse) {
  postings.write(kPostingsMagic, 4);
  detail::write_u32(postings, kIndexVersion);
  detail::write_u64(postings, index.row_count());
  for (const auto& [tid, pmids] : index.postings()) {
    for (Pmid p : pmids) {
      detail::write_u32(postings, tid);
      detail::write_u32(postings, p);
    }
  }

  reverse.write(kReverseMagic, 4);
  detail::write_u32(reverse, kIndexVersion);
  detail::write_u64(reverse, index.document_count());
  for (const auto& [pmid, terms] : index.document_terms()) {
    detail::write_u32(reverse, pmid);
    detail::write_u32(reverse, static_cast<std::uint32_t>(terms.size()));
    for (Tid t : terms) detail::write_u32(reverse, t);
  }
}

InvertedIndex read_index(std::istream& postings, std::istream& reverse) {
  InvertedIndex index;

  detail::expect_magic(postings, kPostingsMagic, "index postings");
  if (detail::read_u32(postings, "index version") != kIndexVersion) throw DataError("unsupported index version");
  const auto rows = detail::read_u64(postings, "index row count");
  std::uint64_t prev_tid = 0, prev_pmid = 0;
  std::vector<Pmid>* current = nullptr;
  for (std::uint64_t r = 0; r < rows; ++r) {
    const Tid tid = detail::read_u32(postings, "index row");
    const Pmid pmid = detail::read_u32(postings, "index row");
    if (r > 0 && (tid < prev_tid || (tid == prev_tid && pmid <= prev_pmid))) {
      throw DataError("index rows not sorted by (tid, pmid) at row " + std::to_string(r));
    }
    if (!current || tid != prev_tid) current = &index.postings_[tid];
    current->push_back(pmid);
    prev_tid = tid;
    prev_pmid = pmid;
  }
  detail::expect_eof(postings, "index postings");

  detail::expect_magic(reverse, kReverseMagic, "index reverse records");
  if (detail::read_u32(reverse, "reverse version") != kIndexVersion) throw DataError("unsupported reverse-record version");
  const auto docs = detail::read_u64(reverse, "reverse doc count");
  std::uint64_t reverse_rows = 0;
  Pmid prev = 0;
  for (std::uint64_t d = 0; d < docs; ++d) {
    const Pmid pmid = detail::read_u32(reverse, "reverse record");
    if (d > 0 && pmid <= prev) throw DataError("reverse records not sorted by PMID");
    const auto n = detail::read_u32(reverse, "reverse record length");
    std::vector<Tid> terms(n);
    for (auto& t : terms) t = detail::read_u32(reverse, "reverse record");
    if (!std::is_sorted(terms.begin(), terms.end()) ||
        std::adjacent_find(terms.begin(), terms.end()) != terms.end()) {
      throw DataError("reverse record of PMID " + std::to_string(pmid) + " is not a sorted set");
    }
    for (Tid t : terms) {
      const auto it = index.postings_.find(t);
      if (it == index.postings_.end() || !std::binary_search(it->second.begin(), it->second.end(), pmid)) {
        throw DataError("reverse record of PMID " + std::to_string(pmid) + " disagrees with postings");
      }
    }
    reverse_rows += n;
    index.doc_terms_.emplace(pmid, std::move(terms));
    prev = pmid;
  }
  detail::expect_eof(reverse, "index reverse records");
  if (reverse_rows != rows) throw DataError("reverse records and postings have different row counts");
  return index;
}

std::filesystem::path reverse_record_path(const std::filesystem::path& index_path) {
  auto p = index_path;
  p += ".docs";
  return p;
}

void save_index(const InvertedIndex& index, const std::filesystem::path& path) {
  std::ostringstream postings;
  detail::atomic_write(reverse_record_path(path), [&](std::ostream& reverse) { write_index(index, postings, reverse); });
  detail::atomic_write(path, [&](std::ostream& out) { out << postings.str(); });
}

InvertedIndex load_index(const std::filesystem::path& path) {
  std::ifstream postings(path, std::ios::binary);
  if (!postings) throw DataError("cannot open index " + path.string());
  std::ifstream reverse(reverse_record_path(path), std::ios::binary);
  if (!reverse) throw DataError("cannot open reverse records " + reverse_record_path(path).string());
  try {
    return read_index(postings, reverse);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

}  // namespace medsearch
