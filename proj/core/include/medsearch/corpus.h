#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "medsearch/date.h"
#include "medsearch/types.h"

namespace medsearch {

/// One MEDLINE citation, restricted to the fields the engine uses.
struct DocumentRecord {
  Pmid pmid = 0;
  std::string title;
  std::string abstract;  // empty when the citation has none
  std::string journal_name;
  std::string journal_iso_abbrev;
  std::vector<std::string> authors;  // "LastName Initials" or collective name
  PartialDate pub_date;
  std::set<std::string> pub_types;
  std::string language;  // ISO 639-2 code as MEDLINE writes it, e.g. "eng"
  bool is_erratum = false;
  bool is_retracted = false;

  bool operator==(const DocumentRecord&) const = default;
};

struct JournalRecord {
  std::string journal_name;
  std::string iso_abbrev;
  bool in_medicine_subject = false;
  double jif = 0.0;  // 0 when unranked

  bool operator==(const JournalRecord&) const = default;
};

/// A document that passed the journal join, with its journal's impact factor.
struct JoinedDocument {
  DocumentRecord record;
  double jif = 0.0;

  bool operator==(const JoinedDocument&) const = default;
};

struct IngestLogEntry {
  std::string batch_id;
  std::string checksum;
  std::int64_t timestamp = 0;  // seconds since the Unix epoch

  bool operator==(const IngestLogEntry&) const = default;
};

/// Normalized journal match key: ASCII case-folded, runs of non-alphanumerics
/// collapsed to one space, trimmed, with a leading "the " removed.
std::string journal_key(std::string_view journal_name);

/// The medicine-subject document subset plus the journal table it was joined
/// against. Value type: updates produce a new store, so a published store is
/// never observed half-applied.
class CorpusStore {
 public:
  const std::map<Pmid, JoinedDocument>& documents() const { return documents_; }
  const std::map<std::string, JournalRecord>& journal_table() const { return journals_; }
  const std::vector<IngestLogEntry>& ingest_log() const { return log_; }

  std::size_t size() const { return documents_.size(); }
  const JoinedDocument* find(Pmid pmid) const;
  bool has_batch(std::string_view batch_id) const;

  /// Upserts journal records keyed by journal_key(name).
  void update_journal_table(std::span<const JournalRecord> journals);

  bool operator==(const CorpusStore&) const = default;

  friend CorpusStore ingest_batch(const CorpusStore&, std::string_view, std::span<const JoinedDocument>,
                                  std::string_view, std::int64_t);
  friend CorpusStore load_corpus_store(const std::filesystem::path&);

 private:
  std::map<Pmid, JoinedDocument> documents_;
  std::map<std::string, JournalRecord> journals_;
  std::vector<IngestLogEntry> log_;
};

/// Returns `store` with `docs` upserted by PMID and the batch logged. A batch
/// id already in the log leaves the store unchanged. Throws InputError if a
/// document's journal is not a medicine-subject journal in the store's table.
CorpusStore ingest_batch(const CorpusStore& store, std::string_view batch_id,
                         std::span<const JoinedDocument> docs, std::string_view checksum = {},
                         std::int64_t timestamp = 0);

/// Atomic write (temp file + rename).
void save_corpus_store(const CorpusStore& store, const std::filesystem::path& path);
CorpusStore load_corpus_store(const std::filesystem::path& path);

}  // namespace medsearch
