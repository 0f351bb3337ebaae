#include "medsearch/corpus.h"

#include <algorithm>
#include <cctype>

#include "binary_io.h"
#include "json.hpp"
#include "medsearch/errors.h"

namespace medsearch {

using nlohmann::json;

std::string journal_key(std::string_view journal_name) {
  std::string key;
  key.reserve(journal_name.size());
  bool pending_space = false;
  for (char ch : journal_name) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isalnum(c) || c >= 0x80) {
      if (pending_space && !key.empty()) key.push_back(' ');
      pending_space = false;
      key.push_back(static_cast<char>(std::tolower(c)));
    } else {
      pending_space = true;
    }
  }
  if (key.starts_with("the ")) key.erase(0, 4);
  return key;
}

const JoinedDocument* CorpusStore::find(Pmid pmid) const {
  const auto it = documents_.find(pmid);
  return it == documents_.end() ? nullptr : &it->second;
}

bool CorpusStore::has_batch(std::string_view batch_id) const {
  return std::any_of(log_.begin(), log_.end(), [&](const IngestLogEntry& e) { return e.batch_id == batch_id; });
}

void CorpusStore::update_journal_table(std::span<const JournalRecord> journals) {
  for (const auto& j : journals) {
    if (!(j.jif >= 0.0)) throw InputError("negative JIF for journal '" + j.journal_name + "'");
    journals_[journal_key(j.journal_name)] = j;
  }
}

CorpusStore ingest_batch(const CorpusStore& store, std::string_view batch_id, std::span<const JoinedDocument> docs,
                         std::string_view checksum, std::int64_t timestamp) {
  if (store.has_batch(batch_id)) return store;

  std::set<std::string> medicine_iso;
  for (const auto& [key, j] : store.journals_) {
    if (j.in_medicine_subject && !j.iso_abbrev.empty()) medicine_iso.insert(journal_key(j.iso_abbrev));
  }
  for (const auto& doc : docs) {
    const auto it = store.journals_.find(journal_key(doc.record.journal_name));
    const bool by_name = it != store.journals_.end() && it->second.in_medicine_subject;
    // The join may have matched on the ISO abbreviation instead.
    if (!by_name && !medicine_iso.contains(journal_key(doc.record.journal_iso_abbrev))) {
      throw InputError("PMID " + std::to_string(doc.record.pmid) + ": journal '" + doc.record.journal_name +
                       "' is not a medicine-subject journal in the store");
    }
    if (doc.record.title.empty()) throw InputError("PMID " + std::to_string(doc.record.pmid) + ": empty title");
    if (doc.record.pub_types.empty()) {
      throw InputError("PMID " + std::to_string(doc.record.pmid) + ": no publication types");
    }
  }

  CorpusStore next = store;
  for (const auto& doc : docs) next.documents_[doc.record.pmid] = doc;
  next.log_.push_back({std::string(batch_id), std::string(checksum), timestamp});
  return next;
}

namespace {

json date_to_json(const PartialDate& d) {
  json j = {{"year", d.year}};
  if (d.month) j["month"] = *d.month;
  if (d.day) j["day"] = *d.day;
  return j;
}

PartialDate date_from_json(const json& j) {
  PartialDate d;
  d.year = j.at("year").get<int>();
  if (j.contains("month")) d.month = j["month"].get<int>();
  if (j.contains("day")) d.day = j["day"].get<int>();
  return d;
}

json doc_to_json(const JoinedDocument& doc) {
  const auto& r = doc.record;
  return {{"pmid", r.pmid},
          {"title", r.title},
          {"abstract", r.abstract},
          {"journal", r.journal_name},
          {"iso_abbrev", r.journal_iso_abbrev},
          {"authors", r.authors},
          {"pub_date", date_to_json(r.pub_date)},
          {"pub_types", r.pub_types},
          {"language", r.language},
          {"erratum", r.is_erratum},
          {"retracted", r.is_retracted},
          {"jif", doc.jif}};
}

JoinedDocument doc_from_json(const json& j) {
  JoinedDocument doc;
  auto& r = doc.record;
  r.pmid = j.at("pmid").get<Pmid>();
  r.title = j.at("title").get<std::string>();
  r.abstract = j.at("abstract").get<std::string>();
  r.journal_name = j.at("journal").get<std::string>();
  r.journal_iso_abbrev = j.at("iso_abbrev").get<std::string>();
  r.authors = j.at("authors").get<std::vector<std::string>>();
  r.pub_date = date_from_json(j.at("pub_date"));
  r.pub_types = j.at("pub_types").get<std::set<std::string>>();
  r.language = j.at("language").get<std::string>();
  r.is_erratum = j.at("erratum").get<bool>();
  r.is_retracted = j.at("retracted").get<bool>();
  doc.jif = j.at("jif").get<double>();
  return doc;
}

constexpr int kStoreFormatVersion = 1;

}  // namespace

void save_corpus_store(const CorpusStore& store, const std::filesystem::path& path) {
  json docs = json::array();
  for (const auto& [pmid, doc] : store.documents()) docs.push_back(doc_to_json(doc));
  json journals = json::array();
  for (const auto& [key, j] : store.journal_table()) {
    journals.push_back({{"name", j.journal_name},
                        {"iso_abbrev", j.iso_abbrev},
                        {"medicine", j.in_medicine_subject},
                        {"jif", j.jif}});
  }
  json log = json::array();
  for (const auto& e : store.ingest_log()) {
    log.push_back({{"batch", e.batch_id}, {"checksum", e.checksum}, {"timestamp", e.timestamp}});
  }
  const json root = {{"format", "medsearch-corpus"},
                     {"version", kStoreFormatVersion},
                     {"journals", std::move(journals)},
                     {"ingest_log", std::move(log)},
                     {"documents", std::move(docs)}};
  detail::atomic_write(path, [&](std::ostream& out) { out << root.dump() << '\n'; });
}

CorpusStore load_corpus_store(const std::filesystem::path& path) {
  const std::string text = detail::read_file(path);
  CorpusStore store;
  try {
    const json root = json::parse(text);
    if (root.value("format", "") != "medsearch-corpus") throw DataError(path.string() + ": not a corpus store");
    if (root.value("version", 0) != kStoreFormatVersion) {
      throw DataError(path.string() + ": unsupported corpus store version");
    }
    for (const auto& j : root.at("journals")) {
      JournalRecord rec{j.at("name").get<std::string>(), j.at("iso_abbrev").get<std::string>(),
                        j.at("medicine").get<bool>(), j.at("jif").get<double>()};
      store.journals_[journal_key(rec.journal_name)] = std::move(rec);
    }
    for (const auto& j : root.at("ingest_log")) {
      store.log_.push_back({j.at("batch").get<std::string>(), j.at("checksum").get<std::string>(),
                            j.at("timestamp").get<std::int64_t>()});
    }
    for (const auto& j : root.at("documents")) {
      auto doc = doc_from_json(j);
      const Pmid pmid = doc.record.pmid;
      store.documents_[pmid] = std::move(doc);
    }
  } catch (const json::exception& e) {
    throw DataError(path.string() + ": " + e.what());
  }
  return store;
}

}  // namespace medsearch
