#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "medsearch/corpus.h"
#include "medsearch/embedding.h"
#include "medsearch/snapshot.h"

namespace medsearch::testing {

/// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

void write_file(const std::filesystem::path& path, std::string_view contents);
std::string read_file(const std::filesystem::path& path);

struct CorpusShape {
  std::size_t documents = 500;
  std::size_t vocabulary = 80;   // content words w0..w{n-1}, Zipf-distributed
  std::size_t journals = 25;
  double zero_jif_rate = 0.1;
  double flagged_rate = 0.05;    // erratum / retracted / non-English, each
  int min_year = 1975;
  int max_year = 2024;
};

/// Random medicine-subject documents with journal-consistent JIFs. Titles and
/// abstracts mix Zipf content words, stopwords, a few acronyms and hyphenated
/// compounds. PMIDs are distinct but not contiguous.
struct SyntheticCorpus {
  std::vector<JournalRecord> journals;
  std::vector<JoinedDocument> documents;
  std::vector<std::string> vocabulary;
};

SyntheticCorpus make_corpus(const CorpusShape& shape, std::uint64_t seed);

/// A single-batch store over `corpus`.
CorpusStore make_store(const SyntheticCorpus& corpus);

/// Lexicon from the store, a seeded Gaussian matrix over every TID, and the
/// index built from the same tokenization.
std::shared_ptr<const SearchSnapshot> make_snapshot(const CorpusStore& store, int dim, std::uint64_t seed);

/// Random query text: 1-3 words, mostly from the vocabulary, sometimes with
/// a stopword, an acronym, different case, or a word outside the lexicon.
std::string random_query(const SyntheticCorpus& corpus, std::mt19937_64& rng);

/// Minimal JoinedDocument for hand-built fixtures.
JoinedDocument make_document(Pmid pmid, std::string title, std::string abstract, PartialDate date,
                             std::set<std::string> pub_types, double jif, std::string journal = "Test Journal");

}  // namespace medsearch::testing
