#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "medsearch/types.h"

namespace medsearch {

/// Splits on whitespace and '-', strips leading/trailing ASCII punctuation
/// from each fragment, and drops empty fragments. Bytes >= 0x80 count as
/// word characters.
std::vector<std::string> tokenize(std::string_view text);

/// Length >= 2, at least one letter, and every letter uppercase ("WHO", "ST",
/// "COVID19"). Single letters are not acronyms.
bool is_fully_capitalized(std::string_view token);

class StopwordList {
 public:
  StopwordList() = default;
  explicit StopwordList(std::unordered_set<std::string> words);

  /// The embedded English list.
  static const StopwordList& english();
  /// One word per line, '#' starts a comment. Entries are case-folded.
  static StopwordList parse(std::string_view text);
  static StopwordList load(const std::filesystem::path& path);

  bool contains(std::string_view lowercase_word) const;
  std::size_t size() const { return words_.size(); }
  const std::unordered_set<std::string>& words() const { return words_; }

 private:
  std::unordered_set<std::string> words_;
};

/// Removes a token iff its lowercase form is a stopword and it is not fully
/// capitalized.
std::vector<std::string> remove_stopwords(std::span<const std::string> tokens,
                                          const StopwordList& stops);

/// Hook applied after case folding. Must be deterministic.
using NormalizerHook = std::function<std::string(std::string)>;

/// Acronyms pass through unchanged; everything else is ASCII lowercased, then
/// the hook (identity by default) runs.
std::string normalize_token(std::string_view token, const NormalizerHook& hook = {});

/// Bidirectional token <-> TID map with document frequencies. TIDs are dense
/// from 1 in insertion order.
class Lexicon {
 public:
  std::optional<Tid> find(std::string_view token) const;
  /// Returns the existing TID or assigns the next one.
  Tid intern(std::string_view token);

  /// Throws InputError when tid is unknown.
  const std::string& token(Tid tid) const;
  std::uint32_t doc_freq(Tid tid) const;
  bool contains(Tid tid) const { return tid >= 1 && tid <= tokens_.size(); }

  /// Counts one document: each distinct TID's frequency goes up by one and
  /// corpus_size by one.
  void count_document(std::span<const Tid> tids);

  std::size_t size() const { return tokens_.size(); }
  std::uint64_t corpus_size() const { return corpus_size_; }

  /// Text form: "#lexicon\t1\t<corpus_size>" then "tid\ttoken\tdf" lines.
  void save(const std::filesystem::path& path) const;
  static Lexicon load(const std::filesystem::path& path);
  std::string serialize() const;
  static Lexicon deserialize(std::string_view text);

  bool operator==(const Lexicon& other) const {
    return tokens_ == other.tokens_ && doc_freq_ == other.doc_freq_ &&
           corpus_size_ == other.corpus_size_;
  }

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const { return std::hash<std::string_view>{}(s); }
  };
  std::unordered_map<std::string, Tid, Hash, std::equal_to<>> ids_;
  std::vector<std::string> tokens_;      // index tid - 1
  std::vector<std::uint32_t> doc_freq_;  // index tid - 1
  std::uint64_t corpus_size_ = 0;
};

/// tokenize -> remove_stopwords -> normalize_token, bundled with the
/// stopword list and normalizer it runs with.
class TextPipeline {
 public:
  TextPipeline();
  explicit TextPipeline(StopwordList stops, NormalizerHook hook = {});

  /// Normalized, stopword-free tokens in text order.
  std::vector<std::string> normalized_tokens(std::string_view text) const;

  /// Maps text to TIDs. With update_lexicon, unseen tokens get new TIDs;
  /// without, they are dropped. Does not touch document frequencies.
  std::vector<Tid> text_to_tids(std::string_view text, Lexicon& lexicon, bool update_lexicon) const;
  /// Closed-lexicon form for frozen lexicons.
  std::vector<Tid> text_to_tids(std::string_view text, const Lexicon& lexicon) const;

  const StopwordList& stopwords() const { return stops_; }

 private:
  StopwordList stops_;
  NormalizerHook hook_;
};

}  // namespace medsearch
