#include "medsearch/text.h"

#include <algorithm>
#include <cctype>

namespace medsearch {
namespace {

bool is_split_char(char c) {
  return c == '-' || c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

bool is_word_byte(char c) {
  const auto u = static_cast<unsigned char>(c);
  return u >= 0x80 || std::isalnum(u);
}

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_split_char(text[i])) ++i;
    std::size_t j = i;
    while (j < text.size() && !is_split_char(text[j])) ++j;
    std::size_t b = i, e = j;
    while (b < e && !is_word_byte(text[b])) ++b;
    while (e > b && !is_word_byte(text[e - 1])) --e;
    if (b < e) out.emplace_back(text.substr(b, e - b));
    i = j;
  }
  return out;
}

bool is_fully_capitalized(std::string_view token) {
  if (token.size() < 2) return false;
  bool has_alpha = false;
  for (char c : token) {
    const auto u = static_cast<unsigned char>(c);
    if (std::islower(u)) return false;
    if (std::isupper(u)) has_alpha = true;
  }
  return has_alpha;
}

std::vector<std::string> remove_stopwords(std::span<const std::string> tokens, const StopwordList& stops) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) {
    if (!is_fully_capitalized(t) && stops.contains(ascii_lower(t))) continue;
    out.push_back(t);
  }
  return out;
}

std::string normalize_token(std::string_view token, const NormalizerHook& hook) {
  std::string out = is_fully_capitalized(token) ? std::string(token) : ascii_lower(token);
  return hook ? hook(std::move(out)) : out;
}

TextPipeline::TextPipeline() : stops_(StopwordList::english()) {}

TextPipeline::TextPipeline(StopwordList stops, NormalizerHook hook) : stops_(std::move(stops)), hook_(std::move(hook)) {}

std::vector<std::string> TextPipeline::normalized_tokens(std::string_view text) const {
  const auto raw = tokenize(text);
  auto kept = remove_stopwords(raw, stops_);
  std::vector<std::string> out;
  out.reserve(kept.size());
  for (const auto& t : kept) {
    auto n = normalize_token(t, hook_);
    if (!n.empty()) out.push_back(std::move(n));
  }
  return out;
}

std::vector<Tid> TextPipeline::text_to_tids(std::string_view text, Lexicon& lexicon, bool update_lexicon) const {
  if (!update_lexicon) return text_to_tids(text, std::as_const(lexicon));
  std::vector<Tid> out;
  for (const auto& t : normalized_tokens(text)) out.push_back(lexicon.intern(t));
  return out;
}

std::vector<Tid> TextPipeline::text_to_tids(std::string_view text, const Lexicon& lexicon) const {
  std::vector<Tid> out;
  for (const auto& t : normalized_tokens(text)) {
    if (auto tid = lexicon.find(t)) out.push_back(*tid);
  }
  return out;
}

}  // namespace medsearch
