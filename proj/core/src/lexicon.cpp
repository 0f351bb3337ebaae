#include <algorithm>
#include <charconv>
#include <sstream>

#include "binary_io.h"
#include "medsearch/errors.h"
#include "medsearch/text.h"

namespace medsearch {

std::optional<Tid> Lexicon::find(std::string_view token) const {
  const auto it = ids_.find(token);
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

Tid Lexicon::intern(std::string_view token) {
  if (auto tid = find(token)) return *tid;
  if (token.empty()) throw InputError("cannot intern an empty token");
  tokens_.emplace_back(token);
  doc_freq_.push_back(0);
  const auto tid = static_cast<Tid>(tokens_.size());
  ids_.emplace(tokens_.back(), tid);
  return tid;
}

const std::string& Lexicon::token(Tid tid) const {
  if (!contains(tid)) throw InputError("unknown TID " + std::to_string(tid));
  return tokens_[tid - 1];
}

std::uint32_t Lexicon::doc_freq(Tid tid) const {
  if (!contains(tid)) throw InputError("unknown TID " + std::to_string(tid));
  return doc_freq_[tid - 1];
}

void Lexicon::count_document(std::span<const Tid> tids) {
  std::vector<Tid> distinct(tids.begin(), tids.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  for (Tid t : distinct) {
    if (!contains(t)) throw InputError("unknown TID " + std::to_string(t));
    ++doc_freq_[t - 1];
  }
  ++corpus_size_;
}

std::string Lexicon::serialize() const {
  std::string out = "#lexicon\t1\t" + std::to_string(corpus_size_) + "\n";
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    out += std::to_string(i + 1);
    out += '\t';
    out += tokens_[i];
    out += '\t';
    out += std::to_string(doc_freq_[i]);
    out += '\n';
  }
  return out;
}

namespace {

template <typename Int>
Int parse_field(std::string_view s, std::size_t line_no) {
  Int v{};
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) {
    throw DataError("lexicon line " + std::to_string(line_no) + ": bad number '" + std::string(s) + "'");
  }
  return v;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> parts;
  std::size_t pos = 0;
  for (;;) {
    const auto tab = line.find('\t', pos);
    parts.push_back(line.substr(pos, tab == std::string_view::npos ? std::string_view::npos : tab - pos));
    if (tab == std::string_view::npos) break;
    pos = tab + 1;
  }
  return parts;
}

}  // namespace

Lexicon Lexicon::deserialize(std::string_view text) {
  Lexicon lex;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  bool header = false;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const auto line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.empty()) continue;
    const auto parts = split_tabs(line);
    if (!header) {
      if (parts.size() != 3 || parts[0] != "#lexicon" || parts[1] != "1") throw DataError("not a lexicon file");
      lex.corpus_size_ = parse_field<std::uint64_t>(parts[2], line_no);
      header = true;
      continue;
    }
    if (parts.size() != 3) throw DataError("lexicon line " + std::to_string(line_no) + ": expected 3 fields");
    const auto tid = parse_field<Tid>(parts[0], line_no);
    const auto df = parse_field<std::uint32_t>(parts[2], line_no);
    if (tid != lex.tokens_.size() + 1) throw DataError("lexicon line " + std::to_string(line_no) + ": TIDs not dense");
    if (parts[1].empty() || lex.find(parts[1])) {
      throw DataError("lexicon line " + std::to_string(line_no) + ": empty or duplicate token");
    }
    if (df > lex.corpus_size_) throw DataError("lexicon line " + std::to_string(line_no) + ": df exceeds corpus size");
    lex.intern(parts[1]);
    lex.doc_freq_.back() = df;
  }
  if (!header) throw DataError("not a lexicon file");
  return lex;
}

void Lexicon::save(const std::filesystem::path& path) const {
  detail::atomic_write(path, [&](std::ostream& out) { out << serialize(); });
}

Lexicon Lexicon::load(const std::filesystem::path& path) { return deserialize(detail::read_file(path)); }

}  // namespace medsearch
