#include "medsearch/medline_xml.h"

#include <expat.h>
#include <zlib.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cstring>
#include <limits>
#include <memory>
#include <optional>
#include <unordered_map>

#include "binary_io.h"
#include "medsearch/errors.h"

namespace medsearch {
namespace {

std::string_view trim(std::string_view s) {
  const auto* ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

std::optional<long> parse_int(std::string_view s) {
  s = trim(s);
  long v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
  return v;
}

constexpr std::array<std::string_view, 12> kMonthNames = {"jan", "feb", "mar", "apr", "may", "jun",
                                                          "jul", "aug", "sep", "oct", "nov", "dec"};

std::optional<int> parse_month(std::string_view s) {
  s = trim(s);
  if (auto n = parse_int(s)) {
    if (*n >= 1 && *n <= 12) return static_cast<int>(*n);
    return std::nullopt;
  }
  if (s.size() < 3) return std::nullopt;
  std::string prefix;
  for (char c : s.substr(0, 3)) prefix.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  for (std::size_t i = 0; i < kMonthNames.size(); ++i) {
    if (kMonthNames[i] == prefix) return static_cast<int>(i + 1);
  }
  return std::nullopt;
}

// Raw field text for one MedlineCitation before validation.
struct CitationDraft {
  std::string pmid;
  std::string title;
  std::vector<std::string> abstract_parts;
  std::string journal_title;
  std::string iso_abbrev;
  std::vector<std::string> authors;
  std::string year, month, day, medline_date;
  std::vector<std::string> pub_types;
  std::string language;
  bool retraction_link = false;
};

// Author being assembled inside <Author>.
struct AuthorDraft {
  std::string last, initials, fore, collective;
};

class BatchParser {
 public:
  BatchParser() : parser_(XML_ParserCreate("UTF-8"), &XML_ParserFree) {
    if (!parser_) throw std::bad_alloc();
    XML_SetUserData(parser_.get(), this);
    XML_SetElementHandler(parser_.get(), &BatchParser::on_start, &BatchParser::on_end);
    XML_SetCharacterDataHandler(parser_.get(), &BatchParser::on_text);
  }

  ParsedBatch run(std::string_view xml) {
    constexpr std::size_t kChunk = 1u << 24;
    std::size_t offset = 0;
    do {
      const std::size_t n = std::min(kChunk, xml.size() - offset);
      const bool last = offset + n == xml.size();
      if (XML_Parse(parser_.get(), xml.data() + offset, static_cast<int>(n), last) == XML_STATUS_ERROR) {
        const auto at = XML_GetCurrentByteIndex(parser_.get());
        throw ParseError(std::string("malformed XML: ") + XML_ErrorString(XML_GetErrorCode(parser_.get())),
                         at < 0 ? 0 : static_cast<std::size_t>(at));
      }
      offset += n;
    } while (offset < xml.size());
    return finish();
  }

 private:
  static void XMLCALL on_start(void* self, const XML_Char* name, const XML_Char** attrs) {
    static_cast<BatchParser*>(self)->start(name, attrs);
  }
  static void XMLCALL on_end(void* self, const XML_Char* name) { static_cast<BatchParser*>(self)->end(name); }
  static void XMLCALL on_text(void* self, const XML_Char* s, int len) {
    auto* p = static_cast<BatchParser*>(self);
    if (p->capture_) p->capture_->append(s, static_cast<std::size_t>(len));
  }

  std::string_view parent() const { return path_.size() >= 2 ? path_[path_.size() - 2] : std::string_view{}; }

  void begin_capture(std::string* target) {
    capture_ = target;
    capture_depth_ = path_.size();
  }

  void start(std::string_view name, const XML_Char** attrs) {
    path_.emplace_back(name);
    if (name == "MedlineCitation") {
      draft_.emplace();
      return;
    }
    if (!draft_ || capture_) return;
    auto& d = *draft_;
    const auto up = parent();

    if (name == "PMID" && up == "MedlineCitation") {
      begin_capture(&d.pmid);
    } else if (name == "ArticleTitle") {
      begin_capture(&d.title);
    } else if (name == "AbstractText" && up == "Abstract") {
      d.abstract_parts.emplace_back();
      begin_capture(&d.abstract_parts.back());
    } else if (name == "Title" && up == "Journal") {
      begin_capture(&d.journal_title);
    } else if (name == "ISOAbbreviation" && up == "Journal") {
      begin_capture(&d.iso_abbrev);
    } else if (name == "Author" && up == "AuthorList") {
      author_.emplace();
    } else if (author_ && up == "Author") {
      if (name == "LastName") begin_capture(&author_->last);
      else if (name == "Initials") begin_capture(&author_->initials);
      else if (name == "ForeName") begin_capture(&author_->fore);
      else if (name == "CollectiveName") begin_capture(&author_->collective);
    } else if (up == "PubDate") {
      if (name == "Year") begin_capture(&d.year);
      else if (name == "Month") begin_capture(&d.month);
      else if (name == "Day") begin_capture(&d.day);
      else if (name == "MedlineDate") begin_capture(&d.medline_date);
    } else if (name == "PublicationType" && up == "PublicationTypeList") {
      d.pub_types.emplace_back();
      begin_capture(&d.pub_types.back());
    } else if (name == "Language" && d.language.empty()) {
      begin_capture(&d.language);
    } else if (name == "CommentsCorrections") {
      for (auto a = attrs; a && *a; a += 2) {
        if (std::strcmp(a[0], "RefType") == 0 && std::strcmp(a[1], "RetractionIn") == 0) d.retraction_link = true;
      }
    }
  }

  void end(std::string_view name) {
    if (capture_ && path_.size() == capture_depth_) capture_ = nullptr;
    if (draft_ && author_ && name == "Author") {
      draft_->authors.push_back(abbreviate(*author_));
      author_.reset();
    }
    if (name == "MedlineCitation" && draft_) {
      accept(std::move(*draft_));
      draft_.reset();
    }
    path_.pop_back();
  }

  static std::string abbreviate(const AuthorDraft& a) {
    const auto collective = trim(a.collective);
    if (!collective.empty()) return std::string(collective);
    std::string out(trim(a.last));
    auto initials = std::string(trim(a.initials));
    if (initials.empty()) {
      for (char c : trim(a.fore)) {
        if (std::isupper(static_cast<unsigned char>(c))) initials.push_back(c);
      }
    }
    if (!initials.empty()) out += (out.empty() ? "" : " ") + initials;
    return out;
  }

  void accept(CitationDraft d) {
    DocumentRecord r;
    const auto pmid = parse_int(d.pmid);
    if (!pmid || *pmid <= 0 || *pmid > std::numeric_limits<Pmid>::max() || trim(d.title).empty()) {
      ++skipped_;
      return;
    }
    r.pmid = static_cast<Pmid>(*pmid);
    r.title = std::move(d.title);
    for (auto& part : d.abstract_parts) {
      if (part.empty()) continue;
      if (!r.abstract.empty()) r.abstract.push_back(' ');
      r.abstract += part;
    }
    r.journal_name = std::string(trim(d.journal_title));
    r.journal_iso_abbrev = std::string(trim(d.iso_abbrev));
    for (auto& a : d.authors) {
      if (!a.empty()) r.authors.push_back(std::move(a));
    }

    if (auto y = parse_int(d.year)) {
      r.pub_date.year = static_cast<int>(*y);
      r.pub_date.month = parse_month(d.month);
      if (r.pub_date.month) {
        if (auto day = parse_int(d.day); day && *day >= 1 && *day <= 31) r.pub_date.day = static_cast<int>(*day);
      }
    } else if (!d.medline_date.empty()) {
      // e.g. "1998 Dec-1999 Jan": first year, first month name
      const std::string_view md = d.medline_date;
      for (std::size_t i = 0; i + 4 <= md.size(); ++i) {
        const auto digits = md.substr(i, 4);
        if (std::all_of(digits.begin(), digits.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
          r.pub_date.year = static_cast<int>(*parse_int(digits));
          if (i + 8 <= md.size()) r.pub_date.month = parse_month(md.substr(i + 5, 3));
          break;
        }
      }
    }
    if (validate(r.pub_date)) {
      warnings_.push_back("PMID " + std::to_string(r.pmid) + ": no usable publication year, skipped");
      ++skipped_;
      return;
    }

    for (auto& t : d.pub_types) {
      auto v = std::string(trim(t));
      if (!v.empty()) r.pub_types.insert(std::move(v));
    }
    if (r.pub_types.empty()) {
      warnings_.push_back("PMID " + std::to_string(r.pmid) + ": no publication type, skipped");
      ++skipped_;
      return;
    }
    r.language = std::string(trim(d.language));
    r.is_erratum = r.pub_types.contains("Published Erratum");
    r.is_retracted = r.pub_types.contains("Retracted Publication") || d.retraction_link;

    if (const auto it = position_.find(r.pmid); it != position_.end()) {
      warnings_.push_back("duplicate PMID " + std::to_string(r.pmid) + " in batch; last occurrence kept");
      records_[it->second].reset();
    }
    position_[r.pmid] = records_.size();
    records_.emplace_back(std::move(r));
  }

  ParsedBatch finish() {
    ParsedBatch out;
    for (auto& r : records_) {
      if (r) out.records.push_back(std::move(*r));
    }
    out.skipped = skipped_;
    out.warnings = std::move(warnings_);
    return out;
  }

  std::unique_ptr<XML_ParserStruct, decltype(&XML_ParserFree)> parser_;
  std::vector<std::string> path_;
  std::optional<CitationDraft> draft_;
  std::optional<AuthorDraft> author_;
  std::string* capture_ = nullptr;
  std::size_t capture_depth_ = 0;

  std::vector<std::optional<DocumentRecord>> records_;
  std::unordered_map<Pmid, std::size_t> position_;
  std::size_t skipped_ = 0;
  std::vector<std::string> warnings_;
};

void append_escaped(std::string& out, std::string_view text) {
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\r': out += "&#13;"; break;
      default: out.push_back(c);
    }
  }
}

void element(std::string& out, std::string_view name, std::string_view text) {
  out += '<';
  out += name;
  out += '>';
  append_escaped(out, text);
  out += "</";
  out += name;
  out += '>';
}

bool looks_like_initials(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return std::isupper(static_cast<unsigned char>(c)); });
}

}  // namespace

ParsedBatch parse_document_batch(std::string_view xml) { return BatchParser().run(xml); }

std::string serialize_document_batch(std::span<const DocumentRecord> records) {
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<PubmedArticleSet>\n";
  for (const auto& r : records) {
    out += "<PubmedArticle><MedlineCitation Status=\"MEDLINE\">";
    element(out, "PMID", std::to_string(r.pmid));
    out += "<Article><Journal><JournalIssue><PubDate>";
    element(out, "Year", std::to_string(r.pub_date.year));
    if (r.pub_date.month) {
      std::string month(kMonthNames[static_cast<std::size_t>(*r.pub_date.month - 1)]);
      month[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(month[0])));
      element(out, "Month", month);
      if (r.pub_date.day) element(out, "Day", std::to_string(*r.pub_date.day));
    }
    out += "</PubDate></JournalIssue>";
    element(out, "Title", r.journal_name);
    element(out, "ISOAbbreviation", r.journal_iso_abbrev);
    out += "</Journal>";
    element(out, "ArticleTitle", r.title);
    if (!r.abstract.empty()) {
      out += "<Abstract>";
      element(out, "AbstractText", r.abstract);
      out += "</Abstract>";
    }
    if (!r.authors.empty()) {
      out += "<AuthorList>";
      for (const auto& a : r.authors) {
        out += "<Author>";
        const auto space = a.rfind(' ');
        if (space != std::string::npos && space > 0 && looks_like_initials(std::string_view(a).substr(space + 1))) {
          element(out, "LastName", std::string_view(a).substr(0, space));
          element(out, "Initials", std::string_view(a).substr(space + 1));
        } else {
          element(out, "CollectiveName", a);
        }
        out += "</Author>";
      }
      out += "</AuthorList>";
    }
    if (!r.language.empty()) element(out, "Language", r.language);
    out += "<PublicationTypeList>";
    for (const auto& t : r.pub_types) element(out, "PublicationType", t);
    out += "</PublicationTypeList></Article>";
    if (r.is_retracted && !r.pub_types.contains("Retracted Publication")) {
      out += "<CommentsCorrectionsList><CommentsCorrections RefType=\"RetractionIn\">"
             "<RefSource>Retraction notice</RefSource></CommentsCorrections></CommentsCorrectionsList>";
    }
    out += "</MedlineCitation></PubmedArticle>\n";
  }
  out += "</PubmedArticleSet>\n";
  return out;
}

std::string gunzip(std::string_view compressed) {
  z_stream zs{};
  // 15 + 32: zlib or gzip header, auto-detected
  if (inflateInit2(&zs, 15 + 32) != Z_OK) throw DataError("inflateInit2 failed");
  std::unique_ptr<z_stream, decltype(&inflateEnd)> guard(&zs, &inflateEnd);

  std::string out;
  std::array<char, 1 << 16> buf{};
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(compressed.data()));
  zs.avail_in = static_cast<uInt>(compressed.size());
  for (;;) {
    zs.next_out = reinterpret_cast<Bytef*>(buf.data());
    zs.avail_out = static_cast<uInt>(buf.size());
    const int rc = inflate(&zs, Z_NO_FLUSH);
    out.append(buf.data(), buf.size() - zs.avail_out);
    if (rc == Z_STREAM_END) {
      if (zs.avail_in == 0) break;
      // concatenated gzip members
      if (inflateReset(&zs) != Z_OK) throw DataError("inflateReset failed");
      continue;
    }
    if (rc != Z_OK) throw DataError(std::string("corrupt gzip data: ") + (zs.msg ? zs.msg : "inflate error"));
    if (zs.avail_in == 0 && zs.avail_out != 0) throw DataError("truncated gzip data");
  }
  return out;
}

std::string read_batch_file(const std::filesystem::path& path) {
  std::string bytes = detail::read_file(path);
  if (bytes.size() >= 2 && static_cast<unsigned char>(bytes[0]) == 0x1f && static_cast<unsigned char>(bytes[1]) == 0x8b) {
    return gunzip(bytes);
  }
  return bytes;
}

}  // namespace medsearch
