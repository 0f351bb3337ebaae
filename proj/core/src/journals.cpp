#include "medsearch/journals.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <unordered_map>

#include "binary_io.h"
#include "medsearch/errors.h"

namespace medsearch {

JoinResult join_journal_metadata(std::span<const DocumentRecord> docs, std::span<const JournalRecord> journals) {
  std::unordered_map<std::string, const JournalRecord*> by_name;
  std::unordered_map<std::string, const JournalRecord*> by_iso;
  for (const auto& j : journals) {
    by_name[journal_key(j.journal_name)] = &j;
    if (!j.iso_abbrev.empty()) by_iso[journal_key(j.iso_abbrev)] = &j;
  }

  JoinResult result;
  for (const auto& doc : docs) {
    const JournalRecord* journal = nullptr;
    if (auto it = by_name.find(journal_key(doc.journal_name)); it != by_name.end()) {
      journal = it->second;
    } else if (auto iso = by_iso.find(journal_key(doc.journal_iso_abbrev));
               !doc.journal_iso_abbrev.empty() && iso != by_iso.end()) {
      journal = iso->second;
    }
    if (journal && journal->in_medicine_subject) {
      result.kept.push_back({doc, journal->jif});
    } else {
      ++result.dropped_count;
    }
  }
  return result;
}

namespace {

std::vector<std::string> split_row(std::string_view line, char delim, std::size_t line_no) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          fields.back().push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        fields.back().push_back(c);
      }
    } else if (c == '"' && fields.back().empty()) {
      quoted = true;
    } else if (c == delim) {
      fields.emplace_back();
    } else {
      fields.back().push_back(c);
    }
  }
  if (quoted) throw DataError("journal table line " + std::to_string(line_no) + ": unterminated quote");
  return fields;
}

std::string trimmed(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  return std::string(s.substr(b, s.find_last_not_of(" \t") - b + 1));
}

bool parse_flag(std::string value, std::size_t line_no) {
  for (auto& c : value) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (value == "1" || value == "true" || value == "yes" || value == "y") return true;
  if (value == "0" || value == "false" || value == "no" || value == "n" || value.empty()) return false;
  throw DataError("journal table line " + std::to_string(line_no) + ": bad medicine flag '" + value + "'");
}

double parse_jif(std::string value, std::size_t line_no) {
  if (value.empty()) return 0.0;
  // ScimagoJR exports use a decimal comma.
  std::replace(value.begin(), value.end(), ',', '.');
  double v = 0.0;
  const auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || p != value.data() + value.size() || !std::isfinite(v) || v < 0.0) {
    throw DataError("journal table line " + std::to_string(line_no) + ": bad JIF '" + value + "'");
  }
  return v;
}

}  // namespace

std::vector<JournalRecord> parse_journal_table(std::string_view text) {
  std::vector<JournalRecord> out;
  char delim = ',';
  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool header_seen = false;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trimmed(line).empty()) continue;

    if (!header_seen) {
      header_seen = true;
      if (line.find('\t') != std::string_view::npos) delim = '\t';
      else if (line.find(';') != std::string_view::npos) delim = ';';
      continue;
    }
    const auto fields = split_row(line, delim, line_no);
    if (fields.size() < 4) {
      throw DataError("journal table line " + std::to_string(line_no) + ": expected 4 columns, got " +
                      std::to_string(fields.size()));
    }
    JournalRecord rec;
    rec.journal_name = trimmed(fields[0]);
    rec.iso_abbrev = trimmed(fields[1]);
    rec.in_medicine_subject = parse_flag(trimmed(fields[2]), line_no);
    rec.jif = parse_jif(trimmed(fields[3]), line_no);
    if (rec.journal_name.empty()) throw DataError("journal table line " + std::to_string(line_no) + ": empty name");
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<JournalRecord> load_journal_table(const std::filesystem::path& path) {
  return parse_journal_table(detail::read_file(path));
}

}  // namespace medsearch
