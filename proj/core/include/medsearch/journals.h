#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

#include "medsearch/corpus.h"

namespace medsearch {

struct JoinResult {
  std::vector<JoinedDocument> kept;
  std::size_t dropped_count = 0;
};

/// Keeps documents published in medicine-subject journals, paired with the
/// journal's JIF. Matching is on journal_key of the full title, falling back
/// to the ISO abbreviation.
JoinResult join_journal_metadata(std::span<const DocumentRecord> docs,
                                 std::span<const JournalRecord> journals);

/// Delimiter-separated journal table with one header row and columns
/// (name, iso abbreviation, medicine flag, jif). Tab, ';' and ',' delimiters
/// are detected from the header; fields may be double-quoted.
std::vector<JournalRecord> parse_journal_table(std::string_view text);
std::vector<JournalRecord> load_journal_table(const std::filesystem::path& path);

}  // namespace medsearch
