#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "medsearch/corpus.h"

namespace medsearch {

struct ParsedBatch {
  std::vector<DocumentRecord> records;  // document order
  std::size_t skipped = 0;              // citations without PMID, title, year or type
  std::vector<std::string> warnings;
};

/// Parses a MEDLINE citation batch (PubmedArticleSet or MedlineCitationSet).
/// One record per MedlineCitation element; a repeated PMID replaces the
/// earlier record and adds a warning. Throws ParseError on malformed XML.
ParsedBatch parse_document_batch(std::string_view xml);

/// Writes records back out as a PubmedArticleSet using the same element
/// subset the parser reads.
std::string serialize_document_batch(std::span<const DocumentRecord> records);

/// Raw file contents; gzip input (magic 1f 8b) is inflated.
std::string read_batch_file(const std::filesystem::path& path);

/// Inflates a gzip member. Throws DataError on corrupt input.
std::string gunzip(std::string_view compressed);

}  // namespace medsearch
