#pragma once

#include <cstdint>

namespace medsearch {

/// PubMed identifier. Stored as 32-bit unsigned in the index file.
using Pmid = std::uint32_t;

/// Dense token identifier assigned by the lexicon, starting at 1.
using Tid = std::uint32_t;

}  // namespace medsearch
