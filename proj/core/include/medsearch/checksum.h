#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace medsearch {

/// Lowercase hex MD5 of `bytes`.
std::string md5_hex(std::span<const unsigned char> bytes);
std::string md5_hex(std::string_view bytes);

/// True iff MD5(bytes) == expected_md5. Throws InputError unless
/// expected_md5 is exactly 32 lowercase hex characters.
bool verify_checksum(std::span<const unsigned char> bytes, std::string_view expected_md5);
bool verify_checksum(std::string_view bytes, std::string_view expected_md5);

/// Extracts the digest from a `<batch>.md5` sidecar. Accepts a bare digest,
/// `md5sum` output, or `MD5(file)= digest`. Throws DataError when none found.
std::string parse_checksum_sidecar(std::string_view contents);

/// Path of the sidecar for `batch` if it exists.
std::optional<std::filesystem::path> find_checksum_sidecar(const std::filesystem::path& batch);

}  // namespace medsearch
