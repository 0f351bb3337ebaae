#include "medsearch/checksum.h"

#include <openssl/evp.h>

#include <array>
#include <cctype>
#include <memory>

#include "medsearch/errors.h"

namespace medsearch {
namespace {

bool is_md5_hex(std::string_view s) {
  if (s.size() != 32) return false;
  for (char c : s) {
    if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'))) return false;
  }
  return true;
}

}  // namespace

std::string md5_hex(std::span<const unsigned char> bytes) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_md5(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest.data(), &len) != 1) {
    throw std::runtime_error("MD5 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xf]);
  }
  return out;
}

std::string md5_hex(std::string_view bytes) {
  return md5_hex(std::span(reinterpret_cast<const unsigned char*>(bytes.data()), bytes.size()));
}

bool verify_checksum(std::span<const unsigned char> bytes, std::string_view expected_md5) {
  if (!is_md5_hex(expected_md5)) {
    throw InputError("expected MD5 must be 32 lowercase hex characters, got '" + std::string(expected_md5) + "'");
  }
  return md5_hex(bytes) == expected_md5;
}

bool verify_checksum(std::string_view bytes, std::string_view expected_md5) {
  return verify_checksum(std::span(reinterpret_cast<const unsigned char*>(bytes.data()), bytes.size()),
                         expected_md5);
}

std::string parse_checksum_sidecar(std::string_view contents) {
  // Any whitespace- or '='-delimited 32-hex word; "MD5(x)= d", "d  file" and "d" all work.
  std::size_t i = 0;
  while (i < contents.size()) {
    while (i < contents.size() && !std::isxdigit(static_cast<unsigned char>(contents[i]))) ++i;
    std::size_t j = i;
    while (j < contents.size() && std::isalnum(static_cast<unsigned char>(contents[j]))) ++j;
    if (j - i == 32) {
      std::string word(contents.substr(i, 32));
      for (auto& c : word) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      const bool delimited_before = i == 0 || contents[i - 1] == ' ' || contents[i - 1] == '=' ||
                                    contents[i - 1] == '\t' || contents[i - 1] == '\n';
      if (delimited_before && is_md5_hex(word)) return word;
    }
    i = j == i ? i + 1 : j;
  }
  throw DataError("no MD5 digest found in checksum sidecar");
}

std::optional<std::filesystem::path> find_checksum_sidecar(const std::filesystem::path& batch) {
  auto sidecar = batch;
  sidecar += ".md5";
  if (std::filesystem::exists(sidecar)) return sidecar;
  return std::nullopt;
}

}  // namespace medsearch
