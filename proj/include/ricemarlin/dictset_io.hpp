#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "ricemarlin/dictionary_set.hpp"

namespace ricemarlin {

inline constexpr std::uint8_t kDictSetVersion = 1;

/// Serializes a set: magic "RMDS", version, shared parameters, metadata JSON,
/// then per dictionary its alphabet and the word of every codeword; a 64-bit
/// FNV-1a digest of everything before it closes the file. Little-endian.
std::vector<std::uint8_t> save_dictset(const DictionarySet& set);

/// Inverse of save_dictset. Throws CorruptData on a bad magic, version,
/// digest or structure.
DictionarySet load_dictset(std::span<const std::uint8_t> bytes);

/// Digest stored in a serialized set (identifies it in containers).
std::uint64_t dictset_digest(const DictionarySet& set);

void save_dictset_file(const DictionarySet& set, const std::filesystem::path& path);
DictionarySet load_dictset_file(const std::filesystem::path& path);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> data);

}  // namespace ricemarlin
