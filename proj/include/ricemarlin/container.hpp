#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ricemarlin/codec.hpp"
#include "ricemarlin/image.hpp"

namespace ricemarlin {

inline constexpr std::uint8_t kContainerVersion = 1;
inline constexpr std::size_t kDefaultBlockSize = 4096;

enum class ContainerMode : std::uint8_t { Bytes = 0, Image = 1 };

struct BlockRef {
    std::size_t offset;    ///< position of the block bytes in the container
    std::size_t length;    ///< compressed length
    std::size_t original;  ///< symbols the block decodes to
};

/// Header fields of a container plus the location of every block.
///
/// Layout (little-endian): "RMCF", version u8, mode u8, K u8, O u8, set
/// digest u64, block size u32, total size u64; in image mode width u32,
/// height u32, PGM header (u32 length + bytes) and trailer (u32 length +
/// bytes); block count u64; then per block a u32 length and the block bytes.
struct ContainerInfo {
    ContainerMode mode = ContainerMode::Bytes;
    unsigned key_bits = 0;
    unsigned overlap_bits = 0;
    std::uint64_t set_digest = 0;
    std::size_t block_size = 0;
    std::size_t total = 0;  ///< original bytes, or pixels in image mode
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<std::uint8_t> pgm_header;
    std::vector<std::uint8_t> pgm_trailer;
    std::vector<BlockRef> blocks;
};

/// Splits `data` into blocks of `block_size` bytes (the last may be shorter)
/// and compresses them on `threads` threads (0 = hardware concurrency).
std::vector<std::uint8_t> compress_bytes(const BlockCodec& codec, std::span<const std::uint8_t> data,
                                         std::size_t block_size = kDefaultBlockSize, unsigned threads = 0);

/// Compresses the residuals of every 64x64 tile of a PGM image as one block.
std::vector<std::uint8_t> compress_image(const BlockCodec& codec, const PgmFile& file, unsigned threads = 0);

/// Parses the header and block table. Throws CorruptData on inconsistencies.
ContainerInfo read_container_info(std::span<const std::uint8_t> container);

/// Restores the original file (for images, the PGM file). Throws
/// CorruptData on corrupt input and InvalidArgument when the container was
/// made with a different dictionary set.
std::vector<std::uint8_t> decompress_container(const BlockCodec& codec, std::span<const std::uint8_t> container,
                                               unsigned threads = 0);

}  // namespace ricemarlin
