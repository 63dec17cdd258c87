#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace ricemarlin {

inline constexpr std::size_t kTileSide = 64;

struct GrayImage {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<std::uint8_t> pixels;  ///< row major

    std::uint8_t at(std::size_t x, std::size_t y) const { return pixels[y * width + x]; }
};

/// A binary PGM (P5, maxval <= 255) with its header and any bytes after the
/// raster kept verbatim, so that write_pgm(parse_pgm(f)) == f.
struct PgmFile {
    GrayImage image;
    std::vector<std::uint8_t> header;
    std::vector<std::uint8_t> trailer;
};

/// Throws InvalidArgument when `bytes` is not an 8-bit binary PGM.
PgmFile parse_pgm(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> write_pgm(const PgmFile& file);

std::size_t tiles_across(const GrayImage& image);
std::size_t tiles_down(const GrayImage& image);

/// Residuals of one 64x64 tile, row major. Pixels outside the image repeat
/// the nearest edge pixel. Each pixel is predicted by the one above it in the
/// tile; the tile's first row uses its left neighbour and its first pixel
/// predicts 0. Residuals are differences mod 256.
std::vector<std::uint8_t> tile_residuals(const GrayImage& image, std::size_t tile_x, std::size_t tile_y);

/// Inverts tile_residuals and stores the pixels that fall inside the image.
void restore_tile(GrayImage& image, std::size_t tile_x, std::size_t tile_y, std::span<const std::uint8_t> residuals);

}  // namespace ricemarlin
