#include "ricemarlin/image.hpp"

#include <algorithm>
#include <cctype>
#include <string>

#include "ricemarlin/errors.hpp"

namespace ricemarlin {

namespace {

// Skips whitespace and '#' comments, then reads a decimal field.
std::size_t read_field(std::span<const std::uint8_t> bytes, std::size_t& pos) {
    for (;;) {
        if (pos >= bytes.size()) throw InvalidArgument("PGM header is truncated");
        if (bytes[pos] == '#') {
            while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
        } else if (std::isspace(bytes[pos])) {
            ++pos;
        } else {
            break;
        }
    }
    if (!std::isdigit(bytes[pos])) throw InvalidArgument("PGM header field is not a number");
    std::size_t value = 0;
    while (pos < bytes.size() && std::isdigit(bytes[pos])) {
        value = value * 10 + static_cast<std::size_t>(bytes[pos] - '0');
        if (value > (std::size_t{1} << 32)) throw InvalidArgument("PGM header field is too large");
        ++pos;
    }
    return value;
}

}  // namespace

PgmFile parse_pgm(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') throw InvalidArgument("not a binary PGM (P5) file");
    std::size_t pos = 2;
    const std::size_t width = read_field(bytes, pos);
    const std::size_t height = read_field(bytes, pos);
    const std::size_t maxval = read_field(bytes, pos);
    if (width == 0 || height == 0) throw InvalidArgument("PGM image is empty");
    if (maxval == 0 || maxval > 255) throw InvalidArgument("only 8-bit PGM images are supported");
    if (pos >= bytes.size() || !std::isspace(bytes[pos])) throw InvalidArgument("PGM header is truncated");
    ++pos;
    const std::size_t count = width * height;
    if (bytes.size() - pos < count) throw InvalidArgument("PGM raster is truncated");

    PgmFile file;
    file.header.assign(bytes.begin(), bytes.begin() + pos);
    file.image.width = width;
    file.image.height = height;
    file.image.pixels.assign(bytes.begin() + pos, bytes.begin() + pos + count);
    file.trailer.assign(bytes.begin() + pos + count, bytes.end());
    return file;
}

std::vector<std::uint8_t> write_pgm(const PgmFile& file) {
    std::vector<std::uint8_t> out(file.header);
    out.insert(out.end(), file.image.pixels.begin(), file.image.pixels.end());
    out.insert(out.end(), file.trailer.begin(), file.trailer.end());
    return out;
}

std::size_t tiles_across(const GrayImage& image) { return (image.width + kTileSide - 1) / kTileSide; }
std::size_t tiles_down(const GrayImage& image) { return (image.height + kTileSide - 1) / kTileSide; }

std::vector<std::uint8_t> tile_residuals(const GrayImage& image, std::size_t tile_x, std::size_t tile_y) {
    std::vector<std::uint8_t> tile(kTileSide * kTileSide);
    for (std::size_t y = 0; y < kTileSide; ++y) {
        const std::size_t sy = std::min(tile_y * kTileSide + y, image.height - 1);
        for (std::size_t x = 0; x < kTileSide; ++x) {
            const std::size_t sx = std::min(tile_x * kTileSide + x, image.width - 1);
            tile[y * kTileSide + x] = image.at(sx, sy);
        }
    }
    std::vector<std::uint8_t> residuals(tile.size());
    for (std::size_t y = 0; y < kTileSide; ++y)
        for (std::size_t x = 0; x < kTileSide; ++x) {
            std::uint8_t pred = 0;
            if (y > 0)
                pred = tile[(y - 1) * kTileSide + x];
            else if (x > 0)
                pred = tile[x - 1];
            residuals[y * kTileSide + x] = static_cast<std::uint8_t>(tile[y * kTileSide + x] - pred);
        }
    return residuals;
}

void restore_tile(GrayImage& image, std::size_t tile_x, std::size_t tile_y, std::span<const std::uint8_t> residuals) {
    if (residuals.size() != kTileSide * kTileSide) throw InvalidArgument("a tile holds 64x64 residuals");
    std::vector<std::uint8_t> tile(residuals.size());
    for (std::size_t y = 0; y < kTileSide; ++y)
        for (std::size_t x = 0; x < kTileSide; ++x) {
            std::uint8_t pred = 0;
            if (y > 0)
                pred = tile[(y - 1) * kTileSide + x];
            else if (x > 0)
                pred = tile[x - 1];
            tile[y * kTileSide + x] = static_cast<std::uint8_t>(residuals[y * kTileSide + x] + pred);
        }
    for (std::size_t y = 0; y < kTileSide; ++y) {
        const std::size_t iy = tile_y * kTileSide + y;
        if (iy >= image.height) break;
        for (std::size_t x = 0; x < kTileSide; ++x) {
            const std::size_t ix = tile_x * kTileSide + x;
            if (ix >= image.width) break;
            image.pixels[iy * image.width + ix] = tile[y * kTileSide + x];
        }
    }
}

}  // namespace ricemarlin
