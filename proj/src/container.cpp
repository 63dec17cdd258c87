#include "ricemarlin/container.hpp"

#include <array>
#include <sstream>

#include "le_io.hpp"
#include "ricemarlin/errors.hpp"
#include "ricemarlin/parallel.hpp"

namespace ricemarlin {

namespace {

constexpr std::array<std::uint8_t, 4> kMagic{'R', 'M', 'C', 'F'};

void write_header(std::vector<std::uint8_t>& out, const ContainerInfo& info, std::size_t block_count) {
    detail::LeWriter w(out);
    for (auto c : kMagic) w.u8(c);
    w.u8(kContainerVersion);
    w.u8(static_cast<std::uint8_t>(info.mode));
    w.u8(static_cast<std::uint8_t>(info.key_bits));
    w.u8(static_cast<std::uint8_t>(info.overlap_bits));
    w.u64(info.set_digest);
    w.u32(static_cast<std::uint32_t>(info.block_size));
    w.u64(info.total);
    if (info.mode == ContainerMode::Image) {
        w.u32(static_cast<std::uint32_t>(info.width));
        w.u32(static_cast<std::uint32_t>(info.height));
        w.u32(static_cast<std::uint32_t>(info.pgm_header.size()));
        w.bytes(info.pgm_header);
        w.u32(static_cast<std::uint32_t>(info.pgm_trailer.size()));
        w.bytes(info.pgm_trailer);
    }
    w.u64(block_count);
}

std::vector<std::uint8_t> assemble(const ContainerInfo& info, const std::vector<std::vector<std::uint8_t>>& blocks) {
    std::vector<std::uint8_t> out;
    std::size_t payload = 0;
    for (const auto& b : blocks) payload += 4 + b.size();
    out.reserve(64 + info.pgm_header.size() + info.pgm_trailer.size() + payload);
    write_header(out, info, blocks.size());
    detail::LeWriter w(out);
    for (const auto& b : blocks) {
        w.u32(static_cast<std::uint32_t>(b.size()));
        w.bytes(b);
    }
    return out;
}

ContainerInfo base_info(const BlockCodec& codec) {
    ContainerInfo info;
    info.key_bits = codec.set().key_bits();
    info.overlap_bits = codec.set().overlap_bits();
    info.set_digest = codec.set_digest();
    return info;
}

}  // namespace

std::vector<std::uint8_t> compress_bytes(const BlockCodec& codec, std::span<const std::uint8_t> data,
                                         std::size_t block_size, unsigned threads) {
    if (block_size == 0 || block_size > 0xFFFFFFFFu) throw InvalidArgument("block size must be in [1, 2^32)");
    ContainerInfo info = base_info(codec);
    info.block_size = block_size;
    info.total = data.size();
    const std::size_t count = (data.size() + block_size - 1) / block_size;
    std::vector<std::vector<std::uint8_t>> blocks(count);
    parallel_for(count, threads, [&](std::size_t i) {
        const auto chunk = data.subspan(i * block_size, std::min(block_size, data.size() - i * block_size));
        blocks[i] = codec.compress(chunk);
    });
    return assemble(info, blocks);
}

std::vector<std::uint8_t> compress_image(const BlockCodec& codec, const PgmFile& file, unsigned threads) {
    const auto& image = file.image;
    ContainerInfo info = base_info(codec);
    info.mode = ContainerMode::Image;
    info.block_size = kTileSide * kTileSide;
    info.total = image.width * image.height;
    info.width = image.width;
    info.height = image.height;
    info.pgm_header = file.header;
    info.pgm_trailer = file.trailer;
    const std::size_t across = tiles_across(image);
    const std::size_t count = across * tiles_down(image);
    std::vector<std::vector<std::uint8_t>> blocks(count);
    parallel_for(count, threads, [&](std::size_t i) {
        blocks[i] = codec.compress(tile_residuals(image, i % across, i / across));
    });
    return assemble(info, blocks);
}

ContainerInfo read_container_info(std::span<const std::uint8_t> container) {
    detail::LeReader r(container, "container");
    const auto magic = r.bytes(4);
    if (!std::equal(magic.begin(), magic.end(), kMagic.begin())) throw CorruptData("not a compressed container");
    const auto version = r.u8();
    if (version != kContainerVersion) {
        std::ostringstream os;
        os << "unsupported container version " << unsigned{version};
        throw CorruptData(os.str());
    }
    ContainerInfo info;
    const auto mode = r.u8();
    if (mode > 1) throw CorruptData("unknown container mode");
    info.mode = static_cast<ContainerMode>(mode);
    info.key_bits = r.u8();
    info.overlap_bits = r.u8();
    info.set_digest = r.u64();
    info.block_size = r.u32();
    info.total = r.u64();
    if (info.block_size == 0) throw CorruptData("container block size is zero");
    std::size_t expected_blocks = (info.total + info.block_size - 1) / info.block_size;
    if (info.mode == ContainerMode::Image) {
        info.width = r.u32();
        info.height = r.u32();
        const auto header = r.bytes(r.u32());
        info.pgm_header.assign(header.begin(), header.end());
        const auto trailer = r.bytes(r.u32());
        info.pgm_trailer.assign(trailer.begin(), trailer.end());
        if (info.block_size != kTileSide * kTileSide || info.width * info.height != info.total)
            throw CorruptData("inconsistent image geometry");
        expected_blocks = ((info.width + kTileSide - 1) / kTileSide) * ((info.height + kTileSide - 1) / kTileSide);
    }
    const std::uint64_t count = r.u64();
    if (count != expected_blocks) throw CorruptData("block count does not match the original size");
    info.blocks.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t length = r.u32();
        const std::size_t offset = r.position();
        r.bytes(length);
        std::size_t original = info.block_size;
        if (info.mode == ContainerMode::Bytes && i + 1 == count) original = info.total - i * info.block_size;
        info.blocks.push_back({offset, length, original});
    }
    if (r.remaining() != 0) throw CorruptData("trailing data after the last block");
    return info;
}

std::vector<std::uint8_t> decompress_container(const BlockCodec& codec, std::span<const std::uint8_t> container,
                                               unsigned threads) {
    const ContainerInfo info = read_container_info(container);
    if (info.key_bits != codec.set().key_bits() || info.overlap_bits != codec.set().overlap_bits() ||
        info.set_digest != codec.set_digest())
        throw InvalidArgument("container was compressed with a different dictionary set");

    auto block_bytes = [&](const BlockRef& b) { return container.subspan(b.offset, b.length); };
    if (info.mode == ContainerMode::Bytes) {
        std::vector<std::uint8_t> out(info.total);
        parallel_for(info.blocks.size(), threads, [&](std::size_t i) {
            const auto& b = info.blocks[i];
            const auto decoded = codec.decompress(block_bytes(b), b.original);
            std::copy(decoded.begin(), decoded.end(), out.begin() + static_cast<std::ptrdiff_t>(i * info.block_size));
        });
        return out;
    }

    PgmFile file;
    file.header = info.pgm_header;
    file.trailer = info.pgm_trailer;
    file.image.width = info.width;
    file.image.height = info.height;
    file.image.pixels.resize(info.total);
    const std::size_t across = tiles_across(file.image);
    parallel_for(info.blocks.size(), threads, [&](std::size_t i) {
        const auto& b = info.blocks[i];
        restore_tile(file.image, i % across, i / across, codec.decompress(block_bytes(b), b.original));
    });
    return write_pgm(file);
}

}  // namespace ricemarlin
