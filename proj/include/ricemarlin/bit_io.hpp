#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ricemarlin/errors.hpp"

namespace ricemarlin {

/// Appends bit fields to a byte vector, most significant bit first. The final
/// byte is zero padded by finish().
class BitWriter {
public:
    explicit BitWriter(std::vector<std::uint8_t>& out) : out_(out) {}
    ~BitWriter() { finish(); }

    BitWriter(const BitWriter&) = delete;
    BitWriter& operator=(const BitWriter&) = delete;

    /// Writes the low `bits` bits of `value`; bits <= 32.
    void put(std::uint32_t value, unsigned bits) {
        acc_ = (acc_ << bits) | (value & ((std::uint64_t{1} << bits) - 1u));
        pending_ += bits;
        while (pending_ >= 8) {
            pending_ -= 8;
            out_.push_back(static_cast<std::uint8_t>(acc_ >> pending_));
        }
    }

    void finish() {
        if (pending_ > 0) {
            out_.push_back(static_cast<std::uint8_t>(acc_ << (8 - pending_)));
            pending_ = 0;
        }
        acc_ = 0;
    }

private:
    std::vector<std::uint8_t>& out_;
    std::uint64_t acc_ = 0;
    unsigned pending_ = 0;
};

/// Reads MSB-first bit fields from a byte span.
class BitReader {
public:
    explicit BitReader(std::span<const std::uint8_t> in) : in_(in) {}

    /// Reads `bits` bits (<= 32). Throws CorruptData past the end of input.
    std::uint32_t get(unsigned bits) {
        while (available_ < bits) {
            if (pos_ >= in_.size()) throw CorruptData("bit stream exhausted");
            acc_ = (acc_ << 8) | in_[pos_++];
            available_ += 8;
        }
        available_ -= bits;
        return static_cast<std::uint32_t>((acc_ >> available_) & ((std::uint64_t{1} << bits) - 1u));
    }

    std::size_t bits_remaining() const { return (in_.size() - pos_) * 8 + available_; }
    std::size_t bytes_consumed() const { return pos_; }

private:
    std::span<const std::uint8_t> in_;
    std::size_t pos_ = 0;
    std::uint64_t acc_ = 0;
    unsigned available_ = 0;
};

/// Concatenates the `shift` low bits of each byte, MSB first, zero padding
/// the final byte. shift must be in [0, 8].
std::vector<std::uint8_t> pack_reminders(std::span<const std::uint8_t> message, unsigned shift);

/// Inverse of pack_reminders for `n` symbols. Throws CorruptData when the
/// field is not exactly ceil(n * shift / 8) bytes.
std::vector<std::uint8_t> unpack_reminders(std::span<const std::uint8_t> field, std::size_t n, unsigned shift);

inline std::size_t reminder_bytes(std::size_t n, unsigned shift) { return (n * shift + 7) / 8; }

}  // namespace ricemarlin
