#include "ricemarlin/bit_io.hpp"

#include <algorithm>
#include <sstream>

namespace ricemarlin {

std::vector<std::uint8_t> pack_reminders(std::span<const std::uint8_t> message, unsigned shift) {
    if (shift > 8) throw InvalidArgument("shift must be in [0, 8]");
    if (shift == 0) return {};
    if (shift == 8) return {message.begin(), message.end()};
    std::vector<std::uint8_t> out;
    out.reserve(reminder_bytes(message.size(), shift));
    BitWriter writer(out);
    for (auto x : message) writer.put(x, shift);
    writer.finish();
    return out;
}

std::vector<std::uint8_t> unpack_reminders(std::span<const std::uint8_t> field, std::size_t n, unsigned shift) {
    if (shift > 8) throw InvalidArgument("shift must be in [0, 8]");
    if (field.size() != reminder_bytes(n, shift)) {
        std::ostringstream os;
        os << "reminder section holds " << field.size() << " bytes, expected " << reminder_bytes(n, shift);
        throw CorruptData(os.str());
    }
    if (shift == 0) return std::vector<std::uint8_t>(n, 0);
    if (shift == 8) return {field.begin(), field.end()};
    std::vector<std::uint8_t> out(n);
    BitReader reader(field);
    for (auto& r : out) r = static_cast<std::uint8_t>(reader.get(shift));
    return out;
}

}  // namespace ricemarlin
