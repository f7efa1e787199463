#include "abspolar/crc.hpp"

#include <stdexcept>

namespace abspolar {

std::uint32_t crc_polynomial(int crc_len) {
    switch (crc_len) {
        case 4: return 0x3;
        case 8: return 0x07;
        case 12: return 0x80F;
        case 16: return 0x1021;
        case 20: return 0x8F57B;
        case 24: return 0x864CFB;
        default: throw std::invalid_argument("unsupported CRC length " + std::to_string(crc_len));
    }
}

std::uint32_t crc_remainder(const BitVector& payload, int crc_len) {
    // MSB-first with the input folded into the feedback tap; after the last
    // payload bit the register holds payload(x) * x^len mod generator.
    const std::uint32_t poly = crc_polynomial(crc_len);
    const std::uint32_t mask = (1u << crc_len) - 1;
    std::uint32_t reg = 0;
    for (std::uint8_t bit : payload) {
        std::uint32_t fb = ((reg >> (crc_len - 1)) ^ bit) & 1;
        reg = (reg << 1) & mask;
        if (fb) reg ^= poly;
    }
    return reg;
}

BitVector crc_attach(const BitVector& payload, int crc_len) {
    if (crc_len == 0) return payload;
    std::uint32_t rem = crc_remainder(payload, crc_len);
    BitVector out = payload;
    for (int b = crc_len - 1; b >= 0; --b) out.push_back((rem >> b) & 1);
    return out;
}

bool crc_check(const BitVector& bits, int crc_len) {
    if (crc_len == 0) return true;
    if (bits.size() < static_cast<std::size_t>(crc_len)) return false;
    BitVector payload(bits.begin(), bits.end() - crc_len);
    std::uint32_t rem = crc_remainder(payload, crc_len);
    for (int b = 0; b < crc_len; ++b)
        if (((rem >> (crc_len - 1 - b)) & 1) != (bits[payload.size() + b] & 1)) return false;
    return true;
}

}  // namespace abspolar
