#pragma once

#include <cstdint>

#include "abspolar/encode.hpp"

namespace abspolar {

// Supported CRC lengths and their generator polynomials (low bits, without
// the leading term). Length 0 is a pass-through.
//   4: 0x3,  8: 0x07,  12: 0x80F,  16: 0x1021,  20: 0x8F57B,  24: 0x864CFB
std::uint32_t crc_polynomial(int crc_len);  // throws for unsupported lengths

// Remainder of payload * x^crc_len modulo the generator (MSB-first, zero
// init, no reflection).
std::uint32_t crc_remainder(const BitVector& payload, int crc_len);

// payload -> payload || crc
BitVector crc_attach(const BitVector& payload, int crc_len);

// bits = payload || crc
bool crc_check(const BitVector& bits, int crc_len);

}  // namespace abspolar
