#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "abspolar/code_spec.hpp"

namespace abspolar {

using BitVector = std::vector<std::uint8_t>;

// Place the k message bits at the information positions of a length-n vector
// (frozen positions are zero), and the reverse.
BitVector scatter_message(const CodeSpec& spec, const BitVector& message);
BitVector extract_message(const CodeSpec& spec, const BitVector& u);

// Full message-domain -> codeword-domain transform and its inverse, in place.
// O(n log n): per stage, the layer permutation on each strided subsequence
// followed by the butterfly additions.
void transform_in_place(const CodeSpec& spec, BitVector& bits);
void inverse_transform_in_place(const CodeSpec& spec, BitVector& bits);

// Encode k message bits into an n-bit codeword.
BitVector encode(const CodeSpec& spec, const BitVector& message);

// Recover the message vector u (length n) from a codeword.
BitVector inverse_transform(const CodeSpec& spec, const BitVector& codeword);

// Dense generator matrix, rows[i][j] over GF(2); testing oracle, n <= 4096.
std::vector<BitVector> generator_matrix(const CodeSpec& spec);

// Hex <-> bit helpers for the CLI (big-endian: first bit is the high bit of
// the first hex digit; the last digit is zero-padded).
std::string bits_to_hex(const BitVector& bits);
BitVector hex_to_bits(const std::string& hex, std::size_t nbits);

}  // namespace abspolar
