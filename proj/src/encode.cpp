#include "abspolar/encode.hpp"

#include <stdexcept>
#include <utility>

namespace abspolar {

BitVector scatter_message(const CodeSpec& spec, const BitVector& message) {
    if (static_cast<long>(message.size()) != spec.k)
        throw std::invalid_argument("message length differs from k");
    BitVector u(spec.n, 0);
    for (std::size_t j = 0; j < message.size(); ++j) u[spec.info_set[j] - 1] = message[j] & 1;
    return u;
}

BitVector extract_message(const CodeSpec& spec, const BitVector& u) {
    if (static_cast<long>(u.size()) != spec.n)
        throw std::invalid_argument("vector length differs from n");
    BitVector msg(spec.k);
    for (long j = 0; j < spec.k; ++j) msg[j] = u[spec.info_set[j] - 1] & 1;
    return msg;
}

void transform_in_place(const CodeSpec& spec, BitVector& bits) {
    const long n = spec.n;
    if (static_cast<long>(bits.size()) != n) throw std::invalid_argument("length differs from n");
    const int m = log2_exact(n);
    for (int stage = 0; stage < m; ++stage) {
        const long t = 1L << stage;
        const long n0 = n >> stage;
        const auto& swaps = spec.perms.at_size(n0);
        for (long h = 0; h < t; ++h) {
            for (int v : swaps) std::swap(bits[h + (v - 1) * t], bits[h + static_cast<long>(v) * t]);
            for (long j = 0; j < n0 / 2; ++j) bits[h + 2 * j * t] ^= bits[h + (2 * j + 1) * t];
        }
    }
}

void inverse_transform_in_place(const CodeSpec& spec, BitVector& bits) {
    const long n = spec.n;
    if (static_cast<long>(bits.size()) != n) throw std::invalid_argument("length differs from n");
    const int m = log2_exact(n);
    // Stages in reverse; within a stage the butterfly and the permutation are
    // both involutions, applied in swapped order.
    for (int stage = m - 1; stage >= 0; --stage) {
        const long t = 1L << stage;
        const long n0 = n >> stage;
        const auto& swaps = spec.perms.at_size(n0);
        for (long h = 0; h < t; ++h) {
            for (long j = 0; j < n0 / 2; ++j) bits[h + 2 * j * t] ^= bits[h + (2 * j + 1) * t];
            for (int v : swaps) std::swap(bits[h + (v - 1) * t], bits[h + static_cast<long>(v) * t]);
        }
    }
}

BitVector encode(const CodeSpec& spec, const BitVector& message) {
    validate(spec.perms);
    BitVector c = scatter_message(spec, message);
    transform_in_place(spec, c);
    return c;
}

BitVector inverse_transform(const CodeSpec& spec, const BitVector& codeword) {
    BitVector u = codeword;
    inverse_transform_in_place(spec, u);
    return u;
}

std::vector<BitVector> generator_matrix(const CodeSpec& spec) {
    if (spec.n > 4096) throw std::invalid_argument("generator matrix capped at n = 4096");
    // G_2 = [[1,0],[1,1]]; each doubling takes the Kronecker product with G_2
    // and then swaps the rows named by that layer's swap set.
    std::vector<BitVector> g = {{1, 0}, {1, 1}};
    for (long n0 = 4; n0 <= spec.n; n0 *= 2) {
        std::vector<BitVector> next(n0, BitVector(n0, 0));
        const long half = n0 / 2;
        for (long i = 0; i < half; ++i)
            for (long j = 0; j < half; ++j) {
                if (!g[i][j]) continue;
                // Kronecker block for G_2 at (2i, 2j)
                next[2 * i][2 * j] = 1;
                next[2 * i + 1][2 * j] = 1;
                next[2 * i + 1][2 * j + 1] = 1;
            }
        for (int v : spec.perms.at_size(n0)) std::swap(next[v - 1], next[v]);
        g = std::move(next);
    }
    return g;
}

std::string bits_to_hex(const BitVector& bits) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve((bits.size() + 3) / 4);
    for (std::size_t i = 0; i < bits.size(); i += 4) {
        int v = 0;
        for (std::size_t j = 0; j < 4; ++j) v = (v << 1) | (i + j < bits.size() ? (bits[i + j] & 1) : 0);
        out.push_back(digits[v]);
    }
    return out;
}

BitVector hex_to_bits(const std::string& hex, std::size_t nbits) {
    if (hex.size() * 4 < nbits) throw std::invalid_argument("hex string too short");
    BitVector bits(nbits, 0);
    for (std::size_t i = 0; i < nbits; ++i) {
        char c = hex[i / 4];
        int v = c >= '0' && c <= '9'   ? c - '0'
                : c >= 'a' && c <= 'f' ? c - 'a' + 10
                : c >= 'A' && c <= 'F' ? c - 'A' + 10
                                       : -1;
        if (v < 0) throw std::invalid_argument("bad hex digit");
        bits[i] = (v >> (3 - i % 4)) & 1;
    }
    return bits;
}

}  // namespace abspolar
