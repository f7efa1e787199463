#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "abspolar/channel.hpp"

namespace abspolar {

// 4-ary-input channel over a finite output alphabet:
// probs[y][2*u1 + u2] = V(y | u1, u2).
struct AdjacentBitsChannel {
    std::vector<std::array<double, 4>> probs;

    std::size_t num_outputs() const { return probs.size(); }
};

// One-layer transforms of a pair channel. Two independent copies of V feed a
// polar butterfly; "down"/"mid"/"up" are the pair channels seen by the
// successive decoder for bit pairs (1,2), (2,3), (3,4) of the four combined
// inputs. The swapped_* variants exchange the middle two bits before the
// butterfly.
enum class PairTransform {
    down,
    mid,
    up,
    swapped_down,
    swapped_mid,
    swapped_up,
};

// V_1 for a pair of uses of W: V(y1,y2 | u1,u2) = W(y1|u1^u2) W(y2|u2).
AdjacentBitsChannel init_pair(const BmsChannel& w);

// Materialized single transform; outputs with total mass below 1e-15 are
// dropped to bound alphabet growth.
AdjacentBitsChannel pair_transform(const AdjacentBitsChannel& v, PairTransform kind);

struct DbTriple {
    AdjacentBitsChannel down, mid, up;
};
DbTriple db_transform(const AdjacentBitsChannel& v);
DbTriple sdb_transform(const AdjacentBitsChannel& v);

// Merge output symbols with similar posteriors until at most mu remain
// (identity when num_outputs() <= mu). Requires mu >= 8.
AdjacentBitsChannel quantize(const AdjacentBitsChannel& v, std::size_t mu);

// transform followed by quantize, without materializing the intermediate
// alphabet. Bit-identical to quantize(pair_transform(v, kind), mu).
AdjacentBitsChannel transform_quantized(const AdjacentBitsChannel& v, PairTransform kind,
                                        std::size_t mu);

// Split capacities (I_first, I_second) of the raw (unquantized) transform,
// accumulated on the fly.
std::array<double, 2> transform_split_capacities(const AdjacentBitsChannel& v,
                                                 PairTransform kind);

// The two bit-channels induced by V: first marginalizes the second input,
// second conditions on the first (its outputs carry that bit).
struct BitChannelPair {
    BmsChannel first, second;
};
BitChannelPair split(const AdjacentBitsChannel& v);

std::array<double, 2> split_capacities(const AdjacentBitsChannel& v);

// I_first(1-I_first) + I_second(1-I_second); 0 means fully polarized.
double g_metric(const AdjacentBitsChannel& v);

// I((U1,U2); Y) for uniform inputs, in bits.
double pair_mutual_information(const AdjacentBitsChannel& v);

bool is_valid_channel(const AdjacentBitsChannel& v, double tol = 1e-9);

}  // namespace abspolar
