#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "abspolar/adjacent.hpp"
#include "abspolar/code_spec.hpp"

namespace abspolar {

// One layer of adjacent-bits-channels. channels[i] is the pair channel for
// bits (i, i+1); slot 0 is unused so indices match the 1-based bit positions.
struct LayerChannels {
    std::vector<AdjacentBitsChannel> channels;

    long layer_size() const { return static_cast<long>(channels.size()); }
};

// Polarization gain of swapping the middle bit pair under this channel:
// g(V^mid) - g(V^swapped_mid). Positive means the swap helps.
double score(const AdjacentBitsChannel& v);

// Maximize the sum of positive scores over positions with pairwise distance
// >= 2. scores[j-1] is the score of position j; returns chosen positions
// (1-based, sorted).
std::vector<int> select_swaps(std::span<const double> scores);

// Evolve one layer: prev holds channels for layer size n0/2, swaps is the
// layer-n0 swap set (validated before any computation). Every output channel
// is quantized to at most mu symbols.
LayerChannels evolve_layer(const LayerChannels& prev, const std::vector<int>& swaps,
                           std::size_t mu);

struct ConstructionResult {
    CodeSpec spec;
    std::vector<double> capacities;  // capacities[i-1] = I of bit-channel i
};

ConstructionResult construct(long n, long k, const BmsChannel& w, std::size_t mu,
                             CodeFamily family);

CodeSpec abs_construct(long n, long k, const BmsChannel& w, std::size_t mu);
CodeSpec standard_construct(long n, long k, const BmsChannel& w, std::size_t mu);

// Pick the k most reliable bit positions; capacity ties go to the larger
// index. Returns sorted 1-based positions.
std::vector<int> select_info_set(std::span<const double> capacities, long k);

// Library-wide worker count: requested if positive, else the
// ABS_POLAR_THREADS environment variable, else all hardware threads.
int thread_count(int requested = 0);

inline constexpr std::size_t kDefaultMu = 250000;

}  // namespace abspolar
