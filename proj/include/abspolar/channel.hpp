#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace abspolar {

// Finite binary-input memoryless symmetric channel stored as a transition
// table: probs[y][x] = W(y|x).
struct BmsChannel {
    std::vector<std::array<double, 2>> probs;

    std::size_t num_outputs() const { return probs.size(); }
};

// Binary erasure channel with outputs {0, ?, 1}.
BmsChannel make_bec(double eps);

// Binary symmetric channel with crossover probability p <= 1/2.
BmsChannel make_bsc(double p);

// BPSK over AWGN at the given Eb/N0 (dB) and code rate, with the real output
// axis partitioned into `levels` LLR bins (levels-2 uniform bins over
// [-8/sigma^2, 8/sigma^2] plus two overflow tails). levels == 2 is the
// hard-decision channel.
BmsChannel make_awgn(double ebn0_db, double rate, int levels);

// Mutual information I(X;Y) in bits for a uniform input.
double capacity(const BmsChannel& w);

// Row-stochasticity, nonnegativity, and output symmetry: some involution pi
// of the outputs satisfies W(y|0) = W(pi(y)|1).
bool is_valid_channel(const BmsChannel& w, double tol = 1e-9);

// Merge outputs with similar posteriors until at most mu remain.
// Identity when num_outputs() <= mu.
BmsChannel quantize(const BmsChannel& w, std::size_t mu);

double awgn_sigma(double ebn0_db, double rate);

inline constexpr double kLlrClamp = 40.0;

double clamp_llr(double llr);

// (W(y|0), W(y|1)) pair for a received symbol given its LLR ln(p0/p1),
// normalized to sum 1.
std::array<double, 2> llr_to_pair(double llr);

// Received-vector carrier for the CLI: one LLR per channel use.
using LlrVector = std::vector<double>;

// Channel descriptor strings: "bec:<eps>", "bsc:<p>", "awgn:<ebn0_db>".
struct ChannelDesc {
    enum class Kind { bec, bsc, awgn };
    Kind kind = Kind::bec;
    double param = 0.0;
};

ChannelDesc parse_channel_desc(const std::string& text);
std::string to_string(const ChannelDesc& desc);

// Build the finite-alphabet channel a descriptor denotes. rate and
// awgn_levels only matter for AWGN.
BmsChannel build_channel(const ChannelDesc& desc, double rate, int awgn_levels);

}  // namespace abspolar
