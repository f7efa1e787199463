#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "abspolar/code_spec.hpp"
#include "abspolar/encode.hpp"

namespace abspolar {

// Per-symbol channel evidence: pairs[j] = (W(y_j|0), W(y_j|1)), any positive
// scale. Decoders normalize internally, so only ratios matter.
struct ReceivedVector {
    std::vector<std::array<double, 2>> pairs;

    static ReceivedVector from_llrs(std::span<const double> llrs);
    std::size_t size() const { return pairs.size(); }
};

struct DecodePath {
    BitVector codeword;  // n bits
    BitVector message;   // k bits
    double score = 0;    // ln-likelihood of the codeword under sum-normalized evidence
};

// High-water marks of the probability/bit memory pools, per layer, plus the
// proven bounds they must respect.
struct PoolStats {
    std::vector<int> max_nd;
    std::vector<int> max_nb;
    int nd_bound = 0;
    int nb_bound = 0;

    bool within_bounds() const;
};

// Successive-cancellation list decoder with preallocated pools. One instance
// is single-threaded and reusable across calls; use one per worker.
class SclDecoder {
  public:
    enum class Kind {
        standard,     // classic single-bit-channel decoder; swap sets must be empty
        double_bits,  // pair-channel decoder; swap sets must be empty
        abs,          // pair-channel decoder handling swapped layers
    };

    SclDecoder(CodeSpec spec, int list_size, Kind kind);

    // All surviving paths in list order.
    std::vector<DecodePath> decode_list(const ReceivedVector& rx);
    // Highest-score path (ties to the lowest list index).
    DecodePath decode(const ReceivedVector& rx);

    const PoolStats& stats() const { return stats_; }
    const CodeSpec& spec() const { return spec_; }
    int list_size() const { return list_; }

  private:
    struct QueueEntry {
        double key;
        int path;
        std::uint8_t a, b;
    };

    CodeSpec spec_;
    int list_;
    Kind kind_;
    int m_ = 0;
    long n_ = 0;
    std::vector<std::uint8_t> info_;             // info_[i] for 1-based bit i
    std::vector<std::vector<std::uint8_t>> swap_flag_;  // [layer][pos]: pos in that layer's swap set

    std::vector<std::vector<double>> dpool_;       // [layer]: prob slots
    std::vector<std::vector<std::uint8_t>> bpool_; // [layer]: bit slots
    std::vector<int> nd_, nb_;
    std::vector<double*> p_, pb_;
    std::vector<std::uint8_t*> r_, rb_, h_, hb_;
    std::vector<double> chain_, chainb_;  // running log-normalizers per (path, layer)
    std::vector<double> metric_;          // last boundary key per path
    int live_ = 0;                        // current list size
    std::vector<QueueEntry> queue_;
    PoolStats stats_;

    std::size_t at(int path, int layer) const { return static_cast<std::size_t>(path) * (m_ + 1) + layer; }
    long rows(int layer) const { return n_ >> layer; }
    int width() const { return kind_ == Kind::standard ? 2 : 4; }

    double* allocate_prob(int layer);
    std::uint8_t* allocate_bit(int layer, int count);
    bool is_swap(int layer, long pos) const;

    void prune(bool two_bits);
    void push(double key, int path, int a, int b);

    // classic decoder
    void decode_channel_std(int layer, long i);
    void boundary_std(long i);
    void transform_single(int target, bool plus);

    // pair decoders
    void decode_channel_pair(int layer, long i);
    void decode_original(int layer, long i);
    void decode_swapped(int layer, long i);
    void boundary_pair(long i);
    enum class TKind { down, mid, up, swapped_down, swapped_mid, swapped_up };
    void transform_pair(int target, TKind kind);

    std::vector<DecodePath> finish(const ReceivedVector& rx, int root_layer);
};

// Convenience wrappers around the workspace.
DecodePath scl_decode_standard(const CodeSpec& spec, const ReceivedVector& rx, int list_size);
DecodePath scl_decode_db(const CodeSpec& spec, const ReceivedVector& rx, int list_size);
DecodePath scl_decode_abs(const CodeSpec& spec, const ReceivedVector& rx, int list_size);

// Highest-score candidate whose message passes the CRC; falls back to the
// overall highest score when none pass. Returns an index into candidates.
std::size_t crc_select(std::span<const DecodePath> candidates, int crc_len);

// ln-likelihood of a codeword under sum-normalized evidence; the scale the
// decoders report.
double codeword_log_likelihood(const ReceivedVector& rx, const BitVector& codeword);

struct MlResult {
    BitVector codeword;
    BitVector message;
    double log_likelihood = 0;
};

// Exact maximum-likelihood decision by enumerating all 2^k codewords (k <= 20).
MlResult ml_decode_bruteforce(const CodeSpec& spec, const ReceivedVector& rx);

}  // namespace abspolar
