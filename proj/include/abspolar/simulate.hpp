#pragma once

#include <cstdint>
#include <string>

#include "abspolar/channel.hpp"
#include "abspolar/code_spec.hpp"
#include "abspolar/decode.hpp"

namespace abspolar {

struct SimConfig {
    CodeSpec spec;
    ChannelDesc channel;
    int list_size = 32;
    int crc_len = 0;
    long max_trials = 100000;
    long target_errors = 100;  // early stop once reached (block granularity)
    std::uint64_t seed = 1;
    int threads = 0;  // 0 = auto
};

struct SimResult {
    long trials = 0;
    long errors = 0;
    double fer = 0;
    double ci_lo = 0;  // Wilson 95%
    double ci_hi = 0;
    double mean_decode_ms = 0;

    static std::string csv_header();
    std::string csv_row() const;
    static SimResult from_csv_row(const std::string& row);
};

// Monte-Carlo frame-error-rate estimate. Every random draw is a deterministic
// function of (seed, trial index), so results do not depend on the worker
// count.
SimResult run_fer(const SimConfig& cfg);

struct TimingResult {
    double mean_ms = 0;
    double median_ms = 0;
    long frames = 0;
};

// Per-frame decode wall time over `frames` decodes after `warmup` discarded
// ones; single-threaded.
TimingResult time_decoder(const SimConfig& cfg, long frames = 1000, long warmup = 50);

// Deterministic per-trial generator stream.
std::uint64_t splitmix64(std::uint64_t x);

class TrialRng {
  public:
    TrialRng(std::uint64_t seed, std::uint64_t trial);
    std::uint64_t next_u64();
    double next_unit();    // [0, 1)
    int next_bit();
    double next_gauss();   // standard normal

  private:
    std::uint64_t state_;
};

// One transmit/noise/decode round; exposed so tests and tools can replay
// single trials. Returns true on frame error and fills decoded if nonnull.
bool run_trial(const SimConfig& cfg, SclDecoder& decoder, std::uint64_t trial,
               BitVector* decoded_payload = nullptr);

SclDecoder::Kind decoder_kind_for(const CodeSpec& spec);

// Wilson 95% interval for e errors in t trials.
std::pair<double, double> wilson_interval(long errors, long trials);

}  // namespace abspolar
