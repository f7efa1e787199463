#include "abspolar/simulate.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <memory>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "abspolar/construct.hpp"
#include "abspolar/crc.hpp"
#include "abspolar/encode.hpp"

namespace abspolar {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

TrialRng::TrialRng(std::uint64_t seed, std::uint64_t trial) {
    state_ = splitmix64(seed ^ splitmix64(trial + 0x5851f42d4c957f2dULL));
}

std::uint64_t TrialRng::next_u64() {
    state_ = splitmix64(state_);
    return state_;
}

double TrialRng::next_unit() { return (next_u64() >> 11) * 0x1.0p-53; }

int TrialRng::next_bit() { return static_cast<int>(next_u64() >> 63); }

double TrialRng::next_gauss() {
    // Box-Muller; one fresh pair per call keeps trials independent of call
    // parity.
    double u1 = next_unit();
    double u2 = next_unit();
    double radius = std::sqrt(-2.0 * std::log(1.0 - u1));
    return radius * std::cos(2.0 * std::numbers::pi * u2);
}

SclDecoder::Kind decoder_kind_for(const CodeSpec& spec) {
    return spec.has_swaps() ? SclDecoder::Kind::abs : SclDecoder::Kind::standard;
}

bool run_trial(const SimConfig& cfg, SclDecoder& decoder, std::uint64_t trial,
               BitVector* decoded_payload) {
    const CodeSpec& spec = cfg.spec;
    const long payload_len = spec.k - cfg.crc_len;
    TrialRng rng(cfg.seed, trial);

    BitVector payload(payload_len);
    for (long j = 0; j < payload_len; ++j) payload[j] = static_cast<std::uint8_t>(rng.next_bit());
    BitVector msg = crc_attach(payload, cfg.crc_len);
    BitVector cw = encode(spec, msg);

    ReceivedVector rx;
    rx.pairs.resize(spec.n);
    switch (cfg.channel.kind) {
        case ChannelDesc::Kind::bec: {
            const double eps = cfg.channel.param;
            for (long j = 0; j < spec.n; ++j) {
                if (rng.next_unit() < eps)
                    rx.pairs[j] = {0.5, 0.5};
                else
                    rx.pairs[j] = cw[j] ? std::array<double, 2>{0.0, 1.0}
                                        : std::array<double, 2>{1.0, 0.0};
            }
            break;
        }
        case ChannelDesc::Kind::bsc: {
            const double p = cfg.channel.param;
            for (long j = 0; j < spec.n; ++j) {
                int y = cw[j] ^ (rng.next_unit() < p ? 1 : 0);
                rx.pairs[j] = y ? std::array<double, 2>{p, 1.0 - p}
                                : std::array<double, 2>{1.0 - p, p};
            }
            break;
        }
        case ChannelDesc::Kind::awgn: {
            const double rate = static_cast<double>(spec.k) / static_cast<double>(spec.n);
            const double sigma = awgn_sigma(cfg.channel.param, rate);
            const double var = sigma * sigma;
            for (long j = 0; j < spec.n; ++j) {
                double y = (cw[j] ? -1.0 : 1.0) + sigma * rng.next_gauss();
                rx.pairs[j] = llr_to_pair(2.0 * y / var);
            }
            break;
        }
    }

    auto paths = decoder.decode_list(rx);
    std::size_t pick = crc_select(paths, cfg.crc_len);
    const BitVector& decided = paths[pick].message;
    bool error = false;
    for (long j = 0; j < payload_len; ++j)
        if (decided[j] != payload[j]) {
            error = true;
            break;
        }
    if (decoded_payload)
        decoded_payload->assign(decided.begin(), decided.begin() + payload_len);
    return error;
}

SimResult run_fer(const SimConfig& cfg) {
    validate(cfg.spec);
    if (cfg.max_trials < 1) throw std::invalid_argument("run_fer: trials must be >= 1");
    if (cfg.crc_len > 0) crc_polynomial(cfg.crc_len);  // reject unsupported lengths early
    if (cfg.spec.k <= cfg.crc_len && cfg.crc_len > 0)
        throw std::invalid_argument("run_fer: crc length leaves no payload");

    const int workers = thread_count(cfg.threads);
    // Fixed block size so the early-stop point does not depend on the worker
    // count.
    const long block = 1024;

    std::vector<std::unique_ptr<SclDecoder>> decoders(workers);
    const auto kind = decoder_kind_for(cfg.spec);

    long trials = 0, errors = 0;
    double decode_seconds = 0.0;
    while (trials < cfg.max_trials && errors < cfg.target_errors) {
        const long begin = trials;
        const long end = std::min(cfg.max_trials, begin + block);
        long block_errors = 0;
        double block_seconds = 0.0;
#pragma omp parallel num_threads(workers) reduction(+ : block_errors, block_seconds)
        {
#ifdef _OPENMP
            const int tid = omp_get_thread_num();
#else
            const int tid = 0;
#endif
            if (!decoders[tid]) decoders[tid] = std::make_unique<SclDecoder>(cfg.spec, cfg.list_size, kind);
#pragma omp for schedule(dynamic, 16)
            for (long t = begin; t < end; ++t) {
                auto t0 = std::chrono::steady_clock::now();
                bool err = run_trial(cfg, *decoders[tid], static_cast<std::uint64_t>(t));
                auto t1 = std::chrono::steady_clock::now();
                block_seconds += std::chrono::duration<double>(t1 - t0).count();
                block_errors += err ? 1 : 0;
            }
        }
        errors += block_errors;
        decode_seconds += block_seconds;
        trials = end;
    }

    SimResult res;
    res.trials = trials;
    res.errors = errors;
    res.fer = static_cast<double>(errors) / static_cast<double>(trials);
    auto [lo, hi] = wilson_interval(errors, trials);
    res.ci_lo = lo;
    res.ci_hi = hi;
    res.mean_decode_ms = 1000.0 * decode_seconds / static_cast<double>(trials);
    return res;
}

TimingResult time_decoder(const SimConfig& cfg, long frames, long warmup) {
    validate(cfg.spec);
    SclDecoder decoder(cfg.spec, cfg.list_size, decoder_kind_for(cfg.spec));
    std::vector<double> ms;
    ms.reserve(frames);
    for (long t = 0; t < warmup + frames; ++t) {
        auto t0 = std::chrono::steady_clock::now();
        run_trial(cfg, decoder, static_cast<std::uint64_t>(t));
        auto t1 = std::chrono::steady_clock::now();
        if (t >= warmup) ms.push_back(1000.0 * std::chrono::duration<double>(t1 - t0).count());
    }
    TimingResult out;
    out.frames = frames;
    for (double v : ms) out.mean_ms += v;
    out.mean_ms /= static_cast<double>(ms.size());
    std::nth_element(ms.begin(), ms.begin() + ms.size() / 2, ms.end());
    out.median_ms = ms[ms.size() / 2];
    return out;
}

std::pair<double, double> wilson_interval(long errors, long trials) {
    const double z = 1.959963984540054;
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(errors) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    double lo = errors == 0 ? 0.0 : std::max(0.0, center - half);
    double hi = errors == trials ? 1.0 : std::min(1.0, center + half);
    return {lo, hi};
}

std::string SimResult::csv_header() { return "trials,errors,fer,ci_lo,ci_hi,mean_decode_ms"; }

std::string SimResult::csv_row() const {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%ld,%ld,%.17g,%.17g,%.17g,%.17g", trials, errors, fer, ci_lo,
                  ci_hi, mean_decode_ms);
    return buf;
}

SimResult SimResult::from_csv_row(const std::string& row) {
    SimResult res;
    if (std::sscanf(row.c_str(), "%ld,%ld,%lg,%lg,%lg,%lg", &res.trials, &res.errors, &res.fer,
                    &res.ci_lo, &res.ci_hi, &res.mean_decode_ms) != 6)
        throw std::invalid_argument("malformed result row: " + row);
    return res;
}

}  // namespace abspolar
