#pragma once

#include <cstdint>
#include <random>

#include "abspolar/adjacent.hpp"
#include "abspolar/code_spec.hpp"
#include "abspolar/decode.hpp"
#include "abspolar/encode.hpp"

namespace testutil {

using namespace abspolar;

inline std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline double uniform(std::mt19937_64& rng) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

// Random pair channel: nonnegative table with each input column summing to 1.
inline AdjacentBitsChannel random_pair_channel(std::size_t outputs, std::mt19937_64& rng) {
    AdjacentBitsChannel v;
    v.probs.assign(outputs, {0, 0, 0, 0});
    std::array<double, 4> sums{0, 0, 0, 0};
    for (auto& row : v.probs)
        for (int u = 0; u < 4; ++u) {
            row[u] = uniform(rng);
            sums[u] += row[u];
        }
    for (auto& row : v.probs)
        for (int u = 0; u < 4; ++u) row[u] /= sums[u];
    return v;
}

inline BitVector random_bits(long count, std::mt19937_64& rng) {
    BitVector bits(count);
    for (auto& b : bits) b = static_cast<std::uint8_t>(rng() & 1);
    return bits;
}

// Random code spec with valid layered swap sets.
inline CodeSpec random_spec(long n, std::mt19937_64& rng, double swap_density = 0.3) {
    CodeSpec spec;
    spec.n = n;
    spec.perms.sets.assign(log2_exact(n), {});
    for (long n0 = 4; n0 <= n; n0 *= 2) {
        auto& set = spec.perms.at_size(n0);
        int last = -10;
        for (int v = 2; v <= n0 - 2; v += 2) {
            if (v - last < 4) continue;
            if (uniform(rng) < swap_density) {
                set.push_back(v);
                last = v;
            }
        }
    }
    long k = 1 + static_cast<long>(rng() % n);
    std::vector<int> all(n);
    for (long i = 0; i < n; ++i) all[i] = static_cast<int>(i + 1);
    std::shuffle(all.begin(), all.end(), rng);
    spec.info_set.assign(all.begin(), all.begin() + k);
    std::sort(spec.info_set.begin(), spec.info_set.end());
    spec.k = k;
    validate(spec);
    return spec;
}

inline ReceivedVector bsc_receive(const BitVector& cw, double p, std::mt19937_64& rng) {
    ReceivedVector rx;
    rx.pairs.reserve(cw.size());
    for (auto bit : cw) {
        int y = (bit & 1) ^ (uniform(rng) < p ? 1 : 0);
        rx.pairs.push_back(y ? std::array<double, 2>{p, 1.0 - p}
                             : std::array<double, 2>{1.0 - p, p});
    }
    return rx;
}

// Continuous-evidence channel (BPSK over gaussian noise); likelihood ties
// have probability zero, unlike crossover channels.
inline ReceivedVector awgn_receive(const BitVector& cw, double sigma, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    ReceivedVector rx;
    rx.pairs.reserve(cw.size());
    for (auto bit : cw) {
        double y = (bit ? -1.0 : 1.0) + sigma * gauss(rng);
        rx.pairs.push_back(llr_to_pair(2.0 * y / (sigma * sigma)));
    }
    return rx;
}

inline ReceivedVector noiseless_receive(const BitVector& cw) {
    ReceivedVector rx;
    rx.pairs.reserve(cw.size());
    for (auto bit : cw)
        rx.pairs.push_back(bit ? std::array<double, 2>{0.0, 1.0} : std::array<double, 2>{1.0, 0.0});
    return rx;
}

// Plain successive-cancellation reference for swap-free codes: recursive
// probability-domain decoder, ties resolved to 0.
struct ScReference {
    const CodeSpec& spec;
    BitVector message_domain;  // decoded u, length n

    explicit ScReference(const CodeSpec& s) : spec(s), message_domain(s.n, 0) {}

    BitVector run(const ReceivedVector& rx) {
        message_domain.assign(spec.n, 0);
        std::vector<std::array<double, 2>> probs(rx.pairs.begin(), rx.pairs.end());
        return recurse(probs, 1);
    }

  private:
    BitVector recurse(const std::vector<std::array<double, 2>>& probs, long first) {
        const std::size_t sz = probs.size();
        if (sz == 1) {
            int bit = 0;
            bool info = std::binary_search(spec.info_set.begin(), spec.info_set.end(),
                                           static_cast<int>(first));
            if (info) bit = probs[0][1] > probs[0][0] ? 1 : 0;
            message_domain[first - 1] = static_cast<std::uint8_t>(bit);
            return {static_cast<std::uint8_t>(bit)};
        }
        const std::size_t half = sz / 2;
        std::vector<std::array<double, 2>> minus(half);
        for (std::size_t j = 0; j < half; ++j) {
            for (int a = 0; a < 2; ++a)
                minus[j][a] = 0.5 * (probs[j][a] * probs[j + half][0] +
                                     probs[j][a ^ 1] * probs[j + half][1]);
            double sum = minus[j][0] + minus[j][1];
            if (sum > 0) {
                minus[j][0] /= sum;
                minus[j][1] /= sum;
            }
        }
        BitVector x1 = recurse(minus, first);
        std::vector<std::array<double, 2>> plus(half);
        for (std::size_t j = 0; j < half; ++j) {
            int a = x1[j];
            for (int b = 0; b < 2; ++b) plus[j][b] = 0.5 * probs[j][a ^ b] * probs[j + half][b];
            double sum = plus[j][0] + plus[j][1];
            if (sum > 0) {
                plus[j][0] /= sum;
                plus[j][1] /= sum;
            }
        }
        BitVector x2 = recurse(plus, first + half);
        BitVector x(sz);
        for (std::size_t j = 0; j < half; ++j) {
            x[j] = x1[j] ^ x2[j];
            x[j + half] = x2[j];
        }
        return x;
    }
};

// Exhaustive-marginalization reference for list decoding: maintains prefixes
// scored by their exact joint probability with the evidence (free suffix bits
// marginalized by brute force), pruning to the best L with the same tie rules
// as the production decoders. Pair decoders decide the last two positions
// jointly; the classic decoder decides them one at a time.
struct BruteForceScl {
    const CodeSpec& spec;
    int list_size;
    bool joint_final_pair;

    struct Path {
        BitVector prefix;
        double metric;  // ln sum over suffix completions
    };

    BruteForceScl(const CodeSpec& s, int L, bool pair_decoder)
        : spec(s), list_size(L), joint_final_pair(pair_decoder) {}

    // ln of sum over all free-suffix completions of prod_j pair[c_j]
    double prefix_metric(const ReceivedVector& rx, const BitVector& prefix) const {
        const long n = spec.n;
        const long fixed = static_cast<long>(prefix.size());
        const long free_bits = n - fixed;
        BitVector u(n, 0);
        std::copy(prefix.begin(), prefix.end(), u.begin());
        double best = -1e300;
        std::vector<double> terms;
        terms.reserve(1u << std::min<long>(free_bits, 20));
        for (std::uint64_t suffix = 0; suffix < (1ULL << free_bits); ++suffix) {
            for (long j = 0; j < free_bits; ++j) u[fixed + j] = (suffix >> j) & 1;
            BitVector cw = u;
            transform_in_place(spec, cw);
            double ll = 0;
            for (long j = 0; j < n; ++j) {
                const auto& pair = rx.pairs[j];
                ll += std::log(pair[cw[j] & 1] / (pair[0] + pair[1]));
            }
            terms.push_back(ll);
            best = std::max(best, ll);
        }
        double acc = 0;
        for (double t : terms) acc += std::exp(t - best);
        return best + std::log(acc);
    }

    std::vector<Path> decode(const ReceivedVector& rx) const {
        std::vector<Path> live{{BitVector{}, 0.0}};
        auto is_info = [&](long pos) {
            return std::binary_search(spec.info_set.begin(), spec.info_set.end(),
                                      static_cast<int>(pos));
        };
        long pos = 1;
        while (pos <= spec.n) {
            bool last_pair = joint_final_pair && pos == spec.n - 1;
            int span = last_pair ? 2 : 1;
            std::vector<Path> expanded;
            for (std::size_t l = 0; l < live.size(); ++l) {
                const Path& path = live[l];
                std::vector<BitVector> exts;
                if (span == 1) {
                    if (is_info(pos))
                        exts = {{0}, {1}};
                    else
                        exts = {{0}};
                } else {
                    bool i1 = is_info(pos), i2 = is_info(pos + 1);
                    for (int a = 0; a < (i1 ? 2 : 1); ++a)
                        for (int b = 0; b < (i2 ? 2 : 1); ++b)
                            exts.push_back({static_cast<std::uint8_t>(a),
                                            static_cast<std::uint8_t>(b)});
                }
                bool expanding = exts.size() > 1;
                for (auto& ext : exts) {
                    Path next;
                    next.prefix = path.prefix;
                    next.prefix.insert(next.prefix.end(), ext.begin(), ext.end());
                    next.metric = expanding || true ? prefix_metric(rx, next.prefix) : path.metric;
                    expanded.push_back(std::move(next));
                }
            }
            // prune only when the step expanded (frozen-only steps never do)
            bool grew = expanded.size() > live.size();
            if (grew && static_cast<int>(expanded.size()) > list_size) {
                std::stable_sort(expanded.begin(), expanded.end(),
                                 [](const Path& a, const Path& b) { return a.metric > b.metric; });
                expanded.resize(list_size);
            }
            live = std::move(expanded);
            pos += span;
        }
        return live;
    }
};

}  // namespace testutil
