#include "abspolar/adjacent.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <optional>
#include <stdexcept>
#include <unordered_map>

namespace abspolar {

namespace {

constexpr double kPruneMass = 1e-15;

inline double plog2p_ratio(double p, double base) {
    if (p <= 0.0) return 0.0;
    return p * std::log2(p / base);
}

// Enumerate the output symbols of a transform in a fixed order (y1 outer, y2
// inner, known-bit prefix last) and hand each symbol's 4-entry row to fn.
// Symbols with total mass below kPruneMass are skipped.
template <typename Fn>
void for_each_output(const AdjacentBitsChannel& v, PairTransform kind, Fn&& fn) {
    const std::size_t m = v.num_outputs();
    std::array<double, 4> row;
    auto emit = [&](const std::array<double, 4>& r) {
        if (r[0] + r[1] + r[2] + r[3] >= kPruneMass) fn(r);
    };

    for (std::size_t y1 = 0; y1 < m; ++y1) {
        const auto& a = v.probs[y1];
        for (std::size_t y2 = 0; y2 < m; ++y2) {
            const auto& b = v.probs[y2];
            // First copy sees (x1, x2), second sees (w1, w2) where, for the
            // combined bits (u1,u2,u3,u4):
            //   plain:   x1 = u1^u2, x2 = u3^u4, w1 = u2, w2 = u4
            //   swapped: x1 = u1^u3, x2 = u2^u4, w1 = u3, w2 = u4
            switch (kind) {
                case PairTransform::down:
                    for (int u1 = 0; u1 < 2; ++u1)
                        for (int u2 = 0; u2 < 2; ++u2) {
                            double acc = 0.0;
                            for (int u3 = 0; u3 < 2; ++u3)
                                for (int u4 = 0; u4 < 2; ++u4)
                                    acc += a[2 * (u1 ^ u2) + (u3 ^ u4)] * b[2 * u2 + u4];
                            row[2 * u1 + u2] = 0.25 * acc;
                        }
                    emit(row);
                    break;
                case PairTransform::swapped_down:
                    for (int u1 = 0; u1 < 2; ++u1)
                        for (int u2 = 0; u2 < 2; ++u2) {
                            double acc = 0.0;
                            for (int u3 = 0; u3 < 2; ++u3)
                                for (int u4 = 0; u4 < 2; ++u4)
                                    acc += a[2 * (u1 ^ u3) + (u2 ^ u4)] * b[2 * u3 + u4];
                            row[2 * u1 + u2] = 0.25 * acc;
                        }
                    emit(row);
                    break;
                case PairTransform::mid:
                    for (int u1 = 0; u1 < 2; ++u1) {
                        for (int u2 = 0; u2 < 2; ++u2)
                            for (int u3 = 0; u3 < 2; ++u3) {
                                double acc = 0.0;
                                for (int u4 = 0; u4 < 2; ++u4)
                                    acc += a[2 * (u1 ^ u2) + (u3 ^ u4)] * b[2 * u2 + u4];
                                row[2 * u2 + u3] = 0.25 * acc;
                            }
                        emit(row);
                    }
                    break;
                case PairTransform::swapped_mid:
                    for (int u1 = 0; u1 < 2; ++u1) {
                        for (int u2 = 0; u2 < 2; ++u2)
                            for (int u3 = 0; u3 < 2; ++u3) {
                                double acc = 0.0;
                                for (int u4 = 0; u4 < 2; ++u4)
                                    acc += a[2 * (u1 ^ u3) + (u2 ^ u4)] * b[2 * u3 + u4];
                                row[2 * u2 + u3] = 0.25 * acc;
                            }
                        emit(row);
                    }
                    break;
                case PairTransform::up:
                    for (int u1 = 0; u1 < 2; ++u1)
                        for (int u2 = 0; u2 < 2; ++u2) {
                            for (int u3 = 0; u3 < 2; ++u3)
                                for (int u4 = 0; u4 < 2; ++u4)
                                    row[2 * u3 + u4] =
                                        0.25 * a[2 * (u1 ^ u2) + (u3 ^ u4)] * b[2 * u2 + u4];
                            emit(row);
                        }
                    break;
                case PairTransform::swapped_up:
                    for (int u1 = 0; u1 < 2; ++u1)
                        for (int u2 = 0; u2 < 2; ++u2) {
                            for (int u3 = 0; u3 < 2; ++u3)
                                for (int u4 = 0; u4 < 2; ++u4)
                                    row[2 * u3 + u4] =
                                        0.25 * a[2 * (u1 ^ u3) + (u2 ^ u4)] * b[2 * u3 + u4];
                            emit(row);
                        }
                    break;
            }
        }
    }
}

std::size_t bucket_base(std::size_t mu) {
    if (mu < 8) throw std::invalid_argument("quantize: mu must be >= 8");
    std::size_t ib = static_cast<std::size_t>(std::cbrt(static_cast<double>(mu)));
    while ((ib + 1) * (ib + 1) * (ib + 1) <= mu) ++ib;
    while (ib * ib * ib > mu) --ib;
    return ib - 1;  // posterior bucket indices run over 0..b
}

// Accumulates transform outputs while merging symbols with identical
// posteriors. Proportional rows are exactly transparent to every later
// bilinear transform and to the capacity sums, so this canonicalization is
// lossless; without it erasure-structured tables square in size every layer.
class DedupTable {
  public:
    void add(const std::array<double, 4>& row) {
        const double sum = row[0] + row[1] + row[2] + row[3];
        Key key{row[0] / sum, row[1] / sum, row[2] / sum};
        auto [it, fresh] = index_.try_emplace(key, rows_.size());
        if (fresh) {
            rows_.push_back(row);
        } else {
            auto& acc = rows_[it->second];
            for (int u = 0; u < 4; ++u) acc[u] += row[u];
        }
    }

    std::size_t size() const { return rows_.size(); }
    std::vector<std::array<double, 4>> take() { return std::move(rows_); }
    const std::vector<std::array<double, 4>>& rows() const { return rows_; }

  private:
    using Key = std::array<double, 3>;
    struct KeyHash {
        std::size_t operator()(const Key& k) const {
            std::uint64_t h = 0x9e3779b97f4a7c15ULL;
            for (double v : k) {
                std::uint64_t bits;
                std::memcpy(&bits, &v, sizeof bits);
                h ^= bits + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
            }
            return static_cast<std::size_t>(h);
        }
    };
    std::vector<std::array<double, 4>> rows_;
    std::unordered_map<Key, std::size_t, KeyHash> index_;
};

class PairQuantizer {
  public:
    explicit PairQuantizer(std::size_t mu) : b_(bucket_base(mu)) {
        buckets_.assign((b_ + 1) * (b_ + 1) * (b_ + 1), {0.0, 0.0, 0.0, 0.0});
    }

    void add(const std::array<double, 4>& row) {
        double sum = row[0] + row[1] + row[2] + row[3];
        if (sum <= 0.0) return;
        auto coord = [&](double p) {
            return std::min(static_cast<std::size_t>(static_cast<double>(b_) * (p / sum)), b_);
        };
        std::size_t idx = (coord(row[0]) * (b_ + 1) + coord(row[1])) * (b_ + 1) + coord(row[2]);
        auto& acc = buckets_[idx];
        for (int u = 0; u < 4; ++u) acc[u] += row[u];
    }

    AdjacentBitsChannel extract() const {
        AdjacentBitsChannel out;
        for (const auto& acc : buckets_)
            if (acc[0] + acc[1] + acc[2] + acc[3] > 0.0) out.probs.push_back(acc);
        return out;
    }

  private:
    std::size_t b_;
    std::vector<std::array<double, 4>> buckets_;
};

struct SplitCapAccum {
    double i_first = 0.0;
    double i_second = 0.0;

    void add(const std::array<double, 4>& row) {
        double f0 = 0.5 * (row[0] + row[1]);
        double f1 = 0.5 * (row[2] + row[3]);
        double base = 0.5 * (f0 + f1);
        if (base > 0.0) {
            i_first += 0.5 * plog2p_ratio(f0, base);
            i_first += 0.5 * plog2p_ratio(f1, base);
        }
        for (int u1 = 0; u1 < 2; ++u1) {
            double s0 = 0.5 * row[2 * u1 + 0];
            double s1 = 0.5 * row[2 * u1 + 1];
            double sb = 0.5 * (s0 + s1);
            if (sb > 0.0) {
                i_second += 0.5 * plog2p_ratio(s0, sb);
                i_second += 0.5 * plog2p_ratio(s1, sb);
            }
        }
    }
};

}  // namespace

AdjacentBitsChannel init_pair(const BmsChannel& w) {
    const std::size_t m = w.num_outputs();
    AdjacentBitsChannel v;
    v.probs.reserve(m * m);
    for (std::size_t y1 = 0; y1 < m; ++y1)
        for (std::size_t y2 = 0; y2 < m; ++y2) {
            std::array<double, 4> row;
            for (int u1 = 0; u1 < 2; ++u1)
                for (int u2 = 0; u2 < 2; ++u2)
                    row[2 * u1 + u2] = w.probs[y1][u1 ^ u2] * w.probs[y2][u2];
            if (row[0] + row[1] + row[2] + row[3] >= kPruneMass) v.probs.push_back(row);
        }
    return v;
}

AdjacentBitsChannel pair_transform(const AdjacentBitsChannel& v, PairTransform kind) {
    DedupTable table;
    for_each_output(v, kind, [&](const std::array<double, 4>& row) { table.add(row); });
    AdjacentBitsChannel out;
    out.probs = table.take();
    return out;
}

DbTriple db_transform(const AdjacentBitsChannel& v) {
    return {pair_transform(v, PairTransform::down), pair_transform(v, PairTransform::mid),
            pair_transform(v, PairTransform::up)};
}

DbTriple sdb_transform(const AdjacentBitsChannel& v) {
    return {pair_transform(v, PairTransform::swapped_down),
            pair_transform(v, PairTransform::swapped_mid),
            pair_transform(v, PairTransform::swapped_up)};
}

AdjacentBitsChannel quantize(const AdjacentBitsChannel& v, std::size_t mu) {
    if (mu < 8) throw std::invalid_argument("quantize: mu must be >= 8");
    if (v.num_outputs() <= mu) return v;
    PairQuantizer q(mu);
    for (const auto& row : v.probs) q.add(row);
    return q.extract();
}

AdjacentBitsChannel transform_quantized(const AdjacentBitsChannel& v, PairTransform kind,
                                        std::size_t mu) {
    if (mu < 8) throw std::invalid_argument("quantize: mu must be >= 8");
    // Materialize (with posterior dedup) while the alphabet fits, spill to
    // posterior buckets once it would exceed mu. Equivalent to
    // quantize(pair_transform(v, kind), mu) up to summation grouping.
    DedupTable table;
    std::optional<PairQuantizer> q;
    for_each_output(v, kind, [&](const std::array<double, 4>& row) {
        if (!q) {
            table.add(row);
            if (table.size() <= mu) return;
            q.emplace(mu);
            for (const auto& r : table.rows()) q->add(r);
        } else {
            q->add(row);
        }
    });
    if (!q) {
        AdjacentBitsChannel out;
        out.probs = table.take();
        return out;
    }
    return q->extract();
}

std::array<double, 2> transform_split_capacities(const AdjacentBitsChannel& v,
                                                 PairTransform kind) {
    SplitCapAccum acc;
    for_each_output(v, kind, [&](const std::array<double, 4>& row) { acc.add(row); });
    return {acc.i_first, acc.i_second};
}

BitChannelPair split(const AdjacentBitsChannel& v) {
    BitChannelPair pair;
    pair.first.probs.reserve(v.num_outputs());
    pair.second.probs.reserve(2 * v.num_outputs());
    for (const auto& row : v.probs) {
        pair.first.probs.push_back({0.5 * (row[0] + row[1]), 0.5 * (row[2] + row[3])});
        pair.second.probs.push_back({0.5 * row[0], 0.5 * row[1]});
        pair.second.probs.push_back({0.5 * row[2], 0.5 * row[3]});
    }
    return pair;
}

std::array<double, 2> split_capacities(const AdjacentBitsChannel& v) {
    SplitCapAccum acc;
    for (const auto& row : v.probs) acc.add(row);
    return {acc.i_first, acc.i_second};
}

double g_metric(const AdjacentBitsChannel& v) {
    auto [i1, i2] = split_capacities(v);
    return i1 * (1.0 - i1) + i2 * (1.0 - i2);
}

double pair_mutual_information(const AdjacentBitsChannel& v) {
    double acc = 0.0;
    for (const auto& row : v.probs) {
        double base = 0.25 * (row[0] + row[1] + row[2] + row[3]);
        if (base <= 0.0) continue;
        for (int u = 0; u < 4; ++u) acc += 0.25 * plog2p_ratio(row[u], base);
    }
    return acc;
}

bool is_valid_channel(const AdjacentBitsChannel& v, double tol) {
    std::array<double, 4> sums{0.0, 0.0, 0.0, 0.0};
    for (const auto& row : v.probs)
        for (int u = 0; u < 4; ++u) {
            if (row[u] < 0.0) return false;
            sums[u] += row[u];
        }
    for (int u = 0; u < 4; ++u)
        if (std::abs(sums[u] - 1.0) > tol) return false;
    return true;
}

}  // namespace abspolar
