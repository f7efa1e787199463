#include "abspolar/decode.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <stdexcept>

#include "abspolar/channel.hpp"
#include "abspolar/crc.hpp"

namespace abspolar {

namespace {

[[noreturn]] void pool_check_fail(const char* what) {
    std::fprintf(stderr, "abspolar: decoder pool invariant violated: %s\n", what);
    std::abort();
}

inline double ln(double x) { return std::log(x); }

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

}  // namespace

ReceivedVector ReceivedVector::from_llrs(std::span<const double> llrs) {
    ReceivedVector rx;
    rx.pairs.reserve(llrs.size());
    for (double l : llrs) rx.pairs.push_back(llr_to_pair(l));
    return rx;
}

bool PoolStats::within_bounds() const {
    for (int v : max_nd)
        if (v > nd_bound) return false;
    for (int v : max_nb)
        if (v > nb_bound) return false;
    return true;
}

SclDecoder::SclDecoder(CodeSpec spec, int list_size, Kind kind)
    : spec_(std::move(spec)), list_(list_size), kind_(kind) {
    validate(spec_);
    if (list_ < 1) throw std::invalid_argument("list size must be >= 1");
    if (kind_ != Kind::abs && spec_.has_swaps())
        throw std::invalid_argument("nonempty swap sets need the abs decoder");

    n_ = spec_.n;
    m_ = log2_exact(n_);
    info_.assign(n_ + 1, 0);
    for (int a : spec_.info_set) info_[a] = 1;
    swap_flag_.assign(m_ + 1, {});
    for (int lam = 1; lam <= m_; ++lam) {
        swap_flag_[lam].assign((1L << lam) + 1, 0);
        for (int v : spec_.perms.at_size(1L << lam)) swap_flag_[lam][v] = 1;
    }

    const int nbcap = kind_ == Kind::standard      ? 2 * list_
                      : kind_ == Kind::double_bits ? 4 * list_
                                                   : 6 * list_;
    const int lam0 = kind_ == Kind::standard ? 0 : 1;
    dpool_.resize(m_ + 1);
    bpool_.resize(m_ + 1);
    for (int lam = lam0; lam <= m_; ++lam) {
        dpool_[lam].assign(static_cast<std::size_t>(list_) * width() * rows(lam), 0.0);
        bpool_[lam].assign(static_cast<std::size_t>(nbcap) * rows(lam), 0);
    }
    nd_.assign(m_ + 1, 0);
    nb_.assign(m_ + 1, 0);
    const std::size_t cells = static_cast<std::size_t>(list_) * (m_ + 1);
    p_.assign(cells, nullptr);
    pb_.assign(cells, nullptr);
    r_.assign(cells, nullptr);
    rb_.assign(cells, nullptr);
    h_.assign(cells, nullptr);
    hb_.assign(cells, nullptr);
    chain_.assign(cells, 0.0);
    chainb_.assign(cells, 0.0);
    metric_.assign(list_, 0.0);
    queue_.reserve(4 * static_cast<std::size_t>(list_));
    stats_.max_nd.assign(m_ + 1, 0);
    stats_.max_nb.assign(m_ + 1, 0);
    stats_.nd_bound = list_;
    stats_.nb_bound = nbcap;
}

double* SclDecoder::allocate_prob(int layer) {
    if (nd_[layer] >= list_) pool_check_fail("prob pool exceeded its list-size bound");
    double* ptr = dpool_[layer].data() +
                  static_cast<std::size_t>(nd_[layer]) * width() * rows(layer);
    ++nd_[layer];
    stats_.max_nd[layer] = std::max(stats_.max_nd[layer], nd_[layer]);
    return ptr;
}

std::uint8_t* SclDecoder::allocate_bit(int layer, int count) {
    if (nb_[layer] + count > stats_.nb_bound) pool_check_fail("bit pool exceeded its bound");
    std::uint8_t* ptr = bpool_[layer].data() + static_cast<std::size_t>(nb_[layer]) * rows(layer);
    nb_[layer] += count;
    stats_.max_nb[layer] = std::max(stats_.max_nb[layer], nb_[layer]);
    return ptr;
}

bool SclDecoder::is_swap(int layer, long pos) const {
    if (pos <= 0 || pos >= static_cast<long>(swap_flag_[layer].size())) return false;
    return swap_flag_[layer][pos] != 0;
}

void SclDecoder::push(double key, int path, int a, int b) {
    queue_.push_back({key, path, static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b)});
}

void SclDecoder::prune(bool two_bits) {
    std::sort(queue_.begin(), queue_.end(), [](const QueueEntry& x, const QueueEntry& y) {
        if (x.key != y.key) return x.key > y.key;
        if (x.path != y.path) return x.path < y.path;
        if (x.a != y.a) return x.a < y.a;
        return x.b < y.b;
    });
    const int keep = std::min<std::size_t>(list_, queue_.size());
    const int lam0 = kind_ == Kind::standard ? 0 : 1;
    for (int l = 0; l < keep; ++l) {
        const QueueEntry& e = queue_[l];
        for (int lam = lam0; lam <= m_; ++lam) {
            pb_[at(l, lam)] = p_[at(e.path, lam)];
            rb_[at(l, lam)] = r_[at(e.path, lam)];
            hb_[at(l, lam)] = h_[at(e.path, lam)];
            chainb_[at(l, lam)] = chain_[at(e.path, lam)];
        }
        std::uint8_t* dst = allocate_bit(m_, two_bits ? 2 : 1);
        dst[0] = e.a;
        if (two_bits) dst[1] = e.b;
        rb_[at(l, m_)] = dst;
        metric_[l] = e.key;
    }
    live_ = keep;
    queue_.clear();
    std::swap(p_, pb_);
    std::swap(r_, rb_);
    std::swap(h_, hb_);
    std::swap(chain_, chainb_);
}

// ---------------------------------------------------------------------------
// classic single-bit-channel decoder
// ---------------------------------------------------------------------------

void SclDecoder::transform_single(int target, bool plus) {
    const long q = rows(target);
    for (int l = 0; l < live_; ++l) {
        const double* src = p_[at(l, target - 1)];
        double* dst = allocate_prob(target);
        p_[at(l, target)] = dst;
        const std::uint8_t* dec = plus ? r_[at(l, target - 1)] : nullptr;
        double acc = 0.0;
        for (long b0 = 0; b0 < q; ++b0) {
            const double* s1 = src + 2 * b0;
            const double* s2 = src + 2 * (b0 + q);
            double* o = dst + 2 * b0;
            if (!plus) {
                for (int a = 0; a < 2; ++a) o[a] = 0.5 * (s1[a] * s2[0] + s1[a ^ 1] * s2[1]);
            } else {
                const int a = dec[b0];
                for (int b = 0; b < 2; ++b) o[b] = 0.5 * s1[a ^ b] * s2[b];
            }
            const double sum = o[0] + o[1];
            if (sum > 0.0) {
                o[0] /= sum;
                o[1] /= sum;
            }
            acc += ln(sum);
        }
        chain_[at(l, target)] = chain_[at(l, target - 1)] + acc;
    }
}

void SclDecoder::boundary_std(long i) {
    queue_.clear();
    if (info_[i]) {
        for (int l = 0; l < live_; ++l) {
            const double* prob = p_[at(l, m_)];
            const double base = chain_[at(l, m_)];
            for (int b = 0; b < 2; ++b) push(base + ln(prob[b]), l, b, 0);
        }
        prune(false);
    } else {
        for (int l = 0; l < live_; ++l) {
            std::uint8_t* dst = allocate_bit(m_, 1);
            dst[0] = 0;
            r_[at(l, m_)] = dst;
        }
    }
}

void SclDecoder::decode_channel_std(int layer, long i) {
    if (layer == m_) {
        boundary_std(i);
    } else {
        const long q = rows(layer + 1);
        transform_single(layer + 1, false);
        decode_channel_std(layer + 1, 2 * i - 1);
        for (int l = 0; l < live_; ++l) r_[at(l, layer)] = r_[at(l, layer + 1)];

        transform_single(layer + 1, true);
        decode_channel_std(layer + 1, 2 * i);
        for (int l = 0; l < live_; ++l) {
            const std::uint8_t* first = r_[at(l, layer)];
            const std::uint8_t* second = r_[at(l, layer + 1)];
            std::uint8_t* dst = allocate_bit(layer, 1);
            for (long b0 = 0; b0 < q; ++b0) {
                dst[b0] = first[b0] ^ second[b0];
                dst[b0 + q] = second[b0];
            }
            r_[at(l, layer)] = dst;
        }
        nb_[layer + 1] = 0;
    }
    nd_[layer] = 0;
}

// ---------------------------------------------------------------------------
// pair-channel decoders
// ---------------------------------------------------------------------------

void SclDecoder::transform_pair(int target, TKind kind) {
    const long q = rows(target);
    const bool needs_h =
        kind == TKind::mid || kind == TKind::up || kind == TKind::swapped_mid || kind == TKind::swapped_up;
    const bool needs_r = kind == TKind::up || kind == TKind::swapped_up;
    for (int l = 0; l < live_; ++l) {
        const double* src = p_[at(l, target - 1)];
        double* dst = allocate_prob(target);
        p_[at(l, target)] = dst;
        const std::uint8_t* hdec = needs_h ? h_[at(l, target)] : nullptr;
        const std::uint8_t* rdec = needs_r ? r_[at(l, target - 1)] : nullptr;
        double acc = 0.0;
        for (long b0 = 0; b0 < q; ++b0) {
            const double* s1 = src + 4 * b0;
            const double* s2 = src + 4 * (b0 + q);
            double* o = dst + 4 * b0;
            switch (kind) {
                case TKind::down:
                    for (int r1 = 0; r1 < 2; ++r1)
                        for (int r2 = 0; r2 < 2; ++r2) {
                            double v = 0.0;
                            for (int r3 = 0; r3 < 2; ++r3)
                                for (int r4 = 0; r4 < 2; ++r4)
                                    v += s1[2 * (r1 ^ r2) + (r3 ^ r4)] * s2[2 * r2 + r4];
                            o[2 * r1 + r2] = 0.25 * v;
                        }
                    break;
                case TKind::mid: {
                    const int r1 = hdec[b0];
                    for (int r2 = 0; r2 < 2; ++r2)
                        for (int r3 = 0; r3 < 2; ++r3) {
                            double v = 0.0;
                            for (int r4 = 0; r4 < 2; ++r4)
                                v += s1[2 * (r1 ^ r2) + (r3 ^ r4)] * s2[2 * r2 + r4];
                            o[2 * r2 + r3] = 0.25 * v;
                        }
                    break;
                }
                case TKind::up: {
                    const int r1 = hdec[b0];
                    const int r2 = rdec[b0];
                    for (int r3 = 0; r3 < 2; ++r3)
                        for (int r4 = 0; r4 < 2; ++r4)
                            o[2 * r3 + r4] =
                                0.25 * s1[2 * (r1 ^ r2) + (r3 ^ r4)] * s2[2 * r2 + r4];
                    break;
                }
                case TKind::swapped_down:
                    for (int r1 = 0; r1 < 2; ++r1)
                        for (int r2 = 0; r2 < 2; ++r2) {
                            double v = 0.0;
                            for (int r3 = 0; r3 < 2; ++r3)
                                for (int r4 = 0; r4 < 2; ++r4)
                                    v += s1[2 * (r1 ^ r3) + (r2 ^ r4)] * s2[2 * r3 + r4];
                            o[2 * r1 + r2] = 0.25 * v;
                        }
                    break;
                case TKind::swapped_mid: {
                    const int r1 = hdec[b0];
                    for (int r2 = 0; r2 < 2; ++r2)
                        for (int r3 = 0; r3 < 2; ++r3) {
                            double v = 0.0;
                            for (int r4 = 0; r4 < 2; ++r4)
                                v += s1[2 * (r1 ^ r3) + (r2 ^ r4)] * s2[2 * r3 + r4];
                            o[2 * r2 + r3] = 0.25 * v;
                        }
                    break;
                }
                case TKind::swapped_up: {
                    const int r1 = hdec[b0];
                    const int r2 = rdec[b0];
                    for (int r3 = 0; r3 < 2; ++r3)
                        for (int r4 = 0; r4 < 2; ++r4)
                            o[2 * r3 + r4] =
                                0.25 * s1[2 * (r1 ^ r3) + (r2 ^ r4)] * s2[2 * r3 + r4];
                    break;
                }
            }
            const double sum = o[0] + o[1] + o[2] + o[3];
            if (sum > 0.0) {
                const double inv = 1.0 / sum;
                for (int u = 0; u < 4; ++u) o[u] *= inv;
            }
            acc += ln(sum);
        }
        chain_[at(l, target)] = chain_[at(l, target - 1)] + acc;
    }
}

void SclDecoder::boundary_pair(long i) {
    queue_.clear();
    bool expanded = true;
    if (i <= n_ - 2) {
        if (info_[i]) {
            for (int l = 0; l < live_; ++l) {
                const double* prob = p_[at(l, m_)];
                const double base = chain_[at(l, m_)];
                for (int a = 0; a < 2; ++a)
                    push(base + ln(0.5 * (prob[2 * a] + prob[2 * a + 1])), l, a, 0);
            }
        } else {
            expanded = false;
            for (int l = 0; l < live_; ++l) {
                std::uint8_t* dst = allocate_bit(m_, 1);
                dst[0] = 0;
                r_[at(l, m_)] = dst;
            }
        }
    } else {
        const bool first_info = info_[n_ - 1] != 0;
        const bool second_info = info_[n_] != 0;
        if (!first_info && !second_info) {
            expanded = false;
            for (int l = 0; l < live_; ++l) {
                std::uint8_t* dst = allocate_bit(m_, 2);
                dst[0] = 0;
                dst[1] = 0;
                r_[at(l, m_)] = dst;
            }
        } else {
            for (int l = 0; l < live_; ++l) {
                const double* prob = p_[at(l, m_)];
                const double base = chain_[at(l, m_)];
                if (first_info && !second_info) {
                    for (int a = 0; a < 2; ++a) push(base + ln(prob[2 * a]), l, a, 0);
                } else if (!first_info && second_info) {
                    for (int b = 0; b < 2; ++b) push(base + ln(prob[b]), l, 0, b);
                } else {
                    for (int a = 0; a < 2; ++a)
                        for (int b = 0; b < 2; ++b) push(base + ln(prob[2 * a + b]), l, a, b);
                }
            }
        }
    }
    if (expanded) prune(i == n_ - 1);
}

void SclDecoder::decode_original(int layer, long i) {
    const bool skip_down = kind_ == Kind::abs && is_swap(layer + 1, 2 * (i - 1));
    if (!skip_down) {
        transform_pair(layer + 1, TKind::down);
        decode_channel_pair(layer + 1, 2 * i - 1);
        for (int l = 0; l < live_; ++l) h_[at(l, layer + 1)] = r_[at(l, layer + 1)];
    }
    transform_pair(layer + 1, TKind::mid);
    decode_channel_pair(layer + 1, 2 * i);
    for (int l = 0; l < live_; ++l) r_[at(l, layer)] = r_[at(l, layer + 1)];

    const long q = rows(layer + 1);
    if (i <= (1L << layer) - 2) {
        for (int l = 0; l < live_; ++l) {
            const std::uint8_t* second = r_[at(l, layer)];
            const std::uint8_t* first = h_[at(l, layer + 1)];
            std::uint8_t* dst = allocate_bit(layer, 1);
            for (long b0 = 0; b0 < q; ++b0) {
                dst[b0] = first[b0] ^ second[b0];
                dst[b0 + q] = second[b0];
            }
            r_[at(l, layer)] = dst;
        }
    } else {
        transform_pair(layer + 1, TKind::up);
        decode_channel_pair(layer + 1, 2 * i + 1);
        for (int l = 0; l < live_; ++l) {
            const std::uint8_t* second = r_[at(l, layer)];
            const std::uint8_t* first = h_[at(l, layer + 1)];
            const std::uint8_t* third = r_[at(l, layer + 1)];
            std::uint8_t* dst = allocate_bit(layer, 2);
            for (long b0 = 0; b0 < q; ++b0) {
                dst[b0] = first[b0] ^ second[b0];
                dst[b0 + q] = second[b0];
                dst[b0 + 2 * q] = third[b0] ^ third[b0 + q];
                dst[b0 + 3 * q] = third[b0 + q];
            }
            r_[at(l, layer)] = dst;
        }
    }
    nb_[layer + 1] = 0;
}

void SclDecoder::decode_swapped(int layer, long i) {
    transform_pair(layer + 1, TKind::swapped_down);
    decode_channel_pair(layer + 1, 2 * i - 1);
    for (int l = 0; l < live_; ++l) h_[at(l, layer + 1)] = r_[at(l, layer + 1)];

    transform_pair(layer + 1, TKind::swapped_mid);
    decode_channel_pair(layer + 1, 2 * i);
    for (int l = 0; l < live_; ++l) r_[at(l, layer)] = r_[at(l, layer + 1)];

    transform_pair(layer + 1, TKind::swapped_up);
    decode_channel_pair(layer + 1, 2 * i + 1);

    const long q = rows(layer + 1);
    if (i <= (1L << layer) - 2) {
        for (int l = 0; l < live_; ++l) {
            std::uint8_t* mid_bits = r_[at(l, layer)];
            const std::uint8_t* first = h_[at(l, layer + 1)];
            const std::uint8_t* third = r_[at(l, layer + 1)];
            std::uint8_t* dst = allocate_bit(layer, 1);
            for (long b0 = 0; b0 < q; ++b0) {
                dst[b0] = first[b0] ^ third[b0];
                dst[b0 + q] = third[b0];
            }
            r_[at(l, layer)] = dst;
            // The next sibling's mid transform conditions on this parent's
            // middle decode; stash it where that transform looks.
            h_[at(l, layer + 1)] = mid_bits;
        }
        // bit pool at layer+1 stays live: the stash must survive into the
        // next sibling, which resets it when done.
    } else {
        for (int l = 0; l < live_; ++l) {
            const std::uint8_t* mid_bits = r_[at(l, layer)];
            const std::uint8_t* first = h_[at(l, layer + 1)];
            const std::uint8_t* third = r_[at(l, layer + 1)];
            std::uint8_t* dst = allocate_bit(layer, 2);
            for (long b0 = 0; b0 < q; ++b0) {
                dst[b0] = first[b0] ^ third[b0];
                dst[b0 + q] = third[b0];
                dst[b0 + 2 * q] = mid_bits[b0] ^ third[b0 + q];
                dst[b0 + 3 * q] = third[b0 + q];
            }
            r_[at(l, layer)] = dst;
        }
        nb_[layer + 1] = 0;
    }
}

void SclDecoder::decode_channel_pair(int layer, long i) {
    if (layer == m_) {
        boundary_pair(i);
    } else if (kind_ == Kind::abs && is_swap(layer + 1, 2 * i)) {
        decode_swapped(layer, i);
    } else {
        decode_original(layer, i);
    }
    nd_[layer] = 0;
}

// ---------------------------------------------------------------------------

std::vector<DecodePath> SclDecoder::finish(const ReceivedVector& rx, int root_layer) {
    std::vector<DecodePath> out;
    out.reserve(live_);
    for (int l = 0; l < live_; ++l) {
        DecodePath path;
        path.codeword.resize(n_);
        const std::uint8_t* root = r_[at(l, root_layer)];
        if (kind_ == Kind::standard) {
            for (long j = 0; j < n_; ++j) path.codeword[j] = root[j] & 1;
        } else {
            const long half = n_ / 2;
            for (long b0 = 0; b0 < half; ++b0) {
                path.codeword[b0] = (root[b0] ^ root[b0 + half]) & 1;
                path.codeword[b0 + half] = root[b0 + half] & 1;
            }
        }
        path.message = extract_message(spec_, inverse_transform(spec_, path.codeword));
        path.score = codeword_log_likelihood(rx, path.codeword);
        out.push_back(std::move(path));
    }
    return out;
}

std::vector<DecodePath> SclDecoder::decode_list(const ReceivedVector& rx) {
    if (static_cast<long>(rx.size()) != n_)
        throw std::invalid_argument("received vector length differs from n");
    std::fill(nd_.begin(), nd_.end(), 0);
    std::fill(nb_.begin(), nb_.end(), 0);
    live_ = 1;

    if (kind_ == Kind::standard) {
        double* dst = allocate_prob(0);
        p_[at(0, 0)] = dst;
        double acc = 0.0;
        for (long b0 = 0; b0 < n_; ++b0) {
            double* o = dst + 2 * b0;
            o[0] = rx.pairs[b0][0];
            o[1] = rx.pairs[b0][1];
            const double sum = o[0] + o[1];
            if (sum > 0.0) {
                o[0] /= sum;
                o[1] /= sum;
            }
            acc += ln(sum);
        }
        chain_[at(0, 0)] = acc;
        decode_channel_std(0, 1);
        return finish(rx, 0);
    }

    double* dst = allocate_prob(1);
    p_[at(0, 1)] = dst;
    const long half = n_ / 2;
    double acc = 0.0;
    for (long b0 = 0; b0 < half; ++b0) {
        double* o = dst + 4 * b0;
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) o[2 * a + b] = rx.pairs[b0][a ^ b] * rx.pairs[b0 + half][b];
        const double sum = o[0] + o[1] + o[2] + o[3];
        if (sum > 0.0) {
            const double inv = 1.0 / sum;
            for (int u = 0; u < 4; ++u) o[u] *= inv;
        }
        acc += ln(sum);
    }
    chain_[at(0, 1)] = acc;
    decode_channel_pair(1, 1);
    return finish(rx, 1);
}

DecodePath SclDecoder::decode(const ReceivedVector& rx) {
    auto paths = decode_list(rx);
    std::size_t best = 0;
    for (std::size_t l = 1; l < paths.size(); ++l)
        if (paths[l].score > paths[best].score) best = l;
    return paths[best];
}

DecodePath scl_decode_standard(const CodeSpec& spec, const ReceivedVector& rx, int list_size) {
    SclDecoder dec(spec, list_size, SclDecoder::Kind::standard);
    return dec.decode(rx);
}

DecodePath scl_decode_db(const CodeSpec& spec, const ReceivedVector& rx, int list_size) {
    SclDecoder dec(spec, list_size, SclDecoder::Kind::double_bits);
    return dec.decode(rx);
}

DecodePath scl_decode_abs(const CodeSpec& spec, const ReceivedVector& rx, int list_size) {
    SclDecoder dec(spec, list_size, SclDecoder::Kind::abs);
    return dec.decode(rx);
}

std::size_t crc_select(std::span<const DecodePath> candidates, int crc_len) {
    if (candidates.empty()) throw std::invalid_argument("crc_select: empty candidate list");
    std::size_t best_any = 0;
    long best_pass = -1;
    for (std::size_t idx = 0; idx < candidates.size(); ++idx) {
        if (candidates[idx].score > candidates[best_any].score) best_any = idx;
        if (crc_len > 0 && crc_check(candidates[idx].message, crc_len)) {
            if (best_pass < 0 || candidates[idx].score > candidates[best_pass].score)
                best_pass = static_cast<long>(idx);
        }
    }
    if (crc_len == 0) return best_any;
    return best_pass >= 0 ? static_cast<std::size_t>(best_pass) : best_any;
}

double codeword_log_likelihood(const ReceivedVector& rx, const BitVector& codeword) {
    if (rx.size() != codeword.size())
        throw std::invalid_argument("codeword length differs from received vector");
    double acc = 0.0;
    for (std::size_t j = 0; j < codeword.size(); ++j) {
        const auto& pair = rx.pairs[j];
        acc += ln(pair[codeword[j] & 1] / (pair[0] + pair[1]));
    }
    return acc;
}

MlResult ml_decode_bruteforce(const CodeSpec& spec, const ReceivedVector& rx) {
    if (spec.k > 20) throw std::invalid_argument("brute-force decoding capped at k = 20");
    if (static_cast<long>(rx.size()) != spec.n)
        throw std::invalid_argument("received vector length differs from n");
    MlResult best;
    best.log_likelihood = kNegInf;
    BitVector msg(spec.k, 0);
    const std::uint64_t total = 1ULL << spec.k;
    for (std::uint64_t v = 0; v < total; ++v) {
        for (long j = 0; j < spec.k; ++j) msg[j] = (v >> j) & 1;
        BitVector cw = encode(spec, msg);
        double ll = codeword_log_likelihood(rx, cw);
        if (ll > best.log_likelihood) {
            best.log_likelihood = ll;
            best.codeword = std::move(cw);
            best.message = msg;
        }
    }
    return best;
}

}  // namespace abspolar
