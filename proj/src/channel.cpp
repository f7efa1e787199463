#include "abspolar/channel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace abspolar {

namespace {

double plog2p_ratio(double p, double base) {
    if (p <= 0.0) return 0.0;
    return p * std::log2(p / base);
}

// Standard normal CDF.
double phi(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace

BmsChannel make_bec(double eps) {
    if (!(eps >= 0.0 && eps <= 1.0)) throw std::invalid_argument("bec: eps must be in [0,1]");
    BmsChannel w;
    w.probs = {{1.0 - eps, 0.0}, {eps, eps}, {0.0, 1.0 - eps}};
    return w;
}

BmsChannel make_bsc(double p) {
    if (!(p >= 0.0 && p <= 0.5)) throw std::invalid_argument("bsc: p must be in [0,1/2]");
    BmsChannel w;
    w.probs = {{1.0 - p, p}, {p, 1.0 - p}};
    return w;
}

double awgn_sigma(double ebn0_db, double rate) {
    if (!(rate > 0.0)) throw std::invalid_argument("awgn: rate must be positive");
    double ebn0 = std::pow(10.0, ebn0_db / 10.0);
    double var = 1.0 / (2.0 * rate * ebn0);
    if (!(var > 0.0) || !std::isfinite(var)) throw std::invalid_argument("awgn: noise variance must be positive");
    return std::sqrt(var);
}

BmsChannel make_awgn(double ebn0_db, double rate, int levels) {
    if (levels < 2) throw std::invalid_argument("awgn: levels must be >= 2");
    double sigma = awgn_sigma(ebn0_db, rate);
    double var = sigma * sigma;

    // LLR of y under BPSK (0 -> +1, 1 -> -1) is 2y/var. Bin edges are uniform
    // in LLR over [-A, A]; the two outermost bins absorb the tails.
    double amp = 8.0 / var;
    int inner = levels - 2;
    std::vector<double> edges(levels + 1);
    edges[0] = -std::numeric_limits<double>::infinity();
    edges[levels] = std::numeric_limits<double>::infinity();
    for (int j = 1; j < levels; ++j)
        edges[j] = -amp + 2.0 * amp * (j - 1) / std::max(inner, 1);
    if (inner == 0) edges[1] = 0.0;

    BmsChannel w;
    w.probs.resize(levels);
    for (int j = 0; j < levels; ++j) {
        // y interval corresponding to the LLR interval [edges[j], edges[j+1])
        double ylo = edges[j] * var / 2.0;
        double yhi = edges[j + 1] * var / 2.0;
        auto mass = [&](double mean) {
            double lo = std::isinf(ylo) ? 0.0 : phi((ylo - mean) / sigma);
            double hi = std::isinf(yhi) ? 1.0 : phi((yhi - mean) / sigma);
            return std::max(hi - lo, 0.0);
        };
        w.probs[j] = {mass(+1.0), mass(-1.0)};
    }
    // Tidy rounding: renormalize each input column.
    for (int x = 0; x < 2; ++x) {
        double sum = 0.0;
        for (auto& row : w.probs) sum += row[x];
        for (auto& row : w.probs) row[x] /= sum;
    }
    return w;
}

double capacity(const BmsChannel& w) {
    double acc = 0.0;
    for (const auto& row : w.probs) {
        double base = 0.5 * (row[0] + row[1]);
        if (base <= 0.0) continue;
        acc += 0.5 * plog2p_ratio(row[0], base);
        acc += 0.5 * plog2p_ratio(row[1], base);
    }
    return acc;
}

bool is_valid_channel(const BmsChannel& w, double tol) {
    double sum0 = 0.0, sum1 = 0.0;
    for (const auto& row : w.probs) {
        if (row[0] < 0.0 || row[1] < 0.0) return false;
        sum0 += row[0];
        sum1 += row[1];
    }
    if (std::abs(sum0 - 1.0) > tol || std::abs(sum1 - 1.0) > tol) return false;

    // Symmetry: the multiset {(W(y|0), W(y|1))} must equal {(W(y|1), W(y|0))}.
    auto fwd = w.probs;
    auto rev = w.probs;
    for (auto& row : rev) std::swap(row[0], row[1]);
    std::sort(fwd.begin(), fwd.end());
    std::sort(rev.begin(), rev.end());
    for (std::size_t i = 0; i < fwd.size(); ++i) {
        if (std::abs(fwd[i][0] - rev[i][0]) > tol) return false;
        if (std::abs(fwd[i][1] - rev[i][1]) > tol) return false;
    }
    return true;
}

BmsChannel quantize(const BmsChannel& w, std::size_t mu) {
    if (mu < 2) throw std::invalid_argument("quantize: mu must be >= 2");
    if (w.num_outputs() <= mu) return w;
    // 1-D analog of the pair-channel quantizer: bucket by the posterior of
    // input 0.
    std::size_t b = mu - 1;
    std::map<std::size_t, std::array<double, 2>> buckets;
    for (const auto& row : w.probs) {
        double sum = row[0] + row[1];
        if (sum <= 0.0) continue;
        auto idx = std::min(static_cast<std::size_t>(b * (row[0] / sum)), b);
        auto& acc = buckets[idx];
        acc[0] += row[0];
        acc[1] += row[1];
    }
    BmsChannel out;
    out.probs.reserve(buckets.size());
    for (const auto& [idx, acc] : buckets) out.probs.push_back(acc);
    return out;
}

double clamp_llr(double llr) {
    if (std::isnan(llr)) return 0.0;
    return std::clamp(llr, -kLlrClamp, kLlrClamp);
}

std::array<double, 2> llr_to_pair(double llr) {
    double l = clamp_llr(llr);
    // p0 = e^l / (1 + e^l), computed without overflow
    double p0 = l >= 0.0 ? 1.0 / (1.0 + std::exp(-l)) : std::exp(l) / (1.0 + std::exp(l));
    return {p0, 1.0 - p0};
}

ChannelDesc parse_channel_desc(const std::string& text) {
    auto colon = text.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("channel descriptor needs kind:param, got '" + text + "'");
    std::string kind = text.substr(0, colon);
    double param = std::stod(text.substr(colon + 1));
    ChannelDesc d;
    d.param = param;
    if (kind == "bec")
        d.kind = ChannelDesc::Kind::bec;
    else if (kind == "bsc")
        d.kind = ChannelDesc::Kind::bsc;
    else if (kind == "awgn")
        d.kind = ChannelDesc::Kind::awgn;
    else
        throw std::invalid_argument("unknown channel kind '" + kind + "'");
    return d;
}

std::string to_string(const ChannelDesc& desc) {
    const char* k = desc.kind == ChannelDesc::Kind::bec   ? "bec"
                    : desc.kind == ChannelDesc::Kind::bsc ? "bsc"
                                                          : "awgn";
    return std::string(k) + ":" + std::to_string(desc.param);
}

BmsChannel build_channel(const ChannelDesc& desc, double rate, int awgn_levels) {
    switch (desc.kind) {
        case ChannelDesc::Kind::bec: return make_bec(desc.param);
        case ChannelDesc::Kind::bsc: return make_bsc(desc.param);
        case ChannelDesc::Kind::awgn: return make_awgn(desc.param, rate, awgn_levels);
    }
    throw std::logic_error("unreachable");
}

}  // namespace abspolar
