#include "abspolar/construct.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace abspolar {

namespace {

void validate_swap_set(const std::vector<int>& swaps, long n0) {
    int prev = -1000;
    for (int v : swaps) {
        if (v % 2 != 0 || v < 2 || v > n0 - 2 || v < prev + 4)
            throw std::invalid_argument("invalid swap set for layer size " + std::to_string(n0));
        prev = v;
    }
}

bool contains(const std::vector<int>& sorted, int v) {
    return std::binary_search(sorted.begin(), sorted.end(), v);
}

}  // namespace

int thread_count(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("ABS_POLAR_THREADS")) {
        int v = std::atoi(env);
        if (v > 0) return v;
    }
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

double score(const AdjacentBitsChannel& v) {
    auto mid = transform_split_capacities(v, PairTransform::mid);
    auto smid = transform_split_capacities(v, PairTransform::swapped_mid);
    double g1 = mid[0] * (1.0 - mid[0]) + mid[1] * (1.0 - mid[1]);
    double g2 = smid[0] * (1.0 - smid[0]) + smid[1] * (1.0 - smid[1]);
    return g1 - g2;
}

std::vector<int> select_swaps(std::span<const double> scores) {
    const long count = static_cast<long>(scores.size());
    std::vector<double> best(count + 1, 0.0);
    std::vector<char> take(count + 1, 0);
    for (long j = 1; j <= count; ++j) {
        double sc = scores[j - 1];
        double with = sc + (j >= 2 ? best[j - 2] : 0.0);
        if (sc > 0.0 && with > best[j - 1]) {
            best[j] = with;
            take[j] = 1;
        } else {
            best[j] = best[j - 1];
        }
    }
    std::vector<int> out;
    for (long j = count; j >= 1;) {
        if (take[j]) {
            out.push_back(static_cast<int>(j));
            j -= 2;
        } else {
            --j;
        }
    }
    std::reverse(out.begin(), out.end());
    return out;
}

LayerChannels evolve_layer(const LayerChannels& prev, const std::vector<int>& swaps,
                           std::size_t mu) {
    const long half = prev.layer_size() - 1;  // parents 1..half
    const long n0 = 2 * (half + 1);
    validate_swap_set(swaps, n0);

    LayerChannels out;
    out.channels.resize(n0);
    const int threads = thread_count();

#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (long i = 1; i <= half; ++i) {
        const AdjacentBitsChannel& v = prev.channels[i];
        if (contains(swaps, static_cast<int>(2 * i))) {
            out.channels[2 * i - 1] = transform_quantized(v, PairTransform::swapped_down, mu);
            out.channels[2 * i] = transform_quantized(v, PairTransform::swapped_mid, mu);
            out.channels[2 * i + 1] = transform_quantized(v, PairTransform::swapped_up, mu);
        } else {
            out.channels[2 * i] = transform_quantized(v, PairTransform::mid, mu);
            // A non-boundary odd channel has two equivalent derivations; the
            // lower-index parent produces it, so "down" only fires at i == 1.
            if (i == 1) out.channels[1] = transform_quantized(v, PairTransform::down, mu);
            if (!contains(swaps, static_cast<int>(2 * (i + 1))))
                out.channels[2 * i + 1] = transform_quantized(v, PairTransform::up, mu);
        }
    }
    for (long idx = 1; idx < n0; ++idx)
        if (out.channels[idx].probs.empty())
            throw std::logic_error("layer evolution left channel " + std::to_string(idx) +
                                   " unassigned");
    return out;
}

std::vector<int> select_info_set(std::span<const double> capacities, long k) {
    const long n = static_cast<long>(capacities.size());
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 1);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (capacities[a - 1] != capacities[b - 1]) return capacities[a - 1] > capacities[b - 1];
        return a > b;  // ties prefer the later (more reliable under polarization) index
    });
    std::vector<int> info(order.begin(), order.begin() + k);
    std::sort(info.begin(), info.end());
    return info;
}

ConstructionResult construct(long n, long k, const BmsChannel& w_in, std::size_t mu,
                             CodeFamily family) {
    if (!is_power_of_two(n) || n < 4)
        throw std::invalid_argument("code length must be a power of two >= 4");
    if (k < 1 || k > n) throw std::invalid_argument("dimension must be in [1, n]");
    if (!is_valid_channel(w_in)) throw std::invalid_argument("invalid channel");

    BmsChannel w = w_in;
    if (w.num_outputs() > mu) w = quantize(w, mu);

    LayerChannels layer;
    layer.channels.resize(2);
    layer.channels[1] = quantize(init_pair(w), mu);

    PermutationSpec perms;
    perms.sets.assign(log2_exact(n), {});

    const int threads = thread_count();
    for (long n0 = 4; n0 <= n; n0 *= 2) {
        const long half = n0 / 2 - 1;
        std::vector<int> swaps;
        if (family == CodeFamily::abs) {
            std::vector<double> scores(half);
#pragma omp parallel for schedule(dynamic) num_threads(threads)
            for (long i = 1; i <= half; ++i) scores[i - 1] = score(layer.channels[i]);
            for (int j : select_swaps(scores)) swaps.push_back(2 * j);
        }
        perms.at_size(n0) = swaps;
        layer = evolve_layer(layer, swaps, mu);
    }

    std::vector<double> caps(n);
    for (long i = 1; i <= n - 1; ++i) caps[i - 1] = split_capacities(layer.channels[i])[0];
    caps[n - 1] = split_capacities(layer.channels[n - 1])[1];

    ConstructionResult res;
    res.spec.n = n;
    res.spec.k = k;
    res.spec.perms = std::move(perms);
    res.spec.info_set = select_info_set(caps, k);
    res.capacities = std::move(caps);
    validate(res.spec);
    return res;
}

CodeSpec abs_construct(long n, long k, const BmsChannel& w, std::size_t mu) {
    return construct(n, k, w, mu, CodeFamily::abs).spec;
}

CodeSpec standard_construct(long n, long k, const BmsChannel& w, std::size_t mu) {
    return construct(n, k, w, mu, CodeFamily::standard).spec;
}

}  // namespace abspolar
