#include "abspolar/dbec.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "abspolar/construct.hpp"

namespace abspolar {

Dbec dbec_init(double eps) {
    if (!(eps >= 0.0 && eps <= 1.0)) throw std::invalid_argument("dbec_init: eps must be in [0,1]");
    return {(1 - eps) * (1 - eps), 0.0, (1 - eps) * eps, (1 - eps) * eps, eps * eps};
}

Dbec dbec_transform(const Dbec& v, PairTransform kind) {
    const double p = v.p, q = v.q, r = v.r, s = v.s, t = v.t;
    switch (kind) {
        case PairTransform::down: {
            double a = p + q, b = r + s + t;
            return {a * a, 0.0, a * b, b * a, b * b};
        }
        case PairTransform::mid:
            return {p * p + 2 * r * p + 2 * s * p, 2 * q - q * q + 2 * p * t, 2 * r * s,
                    r * r + s * s, 2 * t * (r + s) + t * t};
        case PairTransform::up: {
            double a = p + r + s, b = q + t;
            return {a * a, 0.0, a * b, b * a, b * b};
        }
        case PairTransform::swapped_down:
            return {p * p, q * q + 2 * p * q, r * r + 2 * p * r, s * s + 2 * p * s,
                    2 * t - t * t + 2 * q * r + 2 * q * s + 2 * r * s};
        case PairTransform::swapped_mid: {
            // Equals the mid transform with the q and s components exchanged
            // (swapping the middle bits exchanges which single bit survives).
            // Evaluating it that way keeps the two bitwise-identical where
            // they should coincide, so symmetric channels score exactly zero.
            Dbec m = dbec_transform(v, PairTransform::mid);
            return {m.p, m.s, m.r, m.q, m.t};
        }
        case PairTransform::swapped_up:
            return {2 * p - p * p + 2 * q * r + 2 * q * s + 2 * r * s, q * q + 2 * t * q,
                    r * r + 2 * r * t, s * s + 2 * s * t, t * t};
    }
    throw std::invalid_argument("unknown transform kind");
}

std::array<double, 2> dbec_erasures(const Dbec& v) { return {v.r + v.s + v.t, v.q + v.t}; }

double dbec_g(const Dbec& v) {
    auto [e1, e2] = dbec_erasures(v);
    return e1 * (1.0 - e1) + e2 * (1.0 - e2);
}

bool is_valid(const Dbec& v, double tol) {
    for (double x : {v.p, v.q, v.r, v.s, v.t})
        if (!(x >= 0.0 && x <= 1.0)) return false;
    return std::abs(v.p + v.q + v.r + v.s + v.t - 1.0) <= tol;
}

AdjacentBitsChannel dbec_to_table(const Dbec& v) {
    // Outputs are triples (o1, o2, o3) in {0,1,?} reporting u1, u1^u2, u2.
    auto sym = [](int known, int value) { return known ? value : 2; };
    AdjacentBitsChannel out;
    std::array<std::pair<double, std::array<int, 3>>, 5> shapes = {{
        {v.p, {1, 1, 1}},  // everything
        {v.q, {1, 0, 0}},  // first bit only
        {v.r, {0, 1, 0}},  // sum only
        {v.s, {0, 0, 1}},  // second bit only
        {v.t, {0, 0, 0}},  // nothing
    }};
    std::vector<std::array<double, 4>> table(27, {0, 0, 0, 0});
    for (const auto& [mass, keep] : shapes) {
        if (mass <= 0.0) continue;
        for (int u1 = 0; u1 < 2; ++u1)
            for (int u2 = 0; u2 < 2; ++u2) {
                int o1 = sym(keep[0], u1), o2 = sym(keep[1], u1 ^ u2), o3 = sym(keep[2], u2);
                table[(o1 * 3 + o2) * 3 + o3][2 * u1 + u2] += mass;
            }
    }
    for (const auto& row : table)
        if (row[0] + row[1] + row[2] + row[3] > 0.0) out.probs.push_back(row);
    return out;
}

Dbec dbec_from_table(const AdjacentBitsChannel& v) {
    // Each shape puts equal probability on every input in a row's support, and
    // a shape with per-input probability x contributes total row mass 4x
    // across its outputs. Classify rows by support pattern and divide by 4.
    Dbec out{0, 0, 0, 0, 0};
    for (const auto& row : v.probs) {
        double mass = row[0] + row[1] + row[2] + row[3];
        if (mass <= 0.0) continue;
        int pattern = 0;
        double live_val = 0.0;
        for (int u = 0; u < 4; ++u)
            if (row[u] > 0.0) {
                pattern |= 1 << u;
                live_val = row[u];
            }
        for (int u = 0; u < 4; ++u)
            if (row[u] > 0.0 && std::abs(row[u] - live_val) > 1e-9 * std::max(1.0, live_val))
                throw std::invalid_argument("table is not erasure-structured");
        switch (pattern) {
            case 0b0001: case 0b0010: case 0b0100: case 0b1000: out.p += mass / 4; break;
            case 0b0011: case 0b1100: out.q += mass / 4; break;  // first bit known
            case 0b1001: case 0b0110: out.r += mass / 4; break;  // sum known
            case 0b0101: case 0b1010: out.s += mass / 4; break;  // second bit known
            case 0b1111: out.t += mass / 4; break;
            default: throw std::invalid_argument("table is not erasure-structured");
        }
    }
    if (std::abs(out.p + out.q + out.r + out.s + out.t - 1.0) > 1e-6)
        throw std::invalid_argument("table is not erasure-structured");
    return out;
}

BecConstruction construct_bec(long n, double eps, CodeFamily family) {
    if (!is_power_of_two(n) || n < 4)
        throw std::invalid_argument("construct_bec: n must be a power of two >= 4");

    std::vector<Dbec> chans(2);
    chans[1] = dbec_init(eps);

    PermutationSpec perms;
    perms.sets.assign(log2_exact(n), {});

    for (long n0 = 4; n0 <= n; n0 *= 2) {
        const long half = n0 / 2 - 1;
        std::vector<int> swaps;
        if (family == CodeFamily::abs) {
            std::vector<double> scores(half);
            for (long i = 1; i <= half; ++i)
                scores[i - 1] = dbec_g(dbec_transform(chans[i], PairTransform::mid)) -
                                dbec_g(dbec_transform(chans[i], PairTransform::swapped_mid));
            for (int j : select_swaps(scores)) swaps.push_back(2 * j);
        }
        perms.at_size(n0) = swaps;

        std::vector<Dbec> next(n0);
        auto swapped_at = [&](long v) {
            return std::binary_search(swaps.begin(), swaps.end(), static_cast<int>(v));
        };
        for (long i = 1; i <= half; ++i) {
            const Dbec& v = chans[i];
            if (swapped_at(2 * i)) {
                next[2 * i - 1] = dbec_transform(v, PairTransform::swapped_down);
                next[2 * i] = dbec_transform(v, PairTransform::swapped_mid);
                next[2 * i + 1] = dbec_transform(v, PairTransform::swapped_up);
            } else {
                next[2 * i] = dbec_transform(v, PairTransform::mid);
                if (i == 1) next[1] = dbec_transform(v, PairTransform::down);
                if (!swapped_at(2 * (i + 1)))
                    next[2 * i + 1] = dbec_transform(v, PairTransform::up);
            }
        }
        chans = std::move(next);
    }

    BecConstruction out;
    out.perms = std::move(perms);
    out.erasure_probs.resize(n);
    for (long i = 1; i <= n - 1; ++i) out.erasure_probs[i - 1] = dbec_erasures(chans[i])[0];
    out.erasure_probs[n - 1] = dbec_erasures(chans[n - 1])[1];
    return out;
}

double unpolarized_fraction(std::span<const double> probs, double lo, double hi) {
    if (probs.empty()) return 0.0;
    long count = 0;
    for (double h : probs)
        if (h >= lo && h <= hi) ++count;
    return static_cast<double>(count) / static_cast<double>(probs.size());
}

PowerFit scaling_exponent(std::span<const std::pair<double, double>> points) {
    if (points.size() < 3) throw std::invalid_argument("scaling_exponent: need >= 3 points");
    double sx = 0, sy = 0;
    for (const auto& [n, f] : points) {
        if (!(f > 0.0)) throw std::invalid_argument("scaling_exponent: fractions must be positive");
        sx += std::log(n);
        sy += std::log(f);
    }
    const double xbar = sx / points.size(), ybar = sy / points.size();
    double num = 0, den = 0;
    for (const auto& [n, f] : points) {
        double dx = std::log(n) - xbar;
        num += dx * (std::log(f) - ybar);
        den += dx * dx;
    }
    double slope = num / den;
    PowerFit fit;
    fit.mu = -1.0 / slope;
    fit.c = std::exp(ybar - slope * xbar);
    return fit;
}

double gamma_metric(std::span<const double> probs) {
    if (probs.empty()) return 0.0;
    double acc = 0.0;
    for (double h : probs) acc += h * (1.0 - h);
    return acc / static_cast<double>(probs.size());
}

}  // namespace abspolar
