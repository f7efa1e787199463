#include <cmath>

#include "abspolar/adjacent.hpp"
#include "abspolar/dbec.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace abspolar;
using testutil::make_rng;
using testutil::random_pair_channel;

namespace {

const std::array<PairTransform, 6> kAllKinds = {
    PairTransform::down,         PairTransform::mid,         PairTransform::up,
    PairTransform::swapped_down, PairTransform::swapped_mid, PairTransform::swapped_up,
};

AdjacentBitsChannel perfect_pair() {
    // output reveals both inputs
    AdjacentBitsChannel v;
    v.probs.assign(4, {0, 0, 0, 0});
    for (int u = 0; u < 4; ++u) v.probs[u][u] = 1.0;
    return v;
}

}  // namespace

TEST_CASE("init_pair basics") {
    // perfect channel: both split capacities 1
    BmsChannel id;
    id.probs = {{1.0, 0.0}, {0.0, 1.0}};
    auto v = init_pair(id);
    auto caps = split_capacities(v);
    CHECK(caps[0] == doctest::Approx(1.0));
    CHECK(caps[1] == doctest::Approx(1.0));

    // BEC(1/2) pair channel matches the closed-form erasure parameters
    auto vb = init_pair(make_bec(0.5));
    Dbec d = dbec_from_table(vb);
    CHECK(d.p == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(d.q == doctest::Approx(0.0));
    CHECK(d.r == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(d.s == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(d.t == doctest::Approx(0.25).epsilon(1e-12));

    CHECK(is_valid_channel(init_pair(make_bsc(0.2))));
}

TEST_CASE("transforms preserve row-stochasticity") {
    auto rng = make_rng(7);
    for (int trial = 0; trial < 10; ++trial) {
        auto v = random_pair_channel(5, rng);
        for (auto kind : kAllKinds) CHECK(is_valid_channel(pair_transform(v, kind)));
    }
    auto v = perfect_pair();
    for (auto kind : kAllKinds) {
        auto caps = split_capacities(pair_transform(v, kind));
        CHECK(caps[0] == doctest::Approx(1.0));
        CHECK(caps[1] == doctest::Approx(1.0));
    }
}

TEST_CASE("table transforms agree with the erasure closed forms") {
    auto rng = make_rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        double a = testutil::uniform(rng), b = testutil::uniform(rng), c = testutil::uniform(rng),
               d = testutil::uniform(rng), e = testutil::uniform(rng);
        double sum = a + b + c + d + e;
        Dbec base{a / sum, b / sum, c / sum, d / sum, e / sum};
        auto table = dbec_to_table(base);
        for (auto kind : kAllKinds) {
            Dbec via_table = dbec_from_table(pair_transform(table, kind));
            Dbec direct = dbec_transform(base, kind);
            CHECK(via_table.p == doctest::Approx(direct.p).epsilon(1e-9));
            CHECK(via_table.q == doctest::Approx(direct.q).epsilon(1e-9));
            CHECK(via_table.r == doctest::Approx(direct.r).epsilon(1e-9));
            CHECK(via_table.s == doctest::Approx(direct.s).epsilon(1e-9));
            CHECK(via_table.t == doctest::Approx(direct.t).epsilon(1e-9));
        }
    }
}

TEST_CASE("one-layer polarization orders the splits on erasure inputs") {
    // exhaustive grid over erasure-structured channels: the first split can
    // only degrade through "down", improves through the conditioned half of
    // "down", and the second split only improves through "up"
    for (double e1 = 0.0; e1 <= 1.0; e1 += 0.25)
        for (double e2 = 0.0; e2 + e1 <= 1.0; e2 += 0.25)
            for (double e3 = 0.0; e1 + e2 + e3 <= 1.0; e3 += 0.25)
                for (double e4 = 0.0; e1 + e2 + e3 + e4 <= 1.0; e4 += 0.25) {
                    Dbec v{e1, e2, e3, e4, 1.0 - e1 - e2 - e3 - e4};
                    Dbec down = dbec_transform(v, PairTransform::down);
                    Dbec up = dbec_transform(v, PairTransform::up);
                    double i1 = 1.0 - dbec_erasures(v)[0];
                    double i2 = 1.0 - dbec_erasures(v)[1];
                    CHECK(1.0 - dbec_erasures(down)[0] <= i1 + 1e-12);
                    CHECK(i1 <= 1.0 - dbec_erasures(down)[1] + 1e-12);
                    CHECK(i2 <= 1.0 - dbec_erasures(up)[1] + 1e-12);
                }
}

TEST_CASE("split matches the classic erasure recursion") {
    for (double eps : {0.1, 0.5, 0.8}) {
        auto pair = split(init_pair(make_bec(eps)));
        double cap_first = capacity(pair.first);
        double cap_second = capacity(pair.second);
        CHECK(cap_first == doctest::Approx(1.0 - (1.0 - (1.0 - eps) * (1.0 - eps))).epsilon(1e-9));
        CHECK(cap_second == doctest::Approx(1.0 - eps * eps).epsilon(1e-9));
    }
}

TEST_CASE("chain rule") {
    auto rng = make_rng(13);
    for (int trial = 0; trial < 20; ++trial) {
        auto v = random_pair_channel(6, rng);
        auto caps = split_capacities(v);
        CHECK(caps[0] + caps[1] == doctest::Approx(pair_mutual_information(v)).epsilon(1e-9));
        // split() and the streaming accumulators agree
        auto pair = split(v);
        CHECK(capacity(pair.first) == doctest::Approx(caps[0]).epsilon(1e-12));
        CHECK(capacity(pair.second) == doctest::Approx(caps[1]).epsilon(1e-12));
    }
    // chain rule against the base channel: I_1 + I_2 = 2 I(W)
    for (double p : {0.05, 0.2}) {
        auto caps = split_capacities(init_pair(make_bsc(p)));
        CHECK(caps[0] + caps[1] == doctest::Approx(2.0 * capacity(make_bsc(p))).epsilon(1e-9));
    }
}

TEST_CASE("g metric") {
    CHECK(g_metric(perfect_pair()) == doctest::Approx(0.0));
    AdjacentBitsChannel useless;
    useless.probs.assign(1, {1.0, 1.0, 1.0, 1.0});
    CHECK(g_metric(useless) == doctest::Approx(0.0));
    CHECK(g_metric(init_pair(make_bec(0.5))) == doctest::Approx(0.375).epsilon(1e-12));
}

TEST_CASE("quantize honors the contract") {
    auto rng = make_rng(17);
    auto v = random_pair_channel(300, rng);

    // identity below the cap
    CHECK(quantize(v, 1000).num_outputs() == v.num_outputs());
    CHECK_THROWS(quantize(v, 7));

    auto q = quantize(v, 64);
    CHECK(q.num_outputs() <= 64);
    // per-input mass conserved
    std::array<double, 4> before{0, 0, 0, 0}, after{0, 0, 0, 0};
    for (auto& row : v.probs)
        for (int u = 0; u < 4; ++u) before[u] += row[u];
    for (auto& row : q.probs)
        for (int u = 0; u < 4; ++u) after[u] += row[u];
    for (int u = 0; u < 4; ++u) CHECK(after[u] == doctest::Approx(before[u]).epsilon(1e-12));

    // data processing: split capacities never increase
    for (int trial = 0; trial < 10; ++trial) {
        auto w = random_pair_channel(120, rng);
        auto caps = split_capacities(w);
        auto qcaps = split_capacities(quantize(w, 27));
        CHECK(qcaps[0] <= caps[0] + 1e-9);
        CHECK(qcaps[1] <= caps[1] + 1e-9);
    }
}

TEST_CASE("fused transform+quantize equals the two-step pipeline") {
    auto rng = make_rng(19);
    for (int trial = 0; trial < 6; ++trial) {
        auto v = random_pair_channel(12, rng);
        for (auto kind : kAllKinds) {
            for (std::size_t mu : {8u, 27u, 100000u}) {
                auto fused = transform_quantized(v, kind, mu);
                auto twostep = quantize(pair_transform(v, kind), mu);
                REQUIRE(fused.num_outputs() == twostep.num_outputs());
                for (std::size_t y = 0; y < fused.num_outputs(); ++y)
                    for (int u = 0; u < 4; ++u)
                        CHECK(fused.probs[y][u] ==
                              doctest::Approx(twostep.probs[y][u]).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("streaming split capacities match the materialized transform") {
    auto rng = make_rng(23);
    auto v = random_pair_channel(9, rng);
    for (auto kind : kAllKinds) {
        auto streamed = transform_split_capacities(v, kind);
        auto direct = split_capacities(pair_transform(v, kind));
        CHECK(streamed[0] == doctest::Approx(direct[0]).epsilon(1e-9));
        CHECK(streamed[1] == doctest::Approx(direct[1]).epsilon(1e-9));
    }
}
