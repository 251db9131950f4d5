#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "bitfade/codingsim.hpp"

using namespace bitfade;

namespace {

NetworkSpec single_edge() {
    return NetworkSpec::parse(
        "node S levels=2\nnode D levels=2\nedge S D pmf=2:1.0\nsource S\nsink D\n");
}

// deterministic line whose bottleneck is the second hop
NetworkSpec tight_line() {
    return NetworkSpec::parse(
        "node S levels=2\nnode A levels=2\nnode D levels=2\n"
        "edge S A pmf=2:1.0\nedge A D pmf=1:1.0\nsource S\nsink D\n");
}

NetworkSpec fading_diamond() {
    return NetworkSpec::parse(
        "node S levels=2\nnode A levels=2\nnode B levels=2\nnode D levels=2\n"
        "edge S A pmf=1:0.5,2:0.5\nedge S B pmf=1:0.5,2:0.5\n"
        "edge A D pmf=1:0.5,2:0.5\nedge B D pmf=1:0.5,2:0.5\n"
        "source S\nsink D\n");
}

SimConfig linear_cfg(double rate, int n, int blocks, int slack, int trials, std::uint64_t seed) {
    return SimConfig{rate, n, blocks, slack, trials, seed, CodingScheme::LinearRandom, 2};
}

}  // namespace

TEST_CASE("noiseless full-rank pipe decodes perfectly") {
    const auto report =
        simulate_random_coding(single_edge(), linear_cfg(2.0, 8, 4, 1, 20, 42));
    CHECK(report.trials == 20);
    CHECK(report.decode_errors == 0);
    CHECK(report.error_rate == 0.0);
    CHECK(report.atypical_fading_flags == 0);  // point-mass fading is never atypical
    CHECK(report.effective_rate == doctest::Approx(2.0 * 4 / 5.0));
}

TEST_CASE("deterministic line decodes at the cut-set rate") {
    const auto report = simulate_random_coding(tight_line(), linear_cfg(1.0, 16, 4, 2, 20, 7));
    CHECK(report.error_rate == 0.0);
}

TEST_CASE("fading diamond shows the rate threshold") {
    // bound is 1.75; stay clearly on each side with a small, fast setup
    const auto below = simulate_random_coding(fading_diamond(), linear_cfg(1.4, 32, 6, 2, 20, 99));
    CHECK(below.error_rate <= 0.1);
    const auto above = simulate_random_coding(fading_diamond(), linear_cfg(2.2, 32, 6, 2, 20, 99));
    CHECK(above.error_rate >= 0.9);
}

TEST_CASE("lookup and linear schemes agree on the line network") {
    const NetworkSpec net = tight_line();  // bound 1
    for (double rate : {0.5, 2.0}) {
        SimConfig cfg{rate, 2, 4, 2, 40, 11, CodingScheme::LookupRandom, 2};
        const auto lookup = simulate_random_coding(net, cfg);
        cfg.scheme = CodingScheme::LinearRandom;
        const auto linear = simulate_random_coding(net, cfg);
        if (rate < 1.0) {
            CHECK(lookup.error_rate <= 0.3);
            CHECK(linear.error_rate <= 0.3);
        } else {
            CHECK(lookup.error_rate >= 0.7);
            CHECK(linear.error_rate >= 0.7);
        }
    }
}

TEST_CASE("effective rate climbs toward R as B grows") {
    double last = 0.0;
    for (int blocks : {2, 4, 8, 16}) {
        const auto report =
            simulate_random_coding(single_edge(), linear_cfg(1.0, 4, blocks, 1, 1, 5));
        CHECK(report.effective_rate == doctest::Approx(1.0 * blocks / (blocks + 1)));
        CHECK(report.effective_rate > last);
        last = report.effective_rate;
    }
}

TEST_CASE("simulation runs are reproducible across worker counts") {
    SimConfig cfg = linear_cfg(1.4, 16, 4, 2, 12, 31);
    cfg.workers = 1;
    const auto solo = simulate_random_coding(fading_diamond(), cfg);
    cfg.workers = 4;
    const auto pooled = simulate_random_coding(fading_diamond(), cfg);
    CHECK(solo.decode_errors == pooled.decode_errors);
    CHECK(solo.atypical_fading_flags == pooled.atypical_fading_flags);
}

TEST_CASE("config validation") {
    const NetworkSpec net = single_edge();
    SimConfig cfg = linear_cfg(2.0, 8, 4, 1, 5, 1);

    cfg.slack = 0;  // below the longest path
    CHECK_THROWS_AS(simulate_random_coding(net, cfg), std::invalid_argument);

    cfg = linear_cfg(0.0, 8, 4, 1, 5, 1);
    CHECK_THROWS_AS(simulate_random_coding(net, cfg), std::invalid_argument);

    // lookup decoding is capped at 2^16 candidate messages
    cfg = SimConfig{2.0, 8, 4, 1, 5, 1, CodingScheme::LookupRandom, 1};
    CHECK_THROWS_AS(simulate_random_coding(net, cfg), std::invalid_argument);

    const NetworkSpec unreachable = NetworkSpec::parse(
        "node S levels=1\nnode A levels=1\nnode D levels=1\nedge S A pmf=1:1.0\n"
        "source S\nsink D\n");
    cfg = linear_cfg(1.0, 4, 2, 1, 1, 1);
    CHECK_THROWS_AS(simulate_random_coding(unreachable, cfg), std::invalid_argument);

    // desk-scale caps reject before running
    cfg = linear_cfg(2.0, 1 << 16, 8, 1, 1, 1);
    CHECK_THROWS_AS(simulate_random_coding(net, cfg), std::invalid_argument);
    const BcChannel wide(24, 4, FadingPmf::point_mass(0));
    CHECK_THROWS_AS(bc_superposition_sim(wide, 4, 1 << 22, 1, 1), std::invalid_argument);
}

TEST_CASE("broadcast erasure scheme with no erasures is lossless") {
    // Receiver 2 always sees everything: every carrier arrives and the
    // systematic rows decode by themselves
    const BcChannel ch(6, 4, FadingPmf::point_mass(6));
    for (int i0 : {0, 2, 4}) {
        const auto report = bc_superposition_sim(ch, i0, 128, 5, 17);
        CHECK(report.r1_achieved == static_cast<double>(4 - i0));
        CHECK(report.r2_achieved == static_cast<double>(i0 + 2));
        CHECK(report.failure_rate == 0.0);
    }
}

TEST_CASE("broadcast erasure scheme approaches the sweep target") {
    const BcChannel ch(6, 4, FadingPmf(std::vector<double>(7, 1.0 / 7)));
    // target I(V;Y2) at i0=2 is 2.0 bits/use
    const auto report = bc_superposition_sim(ch, 2, 1024, 10, 23);
    CHECK(report.r1_achieved == 2.0);
    CHECK(report.r2_achieved >= 0.9 * 2.0);
    CHECK(report.failure_rate < 1e-2);
}

TEST_CASE("payloads above the erasure capacity fail") {
    const BcChannel ch(6, 4, FadingPmf(std::vector<double>(7, 1.0 / 7)));
    const int block = 1024;
    const int payload = static_cast<int>(std::ceil(1.1 * 2.0 * block));
    CHECK(bc_superposition_probe(ch, 2, block, payload, 10, 29) >= 0.5);
}

TEST_CASE("broadcast probe validates its arguments") {
    const BcChannel ch(6, 4, FadingPmf::point_mass(6));
    CHECK_THROWS_AS(bc_superposition_sim(ch, 5, 128, 5, 1), std::invalid_argument);
    CHECK_THROWS_AS(bc_superposition_sim(ch, -1, 128, 5, 1), std::invalid_argument);
    CHECK_THROWS_AS(bc_superposition_sim(ch, 2, 32, 5, 1), std::invalid_argument);
    CHECK(bc_superposition_probe(ch, 2, 128, 0, 5, 1) == 0.0);
}

TEST_CASE("broadcast simulation is reproducible across workers") {
    const BcChannel ch(6, 4, FadingPmf(std::vector<double>(7, 1.0 / 7)));
    const auto a = bc_superposition_sim(ch, 2, 256, 8, 3, 1);
    const auto b = bc_superposition_sim(ch, 2, 256, 8, 3, 4);
    CHECK(a.r2_achieved == b.r2_achieved);
    CHECK(a.failure_rate == b.failure_rate);
}
