#pragma once

#include <cstdint>

#include "bitfade/channels.hpp"
#include "bitfade/network.hpp"

// Empirical achievability experiments: block random coding over a fading
// network with destination-side exhaustive or linear decoding, and the
// broadcast superposition scheme realized as erasure-protected bit levels.

namespace bitfade {

enum class CodingScheme {
    // Arbitrary random per-node per-block functions realized lazily as a
    // seeded random oracle; the destination enumerates every message.
    LookupRandom,
    // Random GF(2) linear per-node per-block maps; decoding is a linear
    // solve with ambiguity detection.
    LinearRandom,
};

struct SimConfig {
    double rate;        // R, message bits per timestep
    int block_len;      // n, timesteps per block
    int blocks;         // B, message-bearing pipeline depth
    int slack;          // L, >= longest source-sink path in edges
    int trials;
    std::uint64_t seed;
    CodingScheme scheme;
    int workers = 1;
};

struct SimReport {
    int trials;
    int decode_errors;
    double error_rate;
    // trials where some edge's empirical level frequencies strayed more
    // than 3 sigma from the pmf (diagnostic only; never aborts a trial)
    int atypical_fading_flags;
    double effective_rate;  // R * B / (B + L)
};

// Runs `cfg.trials` independent transmissions of a random message through
// the network and reports the decode error rate. Every node re-encodes
// the previous block's received signal with a fresh random function per
// block; the source encodes the message in every block; the destination
// knows all seeds and fading states. LookupRandom requires the total
// message size n*R*B to stay at most 16 bits.
SimReport simulate_random_coding(const NetworkSpec& net, const SimConfig& cfg);

struct BcSupReport {
    double r1_achieved;   // m1 - i0, delivered losslessly in every trial
    double r2_achieved;   // best payload bits per timestep at < 1% failure
    double failure_rate;  // failure rate at the reported payload
};

// Failure rate of the Receiver-2 erasure code at one payload size:
// every timestep carries i0 + (n - m1) V-bit levels, each holding one
// coordinate of a systematic random linear code over the payload;
// Receiver 2 keeps the coordinates its fading level reveals and decoding
// succeeds when the kept rows reach full payload rank.
double bc_superposition_probe(const BcChannel& ch, int i0, int block_len, int payload_bits,
                              int trials, std::uint64_t seed, int workers = 1);

// Sweeps a payload grid (multiples of 1/20 of the erasure-free maximum)
// from the top and reports the largest payload with failure rate below
// 1e-2, as bits per timestep.
BcSupReport bc_superposition_sim(const BcChannel& ch, int i0, int block_len, int trials,
                                 std::uint64_t seed, int workers = 1);

}  // namespace bitfade
