#pragma once

#include <utility>

#include "bitfade/fading.hpp"
#include "bitfade/gf2.hpp"

// State-parameterized deterministic channel maps for the three single-hop
// models: point-to-point truncation, shift-XOR multiple access, and the
// semi-deterministic broadcast channel.

namespace bitfade {

// Truncation pipe: the receiver sees the M most significant of n input
// bit levels, M drawn from `pmf`.
struct P2pChannel {
    int n;
    FadingPmf pmf;

    P2pChannel(int n_, FadingPmf pmf_);
};

// Two transmitters with input lengths n1/n2 and independent fading
// levels; the single output is their shift-aligned XOR superposition.
struct MacChannel {
    int n1;
    int n2;
    FadingPmf pmf1;
    FadingPmf pmf2;

    MacChannel(int n1_, int n2_, FadingPmf pmf1_, FadingPmf pmf2_);
};

// Semi-deterministic broadcast: Receiver 1 always sees the top m1 bits
// (0 < m1 < n), Receiver 2 sees a random number M2 of top bits.
struct BcChannel {
    int n;
    int m1;
    FadingPmf pmf2;

    BcChannel(int n_, int m1_, FadingPmf pmf2_);
};

// The m most significant bits of x, in order. Requires 0 <= m <= n.
LevelVector p2p_output(const P2pChannel& ch, const LevelVector& x, int m);

// Shift-XOR superposition at realized levels (m1, m2): output bit i equals
// x1^{i-(mhat-m1)} xor x2^{i-(mhat-m2)} with out-of-range indices reading 0,
// where mhat = max(m1, m2).
LevelVector mac_output(const MacChannel& ch, const LevelVector& x1, const LevelVector& x2, int m1,
                       int m2);

// (Y1, Y2) = (top m1 bits, top m2 bits).
std::pair<LevelVector, LevelVector> bc_outputs(const BcChannel& ch, const LevelVector& x, int m2);

// E[M] bits per channel use.
double p2p_capacity(const P2pChannel& ch);

}  // namespace bitfade
