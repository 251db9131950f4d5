#include "bitfade/channels.hpp"

#include <algorithm>
#include <stdexcept>

namespace bitfade {

namespace {

void check_level(int m, int limit, const char* what) {
    if (m < 0 || m > limit)
        throw std::invalid_argument(std::string(what) + ": level " + std::to_string(m) +
                                    " outside [0, " + std::to_string(limit) + "]");
}

}  // namespace

P2pChannel::P2pChannel(int n_, FadingPmf pmf_) : n(n_), pmf(std::move(pmf_)) {
    if (n < 0) throw std::invalid_argument("P2pChannel: negative input length");
    if (pmf.max_level() > n)
        throw std::invalid_argument("P2pChannel: pmf support up to " +
                                    std::to_string(pmf.max_level()) + " exceeds input length " +
                                    std::to_string(n));
}

MacChannel::MacChannel(int n1_, int n2_, FadingPmf pmf1_, FadingPmf pmf2_)
    : n1(n1_), n2(n2_), pmf1(std::move(pmf1_)), pmf2(std::move(pmf2_)) {
    if (n1 < 0 || n2 < 0) throw std::invalid_argument("MacChannel: negative input length");
    if (pmf1.max_level() > n1 || pmf2.max_level() > n2)
        throw std::invalid_argument("MacChannel: pmf support exceeds input length");
}

BcChannel::BcChannel(int n_, int m1_, FadingPmf pmf2_) : n(n_), m1(m1_), pmf2(std::move(pmf2_)) {
    if (!(0 < m1 && m1 < n))
        throw std::invalid_argument("BcChannel: m1 = " + std::to_string(m1) +
                                    " must satisfy 0 < m1 < n = " + std::to_string(n));
    if (pmf2.max_level() > n)
        throw std::invalid_argument("BcChannel: pmf support up to " +
                                    std::to_string(pmf2.max_level()) + " exceeds input length " +
                                    std::to_string(n));
}

LevelVector p2p_output(const P2pChannel& ch, const LevelVector& x, int m) {
    if (static_cast<int>(x.length()) != ch.n)
        throw std::invalid_argument("p2p_output: input length " + std::to_string(x.length()) +
                                    ", channel expects " + std::to_string(ch.n));
    check_level(m, ch.n, "p2p_output");
    return x.prefix(m);
}

LevelVector mac_output(const MacChannel& ch, const LevelVector& x1, const LevelVector& x2, int m1,
                       int m2) {
    if (static_cast<int>(x1.length()) != ch.n1 || static_cast<int>(x2.length()) != ch.n2)
        throw std::invalid_argument("mac_output: input lengths " + std::to_string(x1.length()) +
                                    "/" + std::to_string(x2.length()) + ", channel expects " +
                                    std::to_string(ch.n1) + "/" + std::to_string(ch.n2));
    check_level(m1, ch.n1, "mac_output");
    check_level(m2, ch.n2, "mac_output");
    const int mhat = std::max(m1, m2);
    LevelVector y(mhat);
    for (int i = 1; i <= mhat; ++i) {
        const int j1 = i - (mhat - m1);
        const int j2 = i - (mhat - m2);
        int bit = 0;
        if (j1 >= 1) bit ^= x1.bit(j1);
        if (j2 >= 1) bit ^= x2.bit(j2);
        y.set_bit(i, bit);
    }
    return y;
}

std::pair<LevelVector, LevelVector> bc_outputs(const BcChannel& ch, const LevelVector& x, int m2) {
    if (static_cast<int>(x.length()) != ch.n)
        throw std::invalid_argument("bc_outputs: input length " + std::to_string(x.length()) +
                                    ", channel expects " + std::to_string(ch.n));
    check_level(m2, ch.n, "bc_outputs");
    return {x.prefix(ch.m1), x.prefix(m2)};
}

double p2p_capacity(const P2pChannel& ch) { return ch.pmf.expectation(); }

}  // namespace bitfade
