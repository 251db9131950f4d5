#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

// Integer fading-level distributions: validation, seeded sampling,
// expectations, expectations of maxima, and the SNR-to-level quantizer
// used when comparing against Gaussian references.

namespace bitfade {

// Probability mass function of a fading level M over {0..n}. Immutable
// after construction; construction validates nonnegativity and that the
// probabilities sum to 1 within 1e-12.
class FadingPmf {
public:
    // probs[i] = P[M = i]; the maximum level n is probs.size() - 1.
    explicit FadingPmf(std::vector<double> probs);

    static FadingPmf point_mass(int level);

    // Text form "level:prob,level:prob,..." (unlisted levels have
    // probability 0). Used by network files and CLI flags.
    static FadingPmf from_text(std::string_view text);

    // Quantizes a discrete SNR distribution to integer levels via
    // ceil(0.5 * lg(1 + snr)), aggregating probabilities per level.
    // Requires every SNR value >= 1 (high-SNR regime).
    static FadingPmf from_snr(std::span<const std::pair<double, double>> snr_dist);

    int max_level() const { return static_cast<int>(probs_.size()) - 1; }
    double prob(int level) const;
    // P[M >= level]
    double tail(int level) const;

    double expectation() const;

    // Level drawn at stream position `index`; a pure function of
    // (seed, index), so independent of evaluation order.
    int sample(std::uint64_t seed, std::uint64_t index) const;

    // Levels with nonzero probability, ascending.
    const std::vector<int>& support() const { return support_; }

    std::string to_text() const;

    bool operator==(const FadingPmf& other) const { return probs_ == other.probs_; }

private:
    std::vector<double> probs_;
    std::vector<int> support_;
};

// One realization of every fading level in a system (one entry per
// channel or edge), together with the (seed, index) pair it was derived
// from, so the draw can be reproduced anywhere.
struct StateSample {
    std::vector<int> levels;
    std::uint64_t seed = 0;
    std::uint64_t index = 0;
};

// E[max of independent levels], exact via the product of CDFs.
double expectation_max(std::span<const FadingPmf> pmfs);

// Integer level for one SNR value: ceil(0.5 * lg(1 + snr)). Values whose
// half-log lands within 1e-9 of an integer snap to it first, so exact
// powers of four quantize predictably.
int snr_to_level(double snr);

// Parses "value:prob,value:prob,..." into a discrete distribution; values
// must be finite and probabilities sum to 1 within 1e-12.
std::vector<std::pair<double, double>> parse_value_dist(std::string_view text);

}  // namespace bitfade
