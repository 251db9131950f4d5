#pragma once

#include <span>
#include <utility>
#include <vector>

#include "bitfade/channels.hpp"

// Capacity-region computation and comparison: the MAC polymatroid, the
// semi-deterministic broadcast inner and outer bounds, exact Gaussian
// references over discrete SNR distributions, and a support-function gap
// metric between regions.

namespace bitfade {

// One halfspace constraint coeffs . R <= bound with nonnegative coeffs.
struct RateConstraint {
    std::vector<double> coeffs;
    double bound;
};

// Intersection of halfspace constraints with the nonnegative orthant.
// Every axis must carry a finite constraint, so the region is bounded.
class RateRegion {
public:
    RateRegion(int dim, std::vector<RateConstraint> constraints);

    int dim() const { return dim_; }
    const std::vector<RateConstraint>& constraints() const { return constraints_; }

    // max of weights . R over the region (exact, by vertex enumeration;
    // the constraint lists here are small).
    double support(std::span<const double> weights) const;

private:
    int dim_;
    std::vector<RateConstraint> constraints_;
};

// {R1 <= E[M1], R2 <= E[M2], R1 + R2 <= E[max(M1, M2)]}.
RateRegion mac_region(const MacChannel& ch);

// One point of the broadcast superposition sweep: the top i0 bit levels
// and everything below level m1 go to Receiver 2, the rest to Receiver 1.
struct BcOperatingPoint {
    int i0;
    double r1;  // m1 - i0
    double r2;  // expected V bits received by Receiver 2 per use
};

// All operating points i0 = 0..m1. r2 is computed by direct enumeration
// of received-bit counts over the M2 distribution: a realization M2 = i
// delivers min(i, i0) top-segment bits plus max(0, i - m1) bottom-segment
// bits.
std::vector<BcOperatingPoint> bc_inner_sweep(const BcChannel& ch);

struct BcOuterValue {
    double value;
    int i0;
};

// Weighted-sum outer bound max(R1 + mu * R2) in closed form:
//   sum_{j=1..m1} max(1, mu*q(j)) + mu * sum_{j=m1+1..n} P(M2 >= j)
// with q(j) = P(M2 >= j). The returned i0 is the largest j <= m1 with
// mu*q(j) >= 1 (ties assign the level to Receiver 2). Must coincide with
// the best bc_inner_sweep point, which is this module's correctness check.
BcOuterValue bc_outer_value(const BcChannel& ch, double mu);

// E[0.5 * lg(1 + SNR)] over a discrete SNR distribution (values >= 1).
double gaussian_p2p_rate(std::span<const std::pair<double, double>> snr_dist);

// Gaussian MAC reference region over independent discrete SNR
// distributions: individual bounds E[0.5*lg(1+SNR_k)] and sum bound
// E[0.5*lg(1+SNR1+SNR2)] over the product distribution.
RateRegion gaussian_mac_region(std::span<const std::pair<double, double>> snr1_dist,
                               std::span<const std::pair<double, double>> snr2_dist);

// max over a deterministic direction grid (axes, the normalized all-ones
// direction, and `directions` low-discrepancy points on the simplex) of
// |support(a, w) - support(b, w)|.
double region_gap(const RateRegion& a, const RateRegion& b, int directions);

}  // namespace bitfade
