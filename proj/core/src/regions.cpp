#include "bitfade/regions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bitfade {

namespace {

constexpr double kFeasTol = 1e-9;

// Solves the d x d system rows . x = rhs by Gaussian elimination with
// partial pivoting. Returns false when singular.
bool solve_square(std::vector<std::vector<double>> rows, std::vector<double> rhs,
                  std::vector<double>& out) {
    const std::size_t d = rhs.size();
    for (std::size_t col = 0; col < d; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < d; ++r)
            if (std::abs(rows[r][col]) > std::abs(rows[pivot][col])) pivot = r;
        if (std::abs(rows[pivot][col]) < 1e-12) return false;
        std::swap(rows[pivot], rows[col]);
        std::swap(rhs[pivot], rhs[col]);
        for (std::size_t r = 0; r < d; ++r) {
            if (r == col) continue;
            const double f = rows[r][col] / rows[col][col];
            if (f == 0.0) continue;
            for (std::size_t c = col; c < d; ++c) rows[r][c] -= f * rows[col][c];
            rhs[r] -= f * rhs[col];
        }
    }
    out.resize(d);
    for (std::size_t i = 0; i < d; ++i) out[i] = rhs[i] / rows[i][i];
    return true;
}

// Halton low-discrepancy value: index `i` in base `b`, in (0, 1).
double halton(int i, int b) {
    double f = 1.0, r = 0.0;
    for (int n = i + 1; n > 0; n /= b) {
        f /= b;
        r += f * (n % b);
    }
    return r;
}

constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19};

}  // namespace

RateRegion::RateRegion(int dim, std::vector<RateConstraint> constraints)
    : dim_(dim), constraints_(std::move(constraints)) {
    if (dim_ <= 0) throw std::invalid_argument("RateRegion: dimension must be positive");
    std::vector<bool> axis_bounded(dim_, false);
    for (const auto& c : constraints_) {
        if (static_cast<int>(c.coeffs.size()) != dim_)
            throw std::invalid_argument("RateRegion: constraint has " +
                                        std::to_string(c.coeffs.size()) + " coefficients, dim is " +
                                        std::to_string(dim_));
        if (!(c.bound >= 0.0)) throw std::invalid_argument("RateRegion: negative bound");
        for (int i = 0; i < dim_; ++i) {
            if (c.coeffs[i] < 0.0)
                throw std::invalid_argument("RateRegion: negative constraint coefficient");
            if (c.coeffs[i] > 0.0) axis_bounded[i] = true;
        }
    }
    for (int i = 0; i < dim_; ++i)
        if (!axis_bounded[i])
            throw std::invalid_argument("RateRegion: axis " + std::to_string(i) + " is unbounded");
}

double RateRegion::support(std::span<const double> weights) const {
    if (static_cast<int>(weights.size()) != dim_)
        throw std::invalid_argument("RateRegion::support: weight dimension " +
                                    std::to_string(weights.size()) + ", region dimension " +
                                    std::to_string(dim_));
    // All facets: the constraint list plus the axis facets R_i >= 0
    // (written as -R_i <= 0). Enumerate d-subsets, solve for the vertex,
    // keep feasible ones. The region is bounded, so the LP optimum is
    // attained at one of them.
    struct Facet {
        std::vector<double> coeffs;
        double bound;
    };
    std::vector<Facet> facets;
    for (const auto& c : constraints_) facets.push_back({c.coeffs, c.bound});
    for (int i = 0; i < dim_; ++i) {
        std::vector<double> coeffs(dim_, 0.0);
        coeffs[i] = -1.0;
        facets.push_back({std::move(coeffs), 0.0});
    }

    double best = 0.0;  // the origin is always feasible
    std::vector<int> pick(dim_);
    std::vector<double> vertex;
    const int nf = static_cast<int>(facets.size());

    auto consider = [&]() {
        std::vector<std::vector<double>> rows;
        std::vector<double> rhs;
        for (int idx : pick) {
            rows.push_back(facets[idx].coeffs);
            rhs.push_back(facets[idx].bound);
        }
        if (!solve_square(std::move(rows), std::move(rhs), vertex)) return;
        for (const auto& f : facets) {
            double lhs = 0.0;
            for (int i = 0; i < dim_; ++i) lhs += f.coeffs[i] * vertex[i];
            if (lhs > f.bound + kFeasTol) return;
        }
        double value = 0.0;
        for (int i = 0; i < dim_; ++i) value += weights[i] * vertex[i];
        best = std::max(best, value);
    };

    // iterate over all d-combinations of facets
    for (int i = 0; i < dim_; ++i) pick[i] = i;
    for (;;) {
        consider();
        int pos = dim_ - 1;
        while (pos >= 0 && pick[pos] == nf - dim_ + pos) --pos;
        if (pos < 0) break;
        ++pick[pos];
        for (int i = pos + 1; i < dim_; ++i) pick[i] = pick[i - 1] + 1;
    }
    return best;
}

RateRegion mac_region(const MacChannel& ch) {
    const FadingPmf pmfs[] = {ch.pmf1, ch.pmf2};
    std::vector<RateConstraint> constraints;
    constraints.push_back({{1.0, 0.0}, ch.pmf1.expectation()});
    constraints.push_back({{0.0, 1.0}, ch.pmf2.expectation()});
    constraints.push_back({{1.0, 1.0}, expectation_max(pmfs)});
    return RateRegion(2, std::move(constraints));
}

std::vector<BcOperatingPoint> bc_inner_sweep(const BcChannel& ch) {
    std::vector<BcOperatingPoint> points;
    points.reserve(ch.m1 + 1);
    for (int i0 = 0; i0 <= ch.m1; ++i0) {
        double r2 = 0.0;
        for (int i = 0; i <= ch.pmf2.max_level(); ++i) {
            const int received = std::min(i, i0) + std::max(0, i - ch.m1);
            r2 += ch.pmf2.prob(i) * received;
        }
        points.push_back({i0, static_cast<double>(ch.m1 - i0), r2});
    }
    return points;
}

BcOuterValue bc_outer_value(const BcChannel& ch, double mu) {
    if (!(mu >= 0.0))
        throw std::invalid_argument("bc_outer_value: mu = " + std::to_string(mu) + " must be >= 0");
    double value = 0.0;
    int i0 = 0;
    for (int j = 1; j <= ch.m1; ++j) {
        const double weighted = mu * ch.pmf2.tail(j);
        if (weighted >= 1.0) i0 = j;  // tail is non-increasing, so this is a prefix
        value += std::max(1.0, weighted);
    }
    for (int j = ch.m1 + 1; j <= ch.n; ++j) value += mu * ch.pmf2.tail(j);
    return {value, i0};
}

double gaussian_p2p_rate(std::span<const std::pair<double, double>> snr_dist) {
    if (snr_dist.empty()) throw std::invalid_argument("gaussian_p2p_rate: empty distribution");
    double e = 0.0;
    for (auto [snr, prob] : snr_dist) {
        if (!(snr >= 1.0))
            throw std::invalid_argument("gaussian_p2p_rate: SNR " + std::to_string(snr) +
                                        " below 1");
        e += prob * 0.5 * std::log2(1.0 + snr);
    }
    return e;
}

RateRegion gaussian_mac_region(std::span<const std::pair<double, double>> snr1_dist,
                               std::span<const std::pair<double, double>> snr2_dist) {
    const double b1 = gaussian_p2p_rate(snr1_dist);
    const double b2 = gaussian_p2p_rate(snr2_dist);
    double bsum = 0.0;
    for (auto [s1, p1] : snr1_dist)
        for (auto [s2, p2] : snr2_dist) bsum += p1 * p2 * 0.5 * std::log2(1.0 + s1 + s2);
    std::vector<RateConstraint> constraints;
    constraints.push_back({{1.0, 0.0}, b1});
    constraints.push_back({{0.0, 1.0}, b2});
    constraints.push_back({{1.0, 1.0}, bsum});
    return RateRegion(2, std::move(constraints));
}

double region_gap(const RateRegion& a, const RateRegion& b, int directions) {
    if (a.dim() != b.dim())
        throw std::invalid_argument("region_gap: dimensions " + std::to_string(a.dim()) + " vs " +
                                    std::to_string(b.dim()));
    if (directions < 1) throw std::invalid_argument("region_gap: directions must be >= 1");
    const int d = a.dim();
    if (d > static_cast<int>(std::size(kPrimes)))
        throw std::invalid_argument("region_gap: dimension too large for the direction grid");

    std::vector<std::vector<double>> grid;
    for (int i = 0; i < d; ++i) {
        std::vector<double> w(d, 0.0);
        w[i] = 1.0;
        grid.push_back(std::move(w));
    }
    grid.push_back(std::vector<double>(d, 1.0 / d));
    // low-discrepancy interior directions, normalized to the simplex
    for (int k = 0; k < directions; ++k) {
        std::vector<double> w(d);
        double sum = 0.0;
        for (int i = 0; i < d; ++i) {
            w[i] = -std::log(1.0 - halton(k, kPrimes[i]));
            sum += w[i];
        }
        for (int i = 0; i < d; ++i) w[i] /= sum;
        grid.push_back(std::move(w));
    }

    double gap = 0.0;
    for (const auto& w : grid) gap = std::max(gap, std::abs(a.support(w) - b.support(w)));
    return gap;
}

}  // namespace bitfade
