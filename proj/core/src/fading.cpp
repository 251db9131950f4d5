#include "bitfade/fading.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>

#include "bitfade/rng.hpp"

namespace bitfade {

namespace {

constexpr double kSumTolerance = 1e-12;

double parse_double(std::string_view s, const char* what) {
    if (s.empty()) throw std::invalid_argument(std::string(what) + ": empty number");
    std::size_t pos = 0;
    double v;
    try {
        v = std::stod(std::string(s), &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument(std::string(what) + ": bad number '" + std::string(s) + "'");
    }
    if (pos != s.size())
        throw std::invalid_argument(std::string(what) + ": bad number '" + std::string(s) + "'");
    return v;
}

void check_prob_sum(double sum, const char* what) {
    if (std::abs(sum - 1.0) > kSumTolerance)
        throw std::invalid_argument(std::string(what) + ": probabilities sum to " +
                                    std::to_string(sum) + ", expected 1");
}

}  // namespace

FadingPmf::FadingPmf(std::vector<double> probs) : probs_(std::move(probs)) {
    if (probs_.empty()) throw std::invalid_argument("FadingPmf: empty probability vector");
    double sum = 0.0;
    for (std::size_t i = 0; i < probs_.size(); ++i) {
        if (!(probs_[i] >= 0.0))
            throw std::invalid_argument("FadingPmf: negative probability at level " + std::to_string(i));
        sum += probs_[i];
        if (probs_[i] > 0.0) support_.push_back(static_cast<int>(i));
    }
    check_prob_sum(sum, "FadingPmf");
}

FadingPmf FadingPmf::point_mass(int level) {
    if (level < 0) throw std::invalid_argument("FadingPmf::point_mass: negative level");
    std::vector<double> probs(level + 1, 0.0);
    probs[level] = 1.0;
    return FadingPmf(std::move(probs));
}

FadingPmf FadingPmf::from_text(std::string_view text) {
    std::map<int, double> entries;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find(',', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view item = text.substr(start, end - start);
        std::size_t colon = item.find(':');
        if (colon == std::string_view::npos)
            throw std::invalid_argument("pmf text: expected 'level:prob' in '" + std::string(item) + "'");
        double level_raw = parse_double(item.substr(0, colon), "pmf level");
        double prob = parse_double(item.substr(colon + 1), "pmf prob");
        int level = static_cast<int>(level_raw);
        if (level_raw != level || level < 0)
            throw std::invalid_argument("pmf text: level must be a nonnegative integer, got '" +
                                        std::string(item.substr(0, colon)) + "'");
        if (entries.count(level))
            throw std::invalid_argument("pmf text: duplicate level " + std::to_string(level));
        entries[level] = prob;
        start = end + 1;
        if (end == text.size()) break;
    }
    if (entries.empty()) throw std::invalid_argument("pmf text: empty");
    std::vector<double> probs(entries.rbegin()->first + 1, 0.0);
    for (auto [level, prob] : entries) probs[level] = prob;
    return FadingPmf(std::move(probs));
}

int snr_to_level(double snr) {
    if (!(snr >= 1.0))
        throw std::invalid_argument("snr_to_level: SNR " + std::to_string(snr) +
                                    " below the high-SNR regime (requires SNR >= 1)");
    double half_log = 0.5 * std::log2(1.0 + snr);
    double rounded = std::round(half_log);
    if (std::abs(half_log - rounded) < 1e-9) half_log = rounded;
    return static_cast<int>(std::ceil(half_log));
}

FadingPmf FadingPmf::from_snr(std::span<const std::pair<double, double>> snr_dist) {
    if (snr_dist.empty()) throw std::invalid_argument("FadingPmf::from_snr: empty distribution");
    std::map<int, double> levels;
    double sum = 0.0;
    for (auto [snr, prob] : snr_dist) {
        if (!(prob >= 0.0)) throw std::invalid_argument("FadingPmf::from_snr: negative probability");
        levels[snr_to_level(snr)] += prob;
        sum += prob;
    }
    check_prob_sum(sum, "FadingPmf::from_snr");
    std::vector<double> probs(levels.rbegin()->first + 1, 0.0);
    for (auto [level, prob] : levels) probs[level] = prob;
    return FadingPmf(std::move(probs));
}

double FadingPmf::prob(int level) const {
    if (level < 0 || level > max_level()) return 0.0;
    return probs_[level];
}

double FadingPmf::tail(int level) const {
    if (level <= 0) return 1.0;
    double t = 0.0;
    for (int i = max_level(); i >= level; --i) t += probs_[i];
    return t;
}

double FadingPmf::expectation() const {
    double e = 0.0;
    for (int i : support_) e += static_cast<double>(i) * probs_[i];
    return e;
}

int FadingPmf::sample(std::uint64_t seed, std::uint64_t index) const {
    const double u = rng::to_unit(rng::word_at(seed, index));
    double cum = 0.0;
    for (int i : support_) {
        cum += probs_[i];
        if (u < cum) return i;
    }
    return support_.back();  // guards the u ~ 1 edge under rounding
}

std::string FadingPmf::to_text() const {
    std::string out;
    char buf[64];
    for (int i : support_) {
        if (!out.empty()) out += ',';
        std::snprintf(buf, sizeof buf, "%d:%.17g", i, probs_[i]);
        out += buf;
    }
    return out;
}

double expectation_max(std::span<const FadingPmf> pmfs) {
    if (pmfs.empty()) throw std::invalid_argument("expectation_max: no distributions given");
    int n_max = 0;
    for (const auto& pmf : pmfs) n_max = std::max(n_max, pmf.max_level());
    // E[max] = sum_{i>=1} P(max >= i) = sum_{i>=1} (1 - prod_k P(M_k < i))
    double e = 0.0;
    for (int i = 1; i <= n_max; ++i) {
        double all_below = 1.0;
        for (const auto& pmf : pmfs) all_below *= 1.0 - pmf.tail(i);
        e += 1.0 - all_below;
    }
    return e;
}

std::vector<std::pair<double, double>> parse_value_dist(std::string_view text) {
    std::vector<std::pair<double, double>> dist;
    std::size_t start = 0;
    double sum = 0.0;
    while (start <= text.size()) {
        std::size_t end = text.find(',', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view item = text.substr(start, end - start);
        std::size_t colon = item.find(':');
        if (colon == std::string_view::npos)
            throw std::invalid_argument("value dist: expected 'value:prob' in '" + std::string(item) + "'");
        double value = parse_double(item.substr(0, colon), "value");
        double prob = parse_double(item.substr(colon + 1), "prob");
        if (!(prob >= 0.0)) throw std::invalid_argument("value dist: negative probability");
        dist.emplace_back(value, prob);
        sum += prob;
        start = end + 1;
        if (end == text.size()) break;
    }
    if (dist.empty()) throw std::invalid_argument("value dist: empty");
    check_prob_sum(sum, "value dist");
    return dist;
}

}  // namespace bitfade
