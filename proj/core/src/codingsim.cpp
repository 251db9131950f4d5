#include "bitfade/codingsim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

#include "bitfade/rng.hpp"

namespace bitfade {

namespace {

// seed-derivation labels
constexpr std::uint64_t kStatesLabel = 1;
constexpr std::uint64_t kCodebookLabel = 2;
constexpr std::uint64_t kMessageLabel = 3;

int message_bits(const SimConfig& cfg) {
    return static_cast<int>(std::floor(cfg.rate * cfg.block_len * cfg.blocks + 1e-9));
}

std::uint64_t tail_mask(std::size_t bits) {
    return (bits % 64) ? ((std::uint64_t{1} << (bits % 64)) - 1) : ~std::uint64_t{0};
}

void fill_random(Gf2Matrix& m, rng::Stream& stream) {
    if (m.cols() == 0 || m.rows() == 0) return;
    const std::uint64_t mask = tail_mask(m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        auto row = m.row_words(r);
        for (auto& w : row) w = stream.next_word();
        row.back() &= mask;
    }
}

Gf2Matrix gf2_mul(const Gf2Matrix& a, const Gf2Matrix& b) {
    if (a.cols() != b.rows())
        throw std::invalid_argument("gf2_mul: inner dimensions " + std::to_string(a.cols()) +
                                    " vs " + std::to_string(b.rows()));
    Gf2Matrix out(a.rows(), b.cols());
    for (std::size_t r = 0; r < a.rows(); ++r) {
        auto arow = a.row_words(r);
        for (std::size_t w = 0; w < arow.size(); ++w) {
            std::uint64_t bits = arow[w];
            while (bits) {
                const std::size_t j = w * 64 + std::countr_zero(bits);
                bits &= bits - 1;
                out.xor_row_from(r, b, j);
            }
        }
    }
    return out;
}

// All fading levels of one trial, drawn up front: edge e at (block b,
// timestep t) lives at index (b*n + t)*|E| + e, matching the per-draw
// counter so states are schedule-independent.
struct TrialStates {
    std::vector<int> levels;
    int n;
    int num_edges;

    int at(int b, int t, int e) const { return levels[(static_cast<std::size_t>(b) * n + t) * num_edges + e]; }
};

TrialStates draw_trial_states(const NetworkSpec& net, std::uint64_t states_seed, int total_blocks,
                              int n) {
    TrialStates st;
    st.n = n;
    st.num_edges = static_cast<int>(net.edges().size());
    const std::size_t draws = static_cast<std::size_t>(total_blocks) * n * st.num_edges;
    st.levels.resize(draws);
    for (std::size_t i = 0; i < draws; ++i)
        st.levels[i] = net.edges()[i % st.num_edges].pmf.sample(states_seed, i);
    return st;
}

bool states_atypical(const NetworkSpec& net, const TrialStates& st, int total_blocks) {
    const std::size_t draws_per_edge = static_cast<std::size_t>(total_blocks) * st.n;
    for (std::size_t e = 0; e < net.edges().size(); ++e) {
        const auto& pmf = net.edges()[e].pmf;
        std::vector<std::int64_t> counts(pmf.max_level() + 1, 0);
        for (int b = 0; b < total_blocks; ++b)
            for (int t = 0; t < st.n; ++t) ++counts[st.at(b, t, static_cast<int>(e))];
        for (int level = 0; level <= pmf.max_level(); ++level) {
            const double p = pmf.prob(level);
            if (p <= 0.0 || p >= 1.0) continue;
            const double sigma = std::sqrt(draws_per_edge * p * (1.0 - p));
            if (std::abs(counts[level] - draws_per_edge * p) > 3.0 * sigma) return true;
        }
    }
    return false;
}

// ---- linear-random scheme -------------------------------------------------

// One trial; returns true on decode error (ambiguous message).
bool linear_trial(const NetworkSpec& net, const SimConfig& cfg, std::uint64_t trial_seed, int K,
                  const TrialStates& st) {
    const int total_blocks = cfg.blocks + cfg.slack;
    const int n = cfg.block_len;
    const int num_nodes = static_cast<int>(net.nodes().size());
    const std::uint64_t cb_seed = rng::derive(trial_seed, kCodebookLabel);

    // true message
    const std::size_t kwords = (static_cast<std::size_t>(K) + 63) / 64;
    std::vector<std::uint64_t> w_true(kwords);
    {
        rng::Stream s(rng::derive(trial_seed, kMessageLabel));
        for (auto& w : w_true) w = s.next_word();
        w_true.back() &= tail_mask(K);
    }

    std::vector<std::vector<std::size_t>> in_edges(num_nodes);
    for (std::size_t e = 0; e < net.edges().size(); ++e) in_edges[net.edges()[e].to].push_back(e);

    Gf2Eliminator elim(K, 1);
    std::vector<std::uint64_t> scratch(elim.row_words());

    // maps from message bits to per-node signals, updated block by block
    std::vector<Gf2Matrix> prev_y(num_nodes, Gf2Matrix(0, K));
    std::vector<Gf2Matrix> cur_x(num_nodes);

    for (int b = 0; b < total_blocks && !elim.full_rank(); ++b) {
        for (int v = 0; v < num_nodes; ++v) {
            if (v == net.sink()) continue;  // the sink transmits nothing
            const int out_bits = n * net.nodes()[v].levels;
            rng::Stream s(rng::derive(rng::derive(cb_seed, v), b));
            if (v == net.source()) {
                // fresh codebook every block: the whole message, re-encoded
                cur_x[v] = Gf2Matrix(out_bits, K);
                fill_random(cur_x[v], s);
            } else {
                Gf2Matrix map(out_bits, prev_y[v].rows());
                fill_random(map, s);
                cur_x[v] = gf2_mul(map, prev_y[v]);
            }
        }
        for (int v = 0; v < num_nodes; ++v) {
            if (in_edges[v].empty()) continue;
            int rows = 0;
            for (int t = 0; t < n; ++t) {
                int align = 0;
                for (std::size_t e : in_edges[v]) align = std::max(align, st.at(b, t, static_cast<int>(e)));
                rows += align;
            }
            Gf2Matrix y(rows, K);
            int offset = 0;
            for (int t = 0; t < n; ++t) {
                int align = 0;
                for (std::size_t e : in_edges[v]) align = std::max(align, st.at(b, t, static_cast<int>(e)));
                for (std::size_t e : in_edges[v]) {
                    const int m = st.at(b, t, static_cast<int>(e));
                    const int from = net.edges()[e].from;
                    const int l_from = net.nodes()[from].levels;
                    for (int i = 1; i <= m; ++i)
                        y.xor_row_from(offset + (align - m) + i - 1, cur_x[from], static_cast<std::size_t>(t) * l_from + i - 1);
                }
                offset += align;
            }
            if (v == net.sink()) {
                // feed observation rows, augmented with the true bit
                for (std::size_t r = 0; r < y.rows() && !elim.full_rank(); ++r) {
                    auto row = y.row_words(r);
                    std::uint64_t acc = 0;
                    for (std::size_t w = 0; w < kwords; ++w) acc ^= row[w] & w_true[w];
                    std::copy(row.begin(), row.end(), scratch.begin());
                    scratch[kwords] = std::popcount(acc) & 1;
                    elim.add_row(scratch);
                }
            } else {
                prev_y[v] = std::move(y);
            }
        }
    }

    if (!elim.full_rank()) return true;  // solution space dimension > 0
    if (elim.solve_unique() != w_true)
        throw std::logic_error("linear decoder: unique solution differs from the sent message");
    return false;
}

// ---- lookup-random scheme -------------------------------------------------

struct BitBuf {
    std::vector<std::uint64_t> words;
    int bits = 0;

    void reset(int nbits) {
        bits = nbits;
        words.assign((static_cast<std::size_t>(nbits) + 63) / 64, 0);
    }
    int get(int i) const { return (words[i / 64] >> (i % 64)) & 1u; }
    void flip_if(int i, int bit) {
        if (bit) words[i / 64] ^= std::uint64_t{1} << (i % 64);
    }
    bool operator==(const BitBuf& other) const = default;
};

// f_v^{(b)} as a seeded random oracle: hash the received block, expand to
// the transmit length. Distinct inputs yield independent uniform outputs.
void oracle_expand(std::uint64_t node_block_seed, const BitBuf& input, BitBuf& out, int out_bits) {
    std::uint64_t h = node_block_seed;
    for (std::uint64_t w : input.words) h = rng::mix(h ^ w);
    h = rng::mix(h ^ static_cast<std::uint64_t>(input.bits));
    out.reset(out_bits);
    rng::Stream s(h);
    for (auto& w : out.words) w = s.next_word();
    if (out_bits) out.words.back() &= tail_mask(out_bits);
}

// Simulates the whole pipeline for message index `w`; returns the sink's
// received blocks. The destination runs exactly this, for every candidate.
std::vector<BitBuf> lookup_pipeline(const NetworkSpec& net, const SimConfig& cfg,
                                    std::uint64_t cb_seed, const TrialStates& st, std::uint64_t w) {
    const int total_blocks = cfg.blocks + cfg.slack;
    const int n = cfg.block_len;
    const int num_nodes = static_cast<int>(net.nodes().size());

    std::vector<std::vector<std::size_t>> in_edges(num_nodes);
    for (std::size_t e = 0; e < net.edges().size(); ++e) in_edges[net.edges()[e].to].push_back(e);

    std::vector<BitBuf> prev_y(num_nodes), cur_x(num_nodes), cur_y(num_nodes);
    std::vector<BitBuf> sink_obs;
    sink_obs.reserve(total_blocks);
    BitBuf msg;
    msg.reset(64);
    msg.words[0] = w;

    for (int b = 0; b < total_blocks; ++b) {
        for (int v = 0; v < num_nodes; ++v) {
            if (v == net.sink()) continue;
            const std::uint64_t node_seed = rng::derive(rng::derive(cb_seed, v), b);
            const int out_bits = n * net.nodes()[v].levels;
            oracle_expand(node_seed, v == net.source() ? msg : prev_y[v], cur_x[v], out_bits);
        }
        for (int v = 0; v < num_nodes; ++v) {
            if (in_edges[v].empty()) continue;
            int rows = 0;
            for (int t = 0; t < n; ++t) {
                int align = 0;
                for (std::size_t e : in_edges[v]) align = std::max(align, st.at(b, t, static_cast<int>(e)));
                rows += align;
            }
            cur_y[v].reset(rows);
            int offset = 0;
            for (int t = 0; t < n; ++t) {
                int align = 0;
                for (std::size_t e : in_edges[v]) align = std::max(align, st.at(b, t, static_cast<int>(e)));
                for (std::size_t e : in_edges[v]) {
                    const int m = st.at(b, t, static_cast<int>(e));
                    const int from = net.edges()[e].from;
                    const int l_from = net.nodes()[from].levels;
                    for (int i = 1; i <= m; ++i)
                        cur_y[v].flip_if(offset + (align - m) + i - 1,
                                         cur_x[from].get(t * l_from + i - 1));
                }
                offset += align;
            }
        }
        sink_obs.push_back(cur_y[net.sink()]);
        for (int v = 0; v < num_nodes; ++v)
            if (v != net.sink() && !in_edges[v].empty()) prev_y[v] = std::move(cur_y[v]);
    }
    return sink_obs;
}

bool lookup_trial(const NetworkSpec& net, const SimConfig& cfg, std::uint64_t trial_seed, int K,
                  const TrialStates& st) {
    const std::uint64_t cb_seed = rng::derive(trial_seed, kCodebookLabel);
    const std::uint64_t w_true =
        rng::word_at(rng::derive(trial_seed, kMessageLabel), 0) & tail_mask(K);

    const auto observed = lookup_pipeline(net, cfg, cb_seed, st, w_true);

    // destination: re-simulate every message, count exact reproductions
    int matches = 0;
    const std::uint64_t count = std::uint64_t{1} << K;
    for (std::uint64_t w = 0; w < count; ++w) {
        if (lookup_pipeline(net, cfg, cb_seed, st, w) == observed) {
            ++matches;
            if (matches > 1) break;
        }
    }
    if (matches == 0) throw std::logic_error("lookup decoder: sent message does not reproduce its own output");
    return matches > 1;
}

}  // namespace

SimReport simulate_random_coding(const NetworkSpec& net, const SimConfig& cfg) {
    if (!(cfg.rate > 0.0)) throw std::invalid_argument("simulate_random_coding: rate must be positive");
    if (cfg.block_len < 1 || cfg.blocks < 1 || cfg.trials < 1)
        throw std::invalid_argument("simulate_random_coding: block_len, blocks and trials must be >= 1");
    const int longest = net.longest_path_edges();
    if (longest < 0)
        throw std::invalid_argument("simulate_random_coding: sink unreachable from source");
    if (cfg.slack < longest)
        throw std::invalid_argument("simulate_random_coding: slack " + std::to_string(cfg.slack) +
                                    " below the longest source-sink path of " +
                                    std::to_string(longest) + " edges");
    const int K = message_bits(cfg);
    if (K < 1)
        throw std::invalid_argument("simulate_random_coding: message has no bits (rate*n*B < 1)");
    if (cfg.scheme == CodingScheme::LookupRandom && K > 16)
        throw std::invalid_argument("simulate_random_coding: lookup decoding enumerates 2^" +
                                    std::to_string(K) + " messages; the limit is 2^16");
    if (K > (1 << 18))
        throw std::invalid_argument("simulate_random_coding: " + std::to_string(K) +
                                    " message bits exceed the desk-scale limit of 2^18");

    const int total_blocks = cfg.blocks + cfg.slack;
    struct Tally {
        std::int64_t errors = 0;
        std::int64_t atypical = 0;
    };
    const int nworkers = std::max(1, cfg.workers);
    std::vector<Tally> tallies(nworkers);

    auto run_chunk = [&](int worker, int begin, int end) {
        for (int trial = begin; trial < end; ++trial) {
            const std::uint64_t trial_seed = rng::derive(cfg.seed, static_cast<std::uint64_t>(trial));
            const TrialStates st = draw_trial_states(net, rng::derive(trial_seed, kStatesLabel),
                                                     total_blocks, cfg.block_len);
            if (states_atypical(net, st, total_blocks)) ++tallies[worker].atypical;
            const bool error = cfg.scheme == CodingScheme::LinearRandom
                                   ? linear_trial(net, cfg, trial_seed, K, st)
                                   : lookup_trial(net, cfg, trial_seed, K, st);
            if (error) ++tallies[worker].errors;
        }
    };

    if (nworkers == 1) {
        run_chunk(0, 0, cfg.trials);
    } else {
        std::vector<std::thread> threads;
        const int chunk = (cfg.trials + nworkers - 1) / nworkers;
        for (int w = 0; w < nworkers; ++w) {
            const int begin = w * chunk;
            const int end = std::min(cfg.trials, begin + chunk);
            if (begin >= end) break;
            threads.emplace_back(run_chunk, w, begin, end);
        }
        for (auto& t : threads) t.join();
    }

    SimReport report;
    report.trials = cfg.trials;
    report.decode_errors = 0;
    report.atypical_fading_flags = 0;
    for (const auto& t : tallies) {
        report.decode_errors += static_cast<int>(t.errors);
        report.atypical_fading_flags += static_cast<int>(t.atypical);
    }
    report.error_rate = static_cast<double>(report.decode_errors) / cfg.trials;
    report.effective_rate =
        cfg.rate * cfg.blocks / static_cast<double>(cfg.blocks + cfg.slack);
    return report;
}

// ---- broadcast superposition ----------------------------------------------

namespace {

// V-carrier count revealed to Receiver 2 at fading level i.
int v_bits_received(int i, int i0, int m1) { return std::min(i, i0) + std::max(0, i - m1); }

// One erasure-coding trial; returns true on decode failure.
bool bc_trial(const BcChannel& ch, int i0, int block_len, int payload_bits,
              std::uint64_t trial_seed) {
    const int v_len = i0 + (ch.n - ch.m1);
    const std::uint64_t states_seed = rng::derive(trial_seed, kStatesLabel);
    const std::uint64_t comb_seed = rng::derive(trial_seed, kCodebookLabel);

    std::vector<int> fades(block_len);
    std::int64_t received = 0;
    for (int t = 0; t < block_len; ++t) {
        fades[t] = ch.pmf2.sample(states_seed, static_cast<std::uint64_t>(t));
        received += v_bits_received(fades[t], i0, ch.m1);
    }
    if (received < payload_bits) return true;  // rank cannot reach the payload size

    Gf2Eliminator elim(payload_bits);
    std::vector<std::uint64_t> row(elim.row_words());
    const std::uint64_t mask = tail_mask(payload_bits);
    std::int64_t remaining = received;
    for (int t = 0; t < block_len; ++t) {
        const int got = v_bits_received(fades[t], i0, ch.m1);
        for (int k = 0; k < got; ++k) {
            // carrier position within the timestep: first the top V
            // segment in order, then the below-m1 segment
            const int pos = k < std::min(fades[t], i0) ? k : i0 + (k - std::min(fades[t], i0));
            const std::int64_t carrier = static_cast<std::int64_t>(t) * v_len + pos;
            if (carrier < payload_bits) {
                // systematic coordinate
                std::fill(row.begin(), row.end(), 0);
                row[carrier / 64] = std::uint64_t{1} << (carrier % 64);
            } else {
                rng::Stream s(rng::derive(comb_seed, static_cast<std::uint64_t>(carrier)));
                for (auto& w : row) w = s.next_word();
                row.back() &= mask;
            }
            elim.add_row(row);
            --remaining;
            if (elim.full_rank()) return false;
            if (static_cast<std::int64_t>(elim.rank()) + remaining < payload_bits) return true;
        }
    }
    return !elim.full_rank();
}

double probe_failure_rate(const BcChannel& ch, int i0, int block_len, int payload_bits, int trials,
                          std::uint64_t seed, int workers) {
    const int nworkers = std::max(1, workers);
    std::vector<std::int64_t> failures(nworkers, 0);
    auto run_chunk = [&](int worker, int begin, int end) {
        for (int trial = begin; trial < end; ++trial) {
            const std::uint64_t trial_seed = rng::derive(seed, static_cast<std::uint64_t>(trial));
            if (bc_trial(ch, i0, block_len, payload_bits, trial_seed)) ++failures[worker];
        }
    };
    if (nworkers == 1) {
        run_chunk(0, 0, trials);
    } else {
        std::vector<std::thread> threads;
        const int chunk = (trials + nworkers - 1) / nworkers;
        for (int w = 0; w < nworkers; ++w) {
            const int begin = w * chunk;
            const int end = std::min(trials, begin + chunk);
            if (begin >= end) break;
            threads.emplace_back(run_chunk, w, begin, end);
        }
        for (auto& t : threads) t.join();
    }
    std::int64_t total = 0;
    for (auto f : failures) total += f;
    return static_cast<double>(total) / trials;
}

void validate_bc_args(const BcChannel& ch, int i0, int block_len, int trials) {
    if (i0 < 0 || i0 > ch.m1)
        throw std::invalid_argument("bc superposition: i0 = " + std::to_string(i0) +
                                    " outside [0, m1 = " + std::to_string(ch.m1) + "]");
    if (block_len < 64)
        throw std::invalid_argument("bc superposition: block_len must be >= 64");
    if (trials < 1) throw std::invalid_argument("bc superposition: trials must be >= 1");
    const std::int64_t carriers =
        static_cast<std::int64_t>(i0 + (ch.n - ch.m1)) * block_len;
    if (carriers > (std::int64_t{1} << 26))
        throw std::invalid_argument("bc superposition: " + std::to_string(carriers) +
                                    " carriers exceed the desk-scale limit of 2^26");
}

}  // namespace

double bc_superposition_probe(const BcChannel& ch, int i0, int block_len, int payload_bits,
                              int trials, std::uint64_t seed, int workers) {
    validate_bc_args(ch, i0, block_len, trials);
    if (payload_bits < 0) throw std::invalid_argument("bc superposition: negative payload");
    if (payload_bits == 0) return 0.0;
    return probe_failure_rate(ch, i0, block_len, payload_bits, trials, seed, workers);
}

BcSupReport bc_superposition_sim(const BcChannel& ch, int i0, int block_len, int trials,
                                 std::uint64_t seed, int workers) {
    validate_bc_args(ch, i0, block_len, trials);
    const int v_len = i0 + (ch.n - ch.m1);
    const std::int64_t carriers = static_cast<std::int64_t>(v_len) * block_len;

    constexpr int kGridSteps = 20;
    BcSupReport report;
    report.r1_achieved = ch.m1 - i0;  // the U levels sit above m1's floor, never erased
    report.r2_achieved = 0.0;
    report.failure_rate = 1.0;
    std::int64_t last_payload = -1;
    for (int j = kGridSteps; j >= 1; --j) {
        const std::int64_t payload = (carriers * j + kGridSteps - 1) / kGridSteps;  // ceil
        if (payload == last_payload || payload == 0) continue;
        last_payload = payload;
        const double failure = probe_failure_rate(ch, i0, block_len, static_cast<int>(payload),
                                                  trials, seed, workers);
        report.failure_rate = failure;
        if (failure < 1e-2) {
            report.r2_achieved = static_cast<double>(payload) / block_len;
            break;
        }
    }
    return report;
}

}  // namespace bitfade
