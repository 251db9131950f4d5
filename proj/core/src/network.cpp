#include "bitfade/network.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "bitfade/rng.hpp"

namespace bitfade {

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
        if (i > start) tokens.push_back(line.substr(start, i - start));
    }
    return tokens;
}

[[noreturn]] void parse_fail(int line_no, const std::string& message) {
    throw std::invalid_argument("network file, line " + std::to_string(line_no) + ": " + message);
}

// DFS cycle search; on a back edge, returns the witness node sequence.
bool find_cycle(const std::vector<std::vector<int>>& adjacency, std::vector<int>& witness) {
    const int n = static_cast<int>(adjacency.size());
    std::vector<int> color(n, 0);  // 0 unvisited, 1 on stack, 2 done
    std::vector<int> stack, parent(n, -1);
    for (int start = 0; start < n; ++start) {
        if (color[start]) continue;
        stack.push_back(start);
        while (!stack.empty()) {
            int v = stack.back();
            if (color[v] == 0) {
                color[v] = 1;
                for (int w : adjacency[v]) {
                    if (color[w] == 1) {
                        witness.clear();
                        witness.push_back(w);
                        for (int u = v; u != w; u = parent[u]) witness.push_back(u);
                        witness.push_back(w);
                        std::reverse(witness.begin() + 1, witness.end() - 1);
                        return true;
                    }
                    if (color[w] == 0) {
                        parent[w] = v;
                        stack.push_back(w);
                    }
                }
            } else {
                color[v] = 2;
                stack.pop_back();
            }
        }
    }
    return false;
}

}  // namespace

NetworkSpec::NetworkSpec(std::vector<NetworkNode> nodes, std::vector<NetworkEdge> edges, int source,
                         int sink)
    : nodes_(std::move(nodes)), edges_(std::move(edges)), source_(source), sink_(sink) {
    const int n = static_cast<int>(nodes_.size());
    if (source_ < 0 || source_ >= n) throw std::invalid_argument("network: source node missing");
    if (sink_ < 0 || sink_ >= n) throw std::invalid_argument("network: sink node missing");
    if (source_ == sink_) throw std::invalid_argument("network: source and sink must differ");
    for (int i = 0; i < n; ++i) {
        if (nodes_[i].levels < 0)
            throw std::invalid_argument("network: node '" + nodes_[i].name + "' has negative levels");
        for (int j = i + 1; j < n; ++j)
            if (nodes_[i].name == nodes_[j].name)
                throw std::invalid_argument("network: duplicate node name '" + nodes_[i].name + "'");
    }
    std::vector<std::vector<int>> adjacency(n);
    for (const auto& e : edges_) {
        if (e.from < 0 || e.from >= n || e.to < 0 || e.to >= n)
            throw std::invalid_argument("network: edge references unknown node");
        if (e.to == source_)
            throw std::invalid_argument("network: edge into the source node '" +
                                        nodes_[source_].name + "'");
        if (e.from == sink_)
            throw std::invalid_argument("network: edge out of the sink node '" +
                                        nodes_[sink_].name + "'");
        const int sender_levels = nodes_[e.from].levels;
        if (e.pmf.support().back() > sender_levels)
            throw std::invalid_argument("network: edge " + nodes_[e.from].name + " -> " +
                                        nodes_[e.to].name + " fades up to level " +
                                        std::to_string(e.pmf.support().back()) +
                                        " but the transmitter has " +
                                        std::to_string(sender_levels) + " levels");
        adjacency[e.from].push_back(e.to);
    }
    std::vector<int> witness;
    if (find_cycle(adjacency, witness)) {
        std::string path;
        for (std::size_t i = 0; i < witness.size(); ++i) {
            if (i) path += " -> ";
            path += nodes_[witness[i]].name;
        }
        throw std::invalid_argument("network: cycle detected: " + path);
    }
}

NetworkSpec NetworkSpec::parse(std::string_view text) {
    std::vector<NetworkNode> nodes;
    struct PendingEdge {
        std::string from, to;
        FadingPmf pmf;
        int line_no;
    };
    std::vector<PendingEdge> pending;
    std::string source_name, sink_name;
    int source_line = 0, sink_line = 0;

    auto index_of = [&](std::string_view name) {
        for (std::size_t i = 0; i < nodes.size(); ++i)
            if (nodes[i].name == name) return static_cast<int>(i);
        return -1;
    };

    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        auto tokens = split_ws(line);
        if (tokens.empty()) {
            if (eol == text.size()) break;
            continue;
        }
        const std::string_view directive = tokens[0];
        if (directive == "node") {
            if (tokens.size() != 3 || !tokens[2].starts_with("levels="))
                parse_fail(line_no, "expected 'node <name> levels=<l>'");
            if (index_of(tokens[1]) >= 0)
                parse_fail(line_no, "duplicate node '" + std::string(tokens[1]) + "'");
            int levels = 0;
            try {
                std::size_t used = 0;
                std::string val(tokens[2].substr(7));
                levels = std::stoi(val, &used);
                if (used != val.size()) throw std::invalid_argument("");
            } catch (const std::exception&) {
                parse_fail(line_no, "bad level count '" + std::string(tokens[2].substr(7)) + "'");
            }
            if (levels < 0) parse_fail(line_no, "negative level count");
            nodes.push_back({std::string(tokens[1]), levels});
        } else if (directive == "edge") {
            if (tokens.size() != 4 || !tokens[3].starts_with("pmf="))
                parse_fail(line_no, "expected 'edge <from> <to> pmf=<level:prob,...>'");
            try {
                pending.push_back({std::string(tokens[1]), std::string(tokens[2]),
                                   FadingPmf::from_text(tokens[3].substr(4)), line_no});
            } catch (const std::invalid_argument& e) {
                parse_fail(line_no, e.what());
            }
        } else if (directive == "source") {
            if (tokens.size() != 2) parse_fail(line_no, "expected 'source <name>'");
            if (!source_name.empty()) parse_fail(line_no, "source declared twice");
            source_name = tokens[1];
            source_line = line_no;
        } else if (directive == "sink") {
            if (tokens.size() != 2) parse_fail(line_no, "expected 'sink <name>'");
            if (!sink_name.empty()) parse_fail(line_no, "sink declared twice");
            sink_name = tokens[1];
            sink_line = line_no;
        } else {
            parse_fail(line_no, "unknown directive '" + std::string(directive) + "'");
        }
        if (eol == text.size()) break;
    }

    if (source_name.empty()) throw std::invalid_argument("network file: no source declared");
    if (sink_name.empty()) throw std::invalid_argument("network file: no sink declared");

    std::vector<NetworkEdge> edges;
    for (auto& e : pending) {
        int from = index_of(e.from);
        int to = index_of(e.to);
        if (from < 0) parse_fail(e.line_no, "unknown node '" + e.from + "'");
        if (to < 0) parse_fail(e.line_no, "unknown node '" + e.to + "'");
        edges.push_back({from, to, std::move(e.pmf)});
    }
    int source = index_of(source_name);
    int sink = index_of(sink_name);
    if (source < 0) parse_fail(source_line, "unknown node '" + source_name + "'");
    if (sink < 0) parse_fail(sink_line, "unknown node '" + sink_name + "'");
    return NetworkSpec(std::move(nodes), std::move(edges), source, sink);
}

int NetworkSpec::node_index(std::string_view name) const {
    for (std::size_t i = 0; i < nodes_.size(); ++i)
        if (nodes_[i].name == name) return static_cast<int>(i);
    return -1;
}

int NetworkSpec::longest_path_edges() const {
    // DAG longest path by relaxation in topological order (node indices
    // are not topologically sorted, so iterate until stable; |V| passes
    // suffice on a DAG).
    const int n = static_cast<int>(nodes_.size());
    std::vector<int> dist(n, -1);
    dist[source_] = 0;
    for (int pass = 0; pass < n; ++pass) {
        bool changed = false;
        for (const auto& e : edges_) {
            if (dist[e.from] >= 0 && dist[e.from] + 1 > dist[e.to]) {
                dist[e.to] = dist[e.from] + 1;
                changed = true;
            }
        }
        if (!changed) break;
    }
    return dist[sink_];
}

bool Cut::contains(int node) const {
    return std::binary_search(members.begin(), members.end(), node);
}

std::string Cut::describe(const NetworkSpec& net) const {
    std::string out;
    for (std::size_t i = 0; i < members.size(); ++i) {
        if (i) out += ';';
        out += net.nodes()[members[i]].name;
    }
    return out;
}

std::vector<Cut> enumerate_cuts(const NetworkSpec& net) {
    std::vector<int> middle;
    for (int v = 0; v < static_cast<int>(net.nodes().size()); ++v)
        if (v != net.source() && v != net.sink()) middle.push_back(v);
    if (middle.size() > 20)
        throw std::invalid_argument("enumerate_cuts: " + std::to_string(middle.size()) +
                                    " intermediate nodes exceed the exhaustive limit of 20");
    std::vector<Cut> cuts;
    const std::uint32_t count = 1u << middle.size();
    cuts.reserve(count);
    for (std::uint32_t mask = 0; mask < count; ++mask) {
        Cut cut;
        cut.members.push_back(net.source());
        for (std::size_t i = 0; i < middle.size(); ++i)
            if (mask & (1u << i)) cut.members.push_back(middle[i]);
        std::sort(cut.members.begin(), cut.members.end());
        cuts.push_back(std::move(cut));
    }
    return cuts;
}

StateSample draw_state(const NetworkSpec& net, std::uint64_t seed, std::uint64_t index) {
    StateSample state;
    state.seed = seed;
    state.index = index;
    const auto& edges = net.edges();
    state.levels.resize(edges.size());
    for (std::size_t e = 0; e < edges.size(); ++e)
        state.levels[e] = edges[e].pmf.sample(seed, index * edges.size() + e);
    return state;
}

Gf2Matrix transfer_matrix(const NetworkSpec& net, const Cut& cut, const StateSample& state) {
    const auto& edges = net.edges();
    if (state.levels.size() != edges.size())
        throw std::invalid_argument("transfer_matrix: state has " +
                                    std::to_string(state.levels.size()) + " levels for " +
                                    std::to_string(edges.size()) + " edges");

    const int n = static_cast<int>(net.nodes().size());
    // crossing edges and per-receiver alignment
    std::vector<int> mhat(n, 0);
    std::vector<bool> is_receiver(n, false);
    std::vector<std::size_t> crossing;
    for (std::size_t e = 0; e < edges.size(); ++e) {
        if (!cut.contains(edges[e].from) || cut.contains(edges[e].to)) continue;
        crossing.push_back(e);
        is_receiver[edges[e].to] = true;
        mhat[edges[e].to] = std::max(mhat[edges[e].to], state.levels[e]);
    }

    // column offsets for cut members, row offsets for receivers
    std::vector<int> col_offset(n, -1), row_offset(n, -1);
    int cols = 0;
    for (int v : cut.members) {
        col_offset[v] = cols;
        cols += net.nodes()[v].levels;
    }
    int rows = 0;
    for (int v = 0; v < n; ++v) {
        if (!is_receiver[v]) continue;
        row_offset[v] = rows;
        rows += mhat[v];
    }

    Gf2Matrix m(rows, cols);
    for (std::size_t e : crossing) {
        const auto& edge = edges[e];
        const int level = state.levels[e];
        const int align = mhat[edge.to];
        // row (mhat - level) + i selects transmitter level i
        for (int i = 1; i <= level; ++i)
            m.flip(row_offset[edge.to] + (align - level) + i - 1, col_offset[edge.from] + i - 1);
    }
    return m;
}

namespace {

// Per-cut crossing-edge indices, shared by both bound evaluations.
std::vector<std::vector<std::size_t>> crossing_edges(const NetworkSpec& net,
                                                     const std::vector<Cut>& cuts) {
    std::vector<std::vector<std::size_t>> result(cuts.size());
    for (std::size_t c = 0; c < cuts.size(); ++c)
        for (std::size_t e = 0; e < net.edges().size(); ++e)
            if (cuts[c].contains(net.edges()[e].from) && !cuts[c].contains(net.edges()[e].to))
                result[c].push_back(e);
    return result;
}

CutsetResult pick_minimum(std::vector<CutValue> per_cut) {
    std::size_t best = 0;
    for (std::size_t c = 1; c < per_cut.size(); ++c)
        if (per_cut[c].expected_rank < per_cut[best].expected_rank) best = c;
    CutsetResult result;
    result.value = per_cut[best].expected_rank;
    result.argmin = per_cut[best].cut;
    result.per_cut = std::move(per_cut);
    return result;
}

}  // namespace

CutsetResult cutset_bound_exact(const NetworkSpec& net) {
    const auto cuts = enumerate_cuts(net);
    const auto crossing = crossing_edges(net, cuts);
    const auto& edges = net.edges();

    std::vector<CutValue> per_cut;
    per_cut.reserve(cuts.size());
    for (std::size_t c = 0; c < cuts.size(); ++c) {
        // rank depends only on crossing-edge states, so enumerate those
        const auto& cross = crossing[c];
        double states = 1.0;
        for (std::size_t e : cross) states *= edges[e].pmf.support().size();
        if (states > static_cast<double>(1u << 24))
            throw std::invalid_argument("cutset_bound_exact: cut " + cuts[c].describe(net) +
                                        " has " + std::to_string(states) +
                                        " crossing states, exceeding 2^24");

        StateSample state;
        state.levels.assign(edges.size(), 0);
        std::vector<std::size_t> digit(cross.size(), 0);
        double expected = 0.0;
        bool more = true;
        while (more) {
            double prob = 1.0;
            for (std::size_t i = 0; i < cross.size(); ++i) {
                const int level = edges[cross[i]].pmf.support()[digit[i]];
                state.levels[cross[i]] = level;
                prob *= edges[cross[i]].pmf.prob(level);
            }
            expected +=
                prob * static_cast<double>(gf2_rank(transfer_matrix(net, cuts[c], state)));
            // mixed-radix increment
            more = false;
            for (std::size_t i = 0; i < cross.size(); ++i) {
                if (++digit[i] < edges[cross[i]].pmf.support().size()) {
                    more = true;
                    break;
                }
                digit[i] = 0;
            }
        }
        per_cut.push_back({cuts[c], expected, 0.0});
    }
    return pick_minimum(std::move(per_cut));
}

CutsetResult cutset_bound_mc(const NetworkSpec& net, std::int64_t samples, std::uint64_t seed,
                             int workers) {
    if (samples < 1) throw std::invalid_argument("cutset_bound_mc: samples must be >= 1");
    const auto cuts = enumerate_cuts(net);
    const std::size_t ncuts = cuts.size();

    // integer accumulators keep the result independent of scheduling
    struct Accum {
        std::vector<std::int64_t> rank_sum;
        std::vector<std::int64_t> rank_sq_sum;
    };
    const int nworkers = std::max(1, workers);
    std::vector<Accum> accums(nworkers, {std::vector<std::int64_t>(ncuts, 0),
                                         std::vector<std::int64_t>(ncuts, 0)});

    auto run_chunk = [&](int worker, std::int64_t begin, std::int64_t end) {
        Accum& acc = accums[worker];
        for (std::int64_t t = begin; t < end; ++t) {
            const StateSample state = draw_state(net, seed, static_cast<std::uint64_t>(t));
            for (std::size_t c = 0; c < ncuts; ++c) {
                const auto rank =
                    static_cast<std::int64_t>(gf2_rank(transfer_matrix(net, cuts[c], state)));
                acc.rank_sum[c] += rank;
                acc.rank_sq_sum[c] += rank * rank;
            }
        }
    };

    if (nworkers == 1) {
        run_chunk(0, 0, samples);
    } else {
        std::vector<std::thread> threads;
        const std::int64_t chunk = (samples + nworkers - 1) / nworkers;
        for (int w = 0; w < nworkers; ++w) {
            const std::int64_t begin = w * chunk;
            const std::int64_t end = std::min(samples, begin + chunk);
            if (begin >= end) break;
            threads.emplace_back(run_chunk, w, begin, end);
        }
        for (auto& t : threads) t.join();
    }

    std::vector<CutValue> per_cut;
    per_cut.reserve(ncuts);
    for (std::size_t c = 0; c < ncuts; ++c) {
        std::int64_t sum = 0, sq = 0;
        for (const auto& acc : accums) {
            sum += acc.rank_sum[c];
            sq += acc.rank_sq_sum[c];
        }
        const double mean = static_cast<double>(sum) / static_cast<double>(samples);
        double se = 0.0;
        if (samples > 1) {
            const double var =
                (static_cast<double>(sq) - static_cast<double>(sum) * mean) /
                static_cast<double>(samples - 1);
            se = std::sqrt(std::max(0.0, var) / static_cast<double>(samples));
        }
        per_cut.push_back({cuts[c], mean, se});
    }
    return pick_minimum(std::move(per_cut));
}

}  // namespace bitfade
