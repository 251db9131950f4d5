#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "bitfade/fading.hpp"
#include "bitfade/gf2.hpp"

// Unicast DAG model with per-edge integer fading: parsing, cut
// enumeration, per-state transfer matrices, and the cut-set bound
// min over cuts of E[rank] evaluated exactly or by Monte Carlo.

namespace bitfade {

struct NetworkNode {
    std::string name;
    int levels;  // transmit bit levels l
};

struct NetworkEdge {
    int from;
    int to;
    FadingPmf pmf;
};

// Directed acyclic unicast network. Every node transmits one symbol of
// `levels` bits per timestep; each outgoing edge carries that symbol
// through its own fading level. Construction validates acyclicity, that
// the source has no in-edges and the sink no out-edges, and that every
// edge's fading support fits its transmitter's level count. Parallel
// edges are allowed.
class NetworkSpec {
public:
    NetworkSpec(std::vector<NetworkNode> nodes, std::vector<NetworkEdge> edges, int source,
                int sink);

    // Line format, '#' starts a comment:
    //   node <name> levels=<l>
    //   edge <from> <to> pmf=<level:prob,...>
    //   source <name>
    //   sink <name>
    // Malformed lines are reported with their line number; a cycle is
    // reported with a witness node sequence.
    static NetworkSpec parse(std::string_view text);

    const std::vector<NetworkNode>& nodes() const { return nodes_; }
    const std::vector<NetworkEdge>& edges() const { return edges_; }
    int source() const { return source_; }
    int sink() const { return sink_; }

    int node_index(std::string_view name) const;  // -1 when absent

    // Longest source-to-sink path, in edges.
    int longest_path_edges() const;

private:
    std::vector<NetworkNode> nodes_;
    std::vector<NetworkEdge> edges_;
    int source_;
    int sink_;
};

// Node subset containing the source and excluding the sink.
struct Cut {
    std::vector<int> members;  // ascending node indices

    bool contains(int node) const;
    std::string describe(const NetworkSpec& net) const;  // "S;A;B"
};

// All 2^(|V|-2) cuts in a deterministic order (bitmask over the
// intermediate nodes in declaration order, ascending; the pure-source cut
// comes first). Rejects networks with more than 20 intermediate nodes.
std::vector<Cut> enumerate_cuts(const NetworkSpec& net);

// Draws every edge's level (edge declaration order) for draw number
// `index` of the stream `seed`.
StateSample draw_state(const NetworkSpec& net, std::uint64_t seed, std::uint64_t index);

// Transfer matrix of a cut for one state: columns are the concatenated
// input levels of the cut members, rows the concatenated received levels
// of cut-complement nodes with at least one crossing in-edge (each
// aligned to the max crossing-edge level into it). Contributions internal
// to either side are excluded.
Gf2Matrix transfer_matrix(const NetworkSpec& net, const Cut& cut, const StateSample& state);

struct CutValue {
    Cut cut;
    double expected_rank;
    double stderr_ = 0.0;  // zero for exact evaluation
};

struct CutsetResult {
    double value;
    Cut argmin;
    std::vector<CutValue> per_cut;
};

// Exact bound: per cut, E[rank] enumerated over the product of
// crossing-edge pmfs (non-crossing edges marginalize out). Ties break
// toward the first cut in enumeration order. Rejects cuts whose crossing
// state space exceeds 2^24 states.
CutsetResult cutset_bound_exact(const NetworkSpec& net);

// Monte Carlo bound: per-cut sample mean of rank over `samples` common
// state draws. The estimate is the minimum of the per-cut means; stderr_
// values are per-cut sample standard errors. Deterministic for a fixed
// seed regardless of `workers`.
CutsetResult cutset_bound_mc(const NetworkSpec& net, std::int64_t samples, std::uint64_t seed,
                             int workers = 1);

}  // namespace bitfade
