#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "egospectral/sym_matrix.hpp"

namespace egospectral {

struct Neighbor {
    int node;
    double weight;
};

/// Weighted undirected graph without self-loops, zero-weight or parallel
/// edges. Nodes are dense indices 0..n-1; each also carries the external
/// label it was ingested under. Adjacency is CSR with neighbor lists sorted
/// by node index, so iteration order is deterministic everywhere.
class Graph {
public:
    /// Build from an edge list (i, j, w). Throws on out-of-range endpoints,
    /// self-loops, zero or non-finite weights, and duplicate edges whose
    /// weights disagree; exact duplicates collapse to one edge. Labels
    /// default to the decimal node index.
    static Graph from_edges(int n, std::span<const std::tuple<int, int, double>> edges,
                            std::vector<std::string> labels = {});

    int node_count() const { return n_; }
    std::int64_t edge_count() const { return edge_count_; }

    std::span<const Neighbor> neighbors(int i) const;
    int degree(int i) const;
    /// Sum of incident edge weights (equals degree on unweighted graphs).
    double strength(int i) const;

    bool has_negative_weights() const { return has_negative_; }
    /// True iff every edge weight is exactly 1.
    bool is_unweighted() const { return unweighted_; }
    double min_weight() const { return min_weight_; }
    double max_weight() const { return max_weight_; }

    const std::string& label(int i) const;
    const std::vector<std::string>& labels() const { return labels_; }

private:
    Graph() = default;
    void check_node(int i) const;

    int n_ = 0;
    std::vector<std::int64_t> offsets_;
    std::vector<Neighbor> adj_;
    std::vector<std::string> labels_;
    std::int64_t edge_count_ = 0;
    bool has_negative_ = false;
    bool unweighted_ = true;
    double min_weight_ = 0.0;
    double max_weight_ = 0.0;
};

struct ParseOutcome {
    Graph graph;
    /// Lines that repeated an already-seen edge with the same weight.
    int duplicate_edges = 0;
};

/// Parse whitespace-separated "u v" / "u v w" lines. Lines whose first
/// non-blank character is '#' or '%' are comments; blank lines are skipped.
/// Node labels are arbitrary tokens and get dense indices in order of first
/// appearance. Omitted weights default to 1. Malformed lines, self-loops,
/// zero/non-finite weights and conflicting duplicate weights raise
/// std::runtime_error naming the offending line number.
ParseOutcome parse_edge_list_detailed(std::istream& in);
Graph parse_edge_list(std::istream& in);
Graph parse_edge_list(const std::string& text);

/// Inverse of parse_edge_list up to labeled-graph equality: one "u v w" line
/// per edge (weight omitted while the graph is unweighted), weights printed
/// round-trip exact. Isolated nodes are unrepresentable in this format and
/// raise std::invalid_argument.
std::string to_edge_list(const Graph& g);

/// n, edge count, weighted flag, min/max weight (null when edgeless).
nlohmann::json graph_summary(const Graph& g);

/// Nodes within hop distance `radius` of `ego`, ego first, then sorted by
/// (distance, node index). radius >= 0; ego in range.
std::vector<int> bfs_neighborhood(const Graph& g, int ego, int radius);

/// Induced adjacency of a BFS ball. `nodes[k]` is the original index of
/// local node k; the ego is local node 0, so walk sums read off entry (0,0)
/// powers of `matrix`.
struct Egonet {
    int ego = 0;
    int radius = 0;
    std::vector<int> nodes;
    SymMatrix matrix{1};
};

Egonet extract_egonet(const Graph& g, int ego, int radius);

/// Induced subgraph on the depth-`depth` BFS ball around `seed`, relabelled
/// densely in (distance, index) order but keeping original labels.
Graph bfs_subgraph_sample(const Graph& g, int seed, int depth);

/// Same topology with every weight multiplied by c (c != 0; c < 0 flips the
/// sign profile, which downstream bound premises care about).
Graph scale_weights(const Graph& g, double c);

/// Equality as labeled graphs: same node count, same label set, same
/// labeled edge set with exactly equal weights. Dense indices may differ.
bool labeled_equal(const Graph& a, const Graph& b);

}  // namespace egospectral
