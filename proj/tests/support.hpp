#pragma once

#include <cmath>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "egospectral/graph.hpp"
#include "egospectral/harness.hpp"
#include "egospectral/rng.hpp"
#include "egospectral/sym_matrix.hpp"

namespace egospectral::testing {

inline Graph triangle() { return parse_edge_list(std::string("a b\nb c\na c\n")); }

inline Graph path3() { return parse_edge_list(std::string("a b\nb c\n")); }

inline Graph star(int leaves) {
    std::string text;
    for (int i = 1; i <= leaves; ++i) text += "hub leaf" + std::to_string(i) + "\n";
    return parse_edge_list(text);
}

inline Graph cycle(int n) {
    std::vector<std::tuple<int, int, double>> edges;
    for (int i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n, 1.0);
    return Graph::from_edges(n, edges);
}

inline Graph complete(int n) {
    std::vector<std::tuple<int, int, double>> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j, 1.0);
    return Graph::from_edges(n, edges);
}

/// Random ER topology with weights drawn from [wlo, whi] (unit weights when
/// wlo == whi == 1); sign flipped on ~half the edges when mixed_signs.
inline Graph random_graph(std::mt19937_64& eng, int n, double p, double wlo = 1.0,
                          double whi = 1.0, bool mixed_signs = false) {
    std::vector<std::tuple<int, int, double>> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (rng_unit(eng) < p) {
                double w = wlo == whi ? wlo : wlo + (whi - wlo) * rng_unit(eng);
                if (mixed_signs && rng_unit(eng) < 0.5) w = -w;
                if (w == 0.0) w = wlo;
                edges.emplace_back(i, j, w);
            }
    if (edges.empty() && n >= 2) edges.emplace_back(0, 1, wlo != 0.0 ? wlo : 1.0);
    return Graph::from_edges(n, edges);
}

/// Same topology with fresh random weights in [lo, hi].
inline Graph with_random_weights(const Graph& g, std::mt19937_64& eng, double lo, double hi) {
    std::vector<std::tuple<int, int, double>> edges;
    for (int i = 0; i < g.node_count(); ++i)
        for (const auto& nb : g.neighbors(i))
            if (nb.node > i) {
                double w = lo + (hi - lo) * rng_unit(eng);
                if (w == 0.0) w = hi;
                edges.emplace_back(i, nb.node, w);
            }
    return Graph::from_edges(g.node_count(), edges, g.labels());
}

inline SymMatrix dense_adjacency(const Graph& g) {
    SymMatrix a(g.node_count());
    for (int i = 0; i < g.node_count(); ++i)
        for (const auto& nb : g.neighbors(i))
            if (nb.node > i) a.set(i, nb.node, nb.weight);
    return a;
}

inline bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

inline bool close_rel(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace egospectral::testing
