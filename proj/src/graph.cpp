#include "egospectral/graph.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>
#include <utility>

namespace egospectral {

namespace {

std::string fmt_weight(double w) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", w);
    return buf;
}

}  // namespace

Graph Graph::from_edges(int n, std::span<const std::tuple<int, int, double>> edges,
                        std::vector<std::string> labels) {
    if (n < 1) throw std::invalid_argument("Graph: node count must be positive");
    if (labels.empty()) {
        labels.reserve(n);
        for (int i = 0; i < n; ++i) labels.push_back(std::to_string(i));
    } else if (static_cast<int>(labels.size()) != n) {
        throw std::invalid_argument("Graph: label count does not match node count");
    }
    {
        std::unordered_set<std::string> seen;
        for (const auto& l : labels) {
            if (l.empty() || std::any_of(l.begin(), l.end(),
                                         [](unsigned char c) { return std::isspace(c); }))
                throw std::invalid_argument("Graph: labels must be non-empty and whitespace-free");
            if (!seen.insert(l).second)
                throw std::invalid_argument("Graph: duplicate label '" + l + "'");
        }
    }

    std::vector<std::tuple<int, int, double>> norm;
    norm.reserve(edges.size());
    for (const auto& [i, j, w] : edges) {
        if (i < 0 || i >= n || j < 0 || j >= n)
            throw std::invalid_argument("Graph: edge endpoint out of range");
        if (i == j) throw std::invalid_argument("Graph: self-loop at node " + labels[i]);
        if (!std::isfinite(w)) throw std::invalid_argument("Graph: non-finite edge weight");
        if (w == 0.0) throw std::invalid_argument("Graph: zero edge weight");
        norm.emplace_back(std::min(i, j), std::max(i, j), w);
    }
    std::sort(norm.begin(), norm.end(),
              [](const auto& a, const auto& b) {
                  return std::pair(std::get<0>(a), std::get<1>(a)) <
                         std::pair(std::get<0>(b), std::get<1>(b));
              });
    std::vector<std::tuple<int, int, double>> uniq;
    uniq.reserve(norm.size());
    for (const auto& e : norm) {
        if (!uniq.empty() && std::get<0>(uniq.back()) == std::get<0>(e) &&
            std::get<1>(uniq.back()) == std::get<1>(e)) {
            if (std::get<2>(uniq.back()) != std::get<2>(e))
                throw std::invalid_argument("Graph: duplicate edge " +
                                            labels[std::get<0>(e)] + " -- " +
                                            labels[std::get<1>(e)] +
                                            " with conflicting weights");
            continue;
        }
        uniq.push_back(e);
    }

    Graph g;
    g.n_ = n;
    g.labels_ = std::move(labels);
    g.edge_count_ = static_cast<std::int64_t>(uniq.size());
    g.offsets_.assign(static_cast<std::size_t>(n) + 1, 0);
    for (const auto& [u, v, w] : uniq) {
        (void)w;
        ++g.offsets_[u + 1];
        ++g.offsets_[v + 1];
    }
    for (int i = 0; i < n; ++i) g.offsets_[i + 1] += g.offsets_[i];
    g.adj_.resize(static_cast<std::size_t>(g.offsets_[n]));
    std::vector<std::int64_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
    for (const auto& [u, v, w] : uniq) {
        g.adj_[cursor[u]++] = {v, w};
        g.adj_[cursor[v]++] = {u, w};
    }
    for (int i = 0; i < n; ++i)
        std::sort(g.adj_.begin() + g.offsets_[i], g.adj_.begin() + g.offsets_[i + 1],
                  [](const Neighbor& a, const Neighbor& b) { return a.node < b.node; });

    if (!uniq.empty()) {
        g.min_weight_ = std::get<2>(uniq.front());
        g.max_weight_ = g.min_weight_;
        for (const auto& [u, v, w] : uniq) {
            (void)u; (void)v;
            g.min_weight_ = std::min(g.min_weight_, w);
            g.max_weight_ = std::max(g.max_weight_, w);
            if (w < 0.0) g.has_negative_ = true;
            if (w != 1.0) g.unweighted_ = false;
        }
    }
    return g;
}

void Graph::check_node(int i) const {
    if (i < 0 || i >= n_)
        throw std::out_of_range("Graph: node index " + std::to_string(i) + " out of range");
}

std::span<const Neighbor> Graph::neighbors(int i) const {
    check_node(i);
    return {adj_.data() + offsets_[i], static_cast<std::size_t>(offsets_[i + 1] - offsets_[i])};
}

int Graph::degree(int i) const {
    check_node(i);
    return static_cast<int>(offsets_[i + 1] - offsets_[i]);
}

double Graph::strength(int i) const {
    double s = 0.0;
    for (const auto& nb : neighbors(i)) s += nb.weight;
    return s;
}

const std::string& Graph::label(int i) const {
    check_node(i);
    return labels_[i];
}

ParseOutcome parse_edge_list_detailed(std::istream& in) {
    std::unordered_map<std::string, int> ids;
    std::vector<std::string> labels;
    std::vector<std::tuple<int, int, double>> edges;
    // (u,v) normalized -> (weight, first line), for duplicate diagnostics.
    std::map<std::pair<int, int>, std::pair<double, int>> seen;
    int duplicates = 0;

    auto intern = [&](const std::string& tok) {
        auto [it, fresh] = ids.emplace(tok, static_cast<int>(labels.size()));
        if (fresh) labels.push_back(tok);
        return it->second;
    };

    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto where = "line " + std::to_string(line_no) + ": ";
        std::size_t first = line.find_first_not_of(" \t\r\n");
        if (first == std::string::npos) continue;
        if (line[first] == '#' || line[first] == '%') continue;

        std::istringstream ls(line);
        std::vector<std::string> tok;
        std::string t;
        while (ls >> t) tok.push_back(t);
        if (tok.size() != 2 && tok.size() != 3)
            throw std::runtime_error(where + "expected 'u v' or 'u v w'");

        double w = 1.0;
        if (tok.size() == 3) {
            const char* b = tok[2].data();
            const char* e = b + tok[2].size();
            auto [p, ec] = std::from_chars(b, e, w);
            if (ec != std::errc() || p != e)
                throw std::runtime_error(where + "bad weight '" + tok[2] + "'");
            if (!std::isfinite(w)) throw std::runtime_error(where + "non-finite weight");
            if (w == 0.0) throw std::runtime_error(where + "zero edge weight");
        }

        const int u = intern(tok[0]);
        const int v = intern(tok[1]);
        if (u == v) throw std::runtime_error(where + "self-loop at '" + tok[0] + "'");

        const auto key = std::minmax(u, v);
        auto [it, fresh] = seen.emplace(std::pair(key.first, key.second), std::pair(w, line_no));
        if (!fresh) {
            if (it->second.first != w)
                throw std::runtime_error(where + "duplicate edge '" + tok[0] + " " + tok[1] +
                                         "' conflicts with line " +
                                         std::to_string(it->second.second));
            ++duplicates;
            continue;
        }
        edges.emplace_back(u, v, w);
    }

    if (labels.empty()) throw std::runtime_error("empty edge list");
    const int n = static_cast<int>(labels.size());
    return {Graph::from_edges(n, edges, std::move(labels)), duplicates};
}

Graph parse_edge_list(std::istream& in) { return parse_edge_list_detailed(in).graph; }

Graph parse_edge_list(const std::string& text) {
    std::istringstream in(text);
    return parse_edge_list(in);
}

std::string to_edge_list(const Graph& g) {
    std::string out;
    for (int i = 0; i < g.node_count(); ++i)
        if (g.degree(i) == 0)
            throw std::invalid_argument("to_edge_list: isolated node '" + g.label(i) +
                                        "' has no edge-list representation");
    const bool plain = g.is_unweighted();
    for (int i = 0; i < g.node_count(); ++i) {
        for (const auto& nb : g.neighbors(i)) {
            if (nb.node <= i) continue;
            out += g.label(i);
            out += ' ';
            out += g.label(nb.node);
            if (!plain) {
                out += ' ';
                out += fmt_weight(nb.weight);
            }
            out += '\n';
        }
    }
    return out;
}

nlohmann::json graph_summary(const Graph& g) {
    nlohmann::json j;
    j["n"] = g.node_count();
    j["edges"] = g.edge_count();
    j["weighted"] = !g.is_unweighted();
    if (g.edge_count() > 0) {
        j["min_weight"] = g.min_weight();
        j["max_weight"] = g.max_weight();
    } else {
        j["min_weight"] = nullptr;
        j["max_weight"] = nullptr;
    }
    return j;
}

std::vector<int> bfs_neighborhood(const Graph& g, int ego, int radius) {
    if (radius < 0) throw std::invalid_argument("bfs_neighborhood: radius must be >= 0");
    if (ego < 0 || ego >= g.node_count())
        throw std::out_of_range("bfs_neighborhood: ego out of range");

    std::vector<int> members{ego};
    std::vector<char> visited(g.node_count(), 0);
    visited[ego] = 1;
    std::vector<int> frontier{ego}, next;
    for (int d = 0; d < radius && !frontier.empty(); ++d) {
        next.clear();
        for (int u : frontier)
            for (const auto& nb : g.neighbors(u))
                if (!visited[nb.node]) {
                    visited[nb.node] = 1;
                    next.push_back(nb.node);
                }
        std::sort(next.begin(), next.end());
        members.insert(members.end(), next.begin(), next.end());
        frontier.swap(next);
    }
    return members;
}

Egonet extract_egonet(const Graph& g, int ego, int radius) {
    Egonet e;
    e.ego = ego;
    e.radius = radius;
    e.nodes = bfs_neighborhood(g, ego, radius);
    const int k = static_cast<int>(e.nodes.size());
    e.matrix = SymMatrix(k);
    std::vector<int> loc(g.node_count(), -1);
    for (int t = 0; t < k; ++t) loc[e.nodes[t]] = t;
    for (int t = 0; t < k; ++t)
        for (const auto& nb : g.neighbors(e.nodes[t])) {
            const int s = loc[nb.node];
            if (s > t) e.matrix.set(t, s, nb.weight);
        }
    return e;
}

Graph bfs_subgraph_sample(const Graph& g, int seed, int depth) {
    const auto members = bfs_neighborhood(g, seed, depth);
    const int k = static_cast<int>(members.size());
    std::vector<int> loc(g.node_count(), -1);
    for (int t = 0; t < k; ++t) loc[members[t]] = t;
    std::vector<std::tuple<int, int, double>> edges;
    std::vector<std::string> labels;
    labels.reserve(k);
    for (int t = 0; t < k; ++t) {
        labels.push_back(g.label(members[t]));
        for (const auto& nb : g.neighbors(members[t])) {
            const int s = loc[nb.node];
            if (s > t) edges.emplace_back(t, s, nb.weight);
        }
    }
    return Graph::from_edges(k, edges, std::move(labels));
}

Graph scale_weights(const Graph& g, double c) {
    if (!std::isfinite(c) || c == 0.0)
        throw std::invalid_argument("scale_weights: factor must be finite and nonzero");
    std::vector<std::tuple<int, int, double>> edges;
    edges.reserve(static_cast<std::size_t>(g.edge_count()));
    for (int i = 0; i < g.node_count(); ++i)
        for (const auto& nb : g.neighbors(i))
            if (nb.node > i) edges.emplace_back(i, nb.node, nb.weight * c);
    return Graph::from_edges(g.node_count(), edges, g.labels());
}

bool labeled_equal(const Graph& a, const Graph& b) {
    if (a.node_count() != b.node_count() || a.edge_count() != b.edge_count()) return false;
    std::unordered_map<std::string, int> bidx;
    for (int i = 0; i < b.node_count(); ++i) bidx.emplace(b.label(i), i);
    std::vector<int> map(a.node_count());
    for (int i = 0; i < a.node_count(); ++i) {
        auto it = bidx.find(a.label(i));
        if (it == bidx.end()) return false;
        map[i] = it->second;
    }
    for (int i = 0; i < a.node_count(); ++i) {
        for (const auto& nb : a.neighbors(i)) {
            if (nb.node <= i) continue;
            const auto bs = b.neighbors(map[i]);
            const int want = map[nb.node];
            auto it = std::lower_bound(bs.begin(), bs.end(), want,
                                       [](const Neighbor& x, int v) { return x.node < v; });
            if (it == bs.end() || it->node != want || it->weight != nb.weight) return false;
        }
    }
    return true;
}

}  // namespace egospectral
