#include "egospectral/moments.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace egospectral {

namespace {

struct KahanSum {
    double s = 0.0, c = 0.0;
    void add(double x) {
        const double y = x - c;
        const double t = s + y;
        c = (t - s) - y;
        s = t;
    }
};

// Per-worker scratch for radius-r ball walks. stamp/loc are full-length so
// membership tests are O(1); epochs avoid clearing them between nodes.
struct BallScratch {
    std::vector<std::int64_t> stamp;
    std::vector<int> loc;
    std::vector<int> members;
    std::vector<std::vector<double>> chain;
    std::int64_t epoch = 0;

    BallScratch(int n, int r) : stamp(n, -1), loc(n, 0), chain(r + 2) {}
};

// Writes [A_{ego,r}^k]_{ego,ego} for k = 1..2r+1 into out. The ball is built
// in (distance, node index) order and the power chain v_j = A_ball^j e_ego is
// folded into dots v_{k/2} . v_{k-k/2}, so only r+1 matvecs are needed.
void node_walk_sums(const Graph& g, int ego, int r, BallScratch& ws, double* out) {
    const std::int64_t ep = ++ws.epoch;
    auto& members = ws.members;
    members.clear();
    members.push_back(ego);
    ws.stamp[ego] = ep;
    std::size_t layer_begin = 0;
    for (int d = 0; d < r; ++d) {
        const std::size_t layer_end = members.size();
        for (std::size_t t = layer_begin; t < layer_end; ++t)
            for (const auto& nb : g.neighbors(members[t]))
                if (ws.stamp[nb.node] != ep) {
                    ws.stamp[nb.node] = ep;
                    members.push_back(nb.node);
                }
        if (members.size() == layer_end) break;
        std::sort(members.begin() + layer_end, members.end());
        layer_begin = layer_end;
    }
    const int k = static_cast<int>(members.size());
    for (int t = 0; t < k; ++t) ws.loc[members[t]] = t;

    const int top = r + 1;
    for (int j = 0; j <= top; ++j) ws.chain[j].assign(k, 0.0);
    ws.chain[0][0] = 1.0;
    for (int j = 1; j <= top; ++j) {
        const auto& in = ws.chain[j - 1];
        auto& o = ws.chain[j];
        for (int t = 0; t < k; ++t) {
            double acc = 0.0;
            for (const auto& nb : g.neighbors(members[t]))
                if (ws.stamp[nb.node] == ep) acc += nb.weight * in[ws.loc[nb.node]];
            o[t] = acc;
        }
    }
    for (int kk = 1; kk <= 2 * r + 1; ++kk) {
        const auto& va = ws.chain[kk / 2];
        const auto& vb = ws.chain[kk - kk / 2];
        double dot = 0.0;
        for (int t = 0; t < k; ++t) dot += va[t] * vb[t];
        out[kk - 1] = dot;
    }
}

}  // namespace

std::string to_string(MomentSource s) {
    switch (s) {
        case MomentSource::egonet: return "egonet";
        case MomentSource::trace: return "trace";
        case MomentSource::counts: return "counts";
        case MomentSource::external: return "external";
    }
    throw std::logic_error("unreachable moment source");
}

MomentSource moment_source_from_string(const std::string& s) {
    if (s == "egonet") return MomentSource::egonet;
    if (s == "trace") return MomentSource::trace;
    if (s == "counts") return MomentSource::counts;
    if (s == "external") return MomentSource::external;
    throw std::invalid_argument("unknown moment source '" + s + "'");
}

double egonet_walk_sum(const Egonet& e, int k) {
    if (k < 1) throw std::invalid_argument("egonet_walk_sum: order must be >= 1");
    if (k > 2 * e.radius + 1)
        throw std::invalid_argument("egonet radius " + std::to_string(e.radius) +
                                    " insufficient for moment order " + std::to_string(k));
    const int d = e.matrix.dim();
    std::vector<double> v(d, 0.0), nv(d);
    v[0] = 1.0;
    for (int step = 1; step < k; ++step) {
        for (int i = 0; i < d; ++i) {
            double acc = 0.0;
            for (int j = 0; j < d; ++j) acc += e.matrix(i, j) * v[j];
            nv[i] = acc;
        }
        v.swap(nv);
    }
    double out = 0.0;
    for (int j = 0; j < d; ++j) out += e.matrix(0, j) * v[j];
    return out;
}

MomentSequence spectral_moments_from_egonets(const Graph& g, int r, int workers) {
    if (r < 1) throw std::invalid_argument("spectral moments: radius must be >= 1");
    const int n = g.node_count();
    const int K = 2 * r + 1;
    std::vector<double> slots(static_cast<std::size_t>(n) * K);

    workers = std::clamp(workers, 1, 512);
    auto run_range = [&](BallScratch& ws, int i) {
        node_walk_sums(g, i, r, ws, slots.data() + static_cast<std::size_t>(i) * K);
    };

    if (workers == 1 || n < 2 * workers) {
        BallScratch ws(n, r);
        for (int i = 0; i < n; ++i) run_range(ws, i);
    } else {
        std::atomic<int> next{0};
        std::atomic<bool> failed{false};
        constexpr int kChunk = 64;
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                BallScratch ws(n, r);
                for (;;) {
                    const int start = next.fetch_add(kChunk);
                    if (start >= n || failed.load()) break;
                    const int stop = std::min(start + kChunk, n);
                    try {
                        for (int i = start; i < stop; ++i) run_range(ws, i);
                    } catch (...) {
                        failed.store(true);
                        break;
                    }
                }
            });
        }
        for (auto& t : pool) t.join();
        if (failed.load()) throw std::runtime_error("spectral moments: worker failed");
    }

    // Serial compensated reduction in node order: the result is the same
    // bit pattern regardless of how many workers filled the slots.
    MomentSequence m;
    m.values.assign(K + 1, 0.0);
    m.values[0] = 1.0;
    for (int kk = 1; kk <= K; ++kk) {
        KahanSum acc;
        for (int i = 0; i < n; ++i) acc.add(slots[static_cast<std::size_t>(i) * K + kk - 1]);
        m.values[kk] = acc.s / n;
    }
    m.n = n;
    m.source = MomentSource::egonet;
    m.radius = r;
    return m;
}

MomentSequence moments_exact_trace(const Graph& g, int max_order, int node_cap) {
    if (max_order < 1) throw std::invalid_argument("trace moments: order must be >= 1");
    const int n = g.node_count();
    if (n > node_cap)
        throw std::runtime_error("trace moments: node count " + std::to_string(n) +
                                 " exceeds cap " + std::to_string(node_cap) +
                                 "; use the egonet pipeline");

    const int half = max_order - max_order / 2;
    std::vector<std::vector<double>> chain(half + 1, std::vector<double>(n));
    std::vector<KahanSum> acc(max_order + 1);
    for (int i = 0; i < n; ++i) {
        std::fill(chain[0].begin(), chain[0].end(), 0.0);
        chain[0][i] = 1.0;
        for (int j = 1; j <= half; ++j) {
            const auto& in = chain[j - 1];
            auto& out = chain[j];
            for (int t = 0; t < n; ++t) {
                double s = 0.0;
                for (const auto& nb : g.neighbors(t)) s += nb.weight * in[nb.node];
                out[t] = s;
            }
        }
        for (int k = 1; k <= max_order; ++k) {
            const auto& va = chain[k / 2];
            const auto& vb = chain[k - k / 2];
            double dot = 0.0;
            for (int t = 0; t < n; ++t) dot += va[t] * vb[t];
            acc[k].add(dot);
        }
    }

    MomentSequence m;
    m.values.assign(max_order + 1, 0.0);
    m.values[0] = 1.0;
    for (int k = 1; k <= max_order; ++k) m.values[k] = acc[k].s / n;
    m.n = n;
    m.source = MomentSource::trace;
    return m;
}

double closed_walk_oracle(const Graph& g, int node, int length) {
    if (length < 1 || length > 8)
        throw std::invalid_argument("walk oracle: length must be in [1, 8]");
    if (g.node_count() > 30)
        throw std::invalid_argument("walk oracle: graph too large (max 30 nodes)");
    if (node < 0 || node >= g.node_count())
        throw std::out_of_range("walk oracle: node out of range");

    double total = 0.0;
    auto rec = [&](auto&& self, int u, int left, double wprod) -> void {
        if (left == 0) {
            if (u == node) total += wprod;
            return;
        }
        for (const auto& nb : g.neighbors(u)) self(self, nb.node, left - 1, wprod * nb.weight);
    };
    rec(rec, node, length, 1.0);
    return total;
}

EdgeTriangleMoments edge_triangle_moments(const Graph& g) {
    if (!g.is_unweighted())
        throw std::invalid_argument(
            "edge/triangle moment identities require an unweighted graph");

    std::int64_t triangles = 0;
    for (int i = 0; i < g.node_count(); ++i) {
        const auto ni = g.neighbors(i);
        for (const auto& nb : ni) {
            const int j = nb.node;
            if (j <= i) continue;
            const auto nj = g.neighbors(j);
            // count common neighbors k > j so each triangle lands once
            auto a = ni.begin();
            auto b = nj.begin();
            while (a != ni.end() && b != nj.end()) {
                if (a->node < b->node) ++a;
                else if (b->node < a->node) ++b;
                else {
                    if (a->node > j) ++triangles;
                    ++a;
                    ++b;
                }
            }
        }
    }

    EdgeTriangleMoments out;
    out.edges = g.edge_count();
    out.triangles = triangles;
    const double n = static_cast<double>(g.node_count());
    out.moments.values = {1.0, 0.0, 2.0 * static_cast<double>(out.edges) / n,
                          6.0 * static_cast<double>(triangles) / n};
    out.moments.n = g.node_count();
    out.moments.source = MomentSource::counts;
    return out;
}

nlohmann::json moment_sequence_json(const MomentSequence& m) {
    nlohmann::json j;
    j["n"] = m.n ? nlohmann::json(*m.n) : nlohmann::json(nullptr);
    j["r"] = m.radius ? nlohmann::json(*m.radius) : nlohmann::json(nullptr);
    j["moments"] = m.values;
    j["source"] = to_string(m.source);
    return j;
}

MomentSequence moment_sequence_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw std::invalid_argument("moment sequence: expected a JSON object");
    if (!j.contains("moments") || !j["moments"].is_array() || j["moments"].empty())
        throw std::invalid_argument("moment sequence: 'moments' must be a non-empty array");
    MomentSequence m;
    for (const auto& v : j["moments"]) {
        if (!v.is_number()) throw std::invalid_argument("moment sequence: non-numeric moment");
        m.values.push_back(v.get<double>());
    }
    if (m.values[0] != 1.0) throw std::invalid_argument("moment sequence: m_0 must equal 1");
    if (j.contains("n") && !j["n"].is_null()) {
        const auto n = j["n"].get<std::int64_t>();
        if (n < 1) throw std::invalid_argument("moment sequence: n must be positive");
        m.n = n;
    }
    if (j.contains("r") && !j["r"].is_null()) {
        const auto r = j["r"].get<int>();
        if (r < 0) throw std::invalid_argument("moment sequence: r must be >= 0");
        m.radius = r;
    }
    if (j.contains("source") && !j["source"].is_null())
        m.source = moment_source_from_string(j["source"].get<std::string>());
    return m;
}

MomentSequence parse_inline_moments(const std::string& csv, std::optional<std::int64_t> n) {
    MomentSequence m;
    std::size_t pos = 0;
    while (pos <= csv.size()) {
        std::size_t comma = csv.find(',', pos);
        if (comma == std::string::npos) comma = csv.size();
        std::size_t b = pos, e = comma;
        while (b < e && std::isspace(static_cast<unsigned char>(csv[b]))) ++b;
        while (e > b && std::isspace(static_cast<unsigned char>(csv[e - 1]))) --e;
        double v = 0.0;
        auto [p, ec] = std::from_chars(csv.data() + b, csv.data() + e, v);
        if (ec != std::errc() || p != csv.data() + e || b == e)
            throw std::invalid_argument("bad moment value '" + csv.substr(pos, comma - pos) + "'");
        m.values.push_back(v);
        pos = comma + 1;
        if (comma == csv.size()) break;
    }
    if (m.values.empty() || m.values[0] != 1.0)
        throw std::invalid_argument("moment sequence: m_0 must equal 1");
    if (n) {
        if (*n < 1) throw std::invalid_argument("moment sequence: n must be positive");
        m.n = n;
    }
    m.source = MomentSource::external;
    return m;
}

}  // namespace egospectral
