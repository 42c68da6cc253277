#include "egospectral/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "egospectral/linalg.hpp"
#include "egospectral/moments.hpp"
#include "egospectral/rng.hpp"

namespace egospectral {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// 10 significant digits, trailing zeros kept ("2.000000000").
std::string fmt_sig10(double v) {
    std::ostringstream os;
    os << std::setprecision(10) << std::showpoint << v;
    return os.str();
}

double round_sig10(double v) { return std::strtod(fmt_sig10(v).c_str(), nullptr); }

std::string sanitize(std::string s) {
    for (char& c : s)
        if (c == ',' || c == '"' || c == '\n' || c == '\r') c = ';';
    return s;
}

nlohmann::json opt_json(const std::optional<double>& v) {
    return v ? nlohmann::json(round_sig10(*v)) : nlohmann::json(nullptr);
}

}  // namespace

Graph generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed) {
    std::mt19937_64 eng(seed);
    std::vector<std::tuple<int, int, double>> edges;

    switch (spec.kind) {
        case SyntheticSpec::Kind::erdos_renyi: {
            if (spec.n < 2) throw std::invalid_argument("erdos_renyi: n must be >= 2");
            if (!(spec.p > 0.0) || spec.p > 1.0)
                throw std::invalid_argument("erdos_renyi: p must be in (0, 1]");
            for (int i = 0; i < spec.n; ++i)
                for (int j = i + 1; j < spec.n; ++j)
                    if (rng_unit(eng) < spec.p) edges.emplace_back(i, j, 1.0);
            break;
        }
        case SyntheticSpec::Kind::preferential_attachment: {
            const int m = spec.edges_per_node;
            if (spec.n < 2) throw std::invalid_argument("preferential_attachment: n must be >= 2");
            if (m < 1 || m >= spec.n)
                throw std::invalid_argument(
                    "preferential_attachment: edges_per_node must satisfy 1 <= m < n");
            // Complete core on m+1 nodes, then each newcomer attaches to m
            // distinct endpoints drawn proportionally to degree.
            std::vector<int> endpoints;
            for (int i = 0; i <= m && i < spec.n; ++i)
                for (int j = i + 1; j <= m && j < spec.n; ++j) {
                    edges.emplace_back(i, j, 1.0);
                    endpoints.push_back(i);
                    endpoints.push_back(j);
                }
            std::vector<int> picked;
            for (int t = m + 1; t < spec.n; ++t) {
                picked.clear();
                while (static_cast<int>(picked.size()) < m) {
                    const int cand = endpoints[rng_below(eng, endpoints.size())];
                    if (std::find(picked.begin(), picked.end(), cand) == picked.end())
                        picked.push_back(cand);
                }
                for (int cand : picked) {
                    edges.emplace_back(cand, t, 1.0);
                    endpoints.push_back(cand);
                    endpoints.push_back(t);
                }
            }
            break;
        }
    }
    return Graph::from_edges(spec.n, edges);
}

ExperimentConfig experiment_config_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw std::invalid_argument("experiment config: expected a JSON object");
    static const char* known[] = {"input",       "synthetic",   "num_samples", "bfs_depth",
                                  "radius",      "rng_seed",    "tau",         "output_csv",
                                  "output_json", "workers",     "record_timings",
                                  "sandwich_slack", "psd_tol",  "solver_tol",  "scan_steps",
                                  "prescale"};
    for (const auto& [key, val] : j.items()) {
        (void)val;
        if (std::find_if(std::begin(known), std::end(known),
                         [&](const char* k) { return key == k; }) == std::end(known))
            throw std::invalid_argument("experiment config: unknown key '" + key + "'");
    }

    ExperimentConfig cfg;
    if (j.contains("input")) cfg.input_path = j["input"].get<std::string>();
    if (j.contains("synthetic")) {
        const auto& s = j["synthetic"];
        SyntheticSpec spec;
        const auto type = s.at("type").get<std::string>();
        if (type == "erdos_renyi") {
            spec.kind = SyntheticSpec::Kind::erdos_renyi;
            spec.p = s.at("p").get<double>();
        } else if (type == "preferential_attachment") {
            spec.kind = SyntheticSpec::Kind::preferential_attachment;
            spec.edges_per_node = s.at("edges_per_node").get<int>();
        } else {
            throw std::invalid_argument("experiment config: unknown synthetic type '" + type +
                                        "'");
        }
        spec.n = s.at("n").get<int>();
        cfg.synthetic = spec;
    }
    if (cfg.input_path.empty() == !cfg.synthetic)
        throw std::invalid_argument(
            "experiment config: exactly one of 'input' and 'synthetic' must be set");

    if (j.contains("num_samples")) cfg.num_samples = j["num_samples"].get<int>();
    if (j.contains("bfs_depth")) cfg.bfs_depth = j["bfs_depth"].get<int>();
    if (j.contains("radius")) cfg.radius = j["radius"].get<int>();
    if (j.contains("rng_seed")) cfg.rng_seed = j["rng_seed"].get<std::uint64_t>();
    if (j.contains("tau") && !j["tau"].is_null()) cfg.tau = j["tau"].get<double>();
    if (j.contains("output_csv")) cfg.output_csv = j["output_csv"].get<std::string>();
    if (j.contains("output_json")) cfg.output_json = j["output_json"].get<std::string>();
    if (j.contains("workers")) cfg.workers = j["workers"].get<int>();
    if (j.contains("record_timings")) cfg.record_timings = j["record_timings"].get<bool>();
    if (j.contains("sandwich_slack")) cfg.sandwich_slack = j["sandwich_slack"].get<double>();
    if (j.contains("psd_tol")) cfg.solve.psd_tol = j["psd_tol"].get<double>();
    if (j.contains("solver_tol")) cfg.solve.tol = j["solver_tol"].get<double>();
    if (j.contains("scan_steps")) cfg.solve.scan_steps = j["scan_steps"].get<int>();
    if (j.contains("prescale")) cfg.solve.prescale = j["prescale"].get<bool>();

    if (cfg.num_samples < 1) throw std::invalid_argument("experiment config: num_samples >= 1");
    if (cfg.tau && !(*cfg.tau > 0.0))
        throw std::invalid_argument("experiment config: tau must be positive");
    if (cfg.bfs_depth < 1) throw std::invalid_argument("experiment config: bfs_depth >= 1");
    if (cfg.radius < 1) throw std::invalid_argument("experiment config: radius >= 1");
    if (cfg.workers < 1) throw std::invalid_argument("experiment config: workers >= 1");
    if (!(cfg.sandwich_slack >= 0.0))
        throw std::invalid_argument("experiment config: sandwich_slack >= 0");
    return cfg;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    if (!cfg.input_path.empty()) {
        std::ifstream in(cfg.input_path);
        if (!in) throw std::runtime_error("cannot open '" + cfg.input_path + "'");
        return run_experiment(cfg, parse_edge_list(in));
    }
    if (!cfg.synthetic)
        throw std::invalid_argument("experiment: no input graph and no synthetic spec");
    return run_experiment(cfg, generate_synthetic(*cfg.synthetic, cfg.rng_seed));
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, const Graph& g) {
    using clock = std::chrono::steady_clock;
    using msd = std::chrono::duration<double, std::milli>;

    std::vector<int> eligible;
    for (int i = 0; i < g.node_count(); ++i)
        if (g.degree(i) >= 1) eligible.push_back(i);
    if (static_cast<int>(eligible.size()) < cfg.num_samples)
        throw std::runtime_error("experiment: num_samples " + std::to_string(cfg.num_samples) +
                                 " exceeds the " + std::to_string(eligible.size()) +
                                 " non-isolated nodes available");

    // Seed selection without replacement; a different stream than the graph
    // generator so run_experiment(cfg, g) is a function of (cfg, g) alone.
    std::mt19937_64 sel(splitmix64(cfg.rng_seed ^ 0xE60E2B722B53AEEBULL));
    for (int t = 0; t < cfg.num_samples; ++t) {
        const auto j = t + rng_below(sel, eligible.size() - t);
        std::swap(eligible[t], eligible[j]);
    }

    ExperimentResult result;
    result.rows.resize(cfg.num_samples);

    const auto run_one = [&](int t) {
        ScatterRow& row = result.rows[t];
        const int seed_node = eligible[t];
        row.seed_label = g.label(seed_node);
        try {
            const auto t0 = clock::now();
            const Graph sub = bfs_subgraph_sample(g, seed_node, cfg.bfs_depth);
            row.n = sub.node_count();
            row.e = sub.edge_count();
            const MomentSequence mom = spectral_moments_from_egonets(sub, cfg.radius, 1);
            const auto t1 = clock::now();
            if (cfg.record_timings) row.ms_moments = msd(t1 - t0).count();

            SolveOptions so = cfg.solve;
            so.weights_may_be_negative = sub.has_negative_weights();
            const BoundReport rep = compute_bound_report(mom, cfg.radius, so, cfg.tau);
            row.beta = rep.beta;
            row.delta = rep.delta;
            if (sub.is_unweighted()) {
                const auto etm = edge_triangle_moments(sub);
                row.beta_closed_form =
                    beta1_closed_form(sub.node_count(), etm.edges, etm.triangles);
            }
            std::vector<double> st(sub.node_count());
            for (int i = 0; i < sub.node_count(); ++i) st[i] = sub.strength(i);
            if (std::all_of(st.begin(), st.end(), [](double x) { return x >= 0.0; }))
                row.chung_lu = chung_lu_estimate(st);
            row.lambda1 = lambda1_exact(sub);
            if (cfg.record_timings) row.ms_bounds = msd(clock::now() - t1).count();
        } catch (const std::exception& ex) {
            row.error = ex.what();
        }
    };

    const int workers = std::clamp(cfg.workers, 1, 512);
    if (workers == 1 || cfg.num_samples < 2) {
        for (int t = 0; t < cfg.num_samples; ++t) run_one(t);
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (;;) {
                    const int t = next.fetch_add(1);
                    if (t >= cfg.num_samples) break;
                    run_one(t);
                }
            });
        for (auto& th : pool) th.join();
    }

    std::vector<double> widths;
    for (const auto& row : result.rows) {
        if (!row.error.empty()) continue;
        bool bad = false;
        if (row.lambda1) {
            const double slack = cfg.sandwich_slack * std::max(1.0, std::abs(*row.lambda1));
            if (row.beta && *row.beta - *row.lambda1 > slack) bad = true;
            if (row.delta && *row.lambda1 - *row.delta > slack) bad = true;
            if (row.beta && row.delta && *row.lambda1 > 0.0)
                widths.push_back((*row.delta - *row.beta) / *row.lambda1);
        }
        if (bad) ++result.violations;
    }
    result.sandwich_ok = result.violations == 0;
    if (!widths.empty()) {
        std::sort(widths.begin(), widths.end());
        const std::size_t h = widths.size() / 2;
        result.median_rel_width =
            widths.size() % 2 ? widths[h] : 0.5 * (widths[h - 1] + widths[h]);
    }

    if (!cfg.output_csv.empty()) {
        std::ofstream out(cfg.output_csv);
        if (!out) throw std::runtime_error("cannot write '" + cfg.output_csv + "'");
        emit_scatter_csv(result.rows, out);
    }
    if (!cfg.output_json.empty()) {
        std::ofstream out(cfg.output_json);
        if (!out) throw std::runtime_error("cannot write '" + cfg.output_json + "'");
        emit_scatter_json(result.rows, out);
    }
    return result;
}

void emit_scatter_csv(std::span<const ScatterRow> rows, std::ostream& out) {
    if (rows.empty()) throw std::invalid_argument("nothing to emit");
    out << "seed,n,e,lambda1,beta,delta,beta_closed_form,chung_lu,"
           "ms_moments,ms_bounds,error\n";
    const auto opt = [](const std::optional<double>& v) {
        return v ? fmt_sig10(*v) : std::string();
    };
    for (const auto& r : rows) {
        out << sanitize(r.seed_label) << ',' << r.n << ',' << r.e << ',' << opt(r.lambda1) << ','
            << opt(r.beta) << ',' << opt(r.delta) << ',' << opt(r.beta_closed_form) << ','
            << opt(r.chung_lu) << ',' << fmt_sig10(r.ms_moments) << ',' << fmt_sig10(r.ms_bounds)
            << ',' << sanitize(r.error) << '\n';
    }
}

void emit_scatter_json(std::span<const ScatterRow> rows, std::ostream& out) {
    if (rows.empty()) throw std::invalid_argument("nothing to emit");
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows) {
        nlohmann::json j;
        j["seed"] = r.seed_label;
        j["n"] = r.n;
        j["e"] = r.e;
        j["lambda1"] = opt_json(r.lambda1);
        j["beta"] = opt_json(r.beta);
        j["delta"] = opt_json(r.delta);
        j["beta_closed_form"] = opt_json(r.beta_closed_form);
        j["chung_lu"] = opt_json(r.chung_lu);
        j["ms_moments"] = round_sig10(r.ms_moments);
        j["ms_bounds"] = round_sig10(r.ms_bounds);
        j["error"] = r.error;
        arr.push_back(std::move(j));
    }
    out << arr.dump(2) << '\n';
}

std::vector<ScatterRow> read_scatter_json(std::istream& in) {
    const auto arr = nlohmann::json::parse(in);
    if (!arr.is_array()) throw std::invalid_argument("scatter data: expected a JSON array");
    std::vector<ScatterRow> rows;
    rows.reserve(arr.size());
    for (const auto& j : arr) {
        ScatterRow r;
        r.seed_label = j.at("seed").get<std::string>();
        r.n = j.at("n").get<int>();
        r.e = j.at("e").get<std::int64_t>();
        const auto opt = [&](const char* key) -> std::optional<double> {
            if (!j.contains(key) || j[key].is_null()) return std::nullopt;
            return j[key].get<double>();
        };
        r.lambda1 = opt("lambda1");
        r.beta = opt("beta");
        r.delta = opt("delta");
        r.beta_closed_form = opt("beta_closed_form");
        r.chung_lu = opt("chung_lu");
        r.ms_moments = j.value("ms_moments", 0.0);
        r.ms_bounds = j.value("ms_bounds", 0.0);
        r.error = j.value("error", std::string());
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace egospectral
