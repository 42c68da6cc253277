#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "egospectral/bounds.hpp"
#include "egospectral/graph.hpp"
#include "egospectral/harness.hpp"
#include "egospectral/linalg.hpp"
#include "egospectral/moments.hpp"

using nlohmann::json;

namespace {

using namespace egospectral;

// Exit policy: 0 ok, 1 computational failure, 2 usage (bad flags/files/config).
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open '" + path + "'");
    return in;
}

void print(const json& j) { std::cout << j.dump(2) << '\n'; }

int cmd_ingest(const std::string& path) {
    auto in = open_input(path);
    const auto out = parse_edge_list_detailed(in);
    if (out.duplicate_edges > 0)
        std::cerr << "note: " << out.duplicate_edges
                  << " duplicate edge line(s) collapsed\n";
    print(graph_summary(out.graph));
    return 0;
}

int cmd_moments(const std::string& path, int radius, int workers, bool verify, int cap) {
    auto in = open_input(path);
    const Graph g = parse_edge_list(in);
    const MomentSequence mom = spectral_moments_from_egonets(g, radius, workers);
    json j = moment_sequence_json(mom);
    bool ok = true;
    if (verify) {
        if (g.node_count() <= cap) {
            const MomentSequence tr = moments_exact_trace(g, 2 * radius + 1, cap);
            double max_rel = 0.0;
            for (std::size_t k = 0; k < mom.values.size(); ++k) {
                const double rel = std::abs(mom.values[k] - tr.values[k]) /
                                   std::max(1.0, std::abs(tr.values[k]));
                max_rel = std::max(max_rel, rel);
            }
            ok = max_rel <= 1e-9;
            j["verify"] = {{"trace", tr.values}, {"max_rel_err", max_rel}, {"ok", ok}};
        } else {
            std::cerr << "note: verification skipped, node count exceeds cap " << cap << '\n';
        }
    }
    print(j);
    return ok ? 0 : 1;
}

int cmd_bounds(const std::string& moments_arg, std::optional<std::int64_t> n,
               std::optional<int> r_opt, std::optional<double> tau, SolveOptions so) {
    MomentSequence mom;
    if (std::filesystem::exists(moments_arg)) {
        auto in = open_input(moments_arg);
        json j;
        try {
            j = json::parse(in);
        } catch (const json::exception& e) {
            throw UsageError("cannot parse '" + moments_arg + "': " + e.what());
        }
        mom = moment_sequence_from_json(j);
    } else if (moments_arg.find(',') != std::string::npos) {
        mom = parse_inline_moments(moments_arg);
    } else {
        throw UsageError("'" + moments_arg +
                         "' is neither an existing file nor an inline moment list");
    }
    if (n) {
        if (*n < 1) throw UsageError("--n must be positive");
        mom.n = n;
    }

    int r;
    if (r_opt) {
        r = *r_opt;
        if (r < 1) throw UsageError("--r must be >= 1");
        if (static_cast<int>(mom.values.size()) < 2 * r + 2)
            throw UsageError("order " + std::to_string(r) + " needs " +
                             std::to_string(2 * r + 2) + " moments, got " +
                             std::to_string(mom.values.size()));
    } else {
        r = (static_cast<int>(mom.values.size()) - 2) / 2;
        if (r < 1) throw UsageError("need at least 4 moments (m_0..m_3)");
    }

    if (!mom.n)
        std::cerr << "note: node count unknown; upper bound omitted (pass --n)\n";
    else if (so.weights_may_be_negative && !so.force_delta)
        std::cerr << "note: nonnegative-weight premise not established; upper bound omitted "
                     "(--force-delta overrides)\n";

    BoundReport rep = compute_bound_report(mom, r, so, tau);
    print(bound_report_json(rep));
    return 0;
}

int cmd_estimate(const std::string& path) {
    auto in = open_input(path);
    const Graph g = parse_edge_list(in);
    std::vector<double> st(g.node_count());
    for (int i = 0; i < g.node_count(); ++i) st[i] = g.strength(i);
    json j;
    j["n"] = g.node_count();
    j["chung_lu"] = chung_lu_estimate(st);
    j["validity"] = chung_lu_validity(st);
    print(j);
    return 0;
}

int cmd_experiment(const std::string& config_path, double psd_tol, bool psd_tol_set) {
    auto in = open_input(config_path);
    ExperimentConfig cfg;
    try {
        cfg = experiment_config_from_json(json::parse(in));
    } catch (const json::exception& e) {
        throw UsageError("config parse error: " + std::string(e.what()));
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    if (psd_tol_set) cfg.solve.psd_tol = psd_tol;
    if (!cfg.input_path.empty() && !std::filesystem::exists(cfg.input_path))
        throw UsageError("cannot open '" + cfg.input_path + "'");

    const ExperimentResult res = run_experiment(cfg);
    int errored = 0;
    for (const auto& row : res.rows)
        if (!row.error.empty()) ++errored;
    json j;
    j["rows"] = res.rows.size();
    j["errors"] = errored;
    j["violations"] = res.violations;
    j["sandwich_ok"] = res.sandwich_ok;
    j["median_rel_width"] = res.median_rel_width;
    j["output_csv"] = cfg.output_csv.empty() ? json(nullptr) : json(cfg.output_csv);
    j["output_json"] = cfg.output_json.empty() ? json(nullptr) : json(cfg.output_json);
    print(j);
    return res.sandwich_ok ? 0 : 1;
}

struct Fixture {
    const char* name;
    std::int64_t n;
    std::vector<double> moments;
    double beta_ref;
    double delta_ref;
    double lambda1_ref;
};

int cmd_fixtures(const SolveOptions& so) {
    // Depth-2 BFS samples of two public networks with published r=2 bounds.
    const std::vector<Fixture> fixtures = {
        {"enron-email-bfs2", 3215, {1.0, 0.0, 22.47, 394.7, 33491.0, 2603200.0},
         78.53, 98.74, 95.18},
        {"as-skitter-bfs2", 2248, {1.0, 0.0, 18.37, 341.1, 40001.0, 2777018.0},
         74.72, 93.94, 91.3},
    };
    json arr = json::array();
    bool all_ok = true;
    for (const auto& f : fixtures) {
        MomentSequence m;
        m.values = f.moments;
        m.n = f.n;
        const BoundReport rep = compute_bound_report(m, 2, so);
        const bool ok = rep.delta && std::abs(rep.beta - f.beta_ref) <= 0.01 * f.beta_ref &&
                        std::abs(*rep.delta - f.delta_ref) <= 0.01 * f.delta_ref;
        all_ok = all_ok && ok;
        arr.push_back({{"name", f.name},
                       {"n", f.n},
                       {"beta", rep.beta},
                       {"delta", rep.delta ? json(*rep.delta) : json(nullptr)},
                       {"beta_reference", f.beta_ref},
                       {"delta_reference", f.delta_ref},
                       {"lambda1_reference", f.lambda1_ref},
                       {"pass", ok}});
    }
    print(arr);
    return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "egospectral: guaranteed lower/upper bounds on a network's largest adjacency "
        "eigenvalue from egonet spectral moments"};
    app.require_subcommand(1);

    double psd_tol = kDefaultPsdTol;
    auto* psd_opt = app.add_option("--psd-tol", psd_tol, "PSD feasibility tolerance")
                        ->envname("EGOSPECTRAL_PSD_TOL");

    auto* ing = app.add_subcommand("ingest", "parse an edge list and print a summary");
    std::string ing_path;
    ing->add_option("edgelist", ing_path, "edge-list file ('u v' or 'u v w' lines)")->required();

    auto* mo = app.add_subcommand("moments", "egonet spectral moments of a graph");
    std::string mo_path;
    int mo_radius = 2, mo_workers = 1, mo_cap = 5000;
    bool mo_verify = false;
    mo->add_option("edgelist", mo_path, "edge-list file")->required();
    mo->add_option("--radius", mo_radius, "egonet radius (moments up to 2r+1)")
        ->check(CLI::PositiveNumber);
    mo->add_option("--workers", mo_workers, "worker threads")->check(CLI::PositiveNumber);
    mo->add_flag("--verify", mo_verify, "cross-check against the full-graph trace route");
    mo->add_option("--cap", mo_cap, "node-count cap for the trace cross-check");

    auto* bo = app.add_subcommand("bounds", "eigenvalue bounds from a moment sequence");
    std::string bo_moments;
    std::optional<std::int64_t> bo_n;
    std::optional<int> bo_r;
    std::optional<double> bo_tau;
    double bo_tol = 1e-9;
    int bo_scan = 2000;
    bool bo_no_prescale = false, bo_negw = false, bo_force = false;
    bo->add_option("--moments", bo_moments,
                   "moment JSON file or inline comma-separated values (m_0 first)")
        ->required();
    bo->add_option("--n", bo_n, "node count of the originating graph");
    bo->add_option("--r", bo_r, "bound order (default: largest the sequence supports)");
    bo->add_option("--tau", bo_tau, "epidemic threshold to compare against");
    bo->add_option("--tol", bo_tol, "bisection tolerance");
    bo->add_option("--scan-steps", bo_scan, "upper-bound grid resolution");
    bo->add_flag("--no-prescale", bo_no_prescale, "disable moment normalization");
    bo->add_flag("--negative-weights", bo_negw,
                 "declare that the originating graph may have negative weights");
    bo->add_flag("--force-delta", bo_force,
                 "compute the upper bound even when the weight premise is not established");

    auto* es = app.add_subcommand("estimate", "heuristic eigenvalue estimate from degrees");
    std::string es_path;
    es->add_option("edgelist", es_path, "edge-list file")->required();

    auto* ex = app.add_subcommand("experiment", "sampled bounds-vs-exact validation run");
    std::string ex_config;
    ex->add_option("--config", ex_config, "experiment config JSON")->required();

    auto* fx = app.add_subcommand("fixtures", "recompute built-in reference datasets");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (ing->parsed()) return cmd_ingest(ing_path);
        if (mo->parsed()) return cmd_moments(mo_path, mo_radius, mo_workers, mo_verify, mo_cap);
        if (bo->parsed()) {
            SolveOptions so;
            so.psd_tol = psd_tol;
            so.tol = bo_tol;
            so.scan_steps = bo_scan;
            so.prescale = !bo_no_prescale;
            so.weights_may_be_negative = bo_negw;
            so.force_delta = bo_force;
            return cmd_bounds(bo_moments, bo_n, bo_r, bo_tau, so);
        }
        if (es->parsed()) return cmd_estimate(es_path);
        if (ex->parsed()) return cmd_experiment(ex_config, psd_tol, psd_opt->count() > 0);
        if (fx->parsed()) {
            SolveOptions so;
            so.psd_tol = psd_tol;
            return cmd_fixtures(so);
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
