#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "egospectral/bounds.hpp"
#include "egospectral/graph.hpp"

namespace egospectral {

/// Random-graph recipe for experiments. Same spec + same seed => identical
/// graph on every platform (raw mt19937_64 draws only).
struct SyntheticSpec {
    enum class Kind { erdos_renyi, preferential_attachment };
    Kind kind = Kind::erdos_renyi;
    int n = 0;
    double p = 0.0;        // erdos_renyi: 0 < p <= 1 (p = 1 gives K_n)
    int edges_per_node = 0;  // preferential_attachment: 1 <= m < n
};

Graph generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed);

struct ExperimentConfig {
    /// Exactly one of input_path / synthetic.
    std::string input_path;
    std::optional<SyntheticSpec> synthetic;
    int num_samples = 100;
    int bfs_depth = 2;
    int radius = 2;
    std::uint64_t rng_seed = 0;
    std::optional<double> tau;
    std::string output_csv;   // empty: don't write
    std::string output_json;  // empty: don't write
    int workers = 1;
    /// Wall-clock columns are the one nondeterministic output; turning this
    /// off zeroes them so reruns are byte-identical.
    bool record_timings = true;
    double sandwich_slack = 1e-6;
    SolveOptions solve;
};

ExperimentConfig experiment_config_from_json(const nlohmann::json& j);

/// One subsample's results; empty error string means every stage succeeded.
/// Optional fields are absent when the stage was skipped or failed.
struct ScatterRow {
    std::string seed_label;
    int n = 0;
    std::int64_t e = 0;
    std::optional<double> lambda1;
    std::optional<double> beta;
    std::optional<double> delta;
    std::optional<double> beta_closed_form;
    std::optional<double> chung_lu;
    double ms_moments = 0.0;
    double ms_bounds = 0.0;
    std::string error;
};

struct ExperimentResult {
    std::vector<ScatterRow> rows;
    int violations = 0;
    bool sandwich_ok = true;
    /// Median of (delta - beta)/lambda1 over rows where all three exist.
    double median_rel_width = 0.0;
};

/// Draw num_samples BFS subgraphs around distinct non-isolated seeds, run
/// the full moments -> bounds -> exact-eigenvalue pipeline on each, and
/// check beta <= lambda1 <= delta per row (within sandwich_slack, relative).
/// Per-sample failures land in the row's error field; the run continues.
ExperimentResult run_experiment(const ExperimentConfig& cfg);
ExperimentResult run_experiment(const ExperimentConfig& cfg, const Graph& g);

/// Header: seed,n,e,lambda1,beta,delta,beta_closed_form,chung_lu,
/// ms_moments,ms_bounds,error. Numbers carry 10 significant digits; absent
/// optionals are empty fields; error text is comma/quote/newline-sanitized.
void emit_scatter_csv(std::span<const ScatterRow> rows, std::ostream& out);

/// JSON array mirroring the CSV columns (numbers rounded to 10 significant
/// digits, absent optionals null). read_scatter_json inverts it.
void emit_scatter_json(std::span<const ScatterRow> rows, std::ostream& out);
std::vector<ScatterRow> read_scatter_json(std::istream& in);

}  // namespace egospectral
