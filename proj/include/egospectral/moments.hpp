#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "egospectral/graph.hpp"

namespace egospectral {

enum class MomentSource { egonet, trace, counts, external };

std::string to_string(MomentSource s);
MomentSource moment_source_from_string(const std::string& s);

/// Average spectral moments m_k = (1/n) sum_i lambda_i^k, k = 0..max_order().
/// values[0] == 1 always. `n` is the node count of the originating graph when
/// known (needed by the bulk upper bound), `radius` the egonet radius when
/// source == egonet.
struct MomentSequence {
    std::vector<double> values;
    std::optional<std::int64_t> n;
    MomentSource source = MomentSource::external;
    std::optional<int> radius;

    int max_order() const { return static_cast<int>(values.size()) - 1; }
};

/// Closed-walk sum [A_{ego,r}^k]_{11}: weighted closed walks of length k at
/// the ego inside its radius-r ball. Exact for 1 <= k <= 2r+1; larger k sees
/// walks that leave the ball, so it throws rather than return a wrong value.
double egonet_walk_sum(const Egonet& e, int k);

/// Moments m_0..m_{2r+1} of the whole graph assembled from per-node egonet
/// walk sums. Embarrassingly parallel over nodes; results are bit-identical
/// for every worker count (per-node terms land in preassigned slots and the
/// final compensated reduction is always serial in node order).
MomentSequence spectral_moments_from_egonets(const Graph& g, int r, int workers = 1);

/// Reference route: m_k = trace(A^k)/n on the full graph via per-basis-vector
/// matvec chains. O(max_order * n * E); refuses n > node_cap.
MomentSequence moments_exact_trace(const Graph& g, int max_order, int node_cap = 5000);

/// Brute-force weighted closed-walk count at one node by walk enumeration.
/// Exponential; limited to length <= 8 and n <= 30. Independent of the
/// matrix-power routes, for cross-checking them.
double closed_walk_oracle(const Graph& g, int node, int length);

struct EdgeTriangleMoments {
    std::int64_t edges = 0;
    std::int64_t triangles = 0;
    MomentSequence moments;  // (1, 0, 2e/n, 6t/n)
};

/// Edge and triangle counts with the induced first four moments. Unweighted
/// graphs only: the count identities assume unit weights.
EdgeTriangleMoments edge_triangle_moments(const Graph& g);

/// {"n": int|null, "r": int|null, "moments": [...], "source": "..."}
nlohmann::json moment_sequence_json(const MomentSequence& m);
MomentSequence moment_sequence_from_json(const nlohmann::json& j);

/// Comma-separated values, e.g. "1,0,2.5,3"; m_0 must equal 1.
MomentSequence parse_inline_moments(const std::string& csv,
                                    std::optional<std::int64_t> n = std::nullopt);

}  // namespace egospectral
