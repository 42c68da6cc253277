#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include <json.hpp>

#include "egospectral/linalg.hpp"
#include "egospectral/moments.hpp"
#include "egospectral/sym_matrix.hpp"

namespace egospectral {

/// Order-r moment matrices, both (r+1)x(r+1):
///   h_even(i,j) = m_{i+j},  h_odd(i,j) = m_{i+j+1}.
/// Needs moments m_0..m_{2r+1}.
struct HankelPair {
    int r = 0;
    SymMatrix h_even{1};
    SymMatrix h_odd{1};
};

HankelPair build_hankel_pair(const MomentSequence& m, int r);

/// Moment matrices of the spectral bulk after removing a candidate top
/// eigenvalue y: t_even(i,j) = (n*m_{i+j} - y^{i+j})/(n-1), t_odd shifted by
/// one. Requires m.n >= 2.
struct BulkHankelPair {
    int r = 0;
    double y = 0.0;
    SymMatrix t_even{1};
    SymMatrix t_odd{1};
};

BulkHankelPair build_bulk_hankel_pair(const MomentSequence& m, int r, double y);

/// Support constraint for feasibility tests: the whole line, a half line
/// [a, inf), or (-inf, b].
class Region {
public:
    enum class Kind { all_reals, at_least, at_most };

    static Region all_reals() { return Region(Kind::all_reals, 0.0); }
    static Region at_least(double a) { return Region(Kind::at_least, a); }
    static Region at_most(double b) { return Region(Kind::at_most, b); }

    Kind kind() const { return kind_; }
    double bound() const { return bound_; }

private:
    Region(Kind k, double b) : kind_(k), bound_(b) {}
    Kind kind_;
    double bound_;
};

struct SolveOptions {
    double psd_tol = kDefaultPsdTol;
    /// Relative width at which bisection stops.
    double tol = 1e-9;
    /// Grid resolution of the upper-bound scan.
    int scan_steps = 2000;
    /// Normalize moments by s = max(1, sqrt(m_2)) before feasibility work;
    /// a pure congruence, so verdicts are unchanged but conditioning is not.
    bool prescale = true;
    /// Caller asserts the originating graph may carry negative weights;
    /// the bulk upper bound's premise then fails and it refuses to run...
    bool weights_may_be_negative = false;
    /// ...unless explicitly overridden, which marks the result unverified.
    bool force_delta = false;
};

/// Is there a spectrum supported on `region` with these moments (orders up
/// to 2r+1)? Localized moment-matrix PSD test.
bool check_feasibility(const MomentSequence& m, int r, const Region& region,
                       const SolveOptions& opts = {});

/// Guaranteed lower bound beta*_r <= lambda_1: the least x for which the
/// moments are consistent with a spectrum in (-inf, x]. Upward-closed in x,
/// so bisection is exact; returns the certified-feasible upper end of the
/// final bracket. Throws if even the whole-line test fails or no feasible
/// bracket exists.
double lower_bound_beta(const MomentSequence& m, int r, const SolveOptions& opts = {});

/// Closed form of the r=1 lower bound from edge/triangle counts:
/// (3t + sqrt(9t^2 + 8e^3/n)) / (2e), t = triangles, e = edges. e >= 1.
double beta1_closed_form(std::int64_t n, std::int64_t edges, std::int64_t triangles);

/// Guaranteed upper bound delta*_r >= lambda_1 (connected nonnegative
/// graphs): the largest y for which the bulk left after a top eigenvalue at
/// y is still a valid spectrum in [-y, y]. The feasible set may be a union
/// of intervals or isolated points, so a descending grid scan over
/// [0, (n*m_{2r})^{1/2r}] is combined with local refinement of the
/// constraint-margin maxima, then the right edge is pushed by bisection.
double upper_bound_delta(const MomentSequence& m, int r, const SolveOptions& opts = {});

/// Heuristic lambda_1 estimate sum(w_i^2)/sum(w_i) for a nonnegative degree
/// or weight sequence.
double chung_lu_estimate(std::span<const double> w);

/// True when the estimate's concentration premise holds:
/// sum(w^2)/sum(w) > sqrt(max w) * ln(n). Reported, never enforced.
bool chung_lu_validity(std::span<const double> w);

enum class ThresholdVerdict { GuaranteedDieOut, GuaranteedAboveThreshold, Indeterminate };

std::string to_string(ThresholdVerdict v);

struct BoundReport {
    int r = 0;
    double beta = 0.0;
    std::optional<double> delta;
    std::optional<double> beta_closed_form;
    std::optional<double> lambda1;
    std::optional<double> chung_lu;
    std::optional<double> tau;
    std::optional<ThresholdVerdict> verdict;
    /// Moment normalization that was in effect (1 when disabled).
    double prescale = 1.0;
    double psd_tol = kDefaultPsdTol;
    double solver_tol = 1e-9;
    int scan_steps = 2000;
    /// Set when delta was forced despite a possibly-negative weight premise.
    bool delta_premise_unverified = false;
};

/// Compare guaranteed bounds against an epidemic threshold tau > 0:
/// delta < tau certifies die-out, beta > tau certifies being above
/// threshold, anything else is indeterminate.
ThresholdVerdict threshold_verdict(const BoundReport& rep, double tau);

/// beta always; delta when m.n is known (and the weight premise allows or is
/// forced); verdict when tau given. lambda1 / chung_lu / closed-form slots
/// are left for graph-aware callers.
BoundReport compute_bound_report(const MomentSequence& m, int r,
                                 const SolveOptions& opts = {},
                                 std::optional<double> tau = std::nullopt);

nlohmann::json bound_report_json(const BoundReport& rep);

}  // namespace egospectral
