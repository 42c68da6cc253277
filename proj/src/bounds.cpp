#include "egospectral/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace egospectral {

namespace {

// 0^0 = 1 by convention (the y = 0 column of the bulk matrices needs it).
double ipow(double x, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= x;
    return r;
}

void require_order(const MomentSequence& m, int r) {
    if (r < 1) throw std::invalid_argument("bound order r must be >= 1");
    if (static_cast<int>(m.values.size()) < 2 * r + 2)
        throw std::invalid_argument("moment sequence of length " +
                                    std::to_string(m.values.size()) +
                                    " is too short for order " + std::to_string(r) +
                                    " (needs " + std::to_string(2 * r + 2) + " values)");
    if (m.values[0] != 1.0) throw std::invalid_argument("moment sequence: m_0 must equal 1");
}

// Congruence scaling m_k -> m_k / s^k, s = max(1, sqrt(m_2)). PSD verdicts
// are invariant (H -> D H D with D = diag(s^-i)), conditioning is not.
std::vector<double> prescaled(const MomentSequence& m, const SolveOptions& opts, double& s) {
    s = 1.0;
    if (opts.prescale && m.values.size() > 2 && m.values[2] > 1.0) s = std::sqrt(m.values[2]);
    std::vector<double> v(m.values);
    double p = 1.0;
    for (std::size_t k = 1; k < v.size(); ++k) {
        p *= s;
        v[k] /= p;
    }
    return v;
}

SymMatrix hankel_even(std::span<const double> v, int r) {
    SymMatrix h(r + 1);
    for (int i = 0; i <= r; ++i)
        for (int j = i; j <= r; ++j) h.set(i, j, v[i + j]);
    return h;
}

SymMatrix hankel_odd(std::span<const double> v, int r) {
    SymMatrix h(r + 1);
    for (int i = 0; i <= r; ++i)
        for (int j = i; j <= r; ++j) h.set(i, j, v[i + j + 1]);
    return h;
}

SymMatrix bulk_even(std::span<const double> v, double n, int r, double y) {
    SymMatrix t(r + 1);
    for (int i = 0; i <= r; ++i)
        for (int j = i; j <= r; ++j) t.set(i, j, (n * v[i + j] - ipow(y, i + j)) / (n - 1.0));
    return t;
}

SymMatrix bulk_odd(std::span<const double> v, double n, int r, double y) {
    SymMatrix t(r + 1);
    for (int i = 0; i <= r; ++i)
        for (int j = i; j <= r; ++j)
            t.set(i, j, (n * v[i + j + 1] - ipow(y, i + j + 1)) / (n - 1.0));
    return t;
}

}  // namespace

HankelPair build_hankel_pair(const MomentSequence& m, int r) {
    require_order(m, r);
    return {r, hankel_even(m.values, r), hankel_odd(m.values, r)};
}

BulkHankelPair build_bulk_hankel_pair(const MomentSequence& m, int r, double y) {
    require_order(m, r);
    if (!m.n || *m.n < 2)
        throw std::invalid_argument("bulk matrices require the originating node count (n >= 2)");
    const double n = static_cast<double>(*m.n);
    return {r, y, bulk_even(m.values, n, r, y), bulk_odd(m.values, n, r, y)};
}

bool check_feasibility(const MomentSequence& m, int r, const Region& region,
                       const SolveOptions& opts) {
    require_order(m, r);
    double s = 1.0;
    const auto v = prescaled(m, opts, s);
    const SymMatrix he = hankel_even(v, r);
    if (!psd_check(he, opts.psd_tol)) return false;
    switch (region.kind()) {
        case Region::Kind::all_reals:
            return true;
        case Region::Kind::at_least: {
            const SymMatrix ho = hankel_odd(v, r);
            // Slack anchored on the Hankel entries: a large shift must not
            // inflate the tolerance of the combined matrix.
            const double slack =
                opts.psd_tol * std::max({1.0, he.max_abs(), ho.max_abs()});
            return psd_check_abs(lin_comb(1.0, ho, -region.bound() / s, he), slack);
        }
        case Region::Kind::at_most: {
            const SymMatrix ho = hankel_odd(v, r);
            const double slack =
                opts.psd_tol * std::max({1.0, he.max_abs(), ho.max_abs()});
            return psd_check_abs(lin_comb(region.bound() / s, he, -1.0, ho), slack);
        }
    }
    throw std::logic_error("unreachable region kind");
}

double lower_bound_beta(const MomentSequence& m, int r, const SolveOptions& opts) {
    require_order(m, r);
    double s = 1.0;
    const auto v = prescaled(m, opts, s);
    const SymMatrix he = hankel_even(v, r);
    const SymMatrix ho = hankel_odd(v, r);
    if (!psd_check(he, opts.psd_tol))
        throw std::runtime_error("lower bound: moments are inconsistent with any real spectrum");

    // Slack anchored on the Hankel entries, not on the x-inflated combination:
    // otherwise an ever-growing x would eventually drown a hard negative
    // eigenvalue in its own slack and fake a bracket.
    const double slack = opts.psd_tol * std::max({1.0, he.max_abs(), ho.max_abs()});
    const auto feasible = [&](double x) {
        return psd_check_abs(lin_comb(x, he, -1.0, ho), slack);
    };

    // Feasibility is upward-closed in x and x = m_1 (the mean eigenvalue)
    // can never be beaten, so bisection from a doubled-out bracket is exact.
    double lo = v[1];
    if (feasible(lo)) return lo * s;
    double hi = std::max({1.0, 2.0 * std::abs(v[1]), v[2]});
    for (int d = 0; !feasible(hi); ++d) {
        if (d >= 200)
            throw std::runtime_error(
                "lower bound: no feasible bracket after 200 doublings; "
                "the moment sequence appears infeasible");
        hi *= 2.0;
    }
    while (hi - lo > opts.tol * std::max(1.0, std::abs(hi))) {
        const double mid = 0.5 * (lo + hi);
        if (feasible(mid)) hi = mid;
        else lo = mid;
    }
    return hi * s;  // certified feasible end of the bracket
}

double beta1_closed_form(std::int64_t n, std::int64_t edges, std::int64_t triangles) {
    if (n < 1) throw std::invalid_argument("closed form: node count must be positive");
    if (triangles < 0) throw std::invalid_argument("closed form: negative triangle count");
    if (edges < 1)
        throw std::invalid_argument(
            "closed form: needs at least one edge (an edgeless graph has largest eigenvalue 0)");
    const double e = static_cast<double>(edges);
    const double t = static_cast<double>(triangles);
    const double nn = static_cast<double>(n);
    return (3.0 * t + std::sqrt(9.0 * t * t + 8.0 * e * e * e / nn)) / (2.0 * e);
}

double upper_bound_delta(const MomentSequence& m, int r, const SolveOptions& opts) {
    require_order(m, r);
    if (!m.n || *m.n < 2)
        throw std::invalid_argument("upper bound requires the originating node count (n >= 2)");
    if (opts.weights_may_be_negative && !opts.force_delta)
        throw std::runtime_error(
            "upper bound premise (nonnegative weights) not established; "
            "pass the override to compute it anyway");
    if (opts.scan_steps < 2) throw std::invalid_argument("scan_steps must be >= 2");

    double s = 1.0;
    const auto v = prescaled(m, opts, s);
    const double n = static_cast<double>(*m.n);
    const double m2r = v[2 * r];
    if (m2r < 0.0)
        throw std::runtime_error("upper bound: negative even moment; moments are infeasible");
    const double cap = std::pow(n * m2r, 1.0 / (2.0 * r));

    // Signed feasibility margin: nonnegative (within psd slack) iff y is an
    // admissible top eigenvalue with the bulk confined to [-y, y].
    const auto margin = [&](double y) {
        const SymMatrix te = bulk_even(v, n, r, y);
        const SymMatrix to = bulk_odd(v, n, r, y);
        double g = min_eigenvalue_rel(te);
        g = std::min(g, min_eigenvalue_rel(lin_comb(y, te, -1.0, to)));
        g = std::min(g, min_eigenvalue_rel(lin_comb(y, te, 1.0, to)));
        return g;
    };
    const auto feasible = [&](double y) { return margin(y) >= -opts.psd_tol; };

    // Push a feasible point toward the infeasible side of its component.
    const auto bisect_up = [&](double lo, double hi) {
        while (hi - lo > opts.tol * std::max(1.0, cap)) {
            const double mid = 0.5 * (lo + hi);
            if (feasible(mid)) lo = mid;
            else hi = mid;
        }
        return lo;
    };

    const int steps = opts.scan_steps;
    std::vector<double> ys(steps + 1), margins(steps + 1);
    for (int j = 0; j <= steps; ++j) {
        ys[j] = cap * static_cast<double>(steps - j) / static_cast<double>(steps);
        margins[j] = margin(ys[j]);
    }

    double best = -std::numeric_limits<double>::infinity();
    int first_feasible = -1;
    for (int j = 0; j <= steps; ++j)
        if (margins[j] >= -opts.psd_tol) {
            first_feasible = j;
            break;
        }
    if (first_feasible == 0) best = cap;
    else if (first_feasible > 0) best = bisect_up(ys[first_feasible], ys[first_feasible - 1]);

    // The feasible set can be a union of intervals or isolated points that
    // the grid straddles (moment sequences that pin the spectrum exactly
    // have zero-width feasible sets). Chase every sampled local max of the
    // margin that could beat the grid answer.
    for (int j = 0; j <= steps; ++j) {
        const bool left_ok = j == 0 || margins[j] >= margins[j - 1];
        const bool right_ok = j == steps || margins[j] > margins[j + 1];
        if (!(left_ok && right_ok)) continue;
        if (j == 0 && first_feasible == 0) continue;
        const double b = ys[std::max(j - 1, 0)];
        if (b <= best) continue;
        const double a = ys[std::min(j + 1, steps)];

        // Presample, then golden-section the bracket around the best sample.
        constexpr int kPre = 32;
        int tbest = 0;
        double gbest = -std::numeric_limits<double>::infinity();
        for (int t = 0; t <= kPre; ++t) {
            const double x = a + (b - a) * static_cast<double>(t) / kPre;
            const double gx = margin(x);
            if (gx > gbest) {
                gbest = gx;
                tbest = t;
            }
        }
        double glo = a + (b - a) * static_cast<double>(std::max(tbest - 1, 0)) / kPre;
        double ghi = a + (b - a) * static_cast<double>(std::min(tbest + 1, kPre)) / kPre;
        double xstar = a + (b - a) * static_cast<double>(tbest) / kPre;
        double fstar = gbest;
        const auto note = [&](double x, double f) {
            if (f > fstar) {
                fstar = f;
                xstar = x;
            }
        };
        constexpr double kInvPhi = 0.6180339887498949;
        double x1 = ghi - kInvPhi * (ghi - glo), x2 = glo + kInvPhi * (ghi - glo);
        double f1 = margin(x1), f2 = margin(x2);
        note(x1, f1);
        note(x2, f2);
        for (int it = 0; it < 90; ++it) {
            if (f1 < f2) {
                glo = x1;
                x1 = x2;
                f1 = f2;
                x2 = glo + kInvPhi * (ghi - glo);
                f2 = margin(x2);
                note(x2, f2);
            } else {
                ghi = x2;
                x2 = x1;
                f2 = f1;
                x1 = ghi - kInvPhi * (ghi - glo);
                f1 = margin(x1);
                note(x1, f1);
            }
        }
        // b is grid-infeasible whenever it can still beat `best`, so the
        // bracket invariant of bisect_up holds.
        if (fstar >= -opts.psd_tol) best = std::max(best, bisect_up(xstar, b));
    }

    if (!std::isfinite(best) || best < 0.0)
        throw std::runtime_error(
            "upper bound: no admissible top eigenvalue in [0, cap]; the moment sequence "
            "may be infeasible or the scan too coarse (raise scan_steps)");
    return best * s;
}

double chung_lu_estimate(std::span<const double> w) {
    if (w.empty()) throw std::invalid_argument("estimate: empty sequence");
    double sum = 0.0, sq = 0.0;
    for (double x : w) {
        if (!std::isfinite(x) || x < 0.0)
            throw std::invalid_argument("estimate: sequence must be nonnegative and finite");
        sum += x;
        sq += x * x;
    }
    if (sum == 0.0) throw std::invalid_argument("estimate: sequence sums to zero");
    return sq / sum;
}

bool chung_lu_validity(std::span<const double> w) {
    const double est = chung_lu_estimate(w);
    const double wmax = *std::max_element(w.begin(), w.end());
    return est > std::sqrt(wmax) * std::log(static_cast<double>(w.size()));
}

std::string to_string(ThresholdVerdict v) {
    switch (v) {
        case ThresholdVerdict::GuaranteedDieOut: return "GuaranteedDieOut";
        case ThresholdVerdict::GuaranteedAboveThreshold: return "GuaranteedAboveThreshold";
        case ThresholdVerdict::Indeterminate: return "Indeterminate";
    }
    throw std::logic_error("unreachable verdict");
}

ThresholdVerdict threshold_verdict(const BoundReport& rep, double tau) {
    if (!(tau > 0.0)) throw std::invalid_argument("threshold tau must be positive");
    if (rep.delta && *rep.delta < tau) return ThresholdVerdict::GuaranteedDieOut;
    if (rep.beta > tau) return ThresholdVerdict::GuaranteedAboveThreshold;
    return ThresholdVerdict::Indeterminate;
}

BoundReport compute_bound_report(const MomentSequence& m, int r, const SolveOptions& opts,
                                 std::optional<double> tau) {
    BoundReport rep;
    rep.r = r;
    rep.psd_tol = opts.psd_tol;
    rep.solver_tol = opts.tol;
    rep.scan_steps = opts.scan_steps;
    rep.beta = lower_bound_beta(m, r, opts);
    rep.prescale = (opts.prescale && m.values[2] > 1.0) ? std::sqrt(m.values[2]) : 1.0;
    if (m.n && *m.n >= 2) {
        if (!opts.weights_may_be_negative) {
            rep.delta = upper_bound_delta(m, r, opts);
        } else if (opts.force_delta) {
            rep.delta = upper_bound_delta(m, r, opts);
            rep.delta_premise_unverified = true;
        }
    }
    if (tau) {
        rep.tau = tau;
        rep.verdict = threshold_verdict(rep, *tau);
    }
    return rep;
}

nlohmann::json bound_report_json(const BoundReport& rep) {
    nlohmann::json j;
    j["r"] = rep.r;
    j["beta"] = rep.beta;
    j["delta"] = rep.delta ? nlohmann::json(*rep.delta) : nlohmann::json(nullptr);
    j["beta_closed_form"] =
        rep.beta_closed_form ? nlohmann::json(*rep.beta_closed_form) : nlohmann::json(nullptr);
    j["lambda1"] = rep.lambda1 ? nlohmann::json(*rep.lambda1) : nlohmann::json(nullptr);
    j["chung_lu"] = rep.chung_lu ? nlohmann::json(*rep.chung_lu) : nlohmann::json(nullptr);
    j["tau"] = rep.tau ? nlohmann::json(*rep.tau) : nlohmann::json(nullptr);
    j["verdict"] = rep.verdict ? nlohmann::json(to_string(*rep.verdict)) : nlohmann::json(nullptr);
    j["tolerances"] = {{"psd", rep.psd_tol}, {"solver", rep.solver_tol},
                       {"scan_steps", rep.scan_steps}};
    j["prescale"] = rep.prescale;
    if (rep.delta_premise_unverified) j["delta_premise"] = "unverified";
    return j;
}

}  // namespace egospectral
