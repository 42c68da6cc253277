#include "egospectral/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "egospectral/graph.hpp"

namespace egospectral {

double SymMatrix::max_abs() const {
    double m = 0.0;
    for (double v : a_) m = std::max(m, std::abs(v));
    return m;
}

SymMatrix lin_comb(double a, const SymMatrix& A, double b, const SymMatrix& B) {
    if (A.dim() != B.dim()) throw std::invalid_argument("lin_comb: dimension mismatch");
    SymMatrix out(A.dim());
    for (int i = 0; i < A.dim(); ++i)
        for (int j = i; j < A.dim(); ++j) out.set(i, j, a * A(i, j) + b * B(i, j));
    return out;
}

std::vector<double> sym_eigenvalues(const SymMatrix& m, int dim_cap) {
    const int n = m.dim();
    if (n > dim_cap)
        throw std::invalid_argument("sym_eigenvalues: dimension " + std::to_string(n) +
                                    " exceeds cap " + std::to_string(dim_cap));

    std::vector<double> a(m.data());
    auto at = [&](int i, int j) -> double& { return a[std::size_t(i) * n + j]; };

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off_sq = 0.0, diag_sq = 0.0;
        for (int i = 0; i < n; ++i) {
            diag_sq += at(i, i) * at(i, i);
            for (int j = i + 1; j < n; ++j) off_sq += 2.0 * at(i, j) * at(i, j);
        }
        const double fro_sq = off_sq + diag_sq;
        if (off_sq == 0.0 || off_sq <= 1e-30 * fro_sq) break;

        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = at(p, q);
                if (apq == 0.0) continue;
                const double app = at(p, p), aqq = at(q, q);
                const double theta = (aqq - app) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(1.0 + theta * theta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (int k = 0; k < n; ++k) {
                    if (k == p || k == q) continue;
                    const double akp = at(k, p), akq = at(k, q);
                    at(k, p) = at(p, k) = c * akp - s * akq;
                    at(k, q) = at(q, k) = s * akp + c * akq;
                }
                at(p, p) = app - t * apq;
                at(q, q) = aqq + t * apq;
                at(p, q) = at(q, p) = 0.0;
            }
        }
    }

    std::vector<double> eig(n);
    for (int i = 0; i < n; ++i) eig[i] = at(i, i);
    std::sort(eig.begin(), eig.end(), std::greater<double>());
    return eig;
}

namespace {

// Outer-product elimination with diagonal pivoting. Returns +1 (PSD within
// slack), -1 (certainly not), 0 (inconclusive near the slack boundary).
int cholesky_verdict(const SymMatrix& m, double slack) {
    const int n = m.dim();
    std::vector<double> w(m.data());
    auto at = [&](int i, int j) -> double& { return w[std::size_t(i) * n + j]; };

    for (int i = 0; i < n; ++i)
        if (at(i, i) < -slack) return -1;

    for (int k = 0; k < n; ++k) {
        int jmax = k;
        for (int j = k + 1; j < n; ++j)
            if (at(j, j) > at(jmax, jmax)) jmax = j;
        const double d = at(jmax, jmax);
        if (d <= slack) {
            // Whole trailing block must be negligible for a clean accept.
            double rem = 0.0;
            for (int i = k; i < n; ++i)
                for (int j = k; j < n; ++j) rem = std::max(rem, std::abs(at(i, j)));
            return rem <= slack ? +1 : 0;
        }
        if (jmax != k) {
            for (int t = 0; t < n; ++t) std::swap(at(k, t), at(jmax, t));
            for (int t = 0; t < n; ++t) std::swap(at(t, k), at(t, jmax));
        }
        for (int i = k + 1; i < n; ++i) {
            const double li = at(i, k) / d;
            for (int j = k + 1; j < n; ++j) at(i, j) -= li * at(k, j);
        }
    }
    return +1;
}

}  // namespace

bool psd_check(const SymMatrix& m, double tol) {
    if (!(tol >= 0.0)) throw std::invalid_argument("psd_check: tolerance must be >= 0");
    return psd_check_abs(m, tol * std::max(1.0, m.max_abs()));
}

bool psd_check_abs(const SymMatrix& m, double slack) {
    if (!(slack >= 0.0)) throw std::invalid_argument("psd_check_abs: slack must be >= 0");
    switch (cholesky_verdict(m, slack)) {
        case +1: return true;
        case -1: return false;
        default: break;
    }
    const auto eig = sym_eigenvalues(m, m.dim());
    return eig.back() >= -slack;
}

double min_eigenvalue_rel(const SymMatrix& m) {
    const auto eig = sym_eigenvalues(m, m.dim());
    return eig.back() / std::max(1.0, m.max_abs());
}

double lambda1_exact(const Graph& g, double tol, long max_iters, int dense_cap) {
    if (!(tol > 0.0)) throw std::invalid_argument("lambda1_exact: tolerance must be positive");
    const int n = g.node_count();
    if (n < 1) throw std::invalid_argument("lambda1_exact: empty graph");

    if (g.has_negative_weights()) {
        if (n > dense_cap)
            throw std::runtime_error(
                "lambda1_exact: negative weights force a dense eigensolve, n exceeds cap " +
                std::to_string(dense_cap));
        SymMatrix a(n);
        for (int i = 0; i < n; ++i)
            for (const auto& nb : g.neighbors(i))
                if (nb.node > i) a.set(i, nb.node, nb.weight);
        return sym_eigenvalues(a, n).front();
    }

    if (g.edge_count() == 0) return 0.0;

    // Shift by the max weighted degree: A + sigma*I is PSD, so its dominant
    // eigenvalue is the largest (not just largest-magnitude) one of A.
    double sigma = 0.0;
    for (int i = 0; i < n; ++i) sigma = std::max(sigma, g.strength(i));

    std::vector<double> v(n, 1.0 / std::sqrt(double(n))), av(n);
    double theta = 0.0, resid = 0.0;
    for (long iter = 0; iter < max_iters; ++iter) {
        for (int i = 0; i < n; ++i) {
            double acc = sigma * v[i];
            for (const auto& nb : g.neighbors(i)) acc += nb.weight * v[nb.node];
            av[i] = acc;
        }
        theta = 0.0;
        for (int i = 0; i < n; ++i) theta += v[i] * av[i];
        double rsq = 0.0;
        for (int i = 0; i < n; ++i) {
            const double d = av[i] - theta * v[i];
            rsq += d * d;
        }
        resid = std::sqrt(rsq);
        if (resid <= tol * std::max(1.0, std::abs(theta))) return theta - sigma;
        double norm = 0.0;
        for (double x : av) norm += x * x;
        norm = std::sqrt(norm);
        if (norm == 0.0) return 0.0;  // start vector in the kernel: spectrum is {0}
        for (int i = 0; i < n; ++i) v[i] = av[i] / norm;
    }
    throw std::runtime_error("lambda1_exact: no convergence after " + std::to_string(max_iters) +
                             " iterations; last estimate " + std::to_string(theta - sigma) +
                             " with residual " + std::to_string(resid));
}

}  // namespace egospectral
