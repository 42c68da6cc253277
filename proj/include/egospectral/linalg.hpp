#pragma once

#include <vector>

#include "egospectral/sym_matrix.hpp"

namespace egospectral {

class Graph;

/// Shared tolerance for PSD feasibility tests; overridable per call site
/// (the CLI also reads EGOSPECTRAL_PSD_TOL).
inline constexpr double kDefaultPsdTol = 1e-9;

/// All eigenvalues of a symmetric matrix, descending, via cyclic Jacobi sweeps.
/// Accurate to machine precision relative to the matrix scale. Dense O(dim^3);
/// refuses dim > dim_cap to keep callers honest about cost.
std::vector<double> sym_eigenvalues(const SymMatrix& m, int dim_cap = 5000);

/// True iff m is positive semidefinite up to slack tol*max(1, max|entry|).
/// Pivoted Cholesky fast path; falls back to eigenvalues only when the
/// factorization is inconclusive near the slack boundary. Ties resolve
/// toward feasible.
bool psd_check(const SymMatrix& m, double tol = kDefaultPsdTol);

/// psd_check with the absolute slack supplied by the caller instead of being
/// derived from the entries of m. For tests of linear combinations a*A + b*B
/// the slack should be anchored on the scale of A and B, not on the
/// coefficient-inflated combination.
bool psd_check_abs(const SymMatrix& m, double slack);

/// min eigenvalue divided by max(1, max|entry|): the signed margin that
/// psd_check thresholds at -tol. Used as a continuous feasibility margin.
double min_eigenvalue_rel(const SymMatrix& m);

/// Largest adjacency eigenvalue, exact up to tol. Nonnegative weights: power
/// iteration on A + sigma*I (sigma = max weighted degree) from the all-ones
/// vector, stopping when the residual ||Av - theta*v|| <= tol*max(1,|theta|).
/// Any negative weight forces the dense eigensolver (spectral radius and
/// largest eigenvalue no longer coincide), capped at dense_cap nodes.
double lambda1_exact(const Graph& g, double tol = 1e-10, long max_iters = 100000,
                     int dense_cap = 5000);

}  // namespace egospectral
