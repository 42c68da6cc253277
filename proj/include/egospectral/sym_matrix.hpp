#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace egospectral {

/// Dense real symmetric matrix with full square storage.
/// set() keeps both triangles in sync, so the invariant M(i,j) == M(j,i) holds.
class SymMatrix {
public:
    explicit SymMatrix(int dim) : dim_(dim) {
        if (dim < 1) throw std::invalid_argument("SymMatrix: dimension must be positive");
        a_.assign(static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim), 0.0);
    }

    int dim() const { return dim_; }

    double operator()(int i, int j) const { return a_[idx(i, j)]; }

    void set(int i, int j, double v) {
        a_[idx(i, j)] = v;
        a_[idx(j, i)] = v;
    }

    /// Largest absolute entry; 0 for the zero matrix.
    double max_abs() const;

    const std::vector<double>& data() const { return a_; }

private:
    std::size_t idx(int i, int j) const {
        if (i < 0 || i >= dim_ || j < 0 || j >= dim_)
            throw std::out_of_range("SymMatrix: index out of range");
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(j);
    }

    int dim_;
    std::vector<double> a_;
};

/// a*A + b*B, dims must match.
SymMatrix lin_comb(double a, const SymMatrix& A, double b, const SymMatrix& B);

}  // namespace egospectral
