#include "specgraph/matrix.hpp"

#include <algorithm>
#include <cmath>

#include "specgraph/error.hpp"

namespace specgraph {

SquareMatrix::SquareMatrix(std::initializer_list<std::initializer_list<double>> rows)
    : n_(rows.size()), a_(rows.size() * rows.size(), 0.0) {
    std::size_t i = 0;
    for (const auto& row : rows) {
        if (row.size() != n_) throw ContractError("SquareMatrix: ragged initializer");
        std::copy(row.begin(), row.end(), a_.begin() + static_cast<std::ptrdiff_t>(i * n_));
        ++i;
    }
}

SquareMatrix SquareMatrix::identity(std::size_t n) {
    SquareMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

SquareMatrix SquareMatrix::diagonal(std::span<const double> d) {
    SquareMatrix m(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

double SquareMatrix::max_abs() const noexcept {
    double m = 0.0;
    for (double v : a_) m = std::max(m, std::abs(v));
    return m;
}

double SquareMatrix::trace() const noexcept {
    double t = 0.0;
    for (std::size_t i = 0; i < n_; ++i) t += (*this)(i, i);
    return t;
}

bool SquareMatrix::is_symmetric(double tol) const noexcept {
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = i + 1; j < n_; ++j)
            if (!(std::abs((*this)(i, j) - (*this)(j, i)) <= tol)) return false;
    return true;
}

SquareMatrix SquareMatrix::permuted(std::span<const std::size_t> perm) const {
    if (perm.size() != n_) throw ContractError("SquareMatrix::permuted: size mismatch");
    SquareMatrix out(n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) out(i, j) = (*this)(perm[i], perm[j]);
    return out;
}

}  // namespace specgraph
