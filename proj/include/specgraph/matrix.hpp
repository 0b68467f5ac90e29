#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace specgraph {

/// Dense square matrix, row-major.
class SquareMatrix {
public:
    SquareMatrix() = default;
    explicit SquareMatrix(std::size_t n, double fill = 0.0) : n_(n), a_(n * n, fill) {}
    SquareMatrix(std::initializer_list<std::initializer_list<double>> rows);

    [[nodiscard]] static SquareMatrix identity(std::size_t n);
    [[nodiscard]] static SquareMatrix diagonal(std::span<const double> d);

    [[nodiscard]] std::size_t order() const noexcept { return n_; }
    double& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

    [[nodiscard]] std::span<const double> data() const noexcept { return a_; }
    [[nodiscard]] double max_abs() const noexcept;
    [[nodiscard]] double trace() const noexcept;
    [[nodiscard]] bool is_symmetric(double tol) const noexcept;
    /// P^T A P for the permutation mapping new index k to old index perm[k].
    [[nodiscard]] SquareMatrix permuted(std::span<const std::size_t> perm) const;

    bool operator==(const SquareMatrix&) const = default;

private:
    std::size_t n_ = 0;
    std::vector<double> a_;
};

}  // namespace specgraph
