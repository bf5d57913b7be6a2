#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace layerfem {

/// Square matrix with `lower` sub- and `upper` super-diagonals, row-wise storage.
class BandedMatrix {
public:
    BandedMatrix() = default;
    BandedMatrix(std::size_t n, std::size_t lower, std::size_t upper);

    [[nodiscard]] std::size_t size() const noexcept { return n_; }
    [[nodiscard]] std::size_t lower() const noexcept { return lower_; }
    [[nodiscard]] std::size_t upper() const noexcept { return upper_; }
    /// Total number of stored diagonals.
    [[nodiscard]] std::size_t bandwidth() const noexcept { return lower_ + upper_ + 1; }

    [[nodiscard]] bool in_band(std::size_t row, std::size_t col) const noexcept
    {
        return col + lower_ >= row && col <= row + upper_ && row < n_ && col < n_;
    }

    /// Zero outside the band.
    [[nodiscard]] double operator()(std::size_t row, std::size_t col) const noexcept;
    void set(std::size_t row, std::size_t col, double value);
    void add(std::size_t row, std::size_t col, double value);

    /// Column range [first, last) of the band in a row.
    [[nodiscard]] std::size_t first_col(std::size_t row) const noexcept { return row > lower_ ? row - lower_ : 0; }
    [[nodiscard]] std::size_t last_col(std::size_t row) const noexcept
    {
        return row + upper_ + 1 < n_ ? row + upper_ + 1 : n_;
    }

    [[nodiscard]] std::vector<double> multiply(std::span<const double> x) const;
    [[nodiscard]] std::vector<double> multiply_transpose(std::span<const double> x) const;

private:
    std::size_t n_ = 0;
    std::size_t lower_ = 0;
    std::size_t upper_ = 0;
    std::vector<double> data_;
};

struct BandedSolveResult {
    std::vector<double> x;
    /// ||A x - b||_inf / ||b||_inf (absolute residual when b = 0).
    double relative_residual = 0.0;
};

/// Pivots with |pivot| < pivot_tolerance * (inf-norm of the original pivot row) are singular.
inline constexpr double pivot_tolerance = 1e-14;

/// Gaussian elimination with partial pivoting inside the band, after power-of-two row and column
/// equilibration, in extended precision.
/// Throws SingularMatrixError carrying the offending pivot index.
[[nodiscard]] BandedSolveResult solve_banded(const BandedMatrix& matrix, std::span<const double> rhs);

}  // namespace layerfem
