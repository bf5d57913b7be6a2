#include "layerfem/banded.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "layerfem/error.hpp"
#include "layerfem/format.hpp"

namespace layerfem {

SingularMatrixError::SingularMatrixError(std::size_t pivot_index, double pivot, double row_scale)
    : Error("banded solve: singular pivot " + shortest(pivot) + " at index " + std::to_string(pivot_index) +
            " (row scale " + shortest(row_scale) + ")"),
      pivot_index_(pivot_index)
{
}

BandedMatrix::BandedMatrix(std::size_t n, std::size_t lower, std::size_t upper)
    : n_(n), lower_(lower), upper_(upper), data_(n * (lower + upper + 1), 0.0)
{
}

double BandedMatrix::operator()(std::size_t row, std::size_t col) const noexcept
{
    if (!in_band(row, col)) {
        return 0.0;
    }
    return data_[row * bandwidth() + (col + lower_ - row)];
}

void BandedMatrix::set(std::size_t row, std::size_t col, double value)
{
    if (!in_band(row, col)) {
        throw Error("banded matrix: entry (" + std::to_string(row) + "," + std::to_string(col) + ") outside band");
    }
    data_[row * bandwidth() + (col + lower_ - row)] = value;
}

void BandedMatrix::add(std::size_t row, std::size_t col, double value)
{
    if (!in_band(row, col)) {
        throw Error("banded matrix: entry (" + std::to_string(row) + "," + std::to_string(col) + ") outside band");
    }
    data_[row * bandwidth() + (col + lower_ - row)] += value;
}

std::vector<double> BandedMatrix::multiply(std::span<const double> x) const
{
    std::vector<double> y(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
        double sum = 0.0;
        for (std::size_t j = first_col(i); j < last_col(i); ++j) {
            sum += (*this)(i, j) * x[j];
        }
        y[i] = sum;
    }
    return y;
}

std::vector<double> BandedMatrix::multiply_transpose(std::span<const double> x) const
{
    std::vector<double> y(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = first_col(i); j < last_col(i); ++j) {
            y[j] += (*this)(i, j) * x[i];
        }
    }
    return y;
}

namespace {

// Row r keeps columns [r - kl, r + ku + kl] so that pivoting fill-in fits. Entries are
// long double: graded meshes put entries of very different size into one system.
class LuWorkspace {
public:
    explicit LuWorkspace(const BandedMatrix& a)
        : n_(a.size()), kl_(a.lower()), ku_(a.upper()), width_(2 * kl_ + ku_ + 1), data_(n_ * width_, 0.0)
    {
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t j = a.first_col(i); j < a.last_col(i); ++j) {
                at(i, j) = a(i, j);
            }
        }
    }

    long double& at(std::size_t row, std::size_t col) { return data_[row * width_ + (col + kl_ - row)]; }
    [[nodiscard]] std::size_t fill_end(std::size_t row) const { return std::min(n_, row + ku_ + kl_ + 1); }

private:
    std::size_t n_;
    std::size_t kl_;
    std::size_t ku_;
    std::size_t width_;
    std::vector<long double> data_;
};

}  // namespace

BandedSolveResult solve_banded(const BandedMatrix& matrix, std::span<const double> rhs)
{
    const std::size_t n = matrix.size();
    const std::size_t kl = matrix.lower();
    if (rhs.size() != n) {
        throw Error("banded solve: right-hand side has wrong length");
    }

    std::vector<double> row_scale(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = matrix.first_col(i); j < matrix.last_col(i); ++j) {
            row_scale[i] = std::max(row_scale[i], std::abs(matrix(i, j)));
        }
    }

    // Row then column equilibration by powers of two (exact), as in LAPACK gbequb.
    std::vector<double> row_eq(n, 1.0);
    std::vector<double> col_eq(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (row_scale[i] > 0.0) {
            row_eq[i] = std::exp2(-std::ilogb(row_scale[i]));
        }
        for (std::size_t j = matrix.first_col(i); j < matrix.last_col(i); ++j) {
            col_eq[j] = std::max(col_eq[j], std::abs(matrix(i, j)) * row_eq[i]);
        }
    }
    for (auto& c : col_eq) {
        c = c > 0.0 ? std::exp2(-std::ilogb(c)) : 1.0;
    }
    BandedMatrix scaled(n, kl, matrix.upper());
    for (std::size_t i = 0; i < n; ++i) {
        row_scale[i] = 0.0;
        for (std::size_t j = matrix.first_col(i); j < matrix.last_col(i); ++j) {
            const double v = row_eq[i] * matrix(i, j) * col_eq[j];
            scaled.set(i, j, v);
            row_scale[i] = std::max(row_scale[i], std::abs(v));
        }
    }

    LuWorkspace lu(scaled);
    std::vector<std::size_t> pivots(n);
    std::vector<long double> multipliers(n * std::max<std::size_t>(kl, 1), 0.0);

    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t last_row = std::min(n - 1, k + kl);
        std::size_t p = k;
        for (std::size_t i = k + 1; i <= last_row; ++i) {
            if (std::abs(lu.at(i, k)) > std::abs(lu.at(p, k))) {
                p = i;
            }
        }
        const auto pivot = static_cast<double>(lu.at(p, k));
        if (!(std::abs(pivot) >= pivot_tolerance * row_scale[p]) || pivot == 0.0) {
            throw SingularMatrixError(k, pivot, row_scale[p]);
        }
        pivots[k] = p;
        const std::size_t end = lu.fill_end(k);
        if (p != k) {
            for (std::size_t c = k; c < end; ++c) {
                std::swap(lu.at(k, c), lu.at(p, c));
            }
            std::swap(row_scale[k], row_scale[p]);
        }
        for (std::size_t i = k + 1; i <= last_row; ++i) {
            const long double l = lu.at(i, k) / lu.at(k, k);
            multipliers[k * kl + (i - k - 1)] = l;
            if (l == 0.0) {
                continue;
            }
            for (std::size_t c = k + 1; c < end; ++c) {
                lu.at(i, c) -= l * lu.at(k, c);
            }
        }
    }

    std::vector<long double> x(rhs.begin(), rhs.end());
    for (std::size_t i = 0; i < n; ++i) {
        x[i] *= row_eq[i];
    }
    for (std::size_t k = 0; k < n; ++k) {
        std::swap(x[k], x[pivots[k]]);
        const std::size_t last_row = std::min(n - 1, k + kl);
        for (std::size_t i = k + 1; i <= last_row; ++i) {
            x[i] -= multipliers[k * kl + (i - k - 1)] * x[k];
        }
    }
    for (std::size_t k = n; k-- > 0;) {
        long double sum = x[k];
        for (std::size_t c = k + 1; c < lu.fill_end(k); ++c) {
            sum -= lu.at(k, c) * x[c];
        }
        x[k] = sum / lu.at(k, k);
    }
    for (std::size_t i = 0; i < n; ++i) {
        x[i] *= col_eq[i];
    }

    std::vector<double> xd(x.begin(), x.end());
    const auto ax = matrix.multiply(xd);
    double residual = 0.0;
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        residual = std::max(residual, std::abs(ax[i] - rhs[i]));
        scale = std::max(scale, std::abs(rhs[i]));
    }
    return {std::move(xd), scale > 0.0 ? residual / scale : residual};
}

}  // namespace layerfem
