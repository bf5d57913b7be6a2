#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace layerfem {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised by the banded solver when a pivot falls below the relative threshold.
class SingularMatrixError : public Error {
public:
    SingularMatrixError(std::size_t pivot_index, double pivot, double row_scale);

    [[nodiscard]] std::size_t pivot_index() const noexcept { return pivot_index_; }

private:
    std::size_t pivot_index_;
};

}  // namespace layerfem
