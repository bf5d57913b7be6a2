#pragma once

#include <cstddef>
#include <exception>

namespace layerfem {

/// Selects between the serial reference loop and the OpenMP kernel.
///
/// Every parallel kernel in the library writes per-item results into
/// preallocated slots and reduces them in index order afterwards, so both
/// policies produce bit-identical output.
enum class Execution { sequential, parallel };

template <class Fn>
void for_each_index(Execution policy, std::size_t count, Fn&& fn)
{
    if (policy == Execution::sequential || count < 2) {
        for (std::size_t i = 0; i < count; ++i) {
            fn(i);
        }
        return;
    }

    std::exception_ptr failure;
    const auto n = static_cast<long long>(count);
#pragma omp parallel for schedule(dynamic, 1)
    for (long long i = 0; i < n; ++i) {
        try {
            fn(static_cast<std::size_t>(i));
        } catch (...) {
#pragma omp critical(layerfem_for_each_index)
            {
                if (!failure) {
                    failure = std::current_exception();
                }
            }
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

}  // namespace layerfem
