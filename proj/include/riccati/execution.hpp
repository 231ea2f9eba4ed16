#pragma once

#include <cstddef>
#include <exception>
#include <vector>

namespace riccati {

/// Selects the serial reference loop or the OpenMP loop for data-parallel kernels.
/// Both produce bit-identical results; aggregation is always serial.
enum class Execution { serial, parallel };

namespace detail {

// Runs body(i) for i in [0, count). Exceptions thrown inside the OpenMP region
// are captured per index and the lowest-index one is rethrown afterwards.
template <typename Body>
void for_each_index(std::size_t count, Execution exec, Body&& body) {
    if (exec == Execution::serial || count < 2) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::exception_ptr> errors(count);
    const auto n = static_cast<long long>(count);
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < n; ++i) {
        try {
            body(static_cast<std::size_t>(i));
        } catch (...) {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

} // namespace detail
} // namespace riccati
