#pragma once

#include <cstdint>

namespace taw {

/// Execution policy for the tensor kernels. Serial is the reference
/// implementation kept for testing and benchmarking; Parallel uses OpenMP
/// when compiled in and falls back to the same loops otherwise.
enum class Exec { Serial, Parallel };

int max_threads();
void set_max_threads(int n);

/// Work sizes below this run serially even under Exec::Parallel.
constexpr std::int64_t kParallelGrain = 4096;

}  // namespace taw
