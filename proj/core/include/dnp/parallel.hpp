#pragma once

#include <cstddef>
#include <functional>

namespace dnp {

/// Worker count from the DNP_THREADS environment variable (default 1).
int thread_count();

/// Runs body(begin, end) over contiguous chunks of [0, n). Chunk boundaries
/// depend only on n, so reductions combined in chunk order are identical for
/// every thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

/// Chunk layout used by parallel_for.
std::size_t chunk_count(std::size_t n);
std::size_t chunk_begin(std::size_t n, std::size_t chunk);
/// Index of the chunk starting at `begin`.
std::size_t chunk_index(std::size_t begin);

}  // namespace dnp
